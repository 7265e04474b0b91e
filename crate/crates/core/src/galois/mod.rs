//! Automorphisms and Galois closures of the tower over `E_0 = F_q(z)`.

mod artin_schreier;
mod automorphism;
mod checklist;
mod closure;

pub use artin_schreier::{artin_schreier_reduce, normalizer, reduce_mod_wp, AsReduced, PoleLoc};
pub use automorphism::{automorphism_group, fixes_z, is_group, AutMap};
pub use checklist::{
    all_passed, eta_exponents, ledger_checks, verify_closure_ledger, CheckOutcome, LedgerCheck, Status,
};
pub use closure::{closure_compute, symbolic_ledger, ClosureReport, LocalData, Locus, SymbolicLedger};

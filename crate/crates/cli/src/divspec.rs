//! Divisor specifications such as `0*A+2*B`, `9*Ginf` or `2*B-P3`.
//!
//! Symbols: `A` (places over w = 0), `B` (places over w = infinity),
//! `Ginf` (the place at infinity), `D` (every evaluation place) and `P<i>`
//! (the i-th evaluation place, counted from 1).

use anyhow::{bail, Context, Result};
use towercodes::tower::{Divisor, Locus, Place, TowerCtx};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Symbol {
    A,
    B,
    Ginf,
    D,
    P(usize),
}

pub fn parse(spec: &str) -> Result<Vec<(i64, Symbol)>> {
    let s: String = spec.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        bail!("empty divisor specification");
    }
    let mut terms = Vec::new();
    let mut rest = s.as_str();
    while !rest.is_empty() {
        let (sign, body) = match rest.as_bytes()[0] {
            b'+' if !terms.is_empty() => (1, &rest[1..]),
            b'-' => (-1, &rest[1..]),
            _ if terms.is_empty() => (1, rest),
            _ => bail!("expected '+' or '-' before '{rest}'"),
        };
        let end = body.find(['+', '-']).unwrap_or(body.len());
        let (term, tail) = body.split_at(end);
        let (coeff, name) = match term.split_once('*') {
            Some((c, n)) => (c.parse::<i64>().with_context(|| format!("bad coefficient '{c}'"))?, n),
            None => (1, term),
        };
        terms.push((sign * coeff, symbol(name)?));
        rest = tail;
    }
    Ok(terms)
}

fn symbol(name: &str) -> Result<Symbol> {
    Ok(match name {
        "A" => Symbol::A,
        "B" => Symbol::B,
        "Ginf" => Symbol::Ginf,
        "D" => Symbol::D,
        _ => match name.strip_prefix('P').map(str::parse::<usize>) {
            Some(Ok(i)) if i >= 1 => Symbol::P(i),
            _ => bail!("unknown divisor symbol '{name}'"),
        },
    })
}

/// Resolves a parsed specification on `level`, against evaluation places `d`.
pub fn resolve(ctx: &TowerCtx, terms: &[(i64, Symbol)], d: &[Place], level: usize) -> Result<Divisor> {
    let mut out = Divisor::zero();
    for (c, sym) in terms {
        let part = match sym {
            Symbol::A => Divisor::sum_of(&ctx.places_over(Locus::WZero, level)?, *c),
            Symbol::B => Divisor::sum_of(&ctx.places_over(Locus::WInf, level)?, *c),
            Symbol::Ginf => Divisor::from_place(&ctx.place_at_infinity(level)?, *c),
            Symbol::D => Divisor::sum_of(d, *c),
            Symbol::P(i) => match d.get(i - 1) {
                Some(p) => Divisor::from_place(p, *c),
                None => bail!("P{i} is out of range, there are {} evaluation places", d.len()),
            },
        };
        out = out.add(&part);
    }
    Ok(out)
}

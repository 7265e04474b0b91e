use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::algebra::{Elem, Field, Matrix};
use crate::error::{Error, Result};
use crate::rrspace::rr_space;
use crate::tower::{Divisor, Place, TowerCtx};

/// `(n, a, b)` for members of the `C^(n)_{a,b}` family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyParams {
    pub n: usize,
    pub a: i64,
    pub b: i64,
}

/// An evaluation code `C_L(D, G)`, optionally rescaled coordinatewise.
#[derive(Clone, Debug)]
pub struct LinearCode {
    field: Field,
    level: usize,
    divisor: Divisor,
    place_order: Vec<Place>,
    /// RREF generator of the unscaled code.
    gen: Matrix,
    scaling: Option<Vec<Elem>>,
    designed_k_lower: i64,
    designed_d_lower: i64,
    pub family: Option<FamilyParams>,
}

impl LinearCode {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn divisor(&self) -> &Divisor {
        &self.divisor
    }

    pub fn place_order(&self) -> &[Place] {
        &self.place_order
    }

    pub fn len(&self) -> usize {
        self.place_order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.place_order.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.gen.nrows()
    }

    pub fn designed_k_lower(&self) -> i64 {
        self.designed_k_lower
    }

    pub fn designed_d_lower(&self) -> i64 {
        self.designed_d_lower
    }

    pub fn scaling(&self) -> Option<&[Elem]> {
        self.scaling.as_deref()
    }

    /// Generator of the unscaled evaluation code.
    pub fn base_generator(&self) -> &Matrix {
        &self.gen
    }

    /// RREF generator of the code with scaling applied.
    pub fn generator(&self) -> Matrix {
        match &self.scaling {
            None => self.gen.clone(),
            Some(s) => {
                let mut m = scale_columns(&self.gen, s);
                m.rref();
                m
            }
        }
    }

    /// Same unscaled code, new scaling vector.
    pub fn with_scaling(&self, scaling: Option<Vec<Elem>>) -> Result<LinearCode> {
        if let Some(s) = &scaling {
            if s.len() != self.len() || s.iter().any(|x| x.is_zero()) {
                return Err(Error::RangeError("scaling must be a nonzero vector of code length".into()));
            }
        }
        Ok(LinearCode { scaling, ..self.clone() })
    }

    /// Basis of the dual code.
    pub fn parity_check(&self) -> Matrix {
        let g = self.generator();
        let rows = if g.nrows() == 0 { Matrix::identity(&self.field, self.len()).to_rows() } else { g.nullspace() };
        let mut h = Matrix::from_rows(&self.field, rows, self.len());
        h.rref();
        h
    }

    /// `G * G^T` over the scaled code.
    pub fn gram(&self) -> Matrix {
        let g = self.generator();
        g.mul(&g.transpose())
    }

    pub fn is_self_orthogonal(&self) -> bool {
        let gram = self.gram();
        (0..gram.nrows()).all(|r| gram.row(r).iter().all(|x| x.is_zero()))
    }

    pub fn is_self_dual(&self) -> bool {
        2 * self.dim() == self.len() && self.is_self_orthogonal()
    }

    /// Same row space as `other` (with scalings applied).
    pub fn same_code(&self, other: &LinearCode) -> bool {
        self.len() == other.len() && self.generator().same_row_space(&other.generator())
    }

    pub fn rate(&self) -> f64 {
        self.dim() as f64 / self.len() as f64
    }
}

pub(crate) fn scale_columns(m: &Matrix, s: &[Elem]) -> Matrix {
    let f = m.field();
    let rows = m.to_rows().into_iter().map(|r| r.iter().zip(s).map(|(&a, &b)| f.mul(a, b)).collect()).collect();
    Matrix::from_rows(f, rows, m.ncols())
}

impl Serialize for LinearCode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let ints = |m: &Matrix| -> Vec<Vec<u32>> {
            m.to_rows().into_iter().map(|r| r.into_iter().map(Elem::to_int).collect()).collect()
        };
        let mut st = s.serialize_struct("LinearCode", 11)?;
        st.serialize_field("q", &self.q())?;
        st.serialize_field("level", &self.level)?;
        st.serialize_field("N", &self.len())?;
        st.serialize_field("k", &self.dim())?;
        st.serialize_field("divisor", &self.divisor)?;
        st.serialize_field("designed_k", &self.designed_k_lower)?;
        st.serialize_field("designed_d", &self.designed_d_lower)?;
        st.serialize_field("family", &self.family)?;
        st.serialize_field("place_order", &self.place_order)?;
        st.serialize_field(
            "scaling",
            &self.scaling.as_ref().map(|v| v.iter().map(|e| e.to_int()).collect::<Vec<_>>()),
        )?;
        st.serialize_field("generator_matrix", &ints(&self.generator()))?;
        st.end()
    }
}

/// Genus of the level a code lives on.
pub(crate) fn genus_of(ctx: &TowerCtx, level: usize) -> Result<i64> {
    Ok(ctx.genus_level(level)? as i64)
}

/// `C_L(D, G)` with `D` given as an ordered list of distinct rational places.
pub fn goppa_code(ctx: &TowerCtx, d: &[Place], g: &Divisor, level: usize) -> Result<LinearCode> {
    ctx.check_level(level)?;
    if let Some(p) = d.iter().find(|p| p.level() != level) {
        return Err(Error::RangeError(format!("place {p} is not on level {level}")));
    }
    if g.level().is_some_and(|l| l != level) {
        return Err(Error::RangeError(format!("divisor is not on level {level}")));
    }
    let mut sorted: Vec<&Place> = d.iter().collect();
    sorted.sort();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::RangeError("evaluation places must be distinct".into()));
    }
    if let Some(p) = d.iter().find(|p| g.coeff(p) != 0) {
        return Err(Error::SupportOverlap(p.to_string()));
    }
    let space = rr_space(ctx, g, level)?;
    let mut gen = space.evaluation_matrix(ctx, d)?;
    gen.rref();
    let n = d.len() as i64;
    let deg = g.degree();
    let genus = genus_of(ctx, level)?;
    Ok(LinearCode {
        field: ctx.field().clone(),
        level,
        divisor: g.clone(),
        place_order: d.to_vec(),
        gen,
        scaling: None,
        designed_k_lower: (deg + 1 - genus).max(0).min(n),
        designed_d_lower: if deg < n { (n - deg).min(n) } else { 0 },
        family: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tower::Locus;

    #[test]
    fn conic_code_over_gf9() {
        let t = TowerCtx::new(9).unwrap();
        let d = t.places_over(Locus::ZOne, 0).unwrap();
        let inf = t.place_at_infinity(0).unwrap();
        let c = goppa_code(&t, &d, &Divisor::from_place(&inf, 2), 0).unwrap();
        assert_eq!((c.len(), c.dim(), c.designed_d_lower()), (6, 3, 4));
        let rep = goppa_code(&t, &d, &Divisor::zero(), 0).unwrap();
        assert_eq!(rep.dim(), 1);
        assert!(rep.generator().row(0).iter().all(|&x| x == Elem::ONE));
        assert_eq!(rep.designed_d_lower(), 6);
    }

    #[test]
    fn one_point_code_on_f1() {
        let t = TowerCtx::new(9).unwrap();
        let d = t.places_over(Locus::ZOne, 1).unwrap();
        let inf = t.place_at_infinity(1).unwrap();
        let c = goppa_code(&t, &d, &Divisor::from_place(&inf, 8), 1).unwrap();
        assert_eq!((c.len(), c.dim(), c.designed_d_lower()), (18, 5, 10));
    }

    #[test]
    fn overlap_is_rejected() {
        let t = TowerCtx::new(9).unwrap();
        let d = t.places_over(Locus::ZOne, 0).unwrap();
        let g = Divisor::from_place(&d[0], 1);
        assert!(matches!(goppa_code(&t, &d, &g, 0), Err(Error::SupportOverlap(_))));
        let dup = vec![d[0].clone(), d[0].clone()];
        assert!(matches!(goppa_code(&t, &dup, &Divisor::zero(), 0), Err(Error::RangeError(_))));
    }

    #[test]
    fn dual_dimension_is_complementary() {
        let t = TowerCtx::new(9).unwrap();
        let d = t.places_over(Locus::ZOne, 0).unwrap();
        let inf = t.place_at_infinity(0).unwrap();
        for r in 0..6 {
            let c = goppa_code(&t, &d, &Divisor::from_place(&inf, r), 0).unwrap();
            assert_eq!(c.dim() + c.parity_check().nrows(), 6);
            assert!(c.dim() as i64 >= c.designed_k_lower());
        }
    }
}

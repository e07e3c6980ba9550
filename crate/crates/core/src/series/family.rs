//! Families I^λ of base series depending polynomially on parameters λ.

use std::collections::BTreeMap;

use super::terms::{AbTerm, WIDE};
use crate::algebra::nilpotent::{mul_nil, NilSeries};
use crate::algebra::{Poly, Var, ZLaurent};
use crate::error::{FmError, Result};
use crate::rings::BaseDesc;

/// I^λ = Σ_d Q^d P_d(λ, z, base classes) · S_d, where S_d is a root-free
/// z-series in the base classes.
#[derive(Clone, Debug, PartialEq)]
pub struct LambdaFamily {
    pub base: BaseDesc,
    /// Declared λ-parameters.
    pub params: Vec<Var>,
    pub entries: BTreeMap<Vec<u32>, (Poly, NilSeries)>,
}

pub fn unit_series() -> NilSeries {
    ZLaurent::monomial(0, Poly::one(), WIDE.0, WIDE.1)
}

impl LambdaFamily {
    /// The constant family 1.
    pub fn one(base: &BaseDesc) -> Self {
        let mut entries = BTreeMap::new();
        entries.insert(vec![0; base.picard_rank()], (Poly::one(), unit_series()));
        LambdaFamily {
            base: base.clone(),
            params: vec![],
            entries,
        }
    }

    /// Replaces λ by the given expressions in the polynomial parts.
    pub fn substitute_lambda(&self, map: &BTreeMap<Var, Poly>) -> BTreeMap<Vec<u32>, (Poly, NilSeries)> {
        self.entries
            .iter()
            .map(|(d, (p, s))| (d.clone(), (p.subst_map(map), s.clone())))
            .collect()
    }

    /// Checks that each P_d is symmetric under permutations of λ within
    /// each level.
    pub fn is_weyl_invariant(&self) -> bool {
        let mut levels: BTreeMap<u8, Vec<Var>> = BTreeMap::new();
        for v in &self.params {
            if let Var::Lambda(m, _) = v {
                levels.entry(*m).or_default().push(*v);
            }
        }
        self.entries
            .values()
            .all(|(p, _)| levels.values().all(|vs| crate::algebra::schur::is_symmetric(p, vs)))
    }

    pub fn max_base_degree(&self) -> u32 {
        self.entries.keys().map(|d| d.iter().sum::<u32>()).max().unwrap_or(0)
    }
}

/// J-function of P^n: Σ_d Q^d / Π_{c=1}^d (h + cz)^{n+1}, with h^{n+1} = 0.
pub fn projective_j(n: u32, dmax: u32) -> Result<BTreeMap<Vec<u32>, NilSeries>> {
    let h = Poly::var(Var::Base(1));
    let z = Poly::var(Var::Z);
    let mut out = BTreeMap::new();
    for d in 0..=dmax {
        let mut t = AbTerm::one();
        for c in 1..=d {
            t.mul_factor(
                &(&h + &z.scale(&crate::algebra::rational::rat(c as i64))),
                -(n as i32 + 1),
            );
        }
        out.insert(vec![d], t.expand(n)?);
    }
    Ok(out)
}

/// The base J-function for a supported base.
pub fn base_j(base: &BaseDesc, dmax: u32) -> Result<BTreeMap<Vec<u32>, NilSeries>> {
    match base {
        BaseDesc::Point => Ok(BTreeMap::from([(vec![], unit_series())])),
        BaseDesc::Projective { n } => projective_j(*n, dmax),
    }
}

/// Product of base series truncated at the base dimension.
pub fn base_product(a: &NilSeries, b: &NilSeries, base: &BaseDesc) -> NilSeries {
    mul_nil(a, b, base.dim())
}

/// The family from explicit polynomial parts and a base J-function.
pub fn family_from_parts(
    base: &BaseDesc,
    params: Vec<Var>,
    parts: BTreeMap<Vec<u32>, Poly>,
    jb: &BTreeMap<Vec<u32>, NilSeries>,
) -> Result<LambdaFamily> {
    let mut entries = BTreeMap::new();
    for (d, p) in parts {
        let s = jb
            .get(&d)
            .ok_or_else(|| FmError::Missing(format!("base J coefficient in degree {d:?}")))?;
        entries.insert(d, (p, s.clone()));
    }
    Ok(LambdaFamily {
        base: base.clone(),
        params,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;

    #[test]
    fn p1_j_function_degree_one() {
        // 1/(h+z)^2 = z^-2 - 2h z^-3
        let j = projective_j(1, 1).unwrap();
        let j1 = &j[&vec![1]];
        assert_eq!(j1.coeff(-2), Some(&Poly::one()));
        assert_eq!(j1.coeff(-3), Some(&Poly::var(Var::Base(1)).scale(&rat(-2))));
    }

    #[test]
    fn symmetric_family_detected() {
        let l1 = Poly::var(Var::Lambda(1, 1));
        let l2 = Poly::var(Var::Lambda(1, 2));
        let mut fam = LambdaFamily::one(&BaseDesc::Point);
        fam.params = vec![Var::Lambda(1, 1), Var::Lambda(1, 2)];
        fam.entries.insert(vec![], (&l1 * &l2, unit_series()));
        assert!(fam.is_weyl_invariant());
        fam.entries.insert(vec![], (l1, unit_series()));
        assert!(!fam.is_weyl_invariant());
    }
}

//! Geometric input shared by the constructors.

use std::collections::BTreeMap;

use crate::algebra::{Poly, Var};
use crate::error::{FmError, Result};
use crate::rings::builders::{equivariant_trivial_roots, line_roots};
use crate::rings::gkm::validate_flag;
use crate::rings::BaseDesc;
use crate::series::family::{base_j, family_from_parts};
use crate::series::{LambdaFamily, Truncation};

use super::factors::lambda;

/// Twisting data for the μ-deformed constructors: the quotient bundle Q of
/// 0 → V → O^N → Q → 0 through its Chern classes on the base.
#[derive(Clone, Debug, PartialEq)]
pub struct Twist {
    pub rank: u32,
    /// c_0 = 1, c_1, …, c_rank as polynomials in the base classes.
    pub chern: Vec<Poly>,
}

#[derive(Clone, Debug)]
pub struct FlagSetup {
    /// Rank of the ambient bundle (N for trivial bundles).
    pub n: u32,
    pub r: Vec<u32>,
    pub base: BaseDesc,
    /// Line degrees a_j of V = ⊕ O(a_j).
    pub v_degrees: Vec<i64>,
    /// Torus-equivariant trivial bundle with Chern roots −ν_j.
    pub equivariant: bool,
    pub family: LambdaFamily,
    pub twist: Option<Twist>,
    pub trunc: Truncation,
}

impl FlagSetup {
    /// Fl(r; N) over a point with trivial family.
    pub fn trivial(n: u32, r: &[u32], equivariant: bool, trunc: Truncation) -> Result<Self> {
        validate_flag(r, n)?;
        Ok(FlagSetup {
            n,
            r: r.to_vec(),
            base: BaseDesc::Point,
            v_degrees: vec![0; n as usize],
            equivariant,
            family: LambdaFamily::one(&BaseDesc::Point),
            twist: None,
            trunc,
        })
    }

    /// Fl(r; V) for V = ⊕ O(a_j) on the base, with the split input family.
    pub fn split(base: BaseDesc, degrees: &[i64], r: &[u32], trunc: Truncation) -> Result<Self> {
        let n = degrees.len() as u32;
        validate_flag(r, n)?;
        let family = oh_split_input(&base, degrees, r.len(), *r.last().unwrap(), trunc.dmax)?;
        Ok(FlagSetup {
            n,
            r: r.to_vec(),
            base,
            v_degrees: degrees.to_vec(),
            equivariant: false,
            family,
            twist: None,
            trunc,
        })
    }

    pub fn levels(&self) -> usize {
        self.r.len()
    }

    /// Chern roots δ_j of V.
    pub fn v_roots(&self) -> Result<Vec<Poly>> {
        if self.equivariant {
            if self.v_degrees.iter().any(|a| *a != 0) {
                return Err(FmError::Unsupported("equivariant data only for trivial bundles".into()));
            }
            Ok(equivariant_trivial_roots(self.n))
        } else {
            line_roots(&self.base, &self.v_degrees)
        }
    }

    /// Divisors paired with the base slots.
    pub fn base_divisors(&self) -> Vec<Poly> {
        self.base.hyperplane().into_iter().collect()
    }
}

/// I^λ for V = ⊕ L_j with c_1(L_j) = a_j h, a_j ≤ 0:
/// Σ_d Q^d J_d Π_j Π_i Π_{c=0}^{−a_j d − 1} (λ_i^{(l)} + a_j h − cz).
pub fn oh_split_input(base: &BaseDesc, degrees: &[i64], level: usize, rl: u32, dmax: u32) -> Result<LambdaFamily> {
    if let Some(a) = degrees.iter().find(|a| **a > 0) {
        return Err(FmError::PositiveLineBundle(format!("O({a})")));
    }
    let roots = line_roots(base, degrees)?;
    let jb = base_j(base, dmax)?;
    let z = Poly::var(Var::Z);
    let mut parts = BTreeMap::new();
    for d in jb.keys() {
        let dd: i64 = d.iter().map(|x| *x as i64).sum();
        let mut p = Poly::one();
        for (a, delta) in degrees.iter().zip(&roots) {
            for i in 1..=rl as usize {
                for c in 0..(-a * dd) {
                    let f = &(&lambda(level, i) + delta) - &z.scale(&crate::algebra::rational::rat(c));
                    p = &p * &f;
                }
            }
        }
        parts.insert(d.clone(), p);
    }
    let params = (1..=rl as u8).map(|i| Var::Lambda(level as u8, i)).collect();
    family_from_parts(base, params, parts, &jb)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positive_line_bundle_rejected() {
        let b = BaseDesc::Projective { n: 1 };
        assert!(matches!(
            oh_split_input(&b, &[0, 1], 1, 1, 2),
            Err(FmError::PositiveLineBundle(_))
        ));
    }

    #[test]
    fn split_input_degree_one() {
        // V = O ⊕ O(−1): P_1 = λ − h
        let b = BaseDesc::Projective { n: 1 };
        let fam = oh_split_input(&b, &[0, -1], 1, 1, 1).unwrap();
        let p1 = &fam.entries[&vec![1]].0;
        assert_eq!(*p1, &lambda(1, 1) - &Poly::var(Var::Base(1)));
        assert!(fam.is_weyl_invariant());
    }
}

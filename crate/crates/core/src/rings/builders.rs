//! Constructors for the rings used by the engine.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::chern::chern_from_roots;
use super::gkm::{flag_dim, gkm_data, nu, validate_flag, GkmVariant};
use super::presentation::{Presentation, TowerGen};
use super::spec::{Ring, RingSpec};
use crate::algebra::{Poly, Var};
use crate::error::{FmError, Result};

/// Base manifolds supported by the table backend.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum BaseDesc {
    Point,
    /// P^n with hyperplane class h.
    Projective {
        n: u32,
    },
}

impl BaseDesc {
    pub fn presentation(&self) -> Presentation {
        match self {
            BaseDesc::Point => Presentation::Point,
            BaseDesc::Projective { n } => Presentation::Projective {
                var: Var::Base(1),
                n: *n,
            },
        }
    }

    pub fn dim(&self) -> u32 {
        match self {
            BaseDesc::Point => 0,
            BaseDesc::Projective { n } => *n,
        }
    }

    pub fn name(&self) -> String {
        match self {
            BaseDesc::Point => "pt".into(),
            BaseDesc::Projective { n } => format!("P{n}"),
        }
    }

    pub fn hyperplane(&self) -> Option<Poly> {
        match self {
            BaseDesc::Point => None,
            BaseDesc::Projective { .. } => Some(Poly::var(Var::Base(1))),
        }
    }

    /// Number of Novikov variables of the base.
    pub fn picard_rank(&self) -> usize {
        match self {
            BaseDesc::Point => 0,
            BaseDesc::Projective { .. } => 1,
        }
    }
}

/// Chern roots δ_j of a split bundle ⊕ O(a_j) on the base.
pub fn line_roots(base: &BaseDesc, degrees: &[i64]) -> Result<Vec<Poly>> {
    match base.hyperplane() {
        Some(h) => Ok(degrees
            .iter()
            .map(|a| h.scale(&crate::algebra::rational::rat(*a)))
            .collect()),
        None if degrees.iter().all(|a| *a == 0) => Ok(vec![Poly::zero(); degrees.len()]),
        None => Err(FmError::Incompatible("nonzero line degree over a point".into())),
    }
}

/// Equivariant Chern roots −ν_j of the trivial bundle C^N.
pub fn equivariant_trivial_roots(n: u32) -> Vec<Poly> {
    (1..=n).map(|j| -&nu(j)).collect()
}

fn finish(mut spec: RingSpec, base: &BaseDesc) -> Ring {
    if let Some(h) = base.hyperplane() {
        spec.divisors.push(("h".into(), h));
    }
    Arc::new(spec)
}

pub fn point() -> Ring {
    Arc::new(RingSpec::table("pt", Presentation::Point).expect("point ring"))
}

pub fn base_ring(base: &BaseDesc) -> Result<Ring> {
    Ok(finish(RingSpec::table(base.name(), base.presentation())?, base))
}

/// Gr(r, n) × B with the Grassmannian roots H_1..H_r at level 1.
pub fn grassmann(r: u32, n: u32, base: &BaseDesc) -> Result<Ring> {
    validate_flag(&[r], n)?;
    let gr = Presentation::Grassmann { r, n };
    let pres = match base {
        BaseDesc::Point => gr,
        _ => Presentation::Product(Box::new(gr), Box::new(base.presentation())),
    };
    let mut spec = RingSpec::table(format!("Gr({r},{n})x{}", base.name()), pres)?;
    let sigma1 = (1..=r as u8).fold(Poly::zero(), |a, i| &a + &Poly::var(Var::Root(1, i)));
    spec.divisors.push(("H1".into(), sigma1));
    Ok(finish(spec, base))
}

/// Abelian tower: level m < l is P(⊕_j O(−H^{(m+1)}_j))^{r_m}, and the top
/// level is P(V)^{r_l} for V with the given Chern roots on the base.
pub fn abelian_tower(r: &[u32], v_roots: &[Poly], base: &BaseDesc) -> Result<Ring> {
    let n = v_roots.len() as u32;
    validate_flag(r, n)?;
    let l = r.len();
    let mut gens = Vec::new();
    for m in 0..l {
        for i in 1..=r[m] {
            let h = Poly::var(Var::Root(m as u8 + 1, i as u8));
            let rel = if m + 1 < l {
                (1..=r[m + 1]).fold(Poly::one(), |a, j| {
                    &a * &(&h - &Poly::var(Var::Root(m as u8 + 2, j as u8)))
                })
            } else {
                v_roots.iter().fold(Poly::one(), |a, d| &a * &(&h + d))
            };
            gens.push(TowerGen::new(Var::Root(m as u8 + 1, i as u8), rel)?);
        }
    }
    let pres = Presentation::Tower {
        gens,
        base: Box::new(base.presentation()),
    };
    let mut spec = RingSpec::table(format!("FlT({r:?};{n})x{}", base.name()), pres)?;
    for (m, &rm) in r.iter().enumerate().take(l) {
        let mut sum = Poly::zero();
        for i in 1..=rm {
            let v = Var::Root(m as u8 + 1, i as u8);
            spec.divisors.push((v.to_string(), Poly::var(v)));
            sum = &sum + &Poly::var(v);
        }
        spec.divisors.push((format!("H{}", m + 1), sum));
    }
    spec.chern.insert("V".into(), chern_from_roots(v_roots));
    Ok(finish(spec, base))
}

/// P(V) over the base for V = ⊕ O(a_j).
pub fn projective_bundle(degrees: &[i64], base: &BaseDesc) -> Result<Ring> {
    abelian_tower(&[1], &line_roots(base, degrees)?, base)
}

/// Localized equivariant cohomology of Fl(r; N) or of its abelian tower.
pub fn gkm_ring(r: &[u32], n: u32, variant: GkmVariant) -> Result<Ring> {
    let g = gkm_data(n, r, variant)?;
    let name = match variant {
        GkmVariant::Flag => format!("Fl({r:?};{n})"),
        GkmVariant::ToricFlag => format!("FlT({r:?};{n})"),
    };
    let mut spec = RingSpec::gkm(name, g);
    for (m, &rm) in r.iter().enumerate() {
        let sum = (1..=rm as u8).fold(Poly::zero(), |a, i| &a + &Poly::var(Var::Root(m as u8 + 1, i)));
        spec.divisors.push((format!("H{}", m + 1), sum));
    }
    spec.chern
        .insert("V".into(), chern_from_roots(&equivariant_trivial_roots(n)));
    Ok(Arc::new(spec))
}

pub fn expected_flag_dim(r: &[u32], n: u32) -> u32 {
    flag_dim(r, n)
}

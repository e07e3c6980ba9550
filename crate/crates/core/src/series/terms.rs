//! Closed-form I-function coefficients as sums of factored terms.
//!
//! A coefficient is a sum of `AbTerm`s, each a polynomial times a product of
//! powers of normalized factors, all times a root-free base series that
//! depends only on the base degree.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::multideg::MultiDeg;
use crate::algebra::nilpotent::{laurent_from_poly, mul_nil, NilSeries};
use crate::algebra::rational::binomial;
use crate::algebra::{ParamRat, Poly, Rational, Var, ZLaurent};
use crate::error::{FmError, Result};

/// Window wide enough that intermediate products never truncate.
pub const WIDE: (i32, i32) = (-1 << 20, 1 << 20);

#[derive(Clone, Debug, PartialEq)]
pub struct AbTerm {
    pub scalar: Rational,
    pub poly: Poly,
    /// Normalized factors (primitive, positive leading coefficient).
    pub factors: BTreeMap<Poly, i32>,
}

impl Default for AbTerm {
    fn default() -> Self {
        AbTerm::one()
    }
}

impl AbTerm {
    pub fn one() -> Self {
        AbTerm {
            scalar: Rational::one(),
            poly: Poly::one(),
            factors: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.scalar.is_zero() || self.poly.is_zero()
    }

    pub fn mul_factor(&mut self, f: &Poly, e: i32) {
        if e == 0 {
            return;
        }
        if f.is_zero() {
            if e > 0 {
                self.scalar = Rational::zero();
            } else {
                // recorded so evaluation reports the vanishing denominator
                *self.factors.entry(Poly::zero()).or_insert(0) += e;
            }
            return;
        }
        let (c, g) = f.normalize_factor();
        self.scalar *= num_traits::pow::Pow::pow(&c, e);
        if g.is_constant() {
            return;
        }
        let slot = self.factors.entry(g.clone()).or_insert(0);
        *slot += e;
        if *slot == 0 {
            self.factors.remove(&g);
        }
    }

    pub fn mul_factors(&mut self, fs: &[(Poly, i32)]) {
        for (f, e) in fs {
            self.mul_factor(f, *e);
        }
    }

    pub fn mul_poly(&mut self, p: &Poly) {
        self.poly = &self.poly * p;
    }

    pub fn mul_term(&self, o: &AbTerm) -> AbTerm {
        let mut t = self.clone();
        t.scalar *= &o.scalar;
        t.mul_poly(&o.poly);
        for (f, e) in &o.factors {
            t.mul_factor(f, *e);
        }
        t
    }

    pub fn value(&self) -> Result<ParamRat> {
        if self.is_zero() {
            return Ok(ParamRat::zero());
        }
        let fs: Vec<(Poly, i32)> = self.factors.iter().map(|(f, e)| (f.clone(), *e)).collect();
        Ok(ParamRat::from_factors(self.scalar.clone(), &fs)?.mul_poly(&self.poly))
    }

    pub fn subst_map(&self, map: &BTreeMap<Var, Poly>) -> Result<AbTerm> {
        let mut t = AbTerm {
            scalar: self.scalar.clone(),
            poly: self.poly.subst_map(map),
            factors: BTreeMap::new(),
        };
        for (f, e) in &self.factors {
            let g = f.subst_map(map);
            if g.is_zero() && *e < 0 {
                return Err(FmError::VanishingDenominator(f.to_string()));
            }
            t.mul_factor(&g, *e);
        }
        Ok(t)
    }

    pub fn map_vars(&self, f: impl Fn(Var) -> Var + Copy) -> AbTerm {
        let mut t = AbTerm {
            scalar: self.scalar.clone(),
            poly: self.poly.map_vars(f),
            factors: BTreeMap::new(),
        };
        for (g, e) in &self.factors {
            t.mul_factor(&g.map_vars(f), *e);
        }
        t
    }

    /// z-Laurent expansion with nilpotent classes truncated at `bound`.
    /// Every factor with a negative exponent must have the form a·z + X
    /// with a ≠ 0 and X nilpotent.
    pub fn expand(&self, bound: u32) -> Result<NilSeries> {
        if self.is_zero() {
            return Ok(ZLaurent::new(WIDE.0, WIDE.1));
        }
        let mut num = self.poly.scale(&self.scalar).truncate_nil(bound);
        let mut dens = Vec::new();
        for (f, e) in &self.factors {
            if *e > 0 {
                for _ in 0..*e {
                    num = num.mul_trunc(f, bound);
                }
            } else {
                dens.push((f, (-e) as u32));
            }
        }
        let mut s = laurent_from_poly(&num, WIDE.0, WIDE.1);
        for (f, e) in dens {
            s = mul_nil(&s, &inverse_linear(f, e, bound)?, bound);
        }
        Ok(s)
    }
}

/// (a z + X)^{-e} for nilpotent X.
pub fn inverse_linear(f: &Poly, e: u32, bound: u32) -> Result<NilSeries> {
    let by_z = f.coeffs_in(Var::Z);
    if by_z.keys().any(|k| *k > 1) {
        return Err(FmError::Unsupported(format!("factor not linear in z: {f}")));
    }
    let a = by_z
        .get(&1)
        .and_then(|p| p.as_constant())
        .ok_or(FmError::ZeroLeadingCoefficient)?;
    let x = by_z.get(&0).cloned().unwrap_or_default();
    if x.vars().iter().any(|v| !v.is_nilpotent()) {
        return Err(FmError::Unsupported(format!(
            "denominator {f} has a non-nilpotent z-free part"
        )));
    }
    let ainv = Rational::one() / &a;
    let mut out = ZLaurent::new(WIDE.0, WIDE.1);
    let mut xj = Poly::one();
    for j in 0..=bound {
        if xj.is_zero() {
            break;
        }
        let k = binomial(-(e as i64), j) * num_traits::pow(ainv.clone(), (e + j) as usize);
        out.add_term(-((e + j) as i32), xj.scale(&k));
        xj = xj.mul_trunc(&x, bound);
    }
    Ok(out)
}

/// Which convention the stored coefficients follow for the t-dependence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TConvention {
    /// Coefficients are the q-coefficients after setting t = 0; the full
    /// series is recovered as Σ q^k e^{(k + H/z) t} I_k.
    DivisorForm,
}

/// Shape of a `TermSeries`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesKind {
    /// One Novikov variable per root.
    Abelian,
    /// Abelian terms grouped by level sums, without the Weyl factor.
    Specialized,
    /// Level-sum degrees with the Weyl factor included; coefficients are
    /// symmetric only after summing each Weyl orbit.
    Nonabelian,
}

/// A closed-form series on the abelian (per-root degrees) or nonabelian
/// (per-level degrees) side.
#[derive(Clone, Debug)]
pub struct TermSeries {
    pub ranks: Vec<u32>,
    pub kind: SeriesKind,
    pub base_rank: usize,
    /// Root-free base factor per base degree; absent means 1.
    pub base: BTreeMap<Vec<u32>, NilSeries>,
    pub terms: BTreeMap<MultiDeg, Vec<AbTerm>>,
    pub t_convention: Option<TConvention>,
    /// Explicit coefficients of q^k t^n, filled by `materialize_t`.
    pub tjet: BTreeMap<(MultiDeg, Vec<u32>), Vec<AbTerm>>,
    /// Divisor class paired with each multidegree slot (base, then fiber).
    pub divisors: Vec<Poly>,
}

impl TermSeries {
    pub fn fiber_len(&self) -> usize {
        if self.kind == SeriesKind::Abelian {
            self.ranks.iter().sum::<u32>() as usize
        } else {
            self.ranks.len()
        }
    }

    /// Roots of level m (1-based).
    pub fn level_roots(&self, m: usize) -> Vec<Var> {
        (1..=self.ranks[m - 1] as u8).map(|i| Var::Root(m as u8, i)).collect()
    }

    /// Π_m Π_{i<j} (H_i^{(m)} − H_j^{(m)}).
    pub fn vandermonde(&self) -> Vec<(Poly, i32)> {
        let mut out = Vec::new();
        for m in 1..=self.ranks.len() {
            let roots = self.level_roots(m);
            for i in 0..roots.len() {
                for j in (i + 1)..roots.len() {
                    out.push((&Poly::var(roots[i]) - &Poly::var(roots[j]), 1));
                }
            }
        }
        out
    }

    pub fn vandermonde_degree(&self) -> u32 {
        if self.kind != SeriesKind::Nonabelian {
            0
        } else {
            self.ranks.iter().map(|r| r * (r - 1) / 2).sum()
        }
    }

    /// Sum of the terms at a degree, without the base factor.
    pub fn closed_value(&self, d: &MultiDeg) -> Result<ParamRat> {
        sum_value(self.terms.get(d).map(|v| v.as_slice()).unwrap_or(&[]))
    }

    /// Fills the t-jet up to total t-order `order` from the divisor form:
    /// the coefficient of q^k t^n is Π_j ((D_j + k_j z)/z)^{n_j}/n_j! · I_k.
    pub fn materialize_t(&mut self, order: u32) -> Result<()> {
        if self.t_convention.is_none() {
            return Err(FmError::TConventionUnset);
        }
        let nd = self.divisors.len();
        let mut jet = BTreeMap::new();
        for (d, ts) in &self.terms {
            for n in super::multideg::vectors_up_to(nd, order) {
                let mut extra = AbTerm::one();
                let mut tot = 0i32;
                for (j, &nj) in n.iter().enumerate() {
                    if nj == 0 {
                        continue;
                    }
                    let lin = &self.divisors[j] + &Poly::var(Var::Z).scale(&Rational::from_integer(d.get(j).into()));
                    extra.poly = &extra.poly * &lin.pow(nj);
                    extra.scalar /= Rational::from_integer(crate::algebra::rational::factorial(nj));
                    tot += nj as i32;
                }
                extra.mul_factor(&Poly::var(Var::Z), -tot);
                let v: Vec<AbTerm> = ts.iter().map(|t| t.mul_term(&extra)).collect();
                jet.insert((d.clone(), n), v);
            }
        }
        self.tjet = jet;
        Ok(())
    }
}

pub fn sum_value(ts: &[AbTerm]) -> Result<ParamRat> {
    let mut s = ParamRat::zero();
    for t in ts {
        s = &s + &t.value()?;
    }
    Ok(s)
}

/// Range product Π_{c ≤ 0} (x + cz) / Π_{c ≤ d} (x + cz) as factors.
pub fn range_ratio(x: &Poly, d: i64) -> Vec<(Poly, i32)> {
    let z = Poly::var(Var::Z);
    let lin = |c: i64| x + &z.scale(&Rational::from_integer(c.into()));
    if d >= 0 {
        (1..=d).map(|c| (lin(c), -1)).collect()
    } else {
        (d + 1..=0).map(|c| (lin(c), 1)).collect()
    }
}

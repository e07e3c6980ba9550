//! Quantum Riemann–Roch operators Δ_E^λ and A(μ, y, z).

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::invseries::{poly_to_laurent, InvSeries};
use crate::algebra::rational::{binomial, factorial, rat};
use crate::algebra::{ParamRat, Poly, Rational, Var, ZLaurent};
use crate::error::{FmError, Result};
use crate::series::terms::WIDE;
use crate::series::{ClassValues, CoeffSeries, MultiDeg};

/// Bernoulli numbers with x/(e^x − 1) = Σ B_m x^m/m!, so B_1 = −1/2.
pub fn bernoulli(m: u32) -> Rational {
    let mut b = vec![Rational::one()];
    for n in 1..=m as i64 {
        let mut s = Rational::zero();
        for (j, bj) in b.iter().enumerate() {
            s += binomial(n + 1, j as u32) * bj;
        }
        b.push(-s / rat(n + 1));
    }
    b[m as usize].clone()
}

/// s_k(λ) = (k−1)!(−λ)^{−k} as (coefficient, power of λ^{-1}); zero for k ≤ 0.
pub fn s_constant(k: i64) -> Option<(Rational, u32)> {
    if k <= 0 {
        return None;
    }
    let sign = if k % 2 == 0 { rat(1) } else { rat(-1) };
    Some((sign * Rational::from_integer(factorial(k as u32 - 1)), k as u32))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorKind {
    QrrDelta,
    AOperator,
}

/// exp(exponent) with an optional Novikov rescaling Q^d → Q^d p^{−Σ_j c_j d_j}.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorExpansion {
    pub kind: OperatorKind,
    /// The inverted parameter (λ or μ).
    pub param: Var,
    pub exponent: InvSeries,
    /// Pairing of c_1(E) with each Novikov slot; empty for no rescaling.
    pub rescaling: Vec<i64>,
}

impl OperatorExpansion {
    pub fn identity(order: u32) -> Self {
        OperatorExpansion {
            kind: OperatorKind::QrrDelta,
            param: Var::Mu,
            exponent: InvSeries::zero(order),
            rescaling: vec![],
        }
    }
}

/// Σ_{l,m} s_{l+m−1}(p + x) B_m/m! ch_l (−z)^{m−1}, expanded in p^{-1} to
/// `order`. `ch` lists ch_0, ch_1, …; components beyond the list are zero.
pub fn delta_exponent_series(ch: &[Poly], shift: &Poly, order: u32, zwin: (i32, i32)) -> Result<InvSeries> {
    let mut out = InvSeries::zero(order);
    let xs: Vec<Poly> = (0..=order).map(|n| shift.pow(n)).collect();
    for (l, chl) in ch.iter().enumerate() {
        if chl.is_zero() {
            continue;
        }
        for m in 0..=(order + 1) {
            let k = l as i64 + m as i64 - 1;
            let Some((sc, pk)) = s_constant(k) else {
                continue;
            };
            if pk > order {
                continue;
            }
            let ze = m as i32 - 1;
            if ze < zwin.0 || ze > zwin.1 {
                return Err(FmError::Truncation(format!("z^{ze} outside the window")));
            }
            let bm = bernoulli(m) / Rational::from_integer(factorial(m));
            if bm.is_zero() {
                continue;
            }
            let zsign = if (m as i32 - 1).rem_euclid(2) == 0 {
                rat(1)
            } else {
                rat(-1)
            };
            let c = sc * bm * zsign;
            let base = poly_to_laurent(chl).shift(ze).scale(&c);
            // (p + x)^{-k} = Σ_n binom(−k, n) x^n p^{−k−n}
            for n in 0..=(order - pk) {
                let b = binomial(-k, n);
                out.add_term(pk + n, &base.mul(&poly_to_laurent(&xs[n as usize])).scale(&b));
            }
        }
    }
    Ok(out)
}

/// The Δ_E^λ exponent for a bundle with Chern character `ch` and
/// c_1(E)-pairings `c1_pairing` with the Novikov slots.
pub fn qrr_delta_exponent(
    ch: &[Poly],
    c1_pairing: &[i64],
    param: Var,
    order: u32,
    zwin: (i32, i32),
) -> Result<OperatorExpansion> {
    Ok(OperatorExpansion {
        kind: OperatorKind::QrrDelta,
        param,
        exponent: delta_exponent_series(ch, &Poly::zero(), order, zwin)?,
        rescaling: c1_pairing.to_vec(),
    })
}

/// log(1 + y/μ) = Σ_{n≥1} (−1)^{n+1} y^n μ^{-n}/n.
fn log_one_plus(y: &Poly, order: u32) -> InvSeries {
    let mut s = InvSeries::zero(order);
    for n in 1..=order {
        let sign = if n % 2 == 1 { rat(1) } else { rat(-1) };
        s.add_poly(n, &y.pow(n).scale(&(sign / rat(n as i64))));
    }
    s
}

/// Exponent of A(μ, y, z) = exp[(rank/z)((μ + y + z/2) log(1 + y/μ) − y) +
/// (z∂_Q/z) log(1 + y/μ)] in μ^{-1}, with y and z∂_Q kept as the symbols
/// `Var::Y` and `Var::DQ`.
pub fn a_expand(rank: u32, order: u32) -> OperatorExpansion {
    let y = Poly::var(Var::Y);
    let z = Poly::var(Var::Z);
    let log = log_one_plus(&y, order + 1);
    let a = |n: u32| -> Poly {
        log.coeff(n)
            .terms()
            .map(|(_, p)| p.clone())
            .fold(Poly::zero(), |s, p| &s + &p)
    };
    let mut ex = InvSeries::zero(order);
    let half_z = z.scale(&Rational::new(1.into(), 2.into()));
    let shift = &y + &half_z;
    let inv_z = ZLaurent::monomial(-1, Poly::one(), WIDE.0, WIDE.1);
    for j in 1..=order {
        // coefficient of μ^{-j} in (μ + y + z/2) log − y
        let c = &a(j + 1) + &(&shift * &a(j));
        let rank_part = poly_to_laurent(&c.scale(&rat(rank as i64)));
        let dq_part = poly_to_laurent(&(&Poly::var(Var::DQ) * &a(j)));
        ex.add_term(j, &rank_part.add(&dq_part).mul(&inv_z));
    }
    OperatorExpansion {
        kind: OperatorKind::AOperator,
        param: Var::Mu,
        exponent: ex,
        rescaling: vec![],
    }
}

/// How the symbols of an operator act on a divisor-form series at degree d:
/// y ↦ D + d_slot z, z∂_Q ↦ c_1(Q) + (Σ_j p_j d_j) z.
#[derive(Clone, Debug, Default)]
pub struct Bindings {
    pub y: Option<(Poly, usize)>,
    pub dq: Option<(Poly, Vec<i64>)>,
}

fn pair(p: &[i64], d: &MultiDeg) -> i64 {
    p.iter().enumerate().map(|(j, x)| x * d.get(j) as i64).sum()
}

/// The multiplier exp(exponent) at degree d, with the symbols resolved.
pub fn multiplier_at(op: &OperatorExpansion, b: &Bindings, d: &MultiDeg) -> InvSeries {
    let z = Poly::var(Var::Z);
    let mut map = BTreeMap::new();
    if let Some((div, slot)) = &b.y {
        map.insert(Var::Y, div + &z.scale(&rat(d.get(*slot) as i64)));
    }
    if let Some((c1, p)) = &b.dq {
        map.insert(Var::DQ, c1 + &z.scale(&rat(pair(p, d))));
    }
    op.exponent.subst_map(&map).exp()
}

/// Applies the operator coefficientwise. The result is keyed by the power of
/// the inverted parameter; keys above the order shifted by the smallest
/// rescaling are incomplete and dropped.
pub fn qrr_apply(op: &OperatorExpansion, b: &Bindings, f: &CoeffSeries) -> Result<BTreeMap<i64, CoeffSeries>> {
    let order = op.exponent.order as i64;
    let shift = |d: &MultiDeg| -> i64 {
        if op.rescaling.is_empty() {
            0
        } else {
            pair(&op.rescaling, d)
        }
    };
    let min_shift = f.coeffs.keys().map(shift).min().unwrap_or(0).min(0);
    let mut out: BTreeMap<i64, BTreeMap<MultiDeg, ClassValues>> = BTreeMap::new();
    for (d, v) in &f.coeffs {
        let mult = multiplier_at(op, b, d);
        let s = shift(d);
        for (j, m) in &mult.terms {
            let key = *j as i64 + s;
            if key > order + min_shift {
                continue;
            }
            let nv = apply_multiplier(f, m, v)?;
            let slot = out.entry(key).or_default();
            let merged = match slot.remove(d) {
                Some(prev) => add_values(&prev, &nv)?,
                None => nv,
            };
            slot.insert(d.clone(), merged);
        }
    }
    Ok(out
        .into_iter()
        .map(|(k, coeffs)| {
            (
                k,
                CoeffSeries {
                    ring: f.ring.clone(),
                    trunc: f.trunc,
                    coeffs,
                    truncated: f.truncated,
                },
            )
        })
        .collect())
}

fn add_values(a: &ClassValues, b: &ClassValues) -> Result<ClassValues> {
    match (a, b) {
        (ClassValues::Laurent(x), ClassValues::Laurent(y)) => {
            Ok(ClassValues::Laurent(x.iter().zip(y).map(|(p, q)| p.add(q)).collect()))
        }
        (ClassValues::Closed(x), ClassValues::Closed(y)) => {
            Ok(ClassValues::Closed(x.iter().zip(y).map(|(p, q)| p + q).collect()))
        }
        _ => Err(FmError::Incompatible("mixed closed and Laurent data".into())),
    }
}

/// (Σ_e z^e m_e) ⌣ v for class-valued m_e.
fn apply_multiplier(f: &CoeffSeries, m: &ZLaurent<Poly>, v: &ClassValues) -> Result<ClassValues> {
    match v {
        ClassValues::Laurent(cs) => {
            let t = f.ring.table_data()?;
            let n = cs.len();
            let mut out: Vec<ZLaurent<Poly>> = cs.iter().map(|c| ZLaurent::new(c.lo, c.hi)).collect();
            for (e, me) in m.terms() {
                for (bi, cb) in cs.iter().enumerate() {
                    if cb.is_zero() {
                        continue;
                    }
                    let coords = f.ring.coords(&(me * &t.basis[bi]))?;
                    for (c, x) in coords.iter().enumerate().take(n) {
                        if x.is_zero() {
                            continue;
                        }
                        let x = x
                            .as_constant()
                            .ok_or_else(|| FmError::Unsupported("parametric multiplier on Laurent data".into()))?;
                        out[c] = out[c].add(&cb.shift(*e).scale(&x));
                    }
                }
            }
            Ok(ClassValues::Laurent(out))
        }
        ClassValues::Closed(vals) => {
            let g = f.ring.gkm_graph()?;
            let z = ParamRat::var(Var::Z);
            let mut out = Vec::with_capacity(vals.len());
            for (a, x) in vals.iter().enumerate() {
                let mut acc = ParamRat::zero();
                for (e, me) in m.terms() {
                    let r = ParamRat::from_poly(g.restrict(me, a));
                    acc = &acc + &(&r * &z.pow(*e)?);
                }
                out.push(&acc * x);
            }
            Ok(ClassValues::Closed(out))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::frac;
    use crate::rings::chern::{chern_character, symbolic_chern};

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(0), rat(1));
        assert_eq!(bernoulli(1), frac(-1, 2));
        assert_eq!(bernoulli(2), frac(1, 6));
        assert_eq!(bernoulli(3), rat(0));
        assert_eq!(bernoulli(4), frac(-1, 30));
    }

    #[test]
    fn bernoulli_matches_generating_function() {
        // x = (e^x − 1) Σ B_m x^m/m!: compare coefficients of x^n, n ≤ 8
        for n in 1..=8u32 {
            let mut s = Rational::zero();
            for m in 0..n {
                let bm = bernoulli(m) / Rational::from_integer(factorial(m));
                s += bm / Rational::from_integer(factorial(n - m));
            }
            assert_eq!(s, if n == 1 { rat(1) } else { rat(0) });
        }
    }

    #[test]
    fn s_constants() {
        assert_eq!(s_constant(1), Some((rat(-1), 1)));
        assert_eq!(s_constant(2), Some((rat(1), 2)));
        assert_eq!(s_constant(3), Some((rat(-2), 3)));
        assert_eq!(s_constant(0), None);
        assert_eq!(s_constant(-1), None);
    }

    #[test]
    fn zero_bundle_gives_identity() {
        let op = qrr_delta_exponent(&[], &[], Var::Mu, 6, (-12, 6)).unwrap();
        assert!(op.exponent.is_zero());
        assert_eq!(op.exponent.exp(), InvSeries::one(6));
    }

    #[test]
    fn delta_exponent_direct_double_sum() {
        // rank one, ch_1 = c: λ^{-1} coefficient is s_1 (B_0 ch_1 (−z)^{-1} + B_1 ch_0 + B_2/2 ch_... )
        // assembled here from the defining sum by hand: (l, m) with l + m = 2
        let c = Poly::var(Var::Chern(1, 1));
        let ch = chern_character(&[Poly::one(), c.clone()], 3);
        let e = delta_exponent_series(&ch, &Poly::zero(), 3, (-12, 6)).unwrap();
        let t1 = e.coeff(1);
        // (l,m) = (2,0): s_1 B_0 ch_2 (−z)^{-1} = (−1)(c²/2)(−1/z) = c²/(2z)
        // (l,m) = (1,1): s_1 B_1 ch_1 = (−1)(−1/2) c = c/2
        // (l,m) = (0,2): s_1 (B_2/2) ch_0 (−z) = (−1)(1/12)(−z) = z/12
        assert_eq!(t1.coeff(-1), Some(&(&c * &c).scale(&frac(1, 2))));
        assert_eq!(t1.coeff(0), Some(&c.scale(&frac(1, 2))));
        assert_eq!(t1.coeff(1), Some(&Poly::constant(frac(1, 12))));
        assert_eq!(t1.terms().count(), 3);
        // the symbolic rank list also works
        assert_eq!(symbolic_chern(1, 1)[1], c);
    }

    #[test]
    fn exponent_is_additive_in_the_bundle() {
        let c1 = symbolic_chern(1, 1);
        let c2 = symbolic_chern(2, 2);
        let a = chern_character(&c1, 4);
        let b = chern_character(&c2, 4);
        let sum: Vec<Poly> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let w = (-12, 6);
        let ea = delta_exponent_series(&a, &Poly::zero(), 4, w).unwrap();
        let eb = delta_exponent_series(&b, &Poly::zero(), 4, w).unwrap();
        let es = delta_exponent_series(&sum, &Poly::zero(), 4, w).unwrap();
        assert_eq!(es, ea.add(&eb));
        assert_eq!(es.exp(), ea.exp().mul(&eb.exp()));
    }

    #[test]
    fn a_operator_first_order() {
        // 1 + [rank·y(y+z)/2 + y z∂_Q]/(zμ) + O(μ^-2)
        let op = a_expand(2, 3);
        let e = op.exponent.exp();
        let t = e.coeff(1);
        let y = Poly::var(Var::Y);
        assert_eq!(t.coeff(-1), Some(&(&(&y * &y) + &(&y * &Poly::var(Var::DQ)))));
        assert_eq!(t.coeff(0), Some(&y));
        assert_eq!(t.terms().count(), 2);
        assert_eq!(e.coeff(0).coeff(0), Some(&Poly::one()));
    }

    #[test]
    fn a_operator_vanishes_at_y_zero() {
        let op = a_expand(3, 5);
        let m = BTreeMap::from([(Var::Y, Poly::zero())]);
        assert!(op.exponent.subst_map(&m).is_zero());
        assert!(a_expand(0, 4)
            .exponent
            .subst_map(&BTreeMap::from([(Var::DQ, Poly::zero())]))
            .is_zero());
    }

    #[test]
    fn identity_operator_returns_input() {
        use crate::ifunctions::{main_flag_i, FlagSetup};
        use crate::rings::builders::grassmann;
        use crate::rings::BaseDesc;
        use crate::series::{materialize_table, Truncation};
        let trunc = Truncation {
            dmax: 2,
            ..Default::default()
        };
        let setup = FlagSetup::trivial(3, &[1], false, trunc).unwrap();
        let ring = grassmann(1, 3, &BaseDesc::Point).unwrap();
        let f = materialize_table(&main_flag_i(&setup).unwrap(), &ring, trunc).unwrap();
        let out = qrr_apply(&OperatorExpansion::identity(4), &Bindings::default(), &f).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[&0].coeffs, f.coeffs);
    }
}

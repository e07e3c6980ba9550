//! Cone membership over a point: e^{−τ/z} ι_α^* I has no negative powers
//! of z for some τ in the Novikov ideal.

use std::collections::BTreeMap;

use crate::algebra::rational::factorial;
use crate::algebra::{ParamRat, Poly, Rational, Var};
use crate::error::{FmError, Result};
use crate::report::CheckReport;
use crate::series::{ClassValues, CoeffSeries, MultiDeg};

/// Coefficients of z^{lo}, …, z^{hi} of the expansion of f at z = 0.
pub fn laurent_at_zero(f: &ParamRat, hi: i32) -> Result<BTreeMap<i32, ParamRat>> {
    let z = Poly::var(Var::Z);
    let mut pole = 0i32;
    let mut dens = Vec::new();
    for (g, e) in f.den_factors() {
        let mut g = g.clone();
        while g.subst(Var::Z, &Poly::zero()).is_zero() {
            g = g
                .div_exact(&z)
                .ok_or_else(|| FmError::Unsupported(format!("factor {g}")))?;
            pole += *e as i32;
        }
        if !g.is_constant() {
            dens.push((g, *e));
        }
    }
    let len = (hi + pole + 1).max(0) as usize;
    let coeffs = |p: &Poly| -> Vec<ParamRat> {
        let cs = p.coeffs_in(Var::Z);
        (0..len as u32)
            .map(|i| cs.get(&i).cloned().map(ParamRat::from_poly).unwrap_or_default())
            .collect()
    };
    let mul = |a: &[ParamRat], b: &[ParamRat]| -> Vec<ParamRat> {
        let mut out = vec![ParamRat::zero(); len];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate().take(len - i) {
                if !y.is_zero() {
                    out[i + j] = &out[i + j] + &(x * y);
                }
            }
        }
        out
    };
    let mut acc = coeffs(f.numer());
    for (g, e) in dens {
        let gs = coeffs(&g);
        let g0inv = gs[0].inv()?;
        let mut inv = vec![ParamRat::zero(); len];
        for j in 0..len {
            if j == 0 {
                inv[0] = g0inv.clone();
                continue;
            }
            let mut s = ParamRat::zero();
            for i in 1..=j {
                s = &s + &(&gs[i] * &inv[j - i]);
            }
            inv[j] = -(&g0inv * &s);
        }
        for _ in 0..e {
            acc = mul(&acc, &inv);
        }
    }
    Ok(acc
        .into_iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i as i32 - pole, c))
        .collect())
}

type Jet = BTreeMap<i32, ParamRat>;

fn jet_mul(a: &Jet, b: &Jet, hi: i32) -> Jet {
    let mut out: Jet = BTreeMap::new();
    for (i, x) in a {
        for (j, y) in b {
            if i + j <= hi {
                let e = out.entry(i + j).or_default();
                *e = &*e + &(x * y);
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Novikov series of z-jets, keyed by degree.
type QSeries = BTreeMap<MultiDeg, Jet>;

fn q_mul(a: &QSeries, b: &QSeries, dmax: u32, hi: i32) -> QSeries {
    let mut out: QSeries = BTreeMap::new();
    for (da, x) in a {
        for (db, y) in b {
            let fiber: Vec<u32> = da.fiber.iter().zip(&db.fiber).map(|(p, q)| p + q).collect();
            let base: Vec<u32> = da.base.iter().zip(&db.base).map(|(p, q)| p + q).collect();
            let d = MultiDeg::new(base, fiber);
            if d.total() > dmax {
                continue;
            }
            let slot = out.entry(d).or_default();
            for (e, c) in jet_mul(x, y, hi) {
                let s = slot.entry(e).or_default();
                *s = &*s + &c;
            }
        }
    }
    out
}

/// exp(−τ/z) for τ = Σ_{D≠0} τ_D q^D.
fn exp_neg_tau(tau: &BTreeMap<MultiDeg, ParamRat>, zero: &MultiDeg, dmax: u32, hi: i32) -> QSeries {
    let x: QSeries = tau
        .iter()
        .map(|(d, t)| (d.clone(), BTreeMap::from([(-1, -t.clone())])))
        .collect();
    let mut out: QSeries = BTreeMap::from([(zero.clone(), BTreeMap::from([(0, ParamRat::one())]))]);
    let mut pow = out.clone();
    for n in 1..=dmax {
        pow = q_mul(&pow, &x, dmax, hi);
        let inv = Rational::from_integer(1.into()) / Rational::from_integer(factorial(n));
        for (d, jet) in &pow {
            let slot = out.entry(d.clone()).or_default();
            for (e, c) in jet {
                let s = slot.entry(*e).or_default();
                *s = &*s + &c.scale(&inv);
            }
        }
    }
    out
}

/// Solves for τ degree by degree at every fixed point and checks that no
/// negative power of z survives. Valid when the base is a point.
pub fn check_cone_point(cs: &CoeffSeries) -> Result<CheckReport> {
    let mut rep = CheckReport::new("cone membership over a point");
    let g = cs.ring.gkm_graph()?;
    let dmax = cs.trunc.dmax;
    let hi = dmax as i32 + 1;
    let zero = cs
        .coeffs
        .keys()
        .find(|d| d.total() == 0)
        .cloned()
        .ok_or_else(|| FmError::Missing("degree zero coefficient".into()))?;
    for alpha in 0..g.points.len() {
        let mut series: QSeries = BTreeMap::new();
        for (d, v) in &cs.coeffs {
            let ClassValues::Closed(vals) = v else {
                return Err(FmError::Incompatible("cone check needs fixed-point values".into()));
            };
            if d.total() <= dmax {
                series.insert(d.clone(), laurent_at_zero(&vals[alpha], hi)?);
            }
        }
        let mut tau: BTreeMap<MultiDeg, ParamRat> = BTreeMap::new();
        for t in 1..=dmax {
            let gser = q_mul(&exp_neg_tau(&tau, &zero, dmax, hi), &series, dmax, hi);
            for (d, jet) in &gser {
                if d.total() == t {
                    tau.insert(d.clone(), jet.get(&-1).cloned().unwrap_or_default());
                }
            }
            let gser = q_mul(&exp_neg_tau(&tau, &zero, dmax, hi), &series, dmax, hi);
            for (d, jet) in gser.iter().filter(|(d, _)| d.total() == t) {
                let neg = jet.iter().filter(|(e, c)| **e < 0 && !c.is_zero()).count();
                rep.assert(neg == 0, || {
                    format!("point {}, degree {d}: {neg} negative z powers", g.points[alpha].label)
                });
            }
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;
    use crate::ifunctions::{main_flag_i, FlagSetup};
    use crate::rings::builders::gkm_ring;
    use crate::rings::GkmVariant;
    use crate::series::{fixed_point_restrict_series, Truncation};

    #[test]
    fn expansion_of_simple_fraction() {
        // 1/(z (1 + z)) = z^-1 − 1 + z − …
        let z = Poly::var(Var::Z);
        let f = ParamRat::new(Poly::one(), &z * &(&z + &Poly::one())).unwrap();
        let j = laurent_at_zero(&f, 1).unwrap();
        assert_eq!(j[&-1], ParamRat::one());
        assert_eq!(j[&0], ParamRat::constant(rat(-1)));
        assert_eq!(j[&1], ParamRat::one());
    }

    #[test]
    fn flag_lies_on_point_cone() {
        let trunc = Truncation {
            dmax: 2,
            ..Default::default()
        };
        for (r, n) in [(vec![1], 2), (vec![2], 4)] {
            let setup = FlagSetup::trivial(n, &r, true, trunc).unwrap();
            let ts = main_flag_i(&setup).unwrap();
            let ring = gkm_ring(&r, n, GkmVariant::Flag).unwrap();
            let cs = fixed_point_restrict_series(&ts, &ring, 2).unwrap();
            let rep = check_cone_point(&cs).unwrap();
            assert!(rep.conclusive(), "{rep}");
        }
    }
}

//! Materialized series: ring coordinates per Novikov degree.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::multideg::MultiDeg;
use super::terms::{sum_value, SeriesKind, TermSeries};
use crate::algebra::nilpotent::{mul_nil, NilSeries};
use crate::algebra::{ParamRat, Poly, ZLaurent};
use crate::error::{FmError, Result};
use crate::report::CheckReport;
use crate::rings::{Ring, RingSpec};

/// Truncation parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Truncation {
    /// Largest total Novikov degree.
    pub dmax: u32,
    /// Kept z-exponents zlo..=zhi.
    pub zlo: i32,
    pub zhi: i32,
    /// Order in 1/μ for operator expansions.
    pub minv: u32,
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation {
            dmax: 3,
            zlo: -12,
            zhi: 6,
            minv: 6,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ClassValues {
    /// z-Laurent coordinates over a table basis.
    Laurent(Vec<ZLaurent<Poly>>),
    /// Exact restrictions to the fixed points of a localized ring.
    Closed(Vec<ParamRat>),
}

#[derive(Clone, Debug)]
pub struct CoeffSeries {
    pub ring: Ring,
    pub trunc: Truncation,
    pub coeffs: BTreeMap<MultiDeg, ClassValues>,
    /// Nonzero data outside the z-window was discarded.
    pub truncated: bool,
}

impl CoeffSeries {
    pub fn get(&self, d: &MultiDeg) -> Option<&ClassValues> {
        self.coeffs.get(d)
    }

    /// Restriction at fixed point `a` in degree `d` (zero if absent).
    pub fn closed_at(&self, d: &MultiDeg, a: usize) -> Result<ParamRat> {
        match self.coeffs.get(d) {
            None => Ok(ParamRat::zero()),
            Some(ClassValues::Closed(v)) => Ok(v[a].clone()),
            Some(ClassValues::Laurent(_)) => Err(FmError::Unsupported("fixed-point value of a Laurent series".into())),
        }
    }
}

/// Coordinates of a nilpotent series over the ring basis.
pub fn reduce_series(s: &NilSeries, ring: &RingSpec, lo: i32, hi: i32) -> Result<Vec<ZLaurent<Poly>>> {
    let mut out = vec![ZLaurent::new(lo, hi); ring.len()];
    for (e, c) in s.terms() {
        for (i, x) in ring.coords(c)?.into_iter().enumerate() {
            if x.vars().iter().any(|v| v.is_nilpotent()) {
                return Err(FmError::Incompatible(format!(
                    "class variables of {x} are not generators of {}",
                    ring.name
                )));
            }
            out[i].add_term(*e, x);
        }
    }
    Ok(out)
}

fn degree_series(ts: &TermSeries, d: &MultiDeg, ring: &RingSpec) -> Result<NilSeries> {
    let dim = ring.dim();
    let vd = ts.vandermonde_degree();
    let bound = dim + vd;
    let vfac = if ts.kind == SeriesKind::Nonabelian {
        ts.vandermonde()
    } else {
        vec![]
    };
    let mut acc = ZLaurent::new(super::terms::WIDE.0, super::terms::WIDE.1);
    for t in ts.terms.get(d).map(|v| v.as_slice()).unwrap_or(&[]) {
        let mut t = t.clone();
        t.mul_factors(&vfac);
        acc = acc.add(&t.expand(bound)?);
    }
    if let Some(b) = ts.base.get(&d.base) {
        acc = mul_nil(&acc, b, bound);
    }
    if vd > 0 {
        let v = vfac.iter().fold(Poly::one(), |a, (f, _)| &a * f);
        acc = acc.map(|c| {
            c.div_exact(&v)
                .expect("Weyl orbit sums are divisible by the Vandermonde")
                .truncate_nil(dim)
        });
    }
    Ok(acc)
}

/// Expands a closed-form series in the z-window and reduces it to
/// coordinates of a table ring.
pub fn materialize_table(ts: &TermSeries, ring: &Ring, trunc: Truncation) -> Result<CoeffSeries> {
    ring.table_data()?;
    let degs: Vec<&MultiDeg> = ts.terms.keys().filter(|d| d.total() <= trunc.dmax).collect();
    let vals: Vec<Result<(MultiDeg, Vec<ZLaurent<Poly>>)>> = degs
        .par_iter()
        .map(|d| {
            let s = degree_series(ts, d, ring)?;
            Ok(((*d).clone(), reduce_series(&s, ring, trunc.zlo, trunc.zhi)?))
        })
        .collect();
    let mut coeffs = BTreeMap::new();
    let mut truncated = false;
    for v in vals {
        let (d, c) = v?;
        truncated |= c.iter().any(|x| x.truncated);
        if c.iter().any(|x| !x.is_zero()) {
            coeffs.insert(d, ClassValues::Laurent(c));
        }
    }
    Ok(CoeffSeries {
        ring: ring.clone(),
        trunc,
        coeffs,
        truncated,
    })
}

/// Restricts a closed-form series to every fixed point of a localized ring.
/// The base factor must be trivial.
pub fn fixed_point_restrict_series(ts: &TermSeries, ring: &Ring, dmax: u32) -> Result<CoeffSeries> {
    let g = ring.gkm_graph()?;
    if ts.base.values().any(|b| b.terms().any(|(e, c)| *e != 0 || !c.is_one())) {
        return Err(FmError::Unsupported(
            "fixed-point restriction needs a trivial base factor".into(),
        ));
    }
    let degs: Vec<&MultiDeg> = ts.terms.keys().filter(|d| d.total() <= dmax).collect();
    let vals: Vec<Result<(MultiDeg, Vec<ParamRat>)>> = degs
        .par_iter()
        .map(|d| {
            let mut v = Vec::with_capacity(g.points.len());
            for p in &g.points {
                let ts_at: Result<Vec<_>> = ts.terms[*d].iter().map(|t| t.subst_map(&p.restriction)).collect();
                v.push(sum_value(&ts_at?)?);
            }
            Ok(((*d).clone(), v))
        })
        .collect();
    let mut coeffs = BTreeMap::new();
    for v in vals {
        let (d, c) = v?;
        coeffs.insert(d, ClassValues::Closed(c));
    }
    Ok(CoeffSeries {
        ring: ring.clone(),
        trunc: Truncation {
            dmax,
            ..Truncation::default()
        },
        coeffs,
        truncated: false,
    })
}

/// z∂_{t_j} on a divisor-form series: the degree-k coefficient becomes
/// (D_j + k_j z) ⌣ I_k, where slot j pairs with the divisor `div`.
pub fn divisor_op_apply(s: &CoeffSeries, div: &Poly, slot: usize) -> Result<CoeffSeries> {
    let z = Poly::var(crate::algebra::Var::Z);
    let mut coeffs = BTreeMap::new();
    for (d, v) in &s.coeffs {
        let k = crate::algebra::Rational::from_integer(d.get(slot).into());
        let nv = match v {
            ClassValues::Closed(vals) => {
                let g = s.ring.gkm_graph()?;
                ClassValues::Closed(
                    vals.iter()
                        .enumerate()
                        .map(|(a, x)| x.mul_poly(&(&g.restrict(div, a) + &z.scale(&k))))
                        .collect(),
                )
            }
            ClassValues::Laurent(cs) => {
                let t = s.ring.table_data()?;
                let dc = s.ring.coords(div)?;
                let n = cs.len();
                let mut out: Vec<ZLaurent<Poly>> = cs.iter().map(|c| c.shift(1).scale(&k)).collect();
                for (a, da) in dc.iter().enumerate() {
                    let Some(da) = da.as_constant() else {
                        return Err(FmError::Unsupported("parametric divisor".into()));
                    };
                    if num_traits::Zero::is_zero(&da) {
                        continue;
                    }
                    for (b, cb) in cs.iter().enumerate() {
                        if cb.is_zero() {
                            continue;
                        }
                        for (c, m) in t.structure(a, b).iter().enumerate().take(n) {
                            if !num_traits::Zero::is_zero(m) {
                                out[c] = out[c].add(&cb.scale(&(&da * m)));
                            }
                        }
                    }
                }
                ClassValues::Laurent(out)
            }
        };
        coeffs.insert(d.clone(), nv);
    }
    Ok(CoeffSeries {
        ring: s.ring.clone(),
        trunc: s.trunc,
        coeffs,
        truncated: s.truncated,
    })
}

/// a·F + b·G coefficientwise.
pub fn combine(f: &CoeffSeries, g: &CoeffSeries, a: &ParamRat, b: &ParamRat) -> Result<CoeffSeries> {
    if f.ring.name != g.ring.name {
        return Err(FmError::RingMismatch(format!("{} vs {}", f.ring.name, g.ring.name)));
    }
    let mut coeffs = BTreeMap::new();
    let keys: std::collections::BTreeSet<&MultiDeg> = f.coeffs.keys().chain(g.coeffs.keys()).collect();
    for d in keys {
        let v = lin(f.coeffs.get(d), g.coeffs.get(d), a, b, f.ring.len())?;
        coeffs.insert(d.clone(), v);
    }
    Ok(CoeffSeries {
        ring: f.ring.clone(),
        trunc: f.trunc,
        coeffs,
        truncated: f.truncated || g.truncated,
    })
}

fn lin(x: Option<&ClassValues>, y: Option<&ClassValues>, a: &ParamRat, b: &ParamRat, n: usize) -> Result<ClassValues> {
    match (x, y) {
        (Some(ClassValues::Closed(_)), _) | (_, Some(ClassValues::Closed(_))) => {
            let get = |v: Option<&ClassValues>, i: usize| match v {
                Some(ClassValues::Closed(c)) => Ok(c[i].clone()),
                None => Ok(ParamRat::zero()),
                _ => Err(FmError::Incompatible("mixed closed and Laurent data".into())),
            };
            let mut out = Vec::with_capacity(n);
            for i in 0..n {
                out.push(&(a * &get(x, i)?) + &(b * &get(y, i)?));
            }
            Ok(ClassValues::Closed(out))
        }
        _ => {
            let ac = a
                .as_constant()
                .ok_or_else(|| FmError::Unsupported("parametric scalar on Laurent data".into()))?;
            let bc = b
                .as_constant()
                .ok_or_else(|| FmError::Unsupported("parametric scalar on Laurent data".into()))?;
            let get = |v: Option<&ClassValues>, i: usize| match v {
                Some(ClassValues::Laurent(c)) => Some(c[i].clone()),
                _ => None,
            };
            let mut out = Vec::with_capacity(n);
            for i in 0..n {
                let s = match (get(x, i), get(y, i)) {
                    (Some(p), Some(q)) => p.scale(&ac).add(&q.scale(&bc)),
                    (Some(p), None) => p.scale(&ac),
                    (None, Some(q)) => q.scale(&bc),
                    (None, None) => unreachable!(),
                };
                out.push(s);
            }
            Ok(ClassValues::Laurent(out))
        }
    }
}

/// Coefficientwise equality in the common truncation, with located
/// diagnostics for the differences.
pub fn compare_series(f: &CoeffSeries, g: &CoeffSeries, name: &str) -> CheckReport {
    let mut rep = CheckReport::new(name);
    if f.ring.name != g.ring.name || f.ring.len() != g.ring.len() {
        rep.fail(format!("ring mismatch: {} vs {}", f.ring.name, g.ring.name));
        return rep;
    }
    let dmax = f.trunc.dmax.min(g.trunc.dmax);
    let lo = f.trunc.zlo.max(g.trunc.zlo);
    let hi = f.trunc.zhi.min(g.trunc.zhi);
    let labels = f.ring.labels();
    let keys: std::collections::BTreeSet<&MultiDeg> = f
        .coeffs
        .keys()
        .chain(g.coeffs.keys())
        .filter(|d| d.total() <= dmax)
        .collect();
    for d in keys {
        for i in 0..f.ring.len() {
            match (f.coeffs.get(d), g.coeffs.get(d)) {
                (x, y) if is_closed(x) || is_closed(y) => {
                    let v = |c: Option<&ClassValues>| match c {
                        Some(ClassValues::Closed(v)) => Some(v[i].clone()),
                        None => Some(ParamRat::zero()),
                        _ => None,
                    };
                    match (v(x), v(y)) {
                        (Some(a), Some(b)) => {
                            rep.assert(a == b, || format!("degree {d}, {}: {} vs {}", labels[i], a, b))
                        }
                        _ => rep.fail(format!("degree {d}: mixed closed and Laurent data")),
                    }
                }
                (x, y) => {
                    let v = |c: Option<&ClassValues>| match c {
                        Some(ClassValues::Laurent(v)) => v[i].clone(),
                        _ => ZLaurent::new(lo, hi),
                    };
                    let (a, b) = (v(x).with_window(lo, hi), v(y).with_window(lo, hi));
                    for e in lo..=hi {
                        let (ca, cb) = (
                            a.coeff(e).cloned().unwrap_or_default(),
                            b.coeff(e).cloned().unwrap_or_default(),
                        );
                        rep.assert(ca == cb, || format!("degree {d}, {}, z^{e}: {ca} vs {cb}", labels[i]));
                    }
                }
            }
        }
    }
    rep
}

fn is_closed(c: Option<&ClassValues>) -> bool {
    matches!(c, Some(ClassValues::Closed(_)))
}

//! Closed-form I-functions of flag bundles and of their abelian towers.

use std::collections::BTreeMap;

use super::factors::{bundle_factors, flatten, hyp_factor, level_ratios, root, splits, unflatten, zc, Split};
use super::setup::FlagSetup;
use crate::algebra::rational::rat;
use crate::algebra::{Poly, Var};
use crate::error::{FmError, Result};
use crate::rings::chern::chern_product_eval;
use crate::series::family::base_j;
use crate::series::multideg::{vectors_up_to, MultiDeg};
use crate::series::terms::{range_ratio, AbTerm, SeriesKind, TConvention, TermSeries};

fn empty(setup: &FlagSetup, kind: SeriesKind) -> TermSeries {
    let mut divisors = setup.base_divisors();
    for m in 1..=setup.levels() {
        let roots: Vec<Poly> = (1..=setup.r[m - 1] as usize).map(|i| root(m, i)).collect();
        if kind == SeriesKind::Abelian {
            divisors.extend(roots);
        } else {
            divisors.push(roots.iter().fold(Poly::zero(), |a, x| &a + x));
        }
    }
    TermSeries {
        ranks: setup.r.clone(),
        kind,
        base_rank: setup.base.picard_rank(),
        base: BTreeMap::new(),
        terms: BTreeMap::new(),
        t_convention: Some(TConvention::DivisorForm),
        tjet: BTreeMap::new(),
        divisors,
    }
}

/// λ_i^{(l)} ↦ shift + H_i^{(l)} + k_i z.
fn lambda_map(setup: &FlagSetup, kl: &[u32], shift: &Poly) -> BTreeMap<Var, Poly> {
    let l = setup.levels();
    kl.iter()
        .enumerate()
        .map(|(i, &k)| {
            (
                Var::Lambda(l as u8, i as u8 + 1),
                &(shift + &root(l, i + 1)) + &zc(k as i64),
            )
        })
        .collect()
}

/// Iterates base degrees of the family and per-level totals within D_max.
fn for_degrees(setup: &FlagSetup, mut f: impl FnMut(&Vec<u32>, &Poly, &[u32]) -> Result<()>) -> Result<()> {
    let dmax = setup.trunc.dmax;
    for (db, (p, _)) in &setup.family.entries {
        let bdeg: u32 = db.iter().sum();
        if bdeg > dmax {
            continue;
        }
        for tot in vectors_up_to(setup.levels(), dmax - bdeg) {
            f(db, p, &tot)?;
        }
    }
    Ok(())
}

fn attach_base(ts: &mut TermSeries, setup: &FlagSetup) {
    for (db, (_, s)) in &setup.family.entries {
        ts.base.insert(db.clone(), s.clone());
    }
}

/// The flag-bundle I-function in level-sum degrees:
/// I_Ṽ^{H+kz} / Π_i Π_{c=1}^{k_i} Π_δ (H_i + δ + cz) × level ratios × Weyl factor,
/// summed over all splits of each level total.
pub fn main_flag_i(setup: &FlagSetup) -> Result<TermSeries> {
    let roots = setup.v_roots()?;
    let l = setup.levels();
    let mut ts = empty(setup, SeriesKind::Nonabelian);
    for_degrees(setup, |db, p, tot| {
        let mut terms = Vec::new();
        for k in splits(&setup.r, tot) {
            let mut t = AbTerm::one();
            t.poly = p.subst_map(&lambda_map(setup, &k[l - 1], &Poly::zero()));
            t.mul_factors(&bundle_factors(&k[l - 1], l, &roots));
            t.mul_factors(&level_ratios(&k));
            t.mul_factors(&hyp_factor(&k));
            if !t.is_zero() {
                terms.push(t);
            }
        }
        ts.terms.insert(MultiDeg::new(db.clone(), tot.to_vec()), terms);
        Ok(())
    })?;
    attach_base(&mut ts, setup);
    Ok(ts)
}

/// The Grassmann-bundle I-function with the sign-normalized Weyl factor
/// (−1)^{k(r−1)} Π_{i<j} (H_i − H_j + (k_i − k_j) z)/(H_i − H_j).
pub fn grassmann_i(setup: &FlagSetup) -> Result<TermSeries> {
    if setup.levels() != 1 {
        return Err(FmError::InvalidFlag("grassmann_i needs a single level".into()));
    }
    let roots = setup.v_roots()?;
    let r = setup.r[0] as usize;
    let mut ts = empty(setup, SeriesKind::Nonabelian);
    for_degrees(setup, |db, p, tot| {
        let ktot = tot[0] as i64;
        let mut terms = Vec::new();
        for k in splits(&setup.r, tot) {
            let k = &k[0];
            let mut t = AbTerm::one();
            t.scalar = rat(if (ktot * (r as i64 - 1)) % 2 == 0 { 1 } else { -1 });
            t.poly = p.subst_map(&lambda_map(setup, k, &Poly::zero()));
            t.mul_factors(&bundle_factors(k, 1, &roots));
            for i in 0..r {
                for j in (i + 1)..r {
                    let x = &root(1, i + 1) - &root(1, j + 1);
                    t.mul_factor(&(&x + &zc(k[i] as i64 - k[j] as i64)), 1);
                    t.mul_factor(&x, -1);
                }
            }
            if !t.is_zero() {
                terms.push(t);
            }
        }
        ts.terms.insert(MultiDeg::new(db.clone(), tot.to_vec()), terms);
        Ok(())
    })?;
    attach_base(&mut ts, setup);
    Ok(ts)
}

/// The abelian tower I-function: J_B times, for every level,
/// Π_{i,j} Π_{c≤0}/Π_{c≤k_i^{(m)} − k_j^{(m+1)}} (H_i^{(m)} − H_j^{(m+1)} + cz),
/// where the top level uses H_j^{(l+1)} = −δ_j and k_j^{(l+1)} = −δ_j·d.
pub fn brown_i(setup: &FlagSetup) -> Result<TermSeries> {
    let roots = setup.v_roots()?;
    let l = setup.levels();
    let nroots: usize = setup.r.iter().sum::<u32>() as usize;
    let jb = base_j(&setup.base, setup.trunc.dmax)?;
    let mut ts = empty(setup, SeriesKind::Abelian);
    for (db, s) in &jb {
        let bdeg: u32 = db.iter().sum();
        if bdeg > setup.trunc.dmax {
            continue;
        }
        let dsum: i64 = db.iter().map(|x| *x as i64).sum();
        for flat in vectors_up_to(nroots, setup.trunc.dmax - bdeg) {
            let k = unflatten(&flat, &setup.r);
            let mut t = AbTerm::one();
            t.mul_factors(&level_ratios(&k));
            for (i, &ki) in k[l - 1].iter().enumerate() {
                for (delta, a) in roots.iter().zip(&setup.v_degrees) {
                    let x = &root(l, i + 1) + delta;
                    t.mul_factors(&range_ratio(&x, ki as i64 + a * dsum));
                }
            }
            let terms = if t.is_zero() { vec![] } else { vec![t] };
            ts.terms.insert(MultiDeg::new(db.clone(), flat), terms);
        }
        ts.base.insert(db.clone(), s.clone());
    }
    Ok(ts)
}

/// Multiplies each abelian coefficient by the Weyl factor and sums over the
/// fibers of the Novikov specialization q_i^{(m)} ↦ q^{(m)}.
pub fn gt_modify(ab: &TermSeries) -> Result<TermSeries> {
    if ab.kind != SeriesKind::Abelian {
        return Err(FmError::Incompatible("gt_modify needs an abelian series".into()));
    }
    let mut out = ab.clone();
    out.kind = SeriesKind::Nonabelian;
    out.terms = BTreeMap::new();
    out.tjet = BTreeMap::new();
    let nb = ab.divisors.len() - ab.ranks.iter().sum::<u32>() as usize;
    let mut divisors = ab.divisors[..nb].to_vec();
    let mut pos = nb;
    for &rm in &ab.ranks {
        divisors.push(
            ab.divisors[pos..pos + rm as usize]
                .iter()
                .fold(Poly::zero(), |a, x| &a + x),
        );
        pos += rm as usize;
    }
    out.divisors = divisors;
    for (d, ts) in &ab.terms {
        let k = unflatten(&d.fiber, &ab.ranks);
        let hyp = hyp_factor(&k);
        let slot = out.terms.entry(d.level_sums(&ab.ranks)).or_default();
        for t in ts {
            let mut t = t.clone();
            t.mul_factors(&hyp);
            if !t.is_zero() {
                slot.push(t);
            }
        }
    }
    Ok(out)
}

/// Groups abelian terms by level sums without the Weyl factor.
pub fn specialize_novikov(ab: &TermSeries) -> Result<TermSeries> {
    let mut out = gt_modify(ab)?;
    out.kind = crate::series::terms::SeriesKind::Specialized;
    out.terms = BTreeMap::new();
    for (d, ts) in &ab.terms {
        out.terms
            .entry(d.level_sums(&ab.ranks))
            .or_default()
            .extend(ts.iter().cloned());
    }
    Ok(out)
}

fn twisted_term(setup: &FlagSetup, p: &Poly, k: &Split) -> Result<AbTerm> {
    let tw = setup
        .twist
        .as_ref()
        .ok_or_else(|| FmError::Missing("twist data".into()))?;
    let l = setup.levels();
    let mu = Poly::var(Var::Mu);
    let roots = setup.v_roots()?;
    let mut t = AbTerm::one();
    t.poly = p.subst_map(&lambda_map(setup, &k[l - 1], &mu));
    for (i, &ki) in k[l - 1].iter().enumerate() {
        for c in 1..=ki as i64 {
            let shift = &mu + &zc(c);
            t.poly = &t.poly * &chern_product_eval(&tw.chern, &root(l, i + 1), &shift);
        }
    }
    t.mul_factors(&bundle_factors(&k[l - 1], l, &roots));
    t.mul_factors(&level_ratios(k));
    Ok(t)
}

/// The abelian μ-twisted family: I_Ṽ^{μ+H+kz} Π_i Π_{c=1}^{k_i} Π_ε (μ + H_i + ε + cz)
/// / (H_i + cz)^N × level ratios, in per-root degrees.
pub fn f_ab(setup: &FlagSetup) -> Result<TermSeries> {
    let nroots: usize = setup.r.iter().sum::<u32>() as usize;
    let mut ts = empty(setup, SeriesKind::Abelian);
    for (db, (p, _)) in &setup.family.entries {
        let bdeg: u32 = db.iter().sum();
        if bdeg > setup.trunc.dmax {
            continue;
        }
        for flat in vectors_up_to(nroots, setup.trunc.dmax - bdeg) {
            let t = twisted_term(setup, p, &unflatten(&flat, &setup.r))?;
            let terms = if t.is_zero() { vec![] } else { vec![t] };
            ts.terms.insert(MultiDeg::new(db.clone(), flat), terms);
        }
    }
    attach_base(&mut ts, setup);
    Ok(ts)
}

/// The nonabelian μ-twisted family assembled directly with the Weyl factor.
pub fn twisted_f(setup: &FlagSetup) -> Result<TermSeries> {
    let mut ts = empty(setup, SeriesKind::Nonabelian);
    for_degrees(setup, |db, p, tot| {
        let mut terms = Vec::new();
        for k in splits(&setup.r, tot) {
            let mut t = twisted_term(setup, p, &k)?;
            t.mul_factors(&hyp_factor(&k));
            if !t.is_zero() {
                terms.push(t);
            }
        }
        ts.terms.insert(MultiDeg::new(db.clone(), tot.to_vec()), terms);
        Ok(())
    })?;
    attach_base(&mut ts, setup);
    Ok(ts)
}

/// Abelian degree vector of a split, for diagnostics.
pub fn split_label(k: &Split) -> String {
    format!("{:?}", flatten(k))
}

//! Structural checks on closed-form series: divisor equation, Weyl
//! symmetry, pole locations and the fixed-point recursion.

use std::collections::BTreeMap;

use crate::algebra::{ParamRat, Poly, Rational, Var};
use crate::error::{FmError, Result};
use crate::report::CheckReport;
use crate::rings::GkmGraph;
use crate::series::terms::{sum_value, AbTerm, SeriesKind, TermSeries};
use crate::series::{ClassValues, CoeffSeries, MultiDeg};

/// z(n_j + 1) F_{k, n+e_j} = (D_j + k_j z) F_{k, n} on the t-jet, for every
/// stored (k, n) whose successor is also stored.
pub fn check_divisor_equation(ts: &TermSeries) -> Result<CheckReport> {
    let mut rep = CheckReport::new("divisor equation");
    if ts.tjet.is_empty() {
        return Err(FmError::Missing("t-jet (run materialize_t first)".into()));
    }
    let z = Poly::var(Var::Z);
    for ((d, n), terms) in &ts.tjet {
        for (j, div) in ts.divisors.iter().enumerate() {
            let mut n1 = n.clone();
            n1[j] += 1;
            let Some(next) = ts.tjet.get(&(d.clone(), n1)) else {
                continue;
            };
            let kz = z.scale(&Rational::from_integer(d.get(j).into()));
            let lhs_mul = z.scale(&Rational::from_integer((n[j] + 1).into()));
            let scaled = |t: &AbTerm, p: &Poly| {
                let mut t = t.clone();
                t.mul_factor(p, 1);
                t.value()
            };
            // the identity holds term by term for jets built from the divisor form
            let mut same = next.len() == terms.len();
            if same {
                for (a, b) in next.iter().zip(terms) {
                    if scaled(a, &lhs_mul)? != scaled(b, &(div + &kz))? {
                        same = false;
                        break;
                    }
                }
            }
            if !same {
                let rhs = sum_value(terms)?.mul_poly(&(div + &kz));
                let lhs = sum_value(next)?.mul_poly(&lhs_mul);
                same = lhs == rhs;
            }
            rep.assert(same, || format!("degree {d}, t-order {n:?}, slot {j}"));
        }
    }
    Ok(rep)
}

/// Simple transposition of roots i, i+1 at level m, acting on variables.
fn swap_roots(m: u8, i: u8) -> impl Fn(Var) -> Var + Copy {
    move |v| match v {
        Var::Root(a, b) if a == m && b == i => Var::Root(m, i + 1),
        Var::Root(a, b) if a == m && b == i + 1 => Var::Root(m, i),
        other => other,
    }
}

/// Weyl symmetry. Abelian series: the coefficient at s·k equals s applied to
/// the coefficient at k, for every simple transposition s. Grouped series:
/// every coefficient is fixed by every simple transposition.
pub fn check_weyl_invariance(ts: &TermSeries) -> Result<CheckReport> {
    let mut rep = CheckReport::new("Weyl invariance");
    let values: BTreeMap<&MultiDeg, ParamRat> = ts
        .terms
        .iter()
        .map(|(d, t)| Ok((d, sum_value(t)?)))
        .collect::<Result<_>>()?;
    let mut offset = 0usize;
    for (m0, &rm) in ts.ranks.iter().enumerate() {
        let m = m0 as u8 + 1;
        for i in 1..rm as u8 {
            let s = swap_roots(m, i);
            for (d, v) in &values {
                let image = v.map_vars(s);
                match ts.kind {
                    SeriesKind::Abelian => {
                        let mut sd = (*d).clone();
                        let a = offset + i as usize - 1;
                        sd.fiber.swap(a, a + 1);
                        let Some(w) = values.get(&sd) else {
                            continue;
                        };
                        rep.assert(image == *w, || format!("level {m}, s_{i}, degree {d}"));
                    }
                    _ => rep.assert(image == *v, || format!("level {m}, s_{i}, degree {d}")),
                }
            }
        }
        offset += rm as usize;
    }
    Ok(rep)
}

fn closed_values(cs: &CoeffSeries) -> Result<BTreeMap<&MultiDeg, &Vec<ParamRat>>> {
    cs.coeffs
        .iter()
        .map(|(d, v)| match v {
            ClassValues::Closed(x) => Ok((d, x)),
            ClassValues::Laurent(_) => Err(FmError::Incompatible("pole analysis needs fixed-point values".into())),
        })
        .collect()
}

/// For a factor a z + g_0 returns (a, −g_0/a).
fn z_root(g: &Poly) -> Option<(Rational, Poly)> {
    if g.degree_in(Var::Z) != 1 {
        return None;
    }
    let a = g.coeff_of_pow(Var::Z, 1).as_constant()?;
    let g0 = g.coeff_of_pow(Var::Z, 0);
    Some((a.clone(), g0.scale(&(-Rational::from_integer(1.into()) / a))))
}

/// The positive integer t with ρ = t·x, if any.
fn integer_multiple(rho: &Poly, x: &Poly) -> Option<u32> {
    let (m, c) = x.leading()?;
    let t = rho.coeff(m) / c;
    if !t.is_integer() || t <= Rational::from_integer(0.into()) {
        return None;
    }
    let ti: u32 = t.to_integer().try_into().ok()?;
    (x.scale(&t) == *rho).then_some(ti)
}

/// Every z-dependent denominator factor of ι_α^* I vanishes at z = 0 or at
/// z = ρ/a for an edge conormal ρ at α and a positive integer a. Factors of
/// higher degree in z must split into such linear factors.
pub fn check_pole_locations(cs: &CoeffSeries) -> Result<CheckReport> {
    let mut rep = CheckReport::new("pole locations");
    let g = cs.ring.gkm_graph()?;
    let z = Poly::var(Var::Z);
    for (d, vals) in closed_values(cs)? {
        let amax = d.total().max(1);
        for (alpha, v) in vals.iter().enumerate() {
            let label = &g.points[alpha].label;
            let mut allowed = vec![z.clone()];
            for e in g.edges_from(alpha) {
                for a in 1..=amax {
                    allowed.push(&z.scale(&Rational::from_integer(a.into())) - &e.rho);
                }
            }
            for (f, _) in v.den_factors() {
                let mut rest = f.clone();
                while rest.contains_var(Var::Z) {
                    if let Some((_, z0)) = z_root(&rest) {
                        let ok = z0.is_zero() || g.edges_from(alpha).any(|e| integer_multiple(&e.rho, &z0).is_some());
                        rep.assert(ok, || format!("degree {d}, point {label}: pole at z = {z0}"));
                        rest = Poly::one();
                        break;
                    }
                    match allowed.iter().find_map(|l| rest.div_exact(l)) {
                        Some(q) => rest = q,
                        None => break,
                    }
                }
                if rest.contains_var(Var::Z) {
                    rep.fail(format!("degree {d}, point {label}: factor {rest} has other poles"));
                } else if f.contains_var(Var::Z) {
                    rep.ok();
                }
            }
        }
    }
    Ok(rep)
}

/// Residue at a simple pole z = z0. Errors on a pole of higher order.
pub fn simple_residue(f: &ParamRat, z0: &Poly) -> Result<ParamRat> {
    let mut hit = None;
    for (i, (g, e)) in f.den_factors().iter().enumerate() {
        if g.contains_var(Var::Z) && g.subst(Var::Z, z0).is_zero() {
            if *e > 1 {
                return Err(FmError::Unsupported(format!("pole of order {e} at z = {z0}")));
            }
            hit = Some(i);
        }
    }
    let Some(i) = hit else {
        return Ok(ParamRat::zero());
    };
    let factors = f.den_factors();
    let slope = factors[i].0.derivative(Var::Z).subst(Var::Z, z0);
    let mut r = ParamRat::from_poly(f.numer().subst(Var::Z, z0));
    for (j, (g, e)) in factors.iter().enumerate() {
        if j != i {
            let gv = ParamRat::from_poly(g.subst(Var::Z, z0)).pow(*e as i32)?;
            r = &r / &gv;
        }
    }
    Ok(&r / &ParamRat::from_poly(slope))
}

/// Recursion coefficients C(α, edge, a) keyed by (point, edge index, a).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RecursionTable {
    pub entries: BTreeMap<(usize, usize, u32), ParamRat>,
}

fn edge_shift(g: &GkmGraph, e: usize, a: u32, d: &MultiDeg) -> Option<MultiDeg> {
    let class = MultiDeg::new(vec![0; d.base.len()], g.edges[e].class.clone());
    d.checked_sub(&class.scaled(a))
}

/// C(α, β, a) = Res_{z=ρ/a} [ι_α^* I]_D / [ι_β^* I]_{D − a d_{αβ}}(ρ/a),
/// required to be independent of D.
pub fn extract_recursion_table(cs: &CoeffSeries, amax: u32) -> Result<(RecursionTable, CheckReport)> {
    let mut rep = CheckReport::new("recursion table");
    let g = cs.ring.gkm_graph()?;
    let vals = closed_values(cs)?;
    let mut table = RecursionTable::default();
    for (ei, e) in g.edges.iter().enumerate() {
        for a in 1..=amax {
            let z0 = e
                .rho
                .scale(&(Rational::from_integer(1.into()) / Rational::from_integer(a.into())));
            for (d, v) in &vals {
                let Some(dp) = edge_shift(g, ei, a, d) else {
                    continue;
                };
                let Some(w) = vals.get(&dp) else {
                    continue;
                };
                let res = simple_residue(&v[e.from], &z0)?;
                let at = w[e.to].subst(Var::Z, &z0)?;
                if at.is_zero() {
                    rep.assert(res.is_zero(), || {
                        format!("edge {ei}, a = {a}, degree {d}: residue without partner")
                    });
                    continue;
                }
                let c = &res / &at;
                match table.entries.get(&(e.from, ei, a)) {
                    Some(prev) => rep.assert(*prev == c, || format!("edge {ei}, a = {a}: varies at degree {d}")),
                    None => {
                        table.entries.insert((e.from, ei, a), c);
                    }
                }
            }
        }
    }
    rep.note(format!("{} coefficients determined", table.entries.len()));
    Ok((table, rep))
}

/// Entry-by-entry agreement on the keys both tables determine.
pub fn compare_tables(a: &RecursionTable, b: &RecursionTable, name: &str) -> CheckReport {
    let mut rep = CheckReport::new(name);
    for (k, x) in &a.entries {
        if let Some(y) = b.entries.get(k) {
            rep.assert(x == y, || format!("point {}, edge {}, a = {}", k.0, k.1, k.2));
        }
    }
    rep
}

/// Res_{z=ρ/a} [ι_α^* I]_D = C(α, β, a) [ι_β^* I]_{D − a d}(ρ/a) at every
/// degree, with zero residue when D − a d is not effective.
pub fn check_recursion(cs: &CoeffSeries, table: &RecursionTable, amax: u32) -> Result<CheckReport> {
    let mut rep = CheckReport::new("fixed-point recursion");
    let g = cs.ring.gkm_graph()?;
    let vals = closed_values(cs)?;
    let mut undetermined = 0usize;
    for (ei, e) in g.edges.iter().enumerate() {
        for a in 1..=amax {
            let z0 = e
                .rho
                .scale(&(Rational::from_integer(1.into()) / Rational::from_integer(a.into())));
            for (d, v) in &vals {
                let res = match simple_residue(&v[e.from], &z0) {
                    Ok(r) => r,
                    Err(err) => {
                        rep.fail(format!("edge {ei}, a = {a}, degree {d}: {err}"));
                        continue;
                    }
                };
                let Some(dp) = edge_shift(g, ei, a, d) else {
                    rep.assert(res.is_zero(), || {
                        format!("edge {ei}, a = {a}, degree {d}: unexpected pole")
                    });
                    continue;
                };
                let Some(w) = vals.get(&dp) else {
                    continue;
                };
                let at = match w[e.to].subst(Var::Z, &z0) {
                    Ok(x) => x,
                    Err(err) => {
                        rep.fail(format!("edge {ei}, a = {a}, degree {dp}: {err}"));
                        continue;
                    }
                };
                match table.entries.get(&(e.from, ei, a)) {
                    Some(c) => rep.assert(res == c * &at, || {
                        format!("point {}, edge {ei}, a = {a}, degree {d}", g.points[e.from].label)
                    }),
                    None if at.is_zero() => rep.assert(res.is_zero(), || {
                        format!("edge {ei}, a = {a}, degree {d}: residue without partner")
                    }),
                    None => undetermined += 1,
                }
            }
        }
    }
    if undetermined > 0 {
        rep.note(format!("{undetermined} residues outside the extracted table"));
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ifunctions::{main_flag_i, FlagSetup};
    use crate::rings::builders::gkm_ring;
    use crate::rings::GkmVariant;
    use crate::series::{fixed_point_restrict_series, Truncation};

    fn p1_series(dmax: u32) -> CoeffSeries {
        let setup = FlagSetup::trivial(
            2,
            &[1],
            true,
            Truncation {
                dmax,
                ..Default::default()
            },
        )
        .unwrap();
        let ts = main_flag_i(&setup).unwrap();
        let ring = gkm_ring(&[1], 2, GkmVariant::Flag).unwrap();
        fixed_point_restrict_series(&ts, &ring, dmax).unwrap()
    }

    #[test]
    fn projective_line_poles_and_recursion() {
        let cs = p1_series(3);
        assert!(check_pole_locations(&cs).unwrap().conclusive());
        let (table, rep) = extract_recursion_table(&cs, 2).unwrap();
        assert!(rep.passed, "{rep}");
        assert!(!table.entries.is_empty());
        assert!(check_recursion(&cs, &table, 2).unwrap().conclusive());
    }

    #[test]
    fn residue_of_simple_pole() {
        // 1/(z (z − 1)) at z = 1 has residue 1
        let z = Poly::var(Var::Z);
        let f = ParamRat::new(Poly::one(), &z * &(&z - &Poly::one())).unwrap();
        assert_eq!(simple_residue(&f, &Poly::one()).unwrap(), ParamRat::one());
    }

    #[test]
    fn weyl_and_divisor_on_flag() {
        let setup = FlagSetup::trivial(
            3,
            &[1, 2],
            true,
            Truncation {
                dmax: 2,
                ..Default::default()
            },
        )
        .unwrap();
        let mut ts = main_flag_i(&setup).unwrap();
        assert!(check_weyl_invariance(&ts).unwrap().conclusive());
        ts.materialize_t(2).unwrap();
        assert!(check_divisor_equation(&ts).unwrap().conclusive());
    }
}

//! Acceptance criteria A1–A9. Each test prints one PASS/FAIL line.

use std::time::Instant;

use fm_core::algebra::{ParamRat, Poly, Var};
use fm_core::ifunctions::{brown_i, f_ab, grassmann_i, gt_modify, main_flag_i, twisted_f, FlagSetup, Twist};
use fm_core::operators::a_operator_identity;
use fm_core::oracles::{
    check_divisor_equation, check_pole_locations, check_recursion, check_weyl_invariance, compare_tables,
    extract_recursion_table, qde_small_j, toric_i_hirzebruch,
};
use fm_core::report::CheckReport;
use fm_core::rings::builders::{gkm_ring, grassmann, projective_bundle};
use fm_core::rings::chern::symbolic_chern;
use fm_core::rings::gkm::nu;
use fm_core::rings::{BaseDesc, GkmVariant};
use fm_core::series::terms::sum_value;
use fm_core::series::{
    compare_series, divisor_op_apply, fixed_point_restrict_series, materialize_table, ClassValues, CoeffSeries,
    MultiDeg, Truncation,
};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn trunc(dmax: u32, zlo: i32, zhi: i32) -> Truncation {
    Truncation {
        dmax,
        zlo,
        zhi,
        minv: 6,
    }
}

/// Assertion count and failure details of one criterion.
#[derive(Default)]
struct Tally {
    checked: usize,
    failures: Vec<String>,
}

impl Tally {
    fn push(&mut self, msg: String) {
        self.failures.push(msg);
    }

    fn extend(&mut self, msgs: Vec<String>) {
        self.checked += 1;
        self.failures.extend(msgs);
    }

    fn ok(&mut self, cond: bool, msg: impl FnOnce() -> String) {
        self.checked += 1;
        if !cond {
            self.failures.push(msg());
        }
    }
}

/// Prints the verdict line and panics on failure with the collected details.
fn verdict(id: &str, title: &str, start: Instant, t: Tally) {
    let secs = start.elapsed().as_secs_f64();
    let n = t.checked;
    if t.failures.is_empty() && n > 0 {
        println!("{id} PASS {title} ({n} assertions, {secs:.1}s)");
    } else {
        println!("{id} FAIL {title} ({n} assertions, {secs:.1}s)");
        panic!("{id}: {}", t.failures.join("; "));
    }
}

fn collect(out: &mut Tally, rep: &CheckReport) {
    out.checked += rep.checked;
    if !rep.conclusive() {
        out.push(format!("{rep}"));
    }
}

/// Laurent data with a nonzero coefficient at a positive power of z.
fn positive_powers(cs: &CoeffSeries) -> Vec<String> {
    let labels = cs.ring.labels();
    let mut out = Vec::new();
    for (d, v) in &cs.coeffs {
        if let ClassValues::Laurent(xs) = v {
            for (l, x) in labels.iter().zip(xs) {
                for (e, c) in x.terms() {
                    if *e > 0 && !c.is_zero() {
                        out.push(format!("degree {d}, {l}, z^{e}"));
                    }
                }
            }
        }
    }
    out
}

#[test]
fn a1_projective_space_matches_qde() {
    let start = Instant::now();
    let mut failures = Tally::default();
    for n in 1..=3u32 {
        let setup = FlagSetup::trivial(n + 1, &[1], false, trunc(3, -10, 2)).unwrap();
        let ring = grassmann(1, n + 1, &BaseDesc::Point).unwrap();
        let i = materialize_table(&grassmann_i(&setup).unwrap(), &ring, setup.trunc).unwrap();
        let j = qde_small_j(1, n + 1, 3, 10).unwrap();
        collect(&mut failures, &compare_series(&i, &j, &format!("I vs J on P^{n}")));
        failures.extend(positive_powers(&i));
    }
    verdict(
        "A1",
        "P^n I-function equals QDE J-function, n <= 3, D <= 3, depth 10",
        start,
        failures,
    );
}

#[test]
fn a2_grassmannian_matches_qde() {
    let start = Instant::now();
    let mut failures = Tally::default();
    let setup = FlagSetup::trivial(4, &[2], false, trunc(2, -8, 2)).unwrap();
    let ring = grassmann(2, 4, &BaseDesc::Point).unwrap();
    let i = materialize_table(&grassmann_i(&setup).unwrap(), &ring, setup.trunc).unwrap();
    // I = 1 + O(z^-2)
    for (d, v) in &i.coeffs {
        let ClassValues::Laurent(xs) = v else {
            panic!("Laurent data expected")
        };
        for (a, x) in xs.iter().enumerate() {
            for (e, c) in x.terms() {
                if c.is_zero() {
                    continue;
                }
                let unit = d.total() == 0 && a == 0 && *e == 0 && c.is_one();
                failures.ok(unit || (d.total() > 0 && *e <= -2), || {
                    format!("degree {d}, class {a}, z^{e}: {c}")
                });
            }
        }
    }
    let j = qde_small_j(2, 4, 2, 8).unwrap();
    collect(&mut failures, &compare_series(&i, &j, "I vs J on Gr(2,4)"));
    verdict(
        "A2",
        "Gr(2,4): I = 1 + O(z^-2) and I = J through D = 2, depth 8",
        start,
        failures,
    );
}

#[test]
fn a3_a_operator_identity() {
    let start = Instant::now();
    let mut failures = Tally::default();
    let h = Poly::var(Var::Root(1, 1));
    for rank in 1..=2u32 {
        for k in 0..=3u32 {
            let c = a_operator_identity(&symbolic_chern(1, rank), &h, k, 6).unwrap();
            collect(&mut failures, &c.report);
        }
    }
    verdict(
        "A3",
        "A-operator class-factor identity to mu^-6, rank Q in {1,2}, k <= 3",
        start,
        failures,
    );
}

#[test]
fn a4_hirzebruch_surface() {
    let start = Instant::now();
    let mut failures = Tally::default();
    let base = BaseDesc::Projective { n: 1 };
    let setup = FlagSetup::split(base.clone(), &[0, -1], &[1], trunc(3, -12, 4)).unwrap();
    let ring = projective_bundle(&[0, -1], &base).unwrap();
    let a = materialize_table(&main_flag_i(&setup).unwrap(), &ring, setup.trunc).unwrap();
    let b = materialize_table(&toric_i_hirzebruch(1, 3).unwrap(), &ring, setup.trunc).unwrap();
    collect(&mut failures, &compare_series(&a, &b, "flag bundle vs toric F_1"));
    verdict(
        "A4",
        "F_1 from the split input equals the toric I-function, D <= 3",
        start,
        failures,
    );
}

fn characterization(r: &[u32], n: u32, failures: &mut Tally) {
    let t = trunc(2, -12, 6);
    let setup = FlagSetup::trivial(n, r, true, t).unwrap();
    let mut ab = brown_i(&setup).unwrap();
    collect(failures, &check_weyl_invariance(&ab).unwrap());
    ab.materialize_t(2).unwrap();
    collect(failures, &check_divisor_equation(&ab).unwrap());

    let gt = gt_modify(&brown_i(&setup).unwrap()).unwrap();
    let ring = gkm_ring(r, n, GkmVariant::Flag).unwrap();
    let cs = fixed_point_restrict_series(&gt, &ring, 2).unwrap();
    collect(failures, &check_pole_locations(&cs).unwrap());

    let (table, rep) = extract_recursion_table(&cs, 2).unwrap();
    collect(failures, &rep);
    for (slot, div) in gt.divisors.iter().enumerate() {
        let ds = divisor_op_apply(&cs, div, slot).unwrap();
        let (t2, rep2) = extract_recursion_table(&ds, 2).unwrap();
        collect(failures, &rep2);
        collect(
            failures,
            &compare_tables(&table, &t2, &format!("table vs z d/dt_{slot} table")),
        );
    }
    collect(failures, &check_recursion(&cs, &table, 2).unwrap());
}

#[test]
fn a5_characterization_suite() {
    let start = Instant::now();
    let mut failures = Tally::default();
    characterization(&[1, 2], 3, &mut failures);
    characterization(&[2], 4, &mut failures);
    verdict(
        "A5",
        "divisor, Weyl, C1 and C2 on Fl(1,2;3) and Gr(2,4)",
        start,
        failures,
    );
}

#[test]
fn a6_gkm_sanity() {
    let start = Instant::now();
    let mut failures = Tally::default();
    let spaces: [(&str, &[u32], u32, GkmVariant, usize); 4] = [
        ("P^1", &[1], 2, GkmVariant::Flag, 2),
        ("Gr(2,4)", &[2], 4, GkmVariant::Flag, 6),
        ("Fl(1,2;3)", &[1, 2], 3, GkmVariant::Flag, 6),
        ("FlT(1,2;3)", &[1, 2], 3, GkmVariant::ToricFlag, 18),
    ];
    for (name, r, n, variant, count) in spaces {
        let ring = gkm_ring(r, n, variant).unwrap();
        let g = ring.gkm_graph().unwrap();
        failures.ok(g.points.len() == count, || {
            format!("{name}: {} fixed points", g.points.len())
        });
        for (a, p) in g.points.iter().enumerate() {
            let valence = g.edges_from(a).count();
            failures.ok(valence == g.dim as usize, || {
                format!("{name}, {}: valence {valence} vs dim {}", p.label, g.dim)
            });
            let prod = g.edges_from(a).fold(Poly::one(), |acc, e| &acc * &e.tangent);
            failures.ok(prod == g.euler(a), || {
                format!("{name}, {}: Euler class differs from edge product", p.label)
            });
        }
    }
    verdict("A6", "fixed-point counts, valence and Euler classes", start, failures);
}

#[test]
fn a7_flag_and_grassmann_forms_agree() {
    let start = Instant::now();
    let mut failures = Tally::default();
    for (r, n) in [(1u32, 3u32), (2, 3), (2, 4)] {
        let setup = FlagSetup::trivial(n, &[r], false, trunc(3, -14, 2)).unwrap();
        let ring = grassmann(r, n, &BaseDesc::Point).unwrap();
        let a = materialize_table(&main_flag_i(&setup).unwrap(), &ring, setup.trunc).unwrap();
        let b = materialize_table(&grassmann_i(&setup).unwrap(), &ring, setup.trunc).unwrap();
        collect(&mut failures, &compare_series(&a, &b, &format!("Gr({r},{n})")));
    }
    verdict(
        "A7",
        "one-level flag formula equals the Grassmann formula, D <= 3",
        start,
        failures,
    );
}

#[test]
fn a8_abelian_nonabelian_bridge() {
    let start = Instant::now();
    let mut failures = Tally::default();
    let base = BaseDesc::Projective { n: 1 };
    let h = base.hyperplane().unwrap();
    let mut setup = FlagSetup::split(base.clone(), &[0, -1, 0], &[2], trunc(2, -12, 4)).unwrap();
    // Q = O^4 / V has rank 1 and c(Q) = 1/c(V) = 1 + h on P^1.
    setup.twist = Some(Twist {
        rank: 1,
        chern: vec![Poly::one(), h],
    });
    let ring = grassmann(2, 3, &base).unwrap();
    let a = materialize_table(&twisted_f(&setup).unwrap(), &ring, setup.trunc).unwrap();
    let b = materialize_table(&gt_modify(&f_ab(&setup).unwrap()).unwrap(), &ring, setup.trunc).unwrap();
    collect(&mut failures, &compare_series(&a, &b, "twisted F vs gt(F_ab)"));
    let has_mu = a.coeffs.values().any(|v| match v {
        ClassValues::Laurent(xs) => xs.iter().any(|x| x.terms().any(|(_, c)| c.contains_var(Var::Mu))),
        ClassValues::Closed(_) => false,
    });
    failures.ok(has_mu, || "mu does not appear".into());
    verdict(
        "A8",
        "twisted F equals gt_modify(F_ab) on Gr(2, O+O(-1)+O) over P^1, D <= 2",
        start,
        failures,
    );
}

fn located(rep: &CheckReport, needles: &[String]) -> bool {
    !rep.passed
        && rep
            .failures
            .iter()
            .any(|f| needles.iter().all(|n| f.contains(n.as_str())))
}

#[test]
fn a9_negative_controls() {
    let start = Instant::now();
    let mut failures = Tally::default();
    let mut rng = ChaCha8Rng::seed_from_u64(20261016);
    let setup = FlagSetup::trivial(3, &[1, 2], true, trunc(2, -12, 6)).unwrap();

    // divisor equation: double one t-jet coefficient
    let mut ts = brown_i(&setup).unwrap();
    ts.materialize_t(2).unwrap();
    let mut keys: Vec<_> = ts.tjet.keys().cloned().collect();
    keys.shuffle(&mut rng);
    let keys = keys
        .into_iter()
        .filter(|k| !sum_value(&ts.tjet[k]).unwrap().is_zero())
        .take(3);
    for key in keys {
        let mut bad = ts.clone();
        for t in bad.tjet.get_mut(&key).unwrap() {
            t.scalar *= fm_core::algebra::Rational::from_integer(2.into());
        }
        let rep = check_divisor_equation(&bad).unwrap();
        failures.ok(located(&rep, &[format!("degree {}", key.0)]), || {
            format!("divisor corruption at {} not located: {rep}", key.0)
        });
    }

    // Weyl symmetry: double an abelian coefficient off the symmetric locus
    let ab = brown_i(&setup).unwrap();
    let mut keys: Vec<MultiDeg> = ab.terms.keys().filter(|d| d.fiber[1] != d.fiber[2]).cloned().collect();
    keys.shuffle(&mut rng);
    let keys = keys
        .into_iter()
        .filter(|d| !sum_value(&ab.terms[d]).unwrap().is_zero())
        .take(3);
    for d in keys {
        let mut bad = ab.clone();
        for t in bad.terms.get_mut(&d).unwrap() {
            t.scalar *= fm_core::algebra::Rational::from_integer(2.into());
        }
        let rep = check_weyl_invariance(&bad).unwrap();
        failures.ok(located(&rep, &[format!("degree {d}")]), || {
            format!("Weyl corruption at {d} not located: {rep}")
        });
    }

    // C1: introduce a pole away from z = 0 and the edge weights
    let ring = gkm_ring(&[1, 2], 3, GkmVariant::Flag).unwrap();
    let cs = fixed_point_restrict_series(&main_flag_i(&setup).unwrap(), &ring, 2).unwrap();
    let g = ring.gkm_graph().unwrap();
    let z = Poly::var(Var::Z);
    let stray = &(&(&z - &nu(1)) - &nu(2)) - &nu(3);
    let bad_factor = ParamRat::new(Poly::one(), stray).unwrap();
    let sites: Vec<(MultiDeg, usize)> = cs
        .coeffs
        .keys()
        .flat_map(|d| (0..g.points.len()).map(move |a| (d.clone(), a)))
        .filter(|(d, a)| !cs.closed_at(d, *a).unwrap().is_zero())
        .collect();
    for (d, a) in sites.choose_multiple(&mut rng, 3) {
        let mut bad = cs.clone();
        if let Some(ClassValues::Closed(v)) = bad.coeffs.get_mut(d) {
            v[*a] = &v[*a] * &bad_factor;
        }
        let rep = check_pole_locations(&bad).unwrap();
        failures.ok(
            located(&rep, &[format!("degree {d}"), g.points[*a].label.clone()]),
            || format!("C1 corruption at {d}, point {a} not located: {rep}"),
        );
    }
    verdict(
        "A9",
        "seeded corruptions fail divisor, Weyl and C1 checks with locations",
        start,
        failures,
    );
}

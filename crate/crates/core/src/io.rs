//! Setup files, constructor dispatch and the `fm/1` series format.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::algebra::parse::parse_poly;
use crate::algebra::{ParamRat, Poly, ZLaurent};
use crate::error::{FmError, Result};
use crate::ifunctions::{brown_i, f_ab, grassmann_i, gt_modify, main_flag_i, twisted_f, FlagSetup, Twist};
use crate::oracles::{qde_small_j, toric_i_hirzebruch};
use crate::report::CheckReport;
use crate::rings::builders::{abelian_tower, gkm_ring, grassmann, line_roots, projective_bundle};
use crate::rings::{BaseDesc, GkmVariant, Ring};
use crate::series::terms::{SeriesKind, TermSeries};
use crate::series::{fixed_point_restrict_series, materialize_table, ClassValues, CoeffSeries, MultiDeg, Truncation};

pub const SCHEMA: &str = "fm/1";

fn point_base() -> BaseDesc {
    BaseDesc::Point
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwistFile {
    pub rank: u32,
    /// c_0, …, c_rank as polynomials in the base classes.
    pub chern: Vec<String>,
}

/// A flag bundle Fl(r; V) over a base, as read from a setup file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetupFile {
    #[serde(default = "point_base")]
    pub base: BaseDesc,
    #[serde(default)]
    pub equivariant: bool,
    /// Rank of a trivial V; ignored when `v_degrees` is given.
    #[serde(default)]
    pub n: Option<u32>,
    pub r: Vec<u32>,
    #[serde(default)]
    pub twist: Option<TwistFile>,
    /// Line degrees a_j of V = ⊕ O(a_j).
    #[serde(default)]
    pub v_degrees: Option<Vec<i64>>,
}

impl SetupFile {
    pub fn parse(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| FmError::Parse(format!("setup: {e}")))
    }

    pub fn rank(&self) -> Result<u32> {
        match (&self.v_degrees, self.n) {
            (Some(d), _) => Ok(d.len() as u32),
            (None, Some(n)) => Ok(n),
            (None, None) => Err(FmError::Parse("setup needs n or v_degrees".into())),
        }
    }

    pub fn degrees(&self) -> Result<Vec<i64>> {
        Ok(match &self.v_degrees {
            Some(d) => d.clone(),
            None => vec![0; self.rank()? as usize],
        })
    }

    /// SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let canon = serde_json::to_string(self).expect("setup serializes");
        hex::encode(Sha256::digest(canon.as_bytes()))
    }

    pub fn flag_setup(&self, trunc: Truncation) -> Result<FlagSetup> {
        let n = self.rank()?;
        let mut s = if self.base == BaseDesc::Point && self.v_degrees.iter().flatten().all(|a| *a == 0) {
            FlagSetup::trivial(n, &self.r, self.equivariant, trunc)?
        } else {
            if self.equivariant {
                return Err(FmError::Unsupported(
                    "equivariant data only for trivial bundles over a point".into(),
                ));
            }
            FlagSetup::split(self.base.clone(), &self.degrees()?, &self.r, trunc)?
        };
        if let Some(t) = &self.twist {
            let chern = t.chern.iter().map(|c| parse_poly(c)).collect::<Result<Vec<_>>>()?;
            if chern.len() != t.rank as usize + 1 {
                return Err(FmError::Parse("twist needs c_0..c_rank".into()));
            }
            s.twist = Some(Twist { rank: t.rank, chern });
        }
        Ok(s)
    }
}

/// Enough data to rebuild a ring.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum RingDesc {
    Grassmann {
        r: u32,
        n: u32,
        base: BaseDesc,
    },
    Tower {
        r: Vec<u32>,
        v_degrees: Vec<i64>,
        base: BaseDesc,
    },
    Gkm {
        r: Vec<u32>,
        n: u32,
        variant: GkmVariant,
    },
}

impl RingDesc {
    pub fn build(&self) -> Result<Ring> {
        match self {
            RingDesc::Grassmann { r, n, base } => grassmann(*r, *n, base),
            RingDesc::Tower { r, v_degrees, base } => abelian_tower(r, &line_roots(base, v_degrees)?, base),
            RingDesc::Gkm { r, n, variant } => gkm_ring(r, *n, *variant),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Constructor {
    MainFlag,
    Grassmann,
    Brown,
    GtBrown,
    FAb,
    GtFAb,
    TwistedF,
    ToricHirzebruch,
    QdeSmallJ,
}

const NAMES: [(&str, Constructor); 9] = [
    ("main_flag_i", Constructor::MainFlag),
    ("grassmann_i", Constructor::Grassmann),
    ("brown_i", Constructor::Brown),
    ("gt_brown", Constructor::GtBrown),
    ("f_ab", Constructor::FAb),
    ("gt_f_ab", Constructor::GtFAb),
    ("twisted_f", Constructor::TwistedF),
    ("toric_i_hirzebruch", Constructor::ToricHirzebruch),
    ("qde_small_j", Constructor::QdeSmallJ),
];

impl FromStr for Constructor {
    type Err = FmError;
    fn from_str(s: &str) -> Result<Self> {
        NAMES
            .iter()
            .find(|(n, _)| *n == s)
            .map(|(_, c)| *c)
            .ok_or_else(|| FmError::Parse(format!("unknown constructor {s}")))
    }
}

impl fmt::Display for Constructor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = NAMES.iter().find(|(_, c)| c == self).map(|(n, _)| *n).unwrap();
        f.write_str(name)
    }
}

/// The closed-form series of a constructor, when it has one.
pub fn build_terms(setup: &SetupFile, c: Constructor, trunc: Truncation) -> Result<TermSeries> {
    let fs = setup.flag_setup(trunc)?;
    match c {
        Constructor::MainFlag => main_flag_i(&fs),
        Constructor::Grassmann => grassmann_i(&fs),
        Constructor::Brown => brown_i(&fs),
        Constructor::GtBrown => gt_modify(&brown_i(&fs)?),
        Constructor::FAb => f_ab(&fs),
        Constructor::GtFAb => gt_modify(&f_ab(&fs)?),
        Constructor::TwistedF => twisted_f(&fs),
        Constructor::ToricHirzebruch => {
            let a = hirzebruch_index(setup)?;
            toric_i_hirzebruch(a, trunc.dmax)
        }
        Constructor::QdeSmallJ => Err(FmError::Unsupported("qde_small_j has no closed form".into())),
    }
}

fn hirzebruch_index(setup: &SetupFile) -> Result<u32> {
    match (setup.base.clone(), setup.degrees()?.as_slice(), setup.r.as_slice()) {
        (BaseDesc::Projective { n: 1 }, [0, a], [1]) if *a <= 0 => Ok((-a) as u32),
        _ => Err(FmError::Unsupported(
            "toric_i_hirzebruch needs r = [1], V = O + O(-a) over P^1".into(),
        )),
    }
}

/// The ring a series of the given kind is materialized in.
pub fn ring_for(setup: &SetupFile, kind: SeriesKind) -> Result<RingDesc> {
    let n = setup.rank()?;
    if setup.equivariant {
        if kind == SeriesKind::Abelian {
            return Err(FmError::Unsupported(
                "abelian series are compared in the tower ring, not at fixed points".into(),
            ));
        }
        return Ok(RingDesc::Gkm {
            r: setup.r.clone(),
            n,
            variant: GkmVariant::Flag,
        });
    }
    match kind {
        SeriesKind::Abelian => Ok(RingDesc::Tower {
            r: setup.r.clone(),
            v_degrees: setup.degrees()?,
            base: setup.base.clone(),
        }),
        _ if setup.r.len() == 1 => Ok(RingDesc::Grassmann {
            r: setup.r[0],
            n,
            base: setup.base.clone(),
        }),
        _ => Err(FmError::Unsupported(
            "non-equivariant nonabelian series with several levels".into(),
        )),
    }
}

/// Evaluates a constructor into ring coordinates or fixed-point values.
pub fn compute(setup: &SetupFile, c: Constructor, trunc: Truncation) -> Result<SeriesFile> {
    let (desc, cs) = match c {
        Constructor::QdeSmallJ => {
            if setup.r.len() != 1 || setup.base != BaseDesc::Point {
                return Err(FmError::Unsupported("qde_small_j needs Gr(r, n) over a point".into()));
            }
            let n = setup.rank()?;
            let depth = (-trunc.zlo).max(0) as u32;
            let desc = RingDesc::Grassmann {
                r: setup.r[0],
                n,
                base: BaseDesc::Point,
            };
            (desc, qde_small_j(setup.r[0], n, trunc.dmax, depth)?)
        }
        Constructor::ToricHirzebruch => {
            let a = hirzebruch_index(setup)?;
            let ts = toric_i_hirzebruch(a, trunc.dmax)?;
            let desc = RingDesc::Tower {
                r: vec![1],
                v_degrees: vec![0, -(a as i64)],
                base: setup.base.clone(),
            };
            let ring = projective_bundle(&[0, -(a as i64)], &setup.base)?;
            (desc, materialize_table(&ts, &ring, trunc)?)
        }
        _ => {
            let ts = build_terms(setup, c, trunc)?;
            let desc = ring_for(setup, ts.kind)?;
            let ring = desc.build()?;
            let cs = match desc {
                RingDesc::Gkm { .. } => fixed_point_restrict_series(&ts, &ring, trunc.dmax)?,
                _ => materialize_table(&ts, &ring, trunc)?,
            };
            (desc, cs)
        }
    };
    Ok(SeriesFile::from_series(&cs, desc, c.to_string(), setup))
}

/// Coefficients at one degree: per basis label, either a sparse z-map of
/// polynomial strings or one canonical rational function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntryValues {
    Laurent(BTreeMap<String, BTreeMap<i32, String>>),
    Closed(BTreeMap<String, String>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub degree: String,
    pub values: EntryValues,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesFile {
    pub coefficients: Vec<Entry>,
    pub constructor: String,
    pub labels: Vec<String>,
    pub ring: RingDesc,
    pub schema: String,
    pub setup: SetupFile,
    pub setup_hash: String,
    pub truncated: bool,
    pub truncation: Truncation,
}

impl SeriesFile {
    pub fn from_series(cs: &CoeffSeries, ring: RingDesc, constructor: String, setup: &SetupFile) -> Self {
        let labels = cs.ring.labels();
        let coefficients = cs
            .coeffs
            .iter()
            .map(|(d, v)| {
                let values = match v {
                    ClassValues::Laurent(xs) => EntryValues::Laurent(
                        labels
                            .iter()
                            .zip(xs)
                            .filter(|(_, x)| !x.is_zero())
                            .map(|(l, x)| (l.clone(), x.terms().map(|(e, p)| (*e, p.to_string())).collect()))
                            .collect(),
                    ),
                    ClassValues::Closed(xs) => EntryValues::Closed(
                        labels
                            .iter()
                            .zip(xs)
                            .filter(|(_, x)| !x.is_zero())
                            .map(|(l, x)| (l.clone(), x.canonical()))
                            .collect(),
                    ),
                };
                Entry {
                    degree: d.to_string(),
                    values,
                }
            })
            .collect();
        SeriesFile {
            coefficients,
            constructor,
            labels,
            ring,
            schema: SCHEMA.into(),
            setup: setup.clone(),
            setup_hash: setup.hash(),
            truncated: cs.truncated,
            truncation: cs.trunc,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("series serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let f: SeriesFile = serde_json::from_str(s).map_err(|e| FmError::Parse(format!("series: {e}")))?;
        if f.schema != SCHEMA {
            return Err(FmError::Parse(format!("schema {} (expected {SCHEMA})", f.schema)));
        }
        if f.setup.hash() != f.setup_hash {
            return Err(FmError::Parse("setup hash does not match the embedded setup".into()));
        }
        Ok(f)
    }

    /// Rebuilds the ring and the coefficient data.
    pub fn to_series(&self) -> Result<CoeffSeries> {
        let ring = self.ring.build()?;
        let labels = ring.labels();
        if labels != self.labels {
            return Err(FmError::RingMismatch(
                "stored labels differ from the rebuilt ring".into(),
            ));
        }
        let index: BTreeMap<&String, usize> = labels.iter().enumerate().map(|(i, l)| (l, i)).collect();
        let find = |l: &String| {
            index
                .get(l)
                .copied()
                .ok_or_else(|| FmError::Parse(format!("unknown label {l}")))
        };
        let mut coeffs = BTreeMap::new();
        for e in &self.coefficients {
            let d = MultiDeg::parse(&e.degree)?;
            let v = match &e.values {
                EntryValues::Laurent(m) => {
                    let mut xs = vec![ZLaurent::new(self.truncation.zlo, self.truncation.zhi); labels.len()];
                    for (l, zs) in m {
                        let i = find(l)?;
                        for (ex, p) in zs {
                            xs[i].add_term(*ex, parse_poly(p)?);
                        }
                    }
                    ClassValues::Laurent(xs)
                }
                EntryValues::Closed(m) => {
                    let mut xs = vec![ParamRat::zero(); labels.len()];
                    for (l, p) in m {
                        xs[find(l)?] = ParamRat::parse(p)?;
                    }
                    ClassValues::Closed(xs)
                }
            };
            coeffs.insert(d, v);
        }
        Ok(CoeffSeries {
            ring,
            trunc: self.truncation,
            coeffs,
            truncated: self.truncated,
        })
    }
}

/// Compares two series files. Mismatched setup hashes are refused unless
/// `force` is set.
pub fn compare_files(a: &SeriesFile, b: &SeriesFile, force: bool) -> Result<CheckReport> {
    if a.setup_hash != b.setup_hash && !force {
        return Err(FmError::Incompatible(format!(
            "setup hashes differ ({} vs {}); use --force",
            &a.setup_hash[..12.min(a.setup_hash.len())],
            &b.setup_hash[..12.min(b.setup_hash.len())]
        )));
    }
    let name = format!("{} vs {}", a.constructor, b.constructor);
    Ok(crate::series::compare_series(&a.to_series()?, &b.to_series()?, &name))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Check {
    Divisor,
    Weyl,
    PoleLocations,
    Recursion,
    Cone,
}

impl FromStr for Check {
    type Err = FmError;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "divisor" => Check::Divisor,
            "weyl" => Check::Weyl,
            "c1" => Check::PoleLocations,
            "c2" => Check::Recursion,
            "cone" | "c3" => Check::Cone,
            _ => return Err(FmError::Parse(format!("unknown check {s}"))),
        })
    }
}

pub const ALL_CHECKS: [Check; 5] = [
    Check::Divisor,
    Check::Weyl,
    Check::PoleLocations,
    Check::Recursion,
    Check::Cone,
];

/// Fixed-point values of a constructor, with abelian series passed through
/// the level-sum specialization first.
pub fn fixed_point_series(setup: &SetupFile, c: Constructor, trunc: Truncation) -> Result<CoeffSeries> {
    if !setup.equivariant {
        return Err(FmError::Unsupported(
            "fixed-point checks need an equivariant setup".into(),
        ));
    }
    let mut ts = build_terms(setup, c, trunc)?;
    if ts.kind == SeriesKind::Abelian {
        ts = gt_modify(&ts)?;
    }
    let ring = gkm_ring(&setup.r, setup.rank()?, GkmVariant::Flag)?;
    fixed_point_restrict_series(&ts, &ring, trunc.dmax)
}

/// Runs the requested checks. Fixed-point checks use `input` when given,
/// otherwise they recompute the series. Recursion uses multiples a ≤ amax.
pub fn verify(
    setup: &SetupFile,
    c: Constructor,
    trunc: Truncation,
    checks: &[Check],
    input: Option<&SeriesFile>,
    amax: u32,
) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    let mut fixed: Option<CoeffSeries> = None;
    let mut terms: Option<TermSeries> = None;
    for check in checks {
        match check {
            Check::Divisor | Check::Weyl => {
                if terms.is_none() {
                    terms = Some(build_terms(setup, c, trunc)?);
                }
                let ts = terms.as_mut().unwrap();
                if *check == Check::Weyl {
                    out.push(crate::oracles::check_weyl_invariance(ts)?);
                } else {
                    if ts.tjet.is_empty() {
                        ts.materialize_t(trunc.dmax.max(1))?;
                    }
                    out.push(crate::oracles::check_divisor_equation(ts)?);
                }
            }
            Check::PoleLocations | Check::Recursion | Check::Cone => {
                if fixed.is_none() {
                    fixed = Some(match input {
                        Some(f) => f.to_series()?,
                        None => fixed_point_series(setup, c, trunc)?,
                    });
                }
                let cs = fixed.as_ref().unwrap();
                match check {
                    Check::PoleLocations => out.push(crate::oracles::check_pole_locations(cs)?),
                    Check::Recursion => out.extend(recursion_reports(cs, setup, c, trunc, amax)?),
                    _ => {
                        if setup.base != BaseDesc::Point {
                            return Err(FmError::Unsupported("cone check only over a point".into()));
                        }
                        out.push(crate::oracles::check_cone_point(cs)?);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Extracts the recursion table from I and from z∂_t I, compares them and
/// checks the recursion at every degree.
pub fn recursion_reports(
    cs: &CoeffSeries,
    setup: &SetupFile,
    c: Constructor,
    trunc: Truncation,
    amax: u32,
) -> Result<Vec<CheckReport>> {
    use crate::oracles::{check_recursion, compare_tables, extract_recursion_table};
    let (table, mut rep) = extract_recursion_table(cs, amax)?;
    let mut out = Vec::new();
    let mut ts = build_terms(setup, c, trunc)?;
    if ts.kind == SeriesKind::Abelian {
        ts = gt_modify(&ts)?;
    }
    for (slot, div) in ts.divisors.iter().enumerate() {
        let ds = crate::series::divisor_op_apply(cs, div, slot)?;
        let (t2, r2) = extract_recursion_table(&ds, amax)?;
        rep.merge(r2);
        out.push(compare_tables(&table, &t2, &format!("recursion table vs z∂_t{slot}")));
    }
    out.insert(0, rep);
    out.push(check_recursion(cs, &table, amax)?);
    Ok(out)
}

/// Parses a polynomial-valued z-map, used by tests and tools.
pub fn laurent_from_strings(m: &BTreeMap<i32, String>, lo: i32, hi: i32) -> Result<ZLaurent<Poly>> {
    let mut z = ZLaurent::new(lo, hi);
    for (e, p) in m {
        z.add_term(*e, parse_poly(p)?);
    }
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gr24() -> SetupFile {
        SetupFile::parse(r#"{"r": [2], "n": 4}"#).unwrap()
    }

    #[test]
    fn grassmann_compute_has_three_degrees() {
        let t = Truncation {
            dmax: 2,
            ..Default::default()
        };
        let f = compute(&gr24(), Constructor::Grassmann, t).unwrap();
        assert_eq!(f.coefficients.len(), 3);
        assert_eq!(f.schema, SCHEMA);
    }

    #[test]
    fn round_trip_is_a_fixed_point() {
        let t = Truncation {
            dmax: 2,
            ..Default::default()
        };
        let f = compute(&gr24(), Constructor::Grassmann, t).unwrap();
        let s1 = f.to_json();
        let g = SeriesFile::from_json(&s1).unwrap();
        let back = SeriesFile::from_series(&g.to_series().unwrap(), g.ring.clone(), g.constructor.clone(), &g.setup);
        assert_eq!(back.to_json(), s1);
        let rep = compare_files(&f, &g, false).unwrap();
        assert!(rep.conclusive());
    }

    #[test]
    fn closed_values_round_trip() {
        let s = SetupFile::parse(r#"{"r": [1, 2], "n": 3, "equivariant": true}"#).unwrap();
        let t = Truncation {
            dmax: 1,
            ..Default::default()
        };
        let f = compute(&s, Constructor::MainFlag, t).unwrap();
        let g = SeriesFile::from_json(&f.to_json()).unwrap();
        let rep = compare_files(&f, &g, false).unwrap();
        assert!(rep.conclusive(), "{rep}");
    }

    #[test]
    fn setup_hash_tracks_content() {
        let a = gr24();
        let mut b = gr24();
        b.n = Some(5);
        assert_ne!(a.hash(), b.hash());
        assert_eq!(a.hash(), gr24().hash());
    }

    #[test]
    fn verify_flag_passes() {
        let s = SetupFile::parse(r#"{"r": [1], "n": 2, "equivariant": true}"#).unwrap();
        let t = Truncation {
            dmax: 2,
            ..Default::default()
        };
        let reps = verify(&s, Constructor::MainFlag, t, &ALL_CHECKS, None, 2).unwrap();
        assert!(reps.len() >= 5);
        for r in reps {
            assert!(r.passed, "{r}");
        }
    }

    #[test]
    fn unknown_constructor_rejected() {
        assert!("nope".parse::<Constructor>().is_err());
        assert_eq!("gt_brown".parse::<Constructor>().unwrap(), Constructor::GtBrown);
    }
}

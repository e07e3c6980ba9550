//! Ring descriptions and cohomology classes.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;

use super::gkm::GkmGraph;
use super::presentation::Presentation;
use crate::algebra::{Coeff, ParamRat, Poly, Rational, Var};
use crate::error::{FmError, Result};

/// Largest additive basis accepted by the builders.
pub const BASIS_GUARD: usize = 10_000;
const DENSE_TABLE_LIMIT: usize = 64;

#[derive(Debug)]
pub struct TableData {
    pub pres: Presentation,
    pub labels: Vec<String>,
    pub basis: Vec<Poly>,
    pub degrees: Vec<u32>,
    /// Index of the point class dual; the integral is its coefficient.
    pub top: usize,
    mult: OnceLock<Vec<Vec<Vec<Rational>>>>,
}

impl TableData {
    pub fn new(pres: Presentation) -> Result<Self> {
        let n = pres.len();
        if n > BASIS_GUARD {
            return Err(FmError::BasisOverflow(n));
        }
        let (labels, basis): (Vec<_>, Vec<_>) = pres.basis().into_iter().unzip();
        let degrees: Vec<u32> = basis.iter().map(|b| b.nil_degree()).collect();
        let top = (0..n).max_by_key(|&i| degrees[i]).unwrap_or(0);
        Ok(TableData {
            pres,
            labels,
            basis,
            degrees,
            top,
            mult: OnceLock::new(),
        })
    }

    fn product_coords(&self, i: usize, j: usize) -> Vec<Rational> {
        self.pres
            .reduce(&(&self.basis[i] * &self.basis[j]))
            .expect("basis products reduce")
            .into_iter()
            .map(|p| p.as_constant().expect("constant structure constant"))
            .collect()
    }

    /// Structure constants e_i e_j = Σ_k m[i][j][k] e_k.
    pub fn structure(&self, i: usize, j: usize) -> Vec<Rational> {
        if self.basis.len() <= DENSE_TABLE_LIMIT {
            let t = self.mult.get_or_init(|| {
                let n = self.basis.len();
                (0..n)
                    .into_par_iter()
                    .map(|i| (0..n).map(|j| self.product_coords(i, j)).collect())
                    .collect()
            });
            t[i][j].clone()
        } else {
            self.product_coords(i, j)
        }
    }
}

#[derive(Debug)]
pub enum RingKind {
    Table(TableData),
    Gkm(GkmGraph),
}

#[derive(Debug)]
pub struct RingSpec {
    pub name: String,
    pub kind: RingKind,
    /// Named divisor classes as polynomials in the generators.
    pub divisors: Vec<(String, Poly)>,
    /// Named Chern lists c_0, c_1, … as polynomials in the generators.
    pub chern: BTreeMap<String, Vec<Poly>>,
}

pub type Ring = Arc<RingSpec>;

impl RingSpec {
    pub fn table(name: impl Into<String>, pres: Presentation) -> Result<Self> {
        Ok(RingSpec {
            name: name.into(),
            kind: RingKind::Table(TableData::new(pres)?),
            divisors: vec![],
            chern: BTreeMap::new(),
        })
    }

    pub fn gkm(name: impl Into<String>, g: GkmGraph) -> Self {
        RingSpec {
            name: name.into(),
            kind: RingKind::Gkm(g),
            divisors: vec![],
            chern: BTreeMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        match &self.kind {
            RingKind::Table(t) => t.basis.len(),
            RingKind::Gkm(g) => g.points.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dim(&self) -> u32 {
        match &self.kind {
            RingKind::Table(t) => t.degrees[t.top],
            RingKind::Gkm(g) => g.dim,
        }
    }

    pub fn labels(&self) -> Vec<String> {
        match &self.kind {
            RingKind::Table(t) => t.labels.clone(),
            RingKind::Gkm(g) => g.points.iter().map(|p| p.label.clone()).collect(),
        }
    }

    pub fn table_data(&self) -> Result<&TableData> {
        match &self.kind {
            RingKind::Table(t) => Ok(t),
            RingKind::Gkm(_) => Err(FmError::Unsupported(format!("{} is a localized ring", self.name))),
        }
    }

    pub fn gkm_graph(&self) -> Result<&GkmGraph> {
        match &self.kind {
            RingKind::Gkm(g) => Ok(g),
            RingKind::Table(_) => Err(FmError::Unsupported(format!("{} has no fixed-point data", self.name))),
        }
    }

    /// Variables eliminated by the presentation (or by restriction).
    pub fn generators(&self) -> Vec<Var> {
        match &self.kind {
            RingKind::Table(t) => t.pres.generators(),
            RingKind::Gkm(g) => g.points[0].restriction.keys().copied().collect(),
        }
    }

    /// Coordinates of a polynomial in the generators, with other variables
    /// carried in the coefficients.
    pub fn coords(&self, f: &Poly) -> Result<Vec<Poly>> {
        match &self.kind {
            RingKind::Table(t) => t.pres.reduce(f),
            RingKind::Gkm(g) => Ok((0..g.points.len()).map(|a| g.restrict(f, a)).collect()),
        }
    }

    pub fn divisor(&self, name: &str) -> Result<&Poly> {
        self.divisors
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, p)| p)
            .ok_or_else(|| FmError::Missing(format!("divisor {name} of {}", self.name)))
    }
}

/// An element of a ring, with coefficients in the parameter field.
#[derive(Clone)]
pub struct CohClass {
    pub ring: Ring,
    pub c: Vec<ParamRat>,
}

impl fmt::Debug for CohClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CohClass[{}]{:?}", self.ring.name, self.c)
    }
}

impl PartialEq for CohClass {
    fn eq(&self, o: &Self) -> bool {
        Arc::ptr_eq(&self.ring, &o.ring) && self.c == o.c
    }
}

impl fmt::Display for CohClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels = self.ring.labels();
        let parts: Vec<String> = self
            .c
            .iter()
            .zip(&labels)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, l)| format!("({c})*[{l}]"))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl CohClass {
    pub fn zero(ring: &Ring) -> Self {
        CohClass {
            ring: ring.clone(),
            c: vec![ParamRat::zero(); ring.len()],
        }
    }

    pub fn unit(ring: &Ring) -> Self {
        match &ring.kind {
            RingKind::Table(t) => {
                let mut c = vec![ParamRat::zero(); t.basis.len()];
                let i = t.basis.iter().position(|b| b.is_one()).expect("unit in basis");
                c[i] = ParamRat::one();
                CohClass { ring: ring.clone(), c }
            }
            RingKind::Gkm(g) => CohClass {
                ring: ring.clone(),
                c: vec![ParamRat::one(); g.points.len()],
            },
        }
    }

    pub fn from_poly(ring: &Ring, f: &Poly) -> Result<Self> {
        Ok(CohClass {
            ring: ring.clone(),
            c: ring.coords(f)?.into_iter().map(ParamRat::from_poly).collect(),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    fn check(&self, o: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.ring, &o.ring) {
            Ok(())
        } else {
            Err(FmError::RingMismatch(format!("{} vs {}", self.ring.name, o.ring.name)))
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        Ok(CohClass {
            ring: self.ring.clone(),
            c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn scale(&self, s: &ParamRat) -> Self {
        CohClass {
            ring: self.ring.clone(),
            c: self.c.iter().map(|a| a * s).collect(),
        }
    }

    pub fn cup(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        match &self.ring.kind {
            RingKind::Gkm(_) => Ok(CohClass {
                ring: self.ring.clone(),
                c: self.c.iter().zip(&o.c).map(|(a, b)| a * b).collect(),
            }),
            RingKind::Table(t) => {
                let n = t.basis.len();
                let mut out = vec![ParamRat::zero(); n];
                for (i, a) in self.c.iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    for (j, b) in o.c.iter().enumerate() {
                        if b.is_zero() {
                            continue;
                        }
                        let ab = a * b;
                        for (k, m) in t.structure(i, j).iter().enumerate() {
                            if !num_traits::Zero::is_zero(m) {
                                out[k] = &out[k] + &ab.scale(m);
                            }
                        }
                    }
                }
                Ok(CohClass {
                    ring: self.ring.clone(),
                    c: out,
                })
            }
        }
    }

    /// Integral over the fundamental class; by localization for GKM rings.
    pub fn integrate(&self) -> Result<ParamRat> {
        match &self.ring.kind {
            RingKind::Table(t) => Ok(self.c[t.top].clone()),
            RingKind::Gkm(g) => {
                let mut s = ParamRat::zero();
                for (a, v) in self.c.iter().enumerate() {
                    let e = ParamRat::from_poly(g.euler(a));
                    if e.is_zero() {
                        return Err(FmError::VanishingDenominator(format!(
                            "Euler class at {}",
                            g.points[a].label
                        )));
                    }
                    s = &s + &(v / &e);
                }
                Ok(s)
            }
        }
    }

    /// Restriction to a fixed point of a localized ring.
    pub fn restrict(&self, a: usize) -> Result<ParamRat> {
        self.ring.gkm_graph()?;
        self.c
            .get(a)
            .cloned()
            .ok_or_else(|| FmError::Missing(format!("fixed point {a}")))
    }
}

impl Coeff for CohClass {
    fn is_zero_c(&self) -> bool {
        self.is_zero()
    }
    fn add_c(&self, o: &Self) -> Self {
        self.add(o).expect("same ring")
    }
    fn mul_c(&self, o: &Self) -> Self {
        self.cup(o).expect("same ring")
    }
    fn neg_c(&self) -> Self {
        self.scale(&ParamRat::int(-1))
    }
    fn scale_c(&self, c: &Rational) -> Self {
        self.scale(&ParamRat::constant(c.clone()))
    }
}

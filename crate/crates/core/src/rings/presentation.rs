//! Polynomial presentations of cohomology rings.
//!
//! A presentation turns a polynomial in generator variables into coordinates
//! over a fixed additive basis. Variables that are not generators pass
//! through into the coordinates, so the coordinates are polynomials in
//! parameters such as μ or the Chern variables of an unspecified bundle.

use std::collections::BTreeMap;

use crate::algebra::schur::{box_partitions, level_vars, schur_poly, schur_reduce, Partition};
use crate::algebra::{Monomial, Poly, Var};
use crate::error::{FmError, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Presentation {
    Point,
    /// Q[x]/(x^{n+1}).
    Projective {
        var: Var,
        n: u32,
    },
    /// Symmetric polynomials in the level-1 roots H_1..H_r of Gr(r, n).
    Grassmann {
        r: u32,
        n: u32,
    },
    /// Tensor product; the basis index is i * |B| + j.
    Product(Box<Presentation>, Box<Presentation>),
    /// Monic relations g^e = lower terms, reduced in the listed order, over
    /// a base presentation. Each relation may involve later generators and
    /// base variables only.
    Tower {
        gens: Vec<TowerGen>,
        base: Box<Presentation>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct TowerGen {
    pub var: Var,
    /// Monic in `var` of degree `e`; the relation is `rel = 0`.
    pub rel: Poly,
    pub e: u32,
}

impl TowerGen {
    pub fn new(var: Var, rel: Poly) -> Result<Self> {
        let e = rel.degree_in(var);
        let lc = rel.coeff_of_pow(var, e);
        if e == 0 || !lc.is_one() {
            return Err(FmError::Unsupported(format!("relation for {var} must be monic: {rel}")));
        }
        Ok(TowerGen { var, rel, e })
    }
}

impl Presentation {
    pub fn len(&self) -> usize {
        match self {
            Presentation::Point => 1,
            Presentation::Projective { n, .. } => *n as usize + 1,
            Presentation::Grassmann { r, n } => box_partitions(*r, *n).len(),
            Presentation::Product(a, b) => a.len() * b.len(),
            Presentation::Tower { gens, base } => gens.iter().map(|g| g.e as usize).product::<usize>() * base.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Generator variables, which are exactly the ones `reduce` eliminates.
    pub fn generators(&self) -> Vec<Var> {
        match self {
            Presentation::Point => vec![],
            Presentation::Projective { var, .. } => vec![*var],
            Presentation::Grassmann { r, .. } => level_vars(1, *r),
            Presentation::Product(a, b) => {
                let mut v = a.generators();
                v.extend(b.generators());
                v
            }
            Presentation::Tower { gens, base } => {
                let mut v: Vec<Var> = gens.iter().map(|g| g.var).collect();
                v.extend(base.generators());
                v
            }
        }
    }

    /// Basis elements as polynomials with their labels.
    pub fn basis(&self) -> Vec<(String, Poly)> {
        match self {
            Presentation::Point => vec![("1".into(), Poly::one())],
            Presentation::Projective { var, n } => {
                (0..=*n).map(|a| (pow_label(*var, a), Poly::var_pow(*var, a))).collect()
            }
            Presentation::Grassmann { r, n } => {
                let vars = level_vars(1, *r);
                box_partitions(*r, *n)
                    .into_iter()
                    .map(|p| (partition_label(&p), schur_poly(&p, &vars)))
                    .collect()
            }
            Presentation::Product(a, b) => {
                let bb = b.basis();
                let mut out = Vec::new();
                for (la, pa) in a.basis() {
                    for (lb, pb) in &bb {
                        out.push((join_labels(&la, lb), &pa * pb));
                    }
                }
                out
            }
            Presentation::Tower { gens, base } => {
                let bb = base.basis();
                let mut out = Vec::new();
                for exps in exponent_grid(gens) {
                    let mut m = Monomial::one();
                    for (g, a) in gens.iter().zip(&exps) {
                        m = m.mul(&Monomial::var(g.var, *a));
                    }
                    let label = gens
                        .iter()
                        .zip(&exps)
                        .filter(|(_, a)| **a > 0)
                        .map(|(g, a)| pow_label(g.var, *a))
                        .collect::<Vec<_>>()
                        .join("*");
                    let label = if label.is_empty() { "1".to_string() } else { label };
                    for (lb, pb) in &bb {
                        out.push((
                            join_labels(&label, lb),
                            pb.mul_monomial(&m, &crate::algebra::rational::rat(1)),
                        ));
                    }
                }
                out
            }
        }
    }

    /// Coordinates of `f` over the basis.
    pub fn reduce(&self, f: &Poly) -> Result<Vec<Poly>> {
        let mut out = vec![Poly::zero(); self.len()];
        match self {
            Presentation::Point => out[0] = f.clone(),
            Presentation::Projective { var, n } => {
                for (e, c) in f.coeffs_in(*var) {
                    if e <= *n {
                        out[e as usize] = c;
                    }
                }
            }
            Presentation::Grassmann { r, n } => {
                let parts = box_partitions(*r, *n);
                let idx: BTreeMap<&Partition, usize> = parts.iter().enumerate().map(|(i, p)| (p, i)).collect();
                for (p, c) in schur_reduce(f, &level_vars(1, *r), *n)? {
                    out[idx[&p]] = c;
                }
            }
            Presentation::Product(a, b) => {
                let nb = b.len();
                for (i, c) in a.reduce(f)?.into_iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    for (j, d) in b.reduce(&c)?.into_iter().enumerate() {
                        out[i * nb + j] = d;
                    }
                }
            }
            Presentation::Tower { gens, base } => {
                let mut g = f.clone();
                for t in gens {
                    g = reduce_monic(&g, t);
                }
                let nb = base.len();
                let strides = strides(gens);
                for (m, c) in g.terms() {
                    let mut idx = 0usize;
                    let mut rest = m.clone();
                    for (t, s) in gens.iter().zip(&strides) {
                        idx += m.exp(t.var) as usize * s;
                        rest = rest.without(t.var);
                    }
                    let coeffs = base.reduce(&Poly::monomial(rest, c.clone()))?;
                    for (j, d) in coeffs.into_iter().enumerate() {
                        if !d.is_zero() {
                            let slot = &mut out[idx * nb + j];
                            *slot = &*slot + &d;
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

fn strides(gens: &[TowerGen]) -> Vec<usize> {
    let mut s = vec![1usize; gens.len()];
    for i in (0..gens.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * gens[i + 1].e as usize;
    }
    s
}

fn exponent_grid(gens: &[TowerGen]) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for g in gens {
        let mut next = Vec::new();
        for p in &out {
            for a in 0..g.e {
                let mut q = p.clone();
                q.push(a);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

/// Remainder of f modulo a monic relation in `t.var`.
fn reduce_monic(f: &Poly, t: &TowerGen) -> Poly {
    if f.degree_in(t.var) < t.e {
        return f.clone();
    }
    // x^e = -(rel - x^e)
    let tail = -(&t.rel - &Poly::var_pow(t.var, t.e));
    let tail_c = tail.coeffs_in(t.var);
    let mut cs = f.coeffs_in(t.var);
    while let Some((&d, _)) = cs.iter().next_back() {
        if d < t.e {
            break;
        }
        let c = cs.remove(&d).unwrap();
        for (k, tc) in &tail_c {
            let slot = cs.entry(d - t.e + k).or_default();
            *slot = &*slot + &(&c * tc);
        }
        cs.retain(|_, c| !c.is_zero());
    }
    Poly::from_coeffs_in(t.var, &cs)
}

fn pow_label(v: Var, a: u32) -> String {
    match a {
        0 => "1".into(),
        1 => v.to_string(),
        _ => format!("{v}^{a}"),
    }
}

pub fn partition_label(p: &[u32]) -> String {
    if p.is_empty() {
        "s()".into()
    } else {
        format!("s({})", p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
    }
}

fn join_labels(a: &str, b: &str) -> String {
    match (a, b) {
        ("1", _) => b.to_string(),
        (_, "1") => a.to_string(),
        _ => format!("{a}*{b}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h() -> Poly {
        Poly::var(Var::Base(1))
    }

    fn big_h() -> Poly {
        Poly::var(Var::Root(1, 1))
    }

    #[test]
    fn projective_truncates() {
        let p = Presentation::Projective {
            var: Var::Base(1),
            n: 2,
        };
        let f = &(&h().pow(3) + &h()) + &Poly::var(Var::Mu);
        let c = p.reduce(&f).unwrap();
        assert_eq!(c, vec![Poly::var(Var::Mu), Poly::one(), Poly::zero()]);
    }

    #[test]
    fn hirzebruch_tower_relation() {
        // H(H - h) = 0 over Q[h]/h^2
        let base = Presentation::Projective {
            var: Var::Base(1),
            n: 1,
        };
        let rel = &big_h() * &(&big_h() - &h());
        let t = Presentation::Tower {
            gens: vec![TowerGen::new(Var::Root(1, 1), rel).unwrap()],
            base: Box::new(base),
        };
        assert_eq!(t.len(), 4);
        // H^2 = hH, H^3 = h H^2 = h^2 H = 0
        let c = t.reduce(&big_h().pow(2)).unwrap();
        let d = t.reduce(&(&h() * &big_h())).unwrap();
        assert_eq!(c, d);
        assert!(t.reduce(&big_h().pow(3)).unwrap().iter().all(|x| x.is_zero()));
    }

    #[test]
    fn basis_reduces_to_unit_vectors() {
        let base = Presentation::Projective {
            var: Var::Base(1),
            n: 1,
        };
        let pres = Presentation::Product(Box::new(base), Box::new(Presentation::Grassmann { r: 2, n: 4 }));
        for (i, (_, b)) in pres.basis().iter().enumerate() {
            let c = pres.reduce(b).unwrap();
            for (j, x) in c.iter().enumerate() {
                assert_eq!(x.is_one(), i == j);
                assert!(x.is_zero() || i == j);
            }
        }
    }
}

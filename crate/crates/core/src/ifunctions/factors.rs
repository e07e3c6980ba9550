//! Factor lists shared by the I-function constructors.

use crate::algebra::rational::rat;
use crate::algebra::{Poly, Var};
use crate::series::terms::range_ratio;

pub fn root(m: usize, i: usize) -> Poly {
    Poly::var(Var::Root(m as u8, i as u8))
}

pub fn lambda(m: usize, i: usize) -> Poly {
    Poly::var(Var::Lambda(m as u8, i as u8))
}

pub fn zc(c: i64) -> Poly {
    Poly::var(Var::Z).scale(&rat(c))
}

/// Per-level abelian degrees: k[m][i] for level m+1, root i+1.
pub type Split = Vec<Vec<u32>>;

/// The Weyl factor Π_m Π_{i≠j} Π_{c≤k_i−k_j}(H_i−H_j+cz) / Π_{c≤0}(H_i−H_j+cz).
pub fn hyp_factor(k: &Split) -> Vec<(Poly, i32)> {
    let mut out = Vec::new();
    for (m, km) in k.iter().enumerate() {
        for i in 0..km.len() {
            for j in 0..km.len() {
                if i == j {
                    continue;
                }
                let x = &root(m + 1, i + 1) - &root(m + 1, j + 1);
                let d = km[i] as i64 - km[j] as i64;
                // inverse of the range ratio Π_{c≤0}/Π_{c≤d}
                out.extend(range_ratio(&x, d).into_iter().map(|(f, e)| (f, -e)));
            }
        }
    }
    out
}

/// Π_{m<l} Π_{i,j} Π_{c≤0}/Π_{c≤k_i^{(m)}−k_j^{(m+1)}} (H_i^{(m)} − H_j^{(m+1)} + cz).
pub fn level_ratios(k: &Split) -> Vec<(Poly, i32)> {
    let mut out = Vec::new();
    for m in 0..k.len().saturating_sub(1) {
        for (i, &ki) in k[m].iter().enumerate() {
            for (j, &kj) in k[m + 1].iter().enumerate() {
                let x = &root(m + 1, i + 1) - &root(m + 2, j + 1);
                out.extend(range_ratio(&x, ki as i64 - kj as i64));
            }
        }
    }
    out
}

/// Π_i Π_{c=1}^{k_i} Π_δ (H_i^{(l)} + δ + cz)^{-1} over the roots δ of V.
pub fn bundle_factors(kl: &[u32], l: usize, roots: &[Poly]) -> Vec<(Poly, i32)> {
    let mut out = Vec::new();
    for (i, &ki) in kl.iter().enumerate() {
        for c in 1..=ki as i64 {
            for d in roots {
                out.push((&(&root(l, i + 1) + d) + &zc(c), -1));
            }
        }
    }
    out
}

/// All splits of level totals `tot` into r_m parts.
pub fn splits(r: &[u32], tot: &[u32]) -> Vec<Split> {
    let mut out: Vec<Split> = vec![vec![]];
    for (m, &rm) in r.iter().enumerate() {
        let comps = crate::series::multideg::compositions(rm as usize, tot[m]);
        let mut next = Vec::new();
        for s in &out {
            for c in &comps {
                let mut t = s.clone();
                t.push(c.clone());
                next.push(t);
            }
        }
        out = next;
    }
    out
}

pub fn flatten(k: &Split) -> Vec<u32> {
    k.iter().flatten().copied().collect()
}

pub fn unflatten(v: &[u32], r: &[u32]) -> Split {
    let mut out = Vec::new();
    let mut pos = 0;
    for &rm in r {
        out.push(v[pos..pos + rm as usize].to_vec());
        pos += rm as usize;
    }
    out
}

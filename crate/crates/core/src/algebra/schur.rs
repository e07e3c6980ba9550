//! Schur-basis reduction of symmetric polynomials with box truncation.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

use super::poly::{Monomial, Poly};
use super::rational::Rational;
use super::var::Var;
use crate::error::{FmError, Result};

/// Weakly decreasing, without trailing zeros.
pub type Partition = Vec<u32>;

pub fn trim(mut p: Partition) -> Partition {
    while p.last() == Some(&0) {
        p.pop();
    }
    p
}

pub fn fits_box(p: &[u32], r: u32, n: u32) -> bool {
    p.len() as u32 <= r && p.first().map(|x| *x <= n - r).unwrap_or(true)
}

/// Partitions inside the r × (n−r) box, ordered by size and then
/// lexicographically decreasing.
pub fn box_partitions(r: u32, n: u32) -> Vec<Partition> {
    fn rec(r: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        out.push(trim(cur.clone()));
        if cur.len() as u32 == r {
            return;
        }
        for v in 1..=max {
            cur.push(v);
            rec(r, v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(r, n - r, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| {
        let sa: u32 = a.iter().sum();
        let sb: u32 = b.iter().sum();
        sa.cmp(&sb).then_with(|| b.cmp(a))
    });
    out
}

/// The Schur polynomial s_λ(vars) as a ratio of alternants.
pub fn schur_poly(lambda: &[u32], vars: &[Var]) -> Poly {
    let r = vars.len();
    if lambda.len() > r {
        return Poly::zero();
    }
    let mut lam = lambda.to_vec();
    lam.resize(r, 0);
    let alt = |exps: &[u32]| -> Poly {
        // determinant of x_j^{exps_i} by permutation expansion (r ≤ 4)
        let mut acc = Poly::zero();
        for (perm, sign) in permutations(r) {
            let mut m = Monomial::one();
            for i in 0..r {
                m = m.mul(&Monomial::var(vars[perm[i]], exps[i]));
            }
            acc.add_term(m, Rational::from_integer(sign.into()));
        }
        acc
    };
    let delta: Vec<u32> = (0..r as u32).rev().collect();
    let num: Vec<u32> = (0..r).map(|i| lam[i] + delta[i]).collect();
    alt(&num)
        .div_exact(&alt(&delta))
        .expect("alternant divisible by Vandermonde")
}

/// All permutations of 0..r with their signs.
pub fn permutations(r: usize) -> Vec<(Vec<usize>, i32)> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..r).collect();
    fn rec(k: usize, p: &mut Vec<usize>, sign: i32, out: &mut Vec<(Vec<usize>, i32)>) {
        if k == p.len() {
            out.push((p.clone(), sign));
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            rec(k + 1, p, if i == k { sign } else { -sign }, out);
            p.swap(k, i);
        }
    }
    rec(0, &mut p, 1, &mut out);
    out
}

pub fn is_symmetric(f: &Poly, vars: &[Var]) -> bool {
    (0..vars.len().saturating_sub(1)).all(|i| {
        let (a, b) = (vars[i], vars[i + 1]);
        let g = f.map_vars(move |v| {
            if v == a {
                b
            } else if v == b {
                a
            } else {
                v
            }
        });
        g == *f
    })
}

/// Splits f by exponent vector in `vars`, listed from the last variable down.
fn split_by_vars(f: &Poly, vars: &[Var]) -> BTreeMap<Vec<u32>, Poly> {
    let mut out: BTreeMap<Vec<u32>, Poly> = BTreeMap::new();
    for (m, c) in f.terms() {
        let key: Vec<u32> = vars.iter().rev().map(|v| m.exp(*v)).collect();
        let mut rest = m.clone();
        for v in vars {
            rest = rest.without(*v);
        }
        out.entry(key).or_default().add_term(rest, c.clone());
    }
    out
}

/// Expands f, symmetric in `vars`, as Σ c_λ s_λ with c_λ polynomials in the
/// remaining variables, dropping λ outside the r × (n−r) box.
pub fn schur_reduce(f: &Poly, vars: &[Var], n: u32) -> Result<BTreeMap<Partition, Poly>> {
    if !is_symmetric(f, vars) {
        return Err(FmError::NotSymmetric(f.to_string()));
    }
    let r = vars.len() as u32;
    let mut rem = split_by_vars(f, vars);
    let mut cache: HashMap<Vec<u32>, BTreeMap<Vec<u32>, Poly>> = HashMap::new();
    let mut out = BTreeMap::new();
    while let Some((key, c)) = rem.iter().next_back().map(|(k, c)| (k.clone(), c.clone())) {
        // the leading exponent vector of a symmetric polynomial is a partition
        let lam = trim(key.clone());
        let s = cache
            .entry(key.clone())
            .or_insert_with(|| split_by_vars(&schur_poly(&lam, vars), vars));
        for (k, a) in s.iter() {
            let slot = rem.entry(k.clone()).or_default();
            *slot = &*slot - &(&c * a);
            if slot.is_zero() {
                rem.remove(k);
            }
        }
        if r == 0 || fits_box(&lam, r, n) {
            out.insert(lam, c);
        }
    }
    Ok(out)
}

/// Rational-coefficient Schur expansion inside the r × (n−r) box.
#[derive(Clone, Debug, PartialEq)]
pub struct SchurVector {
    pub r: u32,
    pub n: u32,
    pub entries: BTreeMap<Partition, Rational>,
}

pub fn schur_reduce_rational(f: &Poly, vars: &[Var], n: u32) -> Result<SchurVector> {
    let m = schur_reduce(f, vars, n)?;
    let mut entries = BTreeMap::new();
    for (lam, c) in m {
        let c = c
            .as_constant()
            .ok_or_else(|| FmError::NotPolynomial(format!("non-scalar coefficient {c}")))?;
        if !c.is_zero() {
            entries.insert(lam, c);
        }
    }
    Ok(SchurVector {
        r: vars.len() as u32,
        n,
        entries,
    })
}

/// Root variables H_1..H_r of level 1, used for Grassmannian computations.
pub fn level_vars(level: u8, r: u32) -> Vec<Var> {
    (1..=r as u8).map(|i| Var::Root(level, i)).collect()
}

/// Littlewood–Richardson product truncated to the box.
pub fn lr_product(a: &[u32], b: &[u32], r: u32, n: u32) -> SchurVector {
    let vars = level_vars(1, r);
    let f = &schur_poly(a, &vars) * &schur_poly(b, &vars);
    schur_reduce_rational(&f, &vars, n).expect("product of Schur polynomials is symmetric")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;

    fn h(i: u8) -> Poly {
        Poly::var(Var::Root(1, i))
    }

    #[test]
    fn box_of_gr24() {
        let b = box_partitions(2, 4);
        let expect: Vec<Partition> = vec![vec![], vec![1], vec![2], vec![1, 1], vec![2, 1], vec![2, 2]];
        assert_eq!(b, expect);
    }

    #[test]
    fn unit_and_e1() {
        let vars = level_vars(1, 2);
        let s = schur_reduce_rational(&Poly::one(), &vars, 4).unwrap();
        assert_eq!(s.entries, BTreeMap::from([(vec![], rat(1))]));
        let s = schur_reduce_rational(&(&h(1) + &h(2)), &vars, 4).unwrap();
        assert_eq!(s.entries, BTreeMap::from([(vec![1], rat(1))]));
    }

    #[test]
    fn top_times_divisor_vanishes() {
        let vars = level_vars(1, 2);
        let f = &(&h(1).pow(2) * &h(2).pow(2)) * &(&h(1) + &h(2));
        let s = schur_reduce_rational(&f, &vars, 4).unwrap();
        assert!(s.entries.is_empty());
        // independent straightening: s_{22} s_1 = s_{32} only
        let full = schur_reduce_rational(&f, &vars, 10).unwrap();
        assert_eq!(full.entries, BTreeMap::from([(vec![3, 2], rat(1))]));
    }

    #[test]
    fn pieri_square_of_sigma1() {
        let s = lr_product(&[1], &[1], 2, 4);
        assert_eq!(s.entries, BTreeMap::from([(vec![2], rat(1)), (vec![1, 1], rat(1))]));
    }

    #[test]
    fn non_symmetric_rejected() {
        let vars = level_vars(1, 2);
        assert!(schur_reduce(&h(1), &vars, 4).is_err());
    }
}

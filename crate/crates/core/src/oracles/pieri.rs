//! Quantum Pieri rule for σ_1 on Gr(r, n) and the small J-function from the
//! quantum differential equation.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::algebra::schur::box_partitions;
use crate::algebra::{Poly, Rational, ZLaurent};
use crate::error::Result;
use crate::rings::builders::grassmann;
use crate::rings::BaseDesc;
use crate::series::{ClassValues, CoeffSeries, MultiDeg, Truncation};

/// σ_1 ⋆ σ_a = Σ_b (c0[a][b] + q c1[a][b]) σ_b over the box basis.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumPieri {
    pub r: u32,
    pub n: u32,
    pub basis: Vec<Vec<u32>>,
    pub c0: Vec<Vec<Rational>>,
    pub c1: Vec<Vec<Rational>>,
}

pub fn quantum_pieri_sigma1(r: u32, n: u32) -> QuantumPieri {
    let basis = box_partitions(r, n);
    let idx: BTreeMap<&Vec<u32>, usize> = basis.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let len = basis.len();
    let mut c0 = vec![vec![Rational::zero(); len]; len];
    let mut c1 = vec![vec![Rational::zero(); len]; len];
    for (a, lam) in basis.iter().enumerate() {
        let mut full = lam.clone();
        full.resize(r as usize, 0);
        // add one box in row i
        for i in 0..r as usize {
            let mut mu = full.clone();
            mu[i] += 1;
            let ok = mu[i] <= n - r && (i == 0 || mu[i] <= mu[i - 1]);
            if ok {
                let key = crate::algebra::schur::trim(mu);
                c0[a][idx[&key]] += Rational::from_integer(1.into());
            }
        }
        // quantum term: λ_1 = n − r and ℓ(λ) = r give q σ_{(λ_2−1, …, λ_r−1)}
        if full[0] == n - r && full[r as usize - 1] >= 1 {
            let hat: Vec<u32> = full[1..].iter().map(|x| x - 1).collect();
            let key = crate::algebra::schur::trim(hat);
            c1[a][idx[&key]] += Rational::from_integer(1.into());
        }
    }
    QuantumPieri { r, n, basis, c0, c1 }
}

type Vector = Vec<Rational>;

fn cup_divisor(p: &QuantumPieri, v: &Vector) -> Vector {
    let len = v.len();
    let mut out = vec![Rational::zero(); len];
    for (b, x) in v.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (o, m) in out.iter_mut().zip(&p.c0[b]) {
            if !m.is_zero() {
                *o += x * m;
            }
        }
    }
    out
}

/// J = Σ_d q^d J_d through z^{-depth}, from the fundamental-solution
/// recursion d·S_{a,d,j+1} = Σ_b c0[a][b] S_{b,d,j} − H⌣S_{a,d,j} + Σ_b c1[a][b] S_{b,d−1,j},
/// with S_{a,0} = σ_a; J is the row of the unit.
pub fn qde_small_j(r: u32, n: u32, dmax: u32, depth: u32) -> Result<CoeffSeries> {
    let p = quantum_pieri_sigma1(r, n);
    let len = p.basis.len();
    let zero = vec![Rational::zero(); len];
    // s[d][a][j]: class vector of the z^{-j} coefficient of S_{a,d}
    let mut s: Vec<Vec<Vec<Vector>>> = Vec::new();
    let unit_rows: Vec<Vec<Vector>> = (0..len)
        .map(|a| {
            let mut e = zero.clone();
            e[a] = Rational::from_integer(1.into());
            let mut col = vec![zero.clone(); depth as usize + 1];
            col[0] = e;
            col
        })
        .collect();
    s.push(unit_rows);
    for d in 1..=dmax as usize {
        let dr = Rational::from_integer((d as i64).into());
        let mut rows = vec![vec![zero.clone(); depth as usize + 1]; len];
        for j in 0..depth as usize {
            for a in 0..len {
                let mut acc = zero.clone();
                for b in 0..len {
                    if !p.c0[a][b].is_zero() {
                        for (x, y) in acc.iter_mut().zip(&rows[b][j]) {
                            *x += &p.c0[a][b] * y;
                        }
                    }
                    if !p.c1[a][b].is_zero() {
                        for (x, y) in acc.iter_mut().zip(&s[d - 1][b][j]) {
                            *x += &p.c1[a][b] * y;
                        }
                    }
                }
                for (x, y) in acc.iter_mut().zip(cup_divisor(&p, &rows[a][j])) {
                    *x -= y;
                }
                rows[a][j + 1] = acc.into_iter().map(|x| x / &dr).collect();
            }
        }
        s.push(rows);
    }
    let ring = grassmann(r, n, &BaseDesc::Point)?;
    let unit = p.basis.iter().position(|b| b.is_empty()).unwrap();
    let mut coeffs = BTreeMap::new();
    for (d, rows) in s.iter().enumerate() {
        let mut v = vec![ZLaurent::new(-(depth as i32), 0); len];
        for (j, cls) in rows[unit].iter().enumerate() {
            for (c, x) in cls.iter().enumerate() {
                v[c].add_term(-(j as i32), Poly::constant(x.clone()));
            }
        }
        coeffs.insert(MultiDeg::new(vec![], vec![d as u32]), ClassValues::Laurent(v));
    }
    Ok(CoeffSeries {
        ring,
        trunc: Truncation {
            dmax,
            zlo: -(depth as i32),
            zhi: 0,
            minv: 0,
        },
        coeffs,
        truncated: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;

    fn index(p: &QuantumPieri, lam: &[u32]) -> usize {
        p.basis.iter().position(|b| b == lam).unwrap()
    }

    #[test]
    fn gr24_quantum_terms() {
        let p = quantum_pieri_sigma1(2, 4);
        let a = index(&p, &[2, 1]);
        assert_eq!(p.c0[a][index(&p, &[2, 2])], rat(1));
        assert_eq!(p.c1[a][index(&p, &[])], rat(1));
        let b = index(&p, &[2, 2]);
        assert_eq!(p.c1[b][index(&p, &[1])], rat(1));
        assert!(p.c0[b].iter().all(|x| x.is_zero()));
    }

    #[test]
    fn classical_part_is_pieri() {
        // q^0 part equals the Littlewood–Richardson product with σ_1
        let p = quantum_pieri_sigma1(2, 5);
        for (a, lam) in p.basis.iter().enumerate() {
            let lr = crate::algebra::schur::lr_product(&[1], lam, 2, 5);
            for (b, mu) in p.basis.iter().enumerate() {
                let want = lr.entries.get(mu).cloned().unwrap_or_default();
                assert_eq!(p.c0[a][b], want);
            }
        }
    }

    #[test]
    fn projective_line_j() {
        // J_1 = 1/(H+z)^2 = z^-2 − 2H z^-3
        let j = qde_small_j(1, 2, 1, 4).unwrap();
        let ClassValues::Laurent(v) = j.get(&MultiDeg::new(vec![], vec![1])).unwrap() else {
            panic!()
        };
        assert_eq!(v[0].coeff(-2), Some(&Poly::one()));
        assert_eq!(v[1].coeff(-3), Some(&Poly::int(-2)));
        assert_eq!(v[0].terms().count() + v[1].terms().count(), 2);
    }
}

//! Chern-class bookkeeping for split bundles.

use crate::algebra::{Poly, Var};

/// Elementary symmetric polynomials c_0..c_n of the given roots.
pub fn chern_from_roots(roots: &[Poly]) -> Vec<Poly> {
    let mut c = vec![Poly::one()];
    for x in roots {
        let mut next = c.clone();
        next.push(Poly::zero());
        for j in 1..next.len() {
            next[j] = &next[j] + &(&c[j - 1] * x);
        }
        c = next;
    }
    c
}

/// Σ_j c_j (X + shift)^{ρ−j} = Π_ε (X + shift + ε) for a rank-ρ bundle with
/// Chern list c_0 = 1, c_1, …, c_ρ.
pub fn chern_product_eval(c: &[Poly], x: &Poly, shift: &Poly) -> Poly {
    let rho = c.len() as u32 - 1;
    let base = x + shift;
    let mut acc = Poly::zero();
    for (j, cj) in c.iter().enumerate() {
        if !cj.is_zero() {
            acc = &acc + &(cj * &base.pow(rho - j as u32));
        }
    }
    acc
}

/// Symbolic Chern list 1, c_1(b), …, c_ρ(b).
pub fn symbolic_chern(bundle: u8, rank: u32) -> Vec<Poly> {
    let mut c = vec![Poly::one()];
    for j in 1..=rank {
        c.push(Poly::var(Var::Chern(bundle, j as u8)));
    }
    c
}

/// Chern character components ch_0..ch_max from a Chern list, by Newton's
/// identities: ch_l = p_l / l! with p_l the power sums of the roots.
pub fn chern_character(c: &[Poly], max: u32) -> Vec<Poly> {
    let rank = c.len() as i64 - 1;
    let e = |k: usize| -> Poly { c.get(k).cloned().unwrap_or_else(Poly::zero) };
    let mut p: Vec<Poly> = vec![Poly::int(rank)];
    for l in 1..=max as usize {
        // p_l = Σ_{i<l} (−1)^{i−1} e_i p_{l−i} + (−1)^{l−1} l e_l
        let mut s = Poly::zero();
        for i in 1..l {
            let t = &e(i) * &p[l - i];
            s = if i % 2 == 1 { &s + &t } else { &s - &t };
        }
        let t = e(l).scale(&crate::algebra::rational::rat(l as i64));
        s = if l % 2 == 1 { &s + &t } else { &s - &t };
        p.push(s);
    }
    p.into_iter()
        .enumerate()
        .map(|(l, pl)| {
            let f = crate::algebra::rational::factorial(l as u32);
            pl.scale(&crate::algebra::Rational::new(1.into(), f))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::frac;

    fn x(i: u8) -> Poly {
        Poly::var(Var::Nu(i))
    }

    #[test]
    fn product_of_roots_matches_chern_sum() {
        let roots = [x(1), x(2), x(3)];
        let c = chern_from_roots(&roots);
        let t = Poly::var(Var::Z);
        let direct = roots.iter().fold(Poly::one(), |a, r| &a * &(&t + r));
        assert_eq!(chern_product_eval(&c, &t, &Poly::zero()), direct);
    }

    #[test]
    fn newton_identities_against_roots() {
        let roots = [x(1), x(2)];
        let ch = chern_character(&chern_from_roots(&roots), 4);
        for (l, v) in ch.iter().enumerate() {
            let p = &x(1).pow(l as u32) + &x(2).pow(l as u32);
            let f = crate::algebra::rational::factorial(l as u32);
            assert_eq!(*v, p.scale(&crate::algebra::Rational::new(1.into(), f)));
        }
        assert_eq!(ch[2].coeff(&crate::algebra::Monomial::var(Var::Nu(1), 2)), frac(1, 2));
    }
}

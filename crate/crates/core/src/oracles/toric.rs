//! Toric I-function of the Hirzebruch surface F_a = P(O ⊕ O(−a)) over P^1.

use std::collections::BTreeMap;

use crate::algebra::rational::rat;
use crate::algebra::{Poly, Var};
use crate::error::Result;
use crate::series::multideg::MultiDeg;
use crate::series::terms::{AbTerm, SeriesKind, TConvention, TermSeries};

/// Σ_{d,k} Q^d q^k Π_ρ Π_{c≤0}(D_ρ + cz)/Π_{c≤D_ρ·(d,k)}(D_ρ + cz) over the
/// toric divisors h, h, H, H − a h with pairings d, d, k, k − a d.
pub fn toric_i_hirzebruch(a: u32, dmax: u32) -> Result<TermSeries> {
    let h = Poly::var(Var::Base(1));
    let big = Poly::var(Var::Root(1, 1));
    let z = Poly::var(Var::Z);
    let lin = |x: &Poly, c: i64| x + &z.scale(&rat(c));
    let divs: Vec<Poly> = vec![h.clone(), h.clone(), big.clone(), &big - &h.scale(&rat(a as i64))];
    let mut terms = BTreeMap::new();
    for d in 0..=dmax as i64 {
        for k in 0..=(dmax as i64 - d) {
            let pair = [d, d, k, k - a as i64 * d];
            let mut t = AbTerm::one();
            for (dv, p) in divs.iter().zip(pair) {
                if p >= 0 {
                    for c in 1..=p {
                        t.mul_factor(&lin(dv, c), -1);
                    }
                } else {
                    for c in (p + 1)..=0 {
                        t.mul_factor(&lin(dv, c), 1);
                    }
                }
            }
            terms.insert(MultiDeg::new(vec![d as u32], vec![k as u32]), vec![t]);
        }
    }
    Ok(TermSeries {
        ranks: vec![1],
        kind: SeriesKind::Specialized,
        base_rank: 1,
        base: BTreeMap::new(),
        terms,
        t_convention: Some(TConvention::DivisorForm),
        tjet: BTreeMap::new(),
        divisors: vec![h, big],
    })
}

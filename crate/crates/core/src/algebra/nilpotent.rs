//! Expansion of inverses whose z-free part is nilpotent.
//!
//! Coefficients are polynomials in nilpotent class variables; products are
//! truncated by nilpotent degree, which stands in for the ring relations.

use num_traits::{One, Zero};

use super::poly::{Monomial, Poly};
use super::rational::{binomial, Rational};
use super::var::Var;
use super::zlaurent::ZLaurent;
use crate::error::{FmError, Result};

pub type NilSeries = ZLaurent<Poly>;

/// (X + cz)^{-e} = (cz)^{-e} Σ_{j<p} binom(−e, j) (X/cz)^j, with X^p = 0.
pub fn expand_nilpotent_inverse(x: &Poly, p: u32, c: &Rational, e: u32, lo: i32, hi: i32) -> Result<NilSeries> {
    if c.is_zero() {
        return Err(FmError::ZeroLeadingCoefficient);
    }
    let mut out = ZLaurent::new(lo, hi);
    let cinv = Rational::one() / c;
    let mut xj = Poly::one();
    for j in 0..p.max(1) {
        if xj.is_zero() {
            break;
        }
        let k = binomial(-(e as i64), j) * num_traits::pow(cinv.clone(), (e + j) as usize);
        out.add_term(-((e + j) as i32), xj.scale(&k));
        xj = &xj * x;
    }
    Ok(out)
}

/// Splits a polynomial in z into its z-coefficients.
pub fn laurent_from_poly(f: &Poly, lo: i32, hi: i32) -> NilSeries {
    let mut out = ZLaurent::new(lo, hi);
    for (e, c) in f.coeffs_in(Var::Z) {
        out.add_term(e as i32, c);
    }
    out
}

/// Product with coefficients truncated at nilpotent degree `bound`.
pub fn mul_nil(a: &NilSeries, b: &NilSeries, bound: u32) -> NilSeries {
    let mut s = ZLaurent::new(a.lo, a.hi);
    s.truncated = a.truncated || b.truncated;
    for (e1, c1) in a.terms() {
        for (e2, c2) in b.terms() {
            s.add_term(e1 + e2, c1.mul_trunc(c2, bound));
        }
    }
    s
}

/// 1/f for f whose nilpotent-degree-0 part is a single term c·z^e.
pub fn inverse_nil(f: &Poly, bound: u32, lo: i32, hi: i32) -> Result<NilSeries> {
    let f0 = f.nil_component(0);
    if f0.len() != 1 {
        return Err(FmError::ZeroLeadingCoefficient);
    }
    let (m, c) = f0.leading().map(|(m, c)| (m.clone(), c.clone())).unwrap();
    if m.0.iter().any(|(v, _)| *v != Var::Z) {
        return Err(FmError::Unsupported(format!("non-nilpotent non-z variable in {f}")));
    }
    let e = m.exp(Var::Z) as i32;
    let cinv = Rational::one() / &c;
    // u = (f - c z^e) / (c z^e) as a Laurent polynomial in z
    let wide = (lo - 64, hi + 64);
    let rest = f - &f0;
    let mut u = ZLaurent::new(wide.0, wide.1);
    for (k, coef) in rest.coeffs_in(Var::Z) {
        u.add_term(k as i32 - e, coef.scale(&cinv));
    }
    let neg_u = u.neg();
    let mut acc = ZLaurent::monomial(0, Poly::one(), wide.0, wide.1);
    let mut term = acc.clone();
    for _ in 0..bound {
        term = mul_nil(&term, &neg_u, bound);
        if term.is_zero() {
            break;
        }
        acc = acc.add(&term);
    }
    let mut out = ZLaurent::new(lo, hi);
    for (k, coef) in acc.terms() {
        out.add_term(k - e, coef.scale(&cinv));
    }
    Ok(out)
}

/// Multiplies a series by a monomial class.
pub fn mul_monomial(a: &NilSeries, m: &Monomial, bound: u32) -> NilSeries {
    a.map(|c| c.mul_monomial(m, &Rational::one()).truncate_nil(bound))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{frac, rat};

    fn x() -> Poly {
        Poly::var(Var::Base(1))
    }

    fn back_check(s: &NilSeries, c: Rational, e: u32) -> NilSeries {
        let f = &x() + &Poly::var(Var::Z).scale(&c);
        let fe = laurent_from_poly(&f.pow(e), s.lo, s.hi + 8);
        mul_nil(&s.with_window(s.lo, s.hi + 8), &fe, 1)
    }

    #[test]
    fn inverse_square_matches_product_back() {
        let s = expand_nilpotent_inverse(&x(), 2, &rat(1), 2, -4, 0).unwrap();
        assert_eq!(s.coeff(-2), Some(&Poly::one()));
        assert_eq!(s.coeff(-3), Some(&x().scale(&rat(-2))));
        let one = back_check(&s, rat(1), 2);
        assert_eq!(one.coeff(0), Some(&Poly::one()));
        assert_eq!(one.terms().count(), 1);
    }

    #[test]
    fn zero_class_gives_pure_power() {
        let s = expand_nilpotent_inverse(&Poly::zero(), 1, &rat(1), 1, -4, 0).unwrap();
        assert_eq!(s.terms().count(), 1);
        assert_eq!(s.coeff(-1), Some(&Poly::one()));
    }

    #[test]
    fn scaled_leading_coefficient() {
        let s = expand_nilpotent_inverse(&x(), 2, &rat(2), 1, -3, 0).unwrap();
        assert_eq!(s.coeff(-1), Some(&Poly::constant(frac(1, 2))));
        assert_eq!(s.coeff(-2), Some(&x().scale(&frac(-1, 4))));
        let one = back_check(&s, rat(2), 1);
        assert_eq!(one.coeff(0), Some(&Poly::one()));
        assert_eq!(one.terms().count(), 1);
    }

    #[test]
    fn general_inverse_agrees_with_binomial_rule() {
        let f = (&x() + &Poly::var(Var::Z)).pow(2);
        let a = inverse_nil(&f, 1, -6, 0).unwrap();
        let b = expand_nilpotent_inverse(&x(), 2, &rat(1), 2, -6, 0).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn zero_leading_coefficient_errors() {
        assert!(expand_nilpotent_inverse(&x(), 2, &rat(0), 1, -3, 0).is_err());
    }
}

//! Truncated Laurent series in z over a coefficient ring.

use std::collections::BTreeMap;
use std::fmt::Debug;

use num_traits::Zero;

use super::paramrat::ParamRat;
use super::poly::Poly;
use super::rational::Rational;

/// Coefficient rings usable in a `ZLaurent`.
pub trait Coeff: Clone + PartialEq + Debug + Send + Sync {
    fn is_zero_c(&self) -> bool;
    fn add_c(&self, o: &Self) -> Self;
    fn mul_c(&self, o: &Self) -> Self;
    fn neg_c(&self) -> Self;
    fn scale_c(&self, c: &Rational) -> Self;
}

impl Coeff for Rational {
    fn is_zero_c(&self) -> bool {
        self.is_zero()
    }
    fn add_c(&self, o: &Self) -> Self {
        self + o
    }
    fn mul_c(&self, o: &Self) -> Self {
        self * o
    }
    fn neg_c(&self) -> Self {
        -self
    }
    fn scale_c(&self, c: &Rational) -> Self {
        self * c
    }
}

impl Coeff for Poly {
    fn is_zero_c(&self) -> bool {
        self.is_zero()
    }
    fn add_c(&self, o: &Self) -> Self {
        self + o
    }
    fn mul_c(&self, o: &Self) -> Self {
        self * o
    }
    fn neg_c(&self) -> Self {
        -self
    }
    fn scale_c(&self, c: &Rational) -> Self {
        self.scale(c)
    }
}

impl Coeff for ParamRat {
    fn is_zero_c(&self) -> bool {
        self.is_zero()
    }
    fn add_c(&self, o: &Self) -> Self {
        self + o
    }
    fn mul_c(&self, o: &Self) -> Self {
        self * o
    }
    fn neg_c(&self) -> Self {
        -self
    }
    fn scale_c(&self, c: &Rational) -> Self {
        self.scale(c)
    }
}

/// Σ_{lo ≤ e ≤ hi} c_e z^e. `truncated` records that nonzero data outside the
/// window was discarded at some point.
#[derive(Clone, Debug, PartialEq)]
pub struct ZLaurent<C: Coeff> {
    pub lo: i32,
    pub hi: i32,
    terms: BTreeMap<i32, C>,
    pub truncated: bool,
}

impl<C: Coeff> ZLaurent<C> {
    pub fn new(lo: i32, hi: i32) -> Self {
        ZLaurent {
            lo,
            hi,
            terms: BTreeMap::new(),
            truncated: false,
        }
    }

    pub fn monomial(e: i32, c: C, lo: i32, hi: i32) -> Self {
        let mut s = ZLaurent::new(lo, hi);
        s.add_term(e, c);
        s
    }

    pub fn add_term(&mut self, e: i32, c: C) {
        if c.is_zero_c() {
            return;
        }
        if e < self.lo || e > self.hi {
            self.truncated = true;
            return;
        }
        match self.terms.get_mut(&e) {
            Some(x) => {
                let s = x.add_c(&c);
                if s.is_zero_c() {
                    self.terms.remove(&e);
                } else {
                    *x = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i32, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: i32) -> Option<&C> {
        self.terms.get(&e)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut s = self.clone();
        s.truncated |= o.truncated;
        for (e, c) in &o.terms {
            s.add_term(*e, c.clone());
        }
        s
    }

    pub fn neg(&self) -> Self {
        self.map(|c| c.neg_c())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    /// Cauchy product truncated to the window of `self`.
    pub fn mul(&self, o: &Self) -> Self {
        let mut s = ZLaurent::new(self.lo, self.hi);
        s.truncated = self.truncated || o.truncated;
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                s.add_term(e1 + e2, c1.mul_c(c2));
            }
        }
        s
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.map(|x| x.scale_c(c))
    }

    /// Multiplies every coefficient by a ring element.
    pub fn mul_coeff(&self, c: &C) -> Self {
        self.map(|x| x.mul_c(c))
    }

    pub fn map(&self, f: impl Fn(&C) -> C) -> Self {
        let mut s = ZLaurent::new(self.lo, self.hi);
        s.truncated = self.truncated;
        for (e, c) in &self.terms {
            s.add_term(*e, f(c));
        }
        s
    }

    pub fn map_into<D: Coeff>(&self, f: impl Fn(&C) -> D) -> ZLaurent<D> {
        let mut s = ZLaurent::new(self.lo, self.hi);
        s.truncated = self.truncated;
        for (e, c) in &self.terms {
            s.add_term(*e, f(c));
        }
        s
    }

    /// Multiplication by z^k.
    pub fn shift(&self, k: i32) -> Self {
        let mut s = ZLaurent::new(self.lo, self.hi);
        s.truncated = self.truncated;
        for (e, c) in &self.terms {
            s.add_term(e + k, c.clone());
        }
        s
    }

    /// Re-truncates to a new window, flagging dropped data.
    pub fn with_window(&self, lo: i32, hi: i32) -> Self {
        let mut s = ZLaurent::new(lo, hi);
        s.truncated = self.truncated;
        for (e, c) in &self.terms {
            s.add_term(*e, c.clone());
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;

    #[test]
    fn truncation_sets_flag() {
        let mut s: ZLaurent<Rational> = ZLaurent::new(-2, 0);
        s.add_term(-1, rat(1));
        assert!(!s.truncated);
        let t = s.mul(&s.clone());
        assert_eq!(t.coeff(-2), Some(&rat(1)));
        let u = t.mul(&s);
        assert!(u.truncated);
        assert!(u.is_zero());
    }

    #[test]
    fn cancelling_terms_are_removed() {
        let mut s: ZLaurent<Rational> = ZLaurent::new(-3, 3);
        s.add_term(1, rat(2));
        s.add_term(1, rat(-2));
        assert!(s.is_zero());
        assert!(!s.truncated);
    }
}

//! Rational functions in the equivariant parameters and z.
//!
//! The denominator is kept as a list of normalized factors so that linear
//! factors can be cancelled by trial division and read off for pole analysis.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::gcd::gcd;
use super::poly::Poly;
use super::rational::Rational;
use super::var::Var;
use crate::error::{FmError, Result};

#[derive(Clone, Debug)]
pub struct ParamRat {
    num: Poly,
    /// Distinct normalized factors: primitive integral, positive leading
    /// coefficient, nonconstant.
    den: Vec<(Poly, u32)>,
}

impl Default for ParamRat {
    fn default() -> Self {
        ParamRat::zero()
    }
}

impl ParamRat {
    pub fn zero() -> Self {
        ParamRat {
            num: Poly::zero(),
            den: Vec::new(),
        }
    }

    pub fn one() -> Self {
        ParamRat::from_poly(Poly::one())
    }

    pub fn from_poly(p: Poly) -> Self {
        ParamRat {
            num: p,
            den: Vec::new(),
        }
    }

    pub fn constant(c: Rational) -> Self {
        ParamRat::from_poly(Poly::constant(c))
    }

    pub fn int(n: i64) -> Self {
        ParamRat::from_poly(Poly::int(n))
    }

    pub fn var(v: Var) -> Self {
        ParamRat::from_poly(Poly::var(v))
    }

    /// Canonical p/q.
    pub fn new(p: Poly, q: Poly) -> Result<Self> {
        if q.is_zero() {
            return Err(FmError::ZeroDenominator);
        }
        let mut r = ParamRat::from_poly(p);
        r.push_den(&q, 1);
        r.cancel();
        Ok(r)
    }

    /// Π f^e over factors with signed exponents, times `scalar`.
    pub fn from_factors(scalar: Rational, factors: &[(Poly, i32)]) -> Result<Self> {
        let mut r = ParamRat::constant(scalar);
        if r.num.is_zero() {
            return Ok(r);
        }
        for (f, e) in factors {
            if *e > 0 {
                r.num = &r.num * &f.pow(*e as u32);
            } else if *e < 0 {
                if f.is_zero() {
                    return Err(FmError::ZeroDenominator);
                }
                r.push_den(f, (-e) as u32);
            }
            if r.num.is_zero() {
                return Ok(ParamRat::zero());
            }
        }
        r.cancel();
        Ok(r)
    }

    fn push_den(&mut self, q: &Poly, e: u32) {
        let (c, f) = q.normalize_factor();
        let cinv = Rational::one() / num_traits::pow(c, e as usize);
        self.num = self.num.scale(&cinv);
        if f.is_constant() || e == 0 {
            return;
        }
        match self.den.iter_mut().find(|(g, _)| *g == f) {
            Some(slot) => slot.1 += e,
            None => {
                self.den.push((f, e));
                self.den.sort();
            }
        }
    }

    fn cancel(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        let mut i = 0;
        while i < self.den.len() {
            let (f, mut e) = self.den[i].clone();
            while e > 0 {
                match self.num.div_exact(&f) {
                    Some(q) => {
                        self.num = q;
                        e -= 1;
                    }
                    None => break,
                }
            }
            if e > 0 && f.total_degree() > 1 {
                let g = gcd(&self.num, &f);
                if !g.is_constant() {
                    // split f^e = g^e (f/g)^e and retry on the pieces
                    let rest = f.div_exact(&g).expect("gcd divides");
                    self.den.remove(i);
                    let mut tmp = ParamRat {
                        num: self.num.clone(),
                        den: std::mem::take(&mut self.den),
                    };
                    tmp.push_den(&g, e);
                    tmp.push_den(&rest, e);
                    *self = tmp;
                    self.cancel();
                    return;
                }
            }
            if e == 0 {
                self.den.remove(i);
            } else {
                self.den[i].1 = e;
                i += 1;
            }
        }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn den_factors(&self) -> &[(Poly, u32)] {
        &self.den
    }

    pub fn denom(&self) -> Poly {
        let mut d = Poly::one();
        for (f, e) in &self.den {
            d = &d * &f.pow(*e);
        }
        d
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_empty() && self.num.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        if self.den.is_empty() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn as_constant(&self) -> Option<Rational> {
        self.as_poly().and_then(|p| p.as_constant())
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.num.contains_var(v) || self.den.iter().any(|(f, _)| f.contains_var(v))
    }

    pub fn scale(&self, c: &Rational) -> ParamRat {
        if c.is_zero() {
            return ParamRat::zero();
        }
        ParamRat {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn mul_poly(&self, p: &Poly) -> ParamRat {
        let mut r = ParamRat {
            num: &self.num * p,
            den: self.den.clone(),
        };
        r.cancel();
        r
    }

    pub fn inv(&self) -> Result<ParamRat> {
        if self.num.is_zero() {
            return Err(FmError::ZeroDenominator);
        }
        let mut r = ParamRat::from_poly(self.denom());
        r.push_den(&self.num, 1);
        r.cancel();
        Ok(r)
    }

    pub fn pow(&self, e: i32) -> Result<ParamRat> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = ParamRat::one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// Substitutes polynomials for variables; errors if a denominator vanishes.
    pub fn subst_map(&self, map: &BTreeMap<Var, Poly>) -> Result<ParamRat> {
        let mut r = ParamRat::from_poly(self.num.subst_map(map));
        for (f, e) in &self.den {
            let g = f.subst_map(map);
            if g.is_zero() {
                return Err(FmError::VanishingDenominator(f.to_string()));
            }
            r.push_den(&g, *e);
        }
        r.cancel();
        Ok(r)
    }

    pub fn subst(&self, v: Var, p: &Poly) -> Result<ParamRat> {
        let mut m = BTreeMap::new();
        m.insert(v, p.clone());
        self.subst_map(&m)
    }

    pub fn map_vars(&self, f: impl Fn(Var) -> Var + Copy) -> ParamRat {
        let mut r = ParamRat::from_poly(self.num.map_vars(f));
        for (g, e) in &self.den {
            r.push_den(&g.map_vars(f), *e);
        }
        r.cancel();
        r
    }

    /// Canonical string: numerator over expanded normalized denominator.
    pub fn canonical(&self) -> String {
        if self.den.is_empty() {
            self.num.to_string()
        } else {
            format!("({})/({})", self.num, self.denom())
        }
    }

    pub fn parse(s: &str) -> Result<ParamRat> {
        super::parse::parse_expr(s)
    }
}

impl PartialEq for ParamRat {
    fn eq(&self, o: &Self) -> bool {
        if self.den == o.den {
            return self.num == o.num;
        }
        &self.num * &o.denom() == &o.num * &self.denom()
    }
}

impl Eq for ParamRat {}

impl fmt::Display for ParamRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.canonical())
    }
}

impl From<Poly> for ParamRat {
    fn from(p: Poly) -> Self {
        ParamRat::from_poly(p)
    }
}

impl<'a> Add<&'a ParamRat> for &'a ParamRat {
    type Output = ParamRat;
    fn add(self, o: &ParamRat) -> ParamRat {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            let mut r = ParamRat {
                num: &self.num + &o.num,
                den: self.den.clone(),
            };
            r.cancel();
            return r;
        }
        // lcm over the factor lists
        let mut lcm: Vec<(Poly, u32)> = self.den.clone();
        for (f, e) in &o.den {
            match lcm.iter_mut().find(|(g, _)| g == f) {
                Some(slot) => slot.1 = slot.1.max(*e),
                None => lcm.push((f.clone(), *e)),
            }
        }
        lcm.sort();
        let cof = |den: &[(Poly, u32)]| {
            let mut c = Poly::one();
            for (f, e) in &lcm {
                let have = den.iter().find(|(g, _)| g == f).map(|x| x.1).unwrap_or(0);
                if *e > have {
                    c = &c * &f.pow(e - have);
                }
            }
            c
        };
        let num = &(&self.num * &cof(&self.den)) + &(&o.num * &cof(&o.den));
        let mut r = ParamRat { num, den: lcm };
        r.cancel();
        r
    }
}

impl Neg for &ParamRat {
    type Output = ParamRat;
    fn neg(self) -> ParamRat {
        ParamRat {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl<'a> Sub<&'a ParamRat> for &'a ParamRat {
    type Output = ParamRat;
    fn sub(self, o: &ParamRat) -> ParamRat {
        self + &(-o)
    }
}

impl<'a> Mul<&'a ParamRat> for &'a ParamRat {
    type Output = ParamRat;
    fn mul(self, o: &ParamRat) -> ParamRat {
        if self.is_zero() || o.is_zero() {
            return ParamRat::zero();
        }
        let mut r = ParamRat {
            num: &self.num * &o.num,
            den: self.den.clone(),
        };
        for (f, e) in &o.den {
            match r.den.iter_mut().find(|(g, _)| g == f) {
                Some(slot) => slot.1 += e,
                None => r.den.push((f.clone(), *e)),
            }
        }
        r.den.sort();
        r.cancel();
        r
    }
}

impl<'a> Div<&'a ParamRat> for &'a ParamRat {
    type Output = ParamRat;
    /// Panics on division by zero; use `inv` for a checked version.
    fn div(self, o: &ParamRat) -> ParamRat {
        let inv = o.inv().expect("division by zero ParamRat");
        Mul::mul(self, &inv)
    }
}

macro_rules! owned_ops {
    ($tr:ident, $f:ident) => {
        impl $tr<ParamRat> for ParamRat {
            type Output = ParamRat;
            fn $f(self, o: ParamRat) -> ParamRat {
                (&self).$f(&o)
            }
        }
        impl<'a> $tr<&'a ParamRat> for ParamRat {
            type Output = ParamRat;
            fn $f(self, o: &ParamRat) -> ParamRat {
                (&self).$f(o)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);
owned_ops!(Div, div);

impl Neg for ParamRat {
    type Output = ParamRat;
    fn neg(self) -> ParamRat {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;
    use proptest::prelude::*;

    fn nu(i: u8) -> Poly {
        Poly::var(Var::Nu(i))
    }

    #[test]
    fn difference_of_squares_cancels() {
        let p = &nu(1).pow(2) - &nu(2).pow(2);
        let q = &nu(1) - &nu(2);
        let r = ParamRat::new(p, q).unwrap();
        assert!(r.is_polynomial());
        assert_eq!(r.numer(), &(&nu(1) + &nu(2)));
    }

    #[test]
    fn zero_over_anything() {
        let r = ParamRat::new(Poly::zero(), &nu(1) + &nu(2)).unwrap();
        assert_eq!(r.canonical(), "0");
        assert!(ParamRat::new(Poly::one(), Poly::zero()).is_err());
    }

    #[test]
    fn sign_normalized_hyp_ratio() {
        let h1 = Poly::var(Var::Root(1, 1));
        let h2 = Poly::var(Var::Root(1, 2));
        let z = Poly::var(Var::Z);
        let a = &(&h1 - &h2) + &z;
        // the k = (1,0) ordered-pair ratio (H1 - H2 + z) / (H2 - H1)
        let r = ParamRat::new(a.clone(), &h2 - &h1).unwrap();
        // independent check: r * (H1 - H2) == -(H1 - H2 + z)
        let back = r.mul_poly(&(&h1 - &h2));
        assert_eq!(back.as_poly().unwrap(), &(-&a));
        assert_eq!(r.den_factors().len(), 1);
        assert_eq!(r.canonical(), "(z - H1_2 + H1_1)/(H1_2 - H1_1)");
        // a common factor (H2 - H1) in numerator and denominator cancels
        let num = &a * &(&h2 - &h1);
        let den = &(&h1 - &h2) * &(&h2 - &h1);
        let s = ParamRat::new(num, den).unwrap();
        assert_eq!(s.mul_poly(&(&h1 - &h2)).as_poly().unwrap(), &a);
    }

    #[test]
    fn canonical_round_trip() {
        let r = ParamRat::new(&nu(1) + &Poly::int(3), (&nu(1) - &nu(2)).scale(&rat(-2))).unwrap();
        let s = r.canonical();
        let back = ParamRat::parse(&s).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.canonical(), s);
    }

    fn small_poly() -> impl Strategy<Value = Poly> {
        proptest::collection::vec((0u32..3, 0u32..3, 0u32..2, -4i64..5), 1..4).prop_map(|ts| {
            let mut p = Poly::zero();
            for (a, b, c, k) in ts {
                let m = &(&Poly::var_pow(Var::Nu(1), a) * &Poly::var_pow(Var::Nu(2), b)) * &Poly::var_pow(Var::Z, c);
                p = &p + &m.scale(&rat(k));
            }
            p
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn field_inverse(a in small_poly(), b in small_poly()) {
            prop_assume!(!a.is_zero() && !b.is_zero());
            let x = ParamRat::new(a.clone(), b.clone()).unwrap();
            let y = ParamRat::new(b, a).unwrap();
            prop_assert!((&x * &y).is_one());
        }

        #[test]
        fn addition_is_exact(a in small_poly(), b in small_poly(), c in small_poly()) {
            prop_assume!(!b.is_zero() && !c.is_zero());
            let x = ParamRat::new(a.clone(), b.clone()).unwrap();
            let y = ParamRat::new(a.clone(), c.clone()).unwrap();
            let s = &x + &y;
            // a/b + a/c == a(b+c)/(bc)
            let expect = ParamRat::new(&a * &(&b + &c), &b * &c).unwrap();
            prop_assert_eq!(s.clone(), expect);
            prop_assert_eq!(&s - &y, x);
        }
    }
}

//! Truncated series in the inverse of a parameter (λ or μ) with
//! z-Laurent coefficients.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::rational::factorial;
use crate::algebra::{Poly, Rational, Var, ZLaurent};
use crate::series::terms::WIDE;

pub type ZPoly = ZLaurent<Poly>;

/// Moves every power of z inside the coefficients into the Laurent exponent.
pub fn poly_to_laurent(p: &Poly) -> ZPoly {
    let mut out = ZLaurent::new(WIDE.0, WIDE.1);
    for (e, c) in p.coeffs_in(Var::Z) {
        out.add_term(e as i32, c);
    }
    out
}

fn normalize(s: &ZPoly) -> ZPoly {
    let mut out = ZLaurent::new(WIDE.0, WIDE.1);
    for (e, c) in s.terms() {
        out = out.add(&poly_to_laurent(c).shift(*e));
    }
    out
}

/// Σ_{0 ≤ j ≤ order} c_j p^{-j}.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvSeries {
    pub order: u32,
    #[serde(with = "coeff_map")]
    pub terms: BTreeMap<u32, ZPoly>,
}

impl InvSeries {
    pub fn zero(order: u32) -> Self {
        InvSeries {
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(order: u32) -> Self {
        let mut s = InvSeries::zero(order);
        s.add_term(0, &poly_to_laurent(&Poly::one()));
        s
    }

    /// Adds c p^{-j}; terms beyond the order are dropped.
    pub fn add_term(&mut self, j: u32, c: &ZPoly) {
        if j > self.order || c.is_zero() {
            return;
        }
        let v = match self.terms.get(&j) {
            Some(x) => x.add(c),
            None => c.clone(),
        };
        if v.is_zero() {
            self.terms.remove(&j);
        } else {
            self.terms.insert(j, v);
        }
    }

    /// Adds a polynomial possibly containing z.
    pub fn add_poly(&mut self, j: u32, p: &Poly) {
        self.add_term(j, &poly_to_laurent(p));
    }

    pub fn coeff(&self, j: u32) -> ZPoly {
        self.terms
            .get(&j)
            .cloned()
            .unwrap_or_else(|| ZLaurent::new(WIDE.0, WIDE.1))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut s = InvSeries::zero(self.order.min(o.order));
        for (j, c) in self.terms.iter().chain(&o.terms) {
            s.add_term(*j, c);
        }
        s
    }

    pub fn neg(&self) -> Self {
        InvSeries {
            order: self.order,
            terms: self.terms.iter().map(|(j, c)| (*j, c.neg())).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut s = InvSeries::zero(self.order);
        for (j, x) in &self.terms {
            s.add_term(*j, &x.scale(c));
        }
        s
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut s = InvSeries::zero(self.order.min(o.order));
        for (i, x) in &self.terms {
            for (j, y) in &o.terms {
                if i + j <= s.order {
                    s.add_term(i + j, &x.mul(y));
                }
            }
        }
        s
    }

    /// exp of a series without constant term, by the finite sum Σ x^n/n!.
    pub fn exp(&self) -> Self {
        assert!(
            !self.terms.contains_key(&0),
            "exponent must vanish at infinite parameter"
        );
        let mut out = InvSeries::one(self.order);
        let mut pow = InvSeries::one(self.order);
        for n in 1..=self.order {
            pow = pow.mul(self);
            if pow.is_zero() {
                break;
            }
            let inv = Rational::from_integer(1.into()) / Rational::from_integer(factorial(n));
            out = out.add(&pow.scale(&inv));
        }
        out
    }

    /// Substitutes polynomials for variables in every coefficient; powers of
    /// z produced by the substitution move into the Laurent exponent.
    pub fn subst_map(&self, map: &BTreeMap<Var, Poly>) -> Self {
        let mut s = InvSeries::zero(self.order);
        for (j, c) in &self.terms {
            s.add_term(*j, &normalize(&c.map(|p| p.subst_map(map))));
        }
        s
    }

    /// Multiplication by p^{-k} (k ≥ 0), truncating.
    pub fn shift(&self, k: u32) -> Self {
        let mut s = InvSeries::zero(self.order);
        for (j, c) in &self.terms {
            s.add_term(j + k, c);
        }
        s
    }
}

mod coeff_map {
    //! Serializes coefficients as "c*z^e" term lists keyed by the power.

    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &BTreeMap<u32, ZPoly>, s: S) -> Result<S::Ok, S::Error> {
        let v: BTreeMap<u32, BTreeMap<i32, String>> = m
            .iter()
            .map(|(j, c)| (*j, c.terms().map(|(e, p)| (*e, p.to_string())).collect()))
            .collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<u32, ZPoly>, D::Error> {
        let v: BTreeMap<u32, BTreeMap<i32, String>> = BTreeMap::deserialize(d)?;
        let mut out = BTreeMap::new();
        for (j, cs) in v {
            let mut z = ZLaurent::new(WIDE.0, WIDE.1);
            for (e, p) in cs {
                let p = crate::algebra::parse::parse_poly(&p).map_err(serde::de::Error::custom)?;
                z.add_term(e, p);
            }
            out.insert(j, z);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{frac, rat};

    #[test]
    fn exp_of_log_one_plus() {
        // exp(log(1 + y p^{-1})) = 1 + y p^{-1}
        let y = Poly::var(Var::Y);
        let mut log = InvSeries::zero(5);
        for n in 1..=5u32 {
            let sign = if n % 2 == 1 { rat(1) } else { rat(-1) };
            log.add_poly(n, &y.pow(n).scale(&(sign / rat(n as i64))));
        }
        let e = log.exp();
        let mut want = InvSeries::one(5);
        want.add_poly(1, &y);
        assert_eq!(e, want);
    }

    #[test]
    fn z_moves_out_of_coefficients() {
        let mut s = InvSeries::zero(2);
        s.add_poly(1, &Poly::var(Var::Y));
        let m = BTreeMap::from([(Var::Y, &Poly::var(Var::Z) + &Poly::int(2))]);
        let t = s.subst_map(&m).coeff(1);
        assert_eq!(t.coeff(1), Some(&Poly::one()));
        assert_eq!(t.coeff(0), Some(&Poly::int(2)));
        let h = s.scale(&frac(1, 2));
        assert_eq!(h.coeff(1).coeff(0), Some(&Poly::var(Var::Y).scale(&frac(1, 2))));
    }
}

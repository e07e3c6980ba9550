//! Sparse multivariate polynomials over the rationals.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::rational::{content_of, fmt_rational, rat, Rational};
use super::var::Var;

/// A monomial: variables with positive exponents, sorted by variable.
///
/// Ordering is lexicographic with the largest variable most significant, so
/// the last key of a `Poly` is its leading term.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var, e: u32) -> Self {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(v, e)])
        }
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exp(&self, v: Var) -> u32 {
        self.0.iter().find(|(w, _)| *w == v).map(|(_, e)| *e).unwrap_or(0)
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &o.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// self / o if o divides self.
    pub fn div(&self, o: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for &(v, e) in &self.0 {
            if j < o.0.len() && o.0[j].0 < v {
                return None;
            }
            if j < o.0.len() && o.0[j].0 == v {
                let f = o.0[j].1;
                j += 1;
                match e.cmp(&f) {
                    Ordering::Less => return None,
                    Ordering::Equal => {}
                    Ordering::Greater => out.push((v, e - f)),
                }
            } else {
                out.push((v, e));
            }
        }
        if j < o.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    pub fn without(&self, v: Var) -> Monomial {
        Monomial(self.0.iter().copied().filter(|(w, _)| *w != v).collect())
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(v, e)| v.degree() * e).sum()
    }

    pub fn nil_degree(&self) -> u32 {
        self.0
            .iter()
            .filter(|(v, _)| v.is_nilpotent())
            .map(|(v, e)| v.degree() * e)
            .sum()
    }

    pub fn total_exp(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn map_vars(&self, f: impl Fn(Var) -> Var) -> Monomial {
        let mut v: Vec<(Var, u32)> = self.0.iter().map(|&(w, e)| (f(w), e)).collect();
        v.sort();
        // merge duplicates produced by non-injective maps
        let mut out: Vec<(Var, u32)> = Vec::with_capacity(v.len());
        for (w, e) in v {
            if let Some(last) = out.last_mut() {
                if last.0 == w {
                    last.1 += e;
                    continue;
                }
            }
            out.push((w, e));
        }
        Monomial(out)
    }
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        let (a, b) = (&self.0, &o.0);
        let (mut i, mut j) = (a.len(), b.len());
        loop {
            match (i, j) {
                (0, 0) => return Ordering::Equal,
                (0, _) => return Ordering::Less,
                (_, 0) => return Ordering::Greater,
                _ => {}
            }
            let (va, ea) = a[i - 1];
            let (vb, eb) = b[j - 1];
            match va.cmp(&vb) {
                Ordering::Greater => return Ordering::Greater,
                Ordering::Less => return Ordering::Less,
                Ordering::Equal => match ea.cmp(&eb) {
                    Ordering::Equal => {
                        i -= 1;
                        j -= 1;
                    }
                    other => return other,
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(v, e)| if *e == 1 { v.to_string() } else { format!("{v}^{e}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Sparse polynomial: monomial → nonzero rational coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Default, PartialOrd, Ord, Hash)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn int(n: i64) -> Self {
        Poly::constant(rat(n))
    }

    pub fn var(v: Var) -> Self {
        Poly::monomial(Monomial::var(v, 1), Rational::one())
    }

    pub fn var_pow(v: Var, e: u32) -> Self {
        Poly::monomial(Monomial::var(v, e), Rational::one())
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Poly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    /// Linear form Σ c_v v + c₀.
    pub fn linear(coeffs: &[(Var, i64)], c0: i64) -> Self {
        let mut p = Poly::int(c0);
        for &(v, c) in coeffs {
            p.add_term(Monomial::var(v, 1), rat(c));
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, Rational> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.contains_key(&Monomial::one()))
    }

    pub fn constant_term(&self) -> Rational {
        self.terms.get(&Monomial::one()).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.is_constant() {
            Some(self.constant_term())
        } else {
            None
        }
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Rational {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(Rational::zero)
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut s = BTreeSet::new();
        for m in self.terms.keys() {
            for (v, _) in &m.0 {
                s.insert(*v);
            }
        }
        s
    }

    pub fn max_var(&self) -> Option<Var> {
        self.terms.keys().filter_map(|m| m.0.last().map(|(v, _)| *v)).max()
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.exp(v) > 0)
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exp(v)).max().unwrap_or(0)
    }

    pub fn min_degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exp(v)).min().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.total_exp()).max().unwrap_or(0)
    }

    /// Maximal weighted degree of nilpotent variables.
    pub fn nil_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.nil_degree()).max().unwrap_or(0)
    }

    pub fn min_nil_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.nil_degree()).min().unwrap_or(0)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(n, a)| (n.mul(m), a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Drops monomials whose nilpotent degree exceeds `bound`.
    pub fn truncate_nil(&self, bound: u32) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.nil_degree() <= bound)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Product truncated at nilpotent degree `bound`.
    pub fn mul_trunc(&self, o: &Poly, bound: u32) -> Poly {
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (m1, c1) in &self.terms {
            let d1 = m1.nil_degree();
            if d1 > bound {
                continue;
            }
            for (m2, c2) in &o.terms {
                if d1 + m2.nil_degree() > bound {
                    continue;
                }
                let m = m1.mul(m2);
                let c = c1 * c2;
                match acc.get_mut(&m) {
                    Some(x) => *x += c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        Poly {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    /// Homogeneous component of the given nilpotent degree.
    pub fn nil_component(&self, d: u32) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.nil_degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// View as a univariate polynomial in `v`.
    pub fn coeffs_in(&self, v: Var) -> BTreeMap<u32, Poly> {
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exp(v);
            out.entry(e).or_default().add_term(m.without(v), c.clone());
        }
        out
    }

    pub fn from_coeffs_in(v: Var, cs: &BTreeMap<u32, Poly>) -> Poly {
        let mut p = Poly::zero();
        for (e, c) in cs {
            let m = Monomial::var(v, *e);
            for (n, a) in &c.terms {
                p.add_term(n.mul(&m), a.clone());
            }
        }
        p
    }

    /// Coefficient of v^e.
    pub fn coeff_of_pow(&self, v: Var, e: u32) -> Poly {
        let mut p = Poly::zero();
        for (m, c) in &self.terms {
            if m.exp(v) == e {
                p.add_term(m.without(v), c.clone());
            }
        }
        p
    }

    /// Substitutes a polynomial for each listed variable.
    pub fn subst_map(&self, map: &BTreeMap<Var, Poly>) -> Poly {
        if map.is_empty() {
            return self.clone();
        }
        let mut cache: HashMap<(Var, u32), Poly> = HashMap::new();
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut rest = Vec::new();
            let mut prod = Poly::constant(c.clone());
            for &(v, e) in &m.0 {
                if let Some(p) = map.get(&v) {
                    let pe = cache.entry((v, e)).or_insert_with(|| p.pow(e)).clone();
                    prod = &prod * &pe;
                } else {
                    rest.push((v, e));
                }
            }
            let rest = Monomial(rest);
            for (n, a) in prod.terms {
                out.add_term(n.mul(&rest), a);
            }
        }
        out
    }

    pub fn subst(&self, v: Var, p: &Poly) -> Poly {
        let mut map = BTreeMap::new();
        map.insert(v, p.clone());
        self.subst_map(&map)
    }

    /// Renames variables (for permutation actions).
    pub fn map_vars(&self, f: impl Fn(Var) -> Var + Copy) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.map_vars(f), c.clone());
        }
        out
    }

    /// Exact division; `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        if d.is_zero() {
            return None;
        }
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&(Rational::one() / c)));
        }
        let (lm, lc) = d.leading().map(|(m, c)| (m.clone(), c.clone()))?;
        let mut rem = self.clone();
        let mut q = Poly::zero();
        while let Some((m, c)) = rem.leading().map(|(m, c)| (m.clone(), c.clone())) {
            let qm = m.div(&lm)?;
            let qc = c / &lc;
            rem = &rem - &d.mul_monomial(&qm, &qc);
            q.add_term(qm, qc);
        }
        Some(q)
    }

    /// Numeric content: gcd of numerators over lcm of denominators.
    pub fn numeric_content(&self) -> Rational {
        content_of(self.terms.values())
    }

    /// self = c · f with f integral, primitive and with positive leading coefficient.
    pub fn normalize_factor(&self) -> (Rational, Poly) {
        if self.is_zero() {
            return (Rational::zero(), Poly::zero());
        }
        let mut c = self.numeric_content();
        if self.leading_coeff().is_negative() {
            c = -c;
        }
        let inv = Rational::one() / &c;
        (c, self.scale(&inv))
    }

    pub fn derivative(&self, v: Var) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exp(v);
            if e == 0 {
                continue;
            }
            let mut n = m.without(v);
            if e > 1 {
                n = n.mul(&Monomial::var(v, e - 1));
            }
            out.add_term(n, c * rat(e as i64));
        }
        out
    }

    /// Evaluates all variables that appear to rationals; missing values error.
    pub fn eval(&self, vals: &BTreeMap<Var, Rational>) -> Option<Rational> {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in &m.0 {
                let x = vals.get(v)?;
                t *= num_traits::pow(x.clone(), *e as usize);
            }
            acc += t;
        }
        Some(acc)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            if m.is_one() {
                write!(f, "{}", fmt_rational(&a))?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", fmt_rational(&a))?;
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let (big, small) = if self.terms.len() >= o.terms.len() {
            (self, o)
        } else {
            (o, self)
        };
        let mut p = big.clone();
        for (m, c) in &small.terms {
            p.add_term(m.clone(), c.clone());
        }
        p
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let mut p = self.clone();
        for (m, c) in &o.terms {
            p.add_term(m.clone(), -c.clone());
        }
        p
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = self.as_constant() {
            return o.scale(&c);
        }
        if let Some(c) = o.as_constant() {
            return self.scale(&c);
        }
        let mut acc: HashMap<Monomial, Rational> = HashMap::with_capacity(self.len() * o.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let m = m1.mul(m2);
                let c = c1 * c2;
                match acc.get_mut(&m) {
                    Some(x) => *x += c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        Poly {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

macro_rules! owned_ops {
    ($tr:ident, $f:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $f(self, o: Poly) -> Poly {
                (&self).$f(&o)
            }
        }
        impl<'a> $tr<&'a Poly> for Poly {
            type Output = Poly;
            fn $f(self, o: &Poly) -> Poly {
                (&self).$f(o)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nu(i: u8) -> Poly {
        Poly::var(Var::Nu(i))
    }

    #[test]
    fn leading_term_uses_largest_variable() {
        let p = &nu(1).pow(3) + &Poly::var(Var::Z);
        let (m, _) = p.leading().unwrap();
        assert_eq!(*m, Monomial::var(Var::Z, 1));
    }

    #[test]
    fn exact_division_by_factor() {
        let a = &nu(1) - &nu(2);
        let b = &nu(1) + &nu(2);
        let p = &a * &b;
        assert_eq!(p.div_exact(&a).unwrap(), b);
        assert!(p.div_exact(&(&nu(1) + &Poly::int(1))).is_none());
    }

    #[test]
    fn substitution_and_display() {
        let p = &nu(1) * &Poly::var(Var::Z);
        let q = p.subst(Var::Z, &(&nu(2) + &Poly::int(1)));
        assert_eq!(q.to_string(), "nu1*nu2 + nu1");
    }

    #[test]
    fn normalize_factor_sign() {
        let p = Poly::linear(&[(Var::Nu(1), 2), (Var::Nu(2), -4)], 0);
        let (c, f) = p.normalize_factor();
        assert_eq!(c, rat(-2));
        assert_eq!(f.to_string(), "2*nu2 - nu1");
    }
}

//! Multivariate polynomial gcd by recursive primitive remainder sequences.

use std::collections::BTreeMap;

use super::poly::Poly;
use super::var::Var;

type Univ = BTreeMap<u32, Poly>;

fn deg(u: &Univ) -> Option<u32> {
    u.keys().next_back().copied()
}

fn lc(u: &Univ) -> &Poly {
    u.values().next_back().expect("nonzero univariate")
}

/// gcd normalized to primitive integer content and positive leading coefficient.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.normalize_factor().1;
    }
    if b.is_zero() {
        return a.normalize_factor().1;
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    // cheap exits for common cases
    if a == b {
        return a.normalize_factor().1;
    }
    if b.total_degree() <= a.total_degree() {
        if a.div_exact(b).is_some() {
            return b.normalize_factor().1;
        }
    } else if b.div_exact(a).is_some() {
        return a.normalize_factor().1;
    }
    let x = match (a.max_var(), b.max_var()) {
        (Some(p), Some(q)) => p.max(q),
        _ => return Poly::one(),
    };
    let g = if !a.contains_var(x) {
        gcd(a, &content(b, x))
    } else if !b.contains_var(x) {
        gcd(&content(a, x), b)
    } else {
        let ca = content(a, x);
        let cb = content(b, x);
        let pa = a.div_exact(&ca).expect("content divides");
        let pb = b.div_exact(&cb).expect("content divides");
        let gc = gcd(&ca, &cb);
        let gp = primitive_prs(&pa, &pb, x);
        &gc * &gp
    };
    g.normalize_factor().1
}

/// Content with respect to `x`: gcd of the coefficients of powers of x.
pub fn content(p: &Poly, x: Var) -> Poly {
    let mut g = Poly::zero();
    for c in p.coeffs_in(x).into_values() {
        g = gcd(&g, &c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn primitive_part(p: &Poly, x: Var) -> Poly {
    // numeric content too, otherwise coefficients grow without bound
    let c = content(p, x);
    p.div_exact(&c).expect("content divides").normalize_factor().1
}

fn prem(a: &Univ, b: &Univ) -> Univ {
    // lc(b)^(deg a - deg b + 1) * a mod b
    let db = deg(b).unwrap();
    let lb = lc(b).clone();
    let mut r = a.clone();
    let mut steps = deg(a).unwrap() + 1 - db;
    while let Some(dr) = deg(&r) {
        if dr < db {
            break;
        }
        let lr = lc(&r).clone();
        let shift = dr - db;
        let mut next: Univ = BTreeMap::new();
        for (e, c) in &r {
            let v = c * &lb;
            if !v.is_zero() {
                next.insert(*e, v);
            }
        }
        for (e, c) in b {
            let v = c * &lr;
            let slot = next.entry(e + shift).or_default();
            *slot = &*slot - &v;
        }
        next.retain(|_, c| !c.is_zero());
        r = next;
        steps = steps.saturating_sub(1);
    }
    if steps > 0 {
        let f = lb.pow(steps);
        for c in r.values_mut() {
            *c = &*c * &f;
        }
    }
    r
}

fn primitive_prs(a: &Poly, b: &Poly, x: Var) -> Poly {
    let (mut a, mut b) = if a.degree_in(x) >= b.degree_in(x) {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    };
    loop {
        if b.is_zero() {
            return primitive_part(&a, x);
        }
        if b.degree_in(x) == 0 {
            return Poly::one();
        }
        let r = prem(&a.coeffs_in(x), &b.coeffs_in(x));
        let r = Poly::from_coeffs_in(x, &r);
        a = b;
        b = if r.is_zero() { r } else { primitive_part(&r, x) };
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;

    fn v(i: u8) -> Poly {
        Poly::var(Var::Nu(i))
    }

    #[test]
    fn gcd_of_products_recovers_common_factor() {
        let f = &(&v(1) - &v(2)) * &(&v(1) + &Poly::var(Var::Z));
        let g = &(&v(1) - &v(2)) * &(&v(3) + &Poly::int(2));
        assert_eq!(gcd(&f, &g), &v(2) - &v(1));
    }

    #[test]
    fn gcd_of_coprime_is_one() {
        let f = &v(1).pow(2) + &Poly::int(1);
        let g = &v(1) + &v(2);
        assert!(gcd(&f, &g).is_one());
    }

    #[test]
    fn gcd_normalizes_scalars() {
        let f = (&v(1) - &v(2)).scale(&rat(-6));
        let g = (&v(1) - &v(2)).pow(2).scale(&rat(4));
        assert_eq!(gcd(&f, &g), &v(2) - &v(1));
    }

    #[test]
    fn nonlinear_common_factor() {
        let q = &(&v(1) * &v(2)) + &Poly::var(Var::Z).pow(2);
        let f = &q * &(&v(1) + &Poly::int(3));
        let g = &q * &(&v(2) - &Poly::var(Var::Z));
        assert_eq!(gcd(&f, &g), q.normalize_factor().1);
    }
}

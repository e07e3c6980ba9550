use std::fmt;

use crate::error::{FmError, Result};

/// Bundle tag used by Chern-class and Chern-character symbols.
pub const BUNDLE_V: u8 = 0;
pub const BUNDLE_Q: u8 = 1;
pub const BUNDLE_E: u8 = 2;

/// A named variable. The derived order is the canonical variable order
/// ν₁ < ν₂ < … < μ < λ < (classes) < y < z.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
pub enum Var {
    /// Torus weight ν_i (1-based).
    Nu(u8),
    /// Twist parameter μ.
    Mu,
    /// Family parameter λ_i^{(m)} (level, index; 1-based).
    Lambda(u8, u8),
    /// Chern root H_i^{(m)} (level, index; 1-based).
    Root(u8, u8),
    /// Base hyperplane class of the i-th projective factor (1-based).
    Base(u8),
    /// Chern class c_j of a bundle.
    Chern(u8, u8),
    /// Chern character ch_l of a bundle.
    Ch(u8, u8),
    /// Operator argument y.
    Y,
    /// Unresolved base-direction derivative symbol z∂_Q.
    DQ,
    /// Loop variable z.
    Z,
}

impl Var {
    /// Cohomological (complex) degree.
    pub fn degree(&self) -> u32 {
        match self {
            Var::Chern(_, j) | Var::Ch(_, j) => *j as u32,
            _ => 1,
        }
    }

    /// Whether the variable is a nilpotent cohomology class.
    pub fn is_nilpotent(&self) -> bool {
        matches!(self, Var::Root(..) | Var::Base(_) | Var::Chern(..) | Var::Ch(..))
    }

    pub fn parse(s: &str) -> Result<Var> {
        let bad = || FmError::Parse(format!("unknown variable '{s}'"));
        let num = |t: &str| t.parse::<u8>().map_err(|_| bad());
        let bundle = |c: char| match c {
            'V' => Ok(BUNDLE_V),
            'Q' => Ok(BUNDLE_Q),
            'E' => Ok(BUNDLE_E),
            _ => Err(bad()),
        };
        match s {
            "mu" => return Ok(Var::Mu),
            "y" => return Ok(Var::Y),
            "z" => return Ok(Var::Z),
            "dQ" => return Ok(Var::DQ),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("nu") {
            return Ok(Var::Nu(num(rest)?));
        }
        if let Some(rest) = s.strip_prefix("lam") {
            let (m, i) = rest.split_once('_').ok_or_else(bad)?;
            return Ok(Var::Lambda(num(m)?, num(i)?));
        }
        if let Some(rest) = s.strip_prefix("ch") {
            let mut cs = rest.chars();
            let b = bundle(cs.next().ok_or_else(bad)?)?;
            return Ok(Var::Ch(b, num(cs.as_str())?));
        }
        if let Some(rest) = s.strip_prefix('c') {
            let mut cs = rest.chars();
            let b = bundle(cs.next().ok_or_else(bad)?)?;
            return Ok(Var::Chern(b, num(cs.as_str())?));
        }
        if let Some(rest) = s.strip_prefix('H') {
            let (m, i) = rest.split_once('_').ok_or_else(bad)?;
            return Ok(Var::Root(num(m)?, num(i)?));
        }
        if let Some(rest) = s.strip_prefix('h') {
            return Ok(Var::Base(num(rest)?));
        }
        Err(bad())
    }
}

fn bundle_char(b: u8) -> char {
    match b {
        BUNDLE_V => 'V',
        BUNDLE_Q => 'Q',
        _ => 'E',
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Nu(i) => write!(f, "nu{i}"),
            Var::Mu => write!(f, "mu"),
            Var::Lambda(m, i) => write!(f, "lam{m}_{i}"),
            Var::Root(m, i) => write!(f, "H{m}_{i}"),
            Var::Base(i) => write!(f, "h{i}"),
            Var::Chern(b, j) => write!(f, "c{}{j}", bundle_char(*b)),
            Var::Ch(b, l) => write!(f, "ch{}{l}", bundle_char(*b)),
            Var::Y => write!(f, "y"),
            Var::DQ => write!(f, "dQ"),
            Var::Z => write!(f, "z"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_follows_canonical_variable_order() {
        assert!(Var::Nu(1) < Var::Nu(2));
        assert!(Var::Nu(9) < Var::Mu);
        assert!(Var::Mu < Var::Lambda(1, 1));
        assert!(Var::Lambda(2, 2) < Var::Root(1, 1));
        assert!(Var::Y < Var::Z);
    }

    #[test]
    fn names_round_trip() {
        for v in [
            Var::Nu(3),
            Var::Mu,
            Var::Lambda(1, 2),
            Var::Root(2, 1),
            Var::Base(1),
            Var::Chern(BUNDLE_Q, 2),
            Var::Ch(BUNDLE_E, 3),
            Var::Y,
            Var::DQ,
            Var::Z,
        ] {
            assert_eq!(Var::parse(&v.to_string()).unwrap(), v);
        }
    }
}

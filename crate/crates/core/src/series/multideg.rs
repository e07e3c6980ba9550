//! Novikov multidegrees.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{FmError, Result};

/// A Novikov degree: base part d_B and fiber part, which is either one entry
/// per level (nonabelian) or one entry per root (abelian).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MultiDeg {
    pub base: Vec<u32>,
    pub fiber: Vec<u32>,
}

impl MultiDeg {
    pub fn new(base: Vec<u32>, fiber: Vec<u32>) -> Self {
        MultiDeg { base, fiber }
    }

    pub fn zero(nb: usize, nf: usize) -> Self {
        MultiDeg {
            base: vec![0; nb],
            fiber: vec![0; nf],
        }
    }

    pub fn total(&self) -> u32 {
        self.base.iter().sum::<u32>() + self.fiber.iter().sum::<u32>()
    }

    /// Entry j of the concatenation (base, fiber).
    pub fn get(&self, j: usize) -> u32 {
        if j < self.base.len() {
            self.base[j]
        } else {
            self.fiber[j - self.base.len()]
        }
    }

    pub fn len(&self) -> usize {
        self.base.len() + self.fiber.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// self − o, if nonnegative.
    pub fn checked_sub(&self, o: &MultiDeg) -> Option<MultiDeg> {
        if self.base.len() != o.base.len() || self.fiber.len() != o.fiber.len() {
            return None;
        }
        let sub =
            |a: &[u32], b: &[u32]| -> Option<Vec<u32>> { a.iter().zip(b).map(|(x, y)| x.checked_sub(*y)).collect() };
        Some(MultiDeg {
            base: sub(&self.base, &o.base)?,
            fiber: sub(&self.fiber, &o.fiber)?,
        })
    }

    pub fn scaled(&self, a: u32) -> MultiDeg {
        MultiDeg {
            base: self.base.iter().map(|x| x * a).collect(),
            fiber: self.fiber.iter().map(|x| x * a).collect(),
        }
    }

    /// Level sums of an abelian fiber part.
    pub fn level_sums(&self, r: &[u32]) -> MultiDeg {
        let mut fiber = Vec::new();
        let mut pos = 0;
        for &rm in r {
            fiber.push(self.fiber[pos..pos + rm as usize].iter().sum());
            pos += rm as usize;
        }
        MultiDeg {
            base: self.base.clone(),
            fiber,
        }
    }

    pub fn parse(s: &str) -> Result<MultiDeg> {
        let bad = || FmError::Parse(format!("bad multidegree '{s}'"));
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(bad)?;
        let (b, f) = inner.split_once('|').ok_or_else(bad)?;
        let nums = |t: &str| -> Result<Vec<u32>> {
            if t.trim().is_empty() {
                return Ok(vec![]);
            }
            t.split(',')
                .map(|x| x.trim().parse::<u32>().map_err(|_| bad()))
                .collect()
        };
        Ok(MultiDeg {
            base: nums(b)?,
            fiber: nums(f)?,
        })
    }
}

impl fmt::Display for MultiDeg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let j = |v: &[u32]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "({}|{})", j(&self.base), j(&self.fiber))
    }
}

/// All vectors of length `n` with entry sum at most `max`.
pub fn vectors_up_to(n: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    fn rec(n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for v in 0..=left {
            cur.push(v);
            rec(n, left - v, cur, out);
            cur.pop();
        }
    }
    rec(n, max, &mut Vec::new(), &mut out);
    out
}

/// All vectors of length `n` with entry sum exactly `s`.
pub fn compositions(n: usize, s: u32) -> Vec<Vec<u32>> {
    vectors_up_to(n, s)
        .into_iter()
        .filter(|v| v.iter().sum::<u32>() == s)
        .collect()
}

/// Multidegrees with base length `nb`, fiber length `nf` and total ≤ dmax.
pub fn degrees_up_to(nb: usize, nf: usize, dmax: u32) -> Vec<MultiDeg> {
    vectors_up_to(nb + nf, dmax)
        .into_iter()
        .map(|v| MultiDeg {
            base: v[..nb].to_vec(),
            fiber: v[nb..].to_vec(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_round_trip() {
        let d = MultiDeg::new(vec![1], vec![2, 0]);
        assert_eq!(d.to_string(), "(1|2,0)");
        assert_eq!(MultiDeg::parse("(1|2,0)").unwrap(), d);
        assert_eq!(MultiDeg::parse("(|3)").unwrap(), MultiDeg::new(vec![], vec![3]));
    }

    #[test]
    fn counts() {
        assert_eq!(degrees_up_to(0, 2, 3).len(), 10);
        assert_eq!(compositions(2, 3).len(), 4);
        let d = MultiDeg::new(vec![], vec![1, 2, 0]);
        assert_eq!(d.level_sums(&[1, 2]).fiber, vec![1, 2]);
    }
}

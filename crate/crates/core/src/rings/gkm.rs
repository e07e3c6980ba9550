//! Torus-fixed points, tangent weights and one-dimensional orbits of flag
//! manifolds and of their abelian tower models.
//!
//! Conventions: the root H_i^{(m)} restricts at a fixed point to ν of the
//! element it labels. A tangent weight is H_i^{(m)}|_α − H_j^{(m+1)}|_α with
//! H_j^{(l+1)} = ν_j, and the conormal weight ρ of an edge is its negative,
//! so a restricted factor H_i − H_j + cz vanishes at z = ρ/c.

use std::collections::BTreeMap;

use crate::algebra::{Poly, Var};
use crate::error::{FmError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GkmVariant {
    /// Partial flag manifold Fl(r_1,…,r_l; N).
    Flag,
    /// Abelian tower of projective bundles with the same root variables.
    ToricFlag,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FixedPoint {
    pub label: String,
    /// Flag: the subsets A_m (sorted). Tower: the maps φ_m as value lists.
    pub data: Vec<Vec<u32>>,
    /// Root variable to its restriction, a single ν.
    pub restriction: BTreeMap<Var, Poly>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    /// Weight of the tangent line at `from` along the edge.
    pub tangent: Poly,
    /// Conormal weight ρ = −tangent.
    pub rho: Poly,
    /// Curve class: per level for flags, per (level, index) for towers.
    pub class: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GkmGraph {
    pub variant: GkmVariant,
    pub n: u32,
    pub r: Vec<u32>,
    pub points: Vec<FixedPoint>,
    pub edges: Vec<Edge>,
    /// Tangent weights from the direct formula, per fixed point.
    pub tangent: Vec<Vec<Poly>>,
    pub dim: u32,
}

pub fn nu(a: u32) -> Poly {
    Poly::var(Var::Nu(a as u8))
}

pub fn validate_flag(r: &[u32], n: u32) -> Result<()> {
    if r.is_empty() {
        return Err(FmError::InvalidFlag("empty rank list".into()));
    }
    let mut prev = 0;
    for &x in r {
        if x <= prev || x >= n {
            return Err(FmError::InvalidFlag(format!(
                "ranks {r:?} must satisfy 0 < r_1 < … < r_l < {n}"
            )));
        }
        prev = x;
    }
    if n > 24 {
        return Err(FmError::InvalidFlag(format!("N = {n} is too large")));
    }
    Ok(())
}

/// Complex dimension Σ r_m (r_{m+1} − r_m) of the flag manifold.
pub fn flag_dim(r: &[u32], n: u32) -> u32 {
    let mut ext = r.to_vec();
    ext.push(n);
    (0..r.len()).map(|m| ext[m] * (ext[m + 1] - ext[m])).sum()
}

/// Complex dimension Σ r_m (r_{m+1} − 1) of the tower.
pub fn tower_dim(r: &[u32], n: u32) -> u32 {
    let mut ext = r.to_vec();
    ext.push(n);
    (0..r.len()).map(|m| ext[m] * (ext[m + 1] - 1)).sum()
}

fn subsets(n: u32, k: u32) -> Vec<Vec<u32>> {
    fn rec(start: u32, n: u32, k: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() as u32 == k {
            out.push(cur.clone());
            return;
        }
        for a in start..=n {
            cur.push(a);
            rec(a + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, n, k, &mut Vec::new(), &mut out);
    out
}

fn chains(r: &[u32], n: u32) -> Vec<Vec<Vec<u32>>> {
    // built from the top level down so each A_m sits inside A_{m+1}
    let mut out: Vec<Vec<Vec<u32>>> = vec![vec![]];
    let mut ext = r.to_vec();
    ext.push(n);
    for m in (0..r.len()).rev() {
        let mut next = Vec::new();
        for ch in &out {
            let parent: Vec<u32> = match ch.first() {
                Some(p) => p.clone(),
                None => (1..=n).collect(),
            };
            for idx in subsets(ext[m + 1], ext[m]) {
                let a: Vec<u32> = idx.iter().map(|&i| parent[i as usize - 1]).collect();
                let mut c = vec![a];
                c.extend(ch.iter().cloned());
                next.push(c);
            }
        }
        out = next;
    }
    out
}

fn flag_label(ch: &[Vec<u32>]) -> String {
    ch.iter()
        .map(|a| format!("{{{}}}", a.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
        .collect::<Vec<_>>()
        .join("<")
}

fn flag_restriction(ch: &[Vec<u32>]) -> BTreeMap<Var, Poly> {
    let mut m = BTreeMap::new();
    for (lvl, a) in ch.iter().enumerate() {
        for (i, &x) in a.iter().enumerate() {
            m.insert(Var::Root(lvl as u8 + 1, i as u8 + 1), nu(x));
        }
    }
    m
}

fn flag_graph(r: &[u32], n: u32) -> GkmGraph {
    let l = r.len();
    let pts_data = chains(r, n);
    let index: BTreeMap<Vec<Vec<u32>>, usize> = pts_data.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
    // block of an element: the first level containing it, or l for none
    let block = |ch: &[Vec<u32>], a: u32| (0..l).find(|&m| ch[m].contains(&a)).unwrap_or(l);
    let mut edges = Vec::new();
    let mut tangent = Vec::new();
    for (i, ch) in pts_data.iter().enumerate() {
        let mut tw = Vec::new();
        let mut full = ch.clone();
        full.push((1..=n).collect());
        for m in 0..l {
            for &a in &full[m] {
                for &b in &full[m + 1] {
                    if !full[m].contains(&b) {
                        tw.push(&nu(a) - &nu(b));
                    }
                }
            }
        }
        tangent.push(tw);
        for a in 1..=n {
            for b in (a + 1)..=n {
                let (ba, bb) = (block(ch, a), block(ch, b));
                if ba == bb {
                    continue;
                }
                let swapped: Vec<Vec<u32>> = ch
                    .iter()
                    .map(|s| {
                        let mut t: Vec<u32> = s
                            .iter()
                            .map(|&x| {
                                if x == a {
                                    b
                                } else if x == b {
                                    a
                                } else {
                                    x
                                }
                            })
                            .collect();
                        t.sort();
                        t
                    })
                    .collect();
                // the element in the earlier block is the one α contains at more levels
                let (p, q) = if ba < bb { (a, b) } else { (b, a) };
                let class = (0..l)
                    .map(|m| (ch[m].contains(&a) != ch[m].contains(&b)) as u32)
                    .collect();
                let t = &nu(p) - &nu(q);
                edges.push(Edge {
                    from: i,
                    to: index[&swapped],
                    rho: -&t,
                    tangent: t,
                    class,
                });
            }
        }
    }
    let points = pts_data
        .iter()
        .map(|ch| FixedPoint {
            label: flag_label(ch),
            restriction: flag_restriction(ch),
            data: ch.clone(),
        })
        .collect();
    GkmGraph {
        variant: GkmVariant::Flag,
        n,
        r: r.to_vec(),
        points,
        edges,
        tangent,
        dim: flag_dim(r, n),
    }
}

fn level_maps(r: &[u32], n: u32) -> Vec<Vec<Vec<u32>>> {
    let mut ext = r.to_vec();
    ext.push(n);
    let mut out: Vec<Vec<Vec<u32>>> = vec![vec![]];
    for m in 0..r.len() {
        let mut next = Vec::new();
        for p in &out {
            // all maps [r_m] → [r_{m+1}]
            let mut maps: Vec<Vec<u32>> = vec![vec![]];
            for _ in 0..ext[m] {
                let mut grown = Vec::new();
                for f in &maps {
                    for v in 1..=ext[m + 1] {
                        let mut g = f.clone();
                        g.push(v);
                        grown.push(g);
                    }
                }
                maps = grown;
            }
            for f in maps {
                let mut q = p.clone();
                q.push(f);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

/// Composite index c_m(i) = φ_l ∘ … ∘ φ_m (i) for level m (0-based).
fn composite(maps: &[Vec<u32>], m: usize, i: u32) -> u32 {
    let mut x = i;
    for f in &maps[m..] {
        x = f[x as usize - 1];
    }
    x
}

fn tower_graph(r: &[u32], n: u32) -> GkmGraph {
    let l = r.len();
    let mut ext = r.to_vec();
    ext.push(n);
    let data = level_maps(r, n);
    let index: BTreeMap<Vec<Vec<u32>>, usize> = data.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
    let slots: Vec<(usize, u32)> = (0..l).flat_map(|m| (1..=ext[m]).map(move |i| (m, i))).collect();
    let value = |maps: &[Vec<u32>], m: usize, j: u32| -> u32 {
        if m == l {
            j
        } else {
            composite(maps, m, j)
        }
    };
    let mut edges = Vec::new();
    let mut tangent = Vec::new();
    for (pi, maps) in data.iter().enumerate() {
        let mut tw = Vec::new();
        for (si, &(m, i)) in slots.iter().enumerate() {
            let here = composite(maps, m, i);
            for j in 1..=ext[m + 1] {
                if j == maps[m][i as usize - 1] {
                    continue;
                }
                let t = &nu(here) - &nu(value(maps, m + 1, j));
                tw.push(t.clone());
                let mut moved = maps.clone();
                moved[m][i as usize - 1] = j;
                let mut class = vec![0; slots.len()];
                class[si] = 1;
                edges.push(Edge {
                    from: pi,
                    to: index[&moved],
                    rho: -&t,
                    tangent: t,
                    class,
                });
            }
        }
        tangent.push(tw);
    }
    let points = data
        .iter()
        .map(|maps| {
            let mut res = BTreeMap::new();
            for &(m, i) in &slots {
                res.insert(Var::Root(m as u8 + 1, i as u8), nu(composite(maps, m, i)));
            }
            FixedPoint {
                label: maps
                    .iter()
                    .map(|f| format!("[{}]", f.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
                    .collect::<Vec<_>>()
                    .join(""),
                data: maps.clone(),
                restriction: res,
            }
        })
        .collect();
    GkmGraph {
        variant: GkmVariant::ToricFlag,
        n,
        r: r.to_vec(),
        points,
        edges,
        tangent,
        dim: tower_dim(r, n),
    }
}

pub fn gkm_data(n: u32, r: &[u32], variant: GkmVariant) -> Result<GkmGraph> {
    validate_flag(r, n)?;
    Ok(match variant {
        GkmVariant::Flag => flag_graph(r, n),
        GkmVariant::ToricFlag => tower_graph(r, n),
    })
}

impl GkmGraph {
    pub fn edges_from(&self, a: usize) -> impl Iterator<Item = &Edge> {
        self.edges.iter().filter(move |e| e.from == a)
    }

    /// Equivariant Euler class of the tangent space at a fixed point.
    pub fn euler(&self, a: usize) -> Poly {
        self.tangent[a].iter().fold(Poly::one(), |acc, w| &acc * w)
    }

    pub fn restrict(&self, f: &Poly, a: usize) -> Poly {
        f.subst_map(&self.points[a].restriction)
    }

    pub fn find_point(&self, label: &str) -> Option<usize> {
        self.points.iter().position(|p| p.label == label)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projective_line_edge() {
        let g = gkm_data(2, &[1], GkmVariant::Flag).unwrap();
        assert_eq!(g.points.len(), 2);
        let a = g.find_point("{1}").unwrap();
        let e: Vec<_> = g.edges_from(a).collect();
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].tangent, &nu(1) - &nu(2));
        assert_eq!(e[0].rho, &nu(2) - &nu(1));
        assert_eq!(e[0].class, vec![1]);
    }

    #[test]
    fn counts_and_valence() {
        for (n, r, v, pts, dim) in [
            (2, vec![1], GkmVariant::Flag, 2, 1),
            (4, vec![2], GkmVariant::Flag, 6, 4),
            (3, vec![1, 2], GkmVariant::Flag, 6, 3),
            (3, vec![1, 2], GkmVariant::ToricFlag, 18, 5),
        ] {
            let g = gkm_data(n, &r, v).unwrap();
            assert_eq!(g.points.len(), pts);
            assert_eq!(g.dim, dim);
            for a in 0..g.points.len() {
                assert_eq!(g.edges_from(a).count() as u32, dim);
                assert_eq!(g.tangent[a].len() as u32, dim);
            }
        }
    }

    #[test]
    fn flag_edges_are_symmetric() {
        let g = gkm_data(3, &[1, 2], GkmVariant::Flag).unwrap();
        for e in &g.edges {
            let back = g
                .edges
                .iter()
                .find(|f| f.from == e.to && f.to == e.from)
                .expect("reverse edge");
            assert_eq!(back.rho, -&e.rho);
            assert_eq!(back.class, e.class);
        }
    }

    #[test]
    fn rejects_bad_ranks() {
        assert!(gkm_data(3, &[2, 1], GkmVariant::Flag).is_err());
        assert!(gkm_data(3, &[3], GkmVariant::Flag).is_err());
    }
}

//! Read-overlap graphs, transitive reduction and the shortest node-covering
//! closed walk.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::genome::{overlap, union, DiploidGenome, ReadSet};
use crate::oracle::{check_conditions_it_with, ItConditions};
use crate::repeats::{CatalogOptions, Placements, RepeatCatalog};

/// Vertices are read ids; `succ[x]` holds `(y, overlap(x, y))`, ascending in `y`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OverlapGraph {
    pub reads: Vec<Vec<u8>>,
    pub succ: Vec<Vec<(u32, u32)>>,
    pub reduced: bool,
}

impl OverlapGraph {
    pub fn len(&self) -> usize {
        self.reads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reads.is_empty()
    }

    pub fn n_edges(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    pub fn weight(&self, x: usize, y: usize) -> Option<usize> {
        self.succ[x]
            .iter()
            .find(|e| e.0 as usize == y)
            .map(|e| e.1 as usize)
    }

    /// `x<TAB>y<TAB>weight` per edge.
    pub fn to_edge_list(&self) -> String {
        let mut s = String::new();
        for (x, out) in self.succ.iter().enumerate() {
            for &(y, w) in out {
                s.push_str(&format!("{x}\t{y}\t{w}\n"));
            }
        }
        s
    }
}

/// An edge `x -> y` for every ordered pair of distinct reads overlapping by
/// at least `min_overlap`.
pub fn build_overlap_graph(rs: &ReadSet, min_overlap: usize) -> OverlapGraph {
    let reads: Vec<Vec<u8>> = rs.iter().map(|r| r.seq.clone()).collect();
    let min_overlap = min_overlap.max(1);
    let succ = (0..reads.len())
        .map(|x| {
            (0..reads.len())
                .filter(|&y| y != x)
                .filter_map(|y| {
                    let o = overlap(&reads[x], &reads[y]);
                    (o >= min_overlap).then_some((y as u32, o as u32))
                })
                .collect()
        })
        .collect();
    OverlapGraph {
        reads,
        succ,
        reduced: false,
    }
}

/// Drops every edge `x -> z` for which some `y` has edges `x -> y -> z` and
/// `union(union(x, y), z) = union(x, z)`. All tests use the input graph.
pub fn transitive_reduction(g: &OverlapGraph) -> OverlapGraph {
    let n = g.len();
    let mut has = vec![vec![false; n]; n];
    for (x, out) in g.succ.iter().enumerate() {
        for &(y, _) in out {
            has[x][y as usize] = true;
        }
    }
    let succ = (0..n)
        .map(|x| {
            g.succ[x]
                .iter()
                .copied()
                .filter(|&(z, _)| {
                    let z = z as usize;
                    let xz = union(&g.reads[x], &g.reads[z]);
                    !g.succ[x].iter().any(|&(y, _)| {
                        let y = y as usize;
                        y != z
                            && has[y][z]
                            && union(&union(&g.reads[x], &g.reads[y]), &g.reads[z]) == xz
                    })
                })
                .collect()
        })
        .collect();
    OverlapGraph {
        reads: g.reads.clone(),
        succ,
        reduced: true,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkOptions {
    /// Largest vertex count accepted by the exact search.
    pub max_vertices: usize,
    /// Search-node budget.
    pub node_limit: u64,
    /// Keep up to this many optimal walks (at least one).
    pub max_optima: usize,
}

impl Default for WalkOptions {
    fn default() -> Self {
        Self {
            max_vertices: 24,
            node_limit: 200_000_000,
            max_optima: 1,
        }
    }
}

/// Minimum-length closed walks. `length` is the spelled length
/// `sum over steps of (|read| - overlap)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkSolution {
    pub length: usize,
    /// Optimal walks starting at vertex 0, closing vertex omitted, in
    /// lexicographic order; the first is the reported walk.
    pub walks: Vec<Vec<usize>>,
}

struct Closure {
    dist: Vec<Vec<u64>>,
    /// Lexicographically smallest shortest path, as next hops.
    next: Vec<Vec<u32>>,
}

const INF: u64 = u64::MAX / 4;

fn closure(g: &OverlapGraph) -> Closure {
    let n = g.len();
    let mut dist = vec![vec![INF; n]; n];
    for (x, out) in g.succ.iter().enumerate() {
        for &(y, w) in out {
            dist[x][y as usize] = (g.reads[y as usize].len() - w as usize) as u64;
        }
    }
    for m in 0..n {
        for a in 0..n {
            if dist[a][m] == INF {
                continue;
            }
            for b in 0..n {
                let c = dist[a][m] + dist[m][b];
                if c < dist[a][b] {
                    dist[a][b] = c;
                }
            }
        }
    }
    let mut next = vec![vec![u32::MAX; n]; n];
    for a in 0..n {
        for b in 0..n {
            if a == b || dist[a][b] == INF {
                continue;
            }
            next[a][b] = g.succ[a]
                .iter()
                .find(|&&(s, w)| {
                    let s = s as usize;
                    let step = (g.reads[s].len() - w as usize) as u64;
                    step + if s == b { 0 } else { dist[s][b] } == dist[a][b]
                })
                .expect("a shortest path leaves through some edge")
                .0;
        }
    }
    Closure { dist, next }
}

impl Closure {
    fn expand(&self, order: &[usize]) -> Vec<usize> {
        let mut walk = Vec::new();
        for i in 0..order.len() {
            let (mut a, b) = (order[i], order[(i + 1) % order.len()]);
            walk.push(a);
            while self.next[a][b] as usize != b {
                a = self.next[a][b] as usize;
                walk.push(a);
            }
        }
        walk
    }
}

struct Search<'a> {
    n: usize,
    closure: &'a Closure,
    min_in: Vec<u64>,
    best: u64,
    /// Smallest optimal walks found so far.
    walks: BTreeSet<Vec<usize>>,
    keep: usize,
    nodes: u64,
    limit: u64,
}

impl Search<'_> {
    fn run(
        &mut self,
        path: &mut Vec<usize>,
        visited: &mut [bool],
        cost: u64,
        rest_bound: u64,
    ) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.limit {
            return Err(Error::BudgetExceeded {
                what: "closed-walk search".into(),
                limit: self.limit as usize,
            });
        }
        let dist = &self.closure.dist;
        let u = *path.last().expect("path starts at 0");
        if path.len() == self.n {
            let total = cost + dist[u][path[0]];
            if total < self.best {
                self.best = total;
                self.walks.clear();
            }
            if total == self.best {
                self.walks.insert(self.closure.expand(path));
                if self.walks.len() > self.keep {
                    self.walks.pop_last();
                }
            }
            return Ok(());
        }
        let mut cands: Vec<usize> = (0..self.n).filter(|&v| !visited[v]).collect();
        cands.sort_by_key(|&v| (dist[u][v], v));
        for v in cands {
            let c = cost + dist[u][v];
            if c + rest_bound - self.min_in[v] > self.best {
                continue;
            }
            visited[v] = true;
            path.push(v);
            self.run(path, visited, c, rest_bound - self.min_in[v])?;
            path.pop();
            visited[v] = false;
        }
        Ok(())
    }
}

/// Exact minimum closed walk visiting every vertex, found as a shortest
/// Hamiltonian cycle over shortest-path distances and expanded back to a walk.
/// Ties go to the lexicographically smallest walk from vertex 0.
pub fn shortest_node_covering_closed_walk(
    g: &OverlapGraph,
    opts: WalkOptions,
) -> Result<WalkSolution> {
    let n = g.len();
    if n == 0 {
        return Err(Error::EmptyReadSet);
    }
    if n > opts.max_vertices {
        return Err(Error::BudgetExceeded {
            what: format!("{n} vertices"),
            limit: opts.max_vertices,
        });
    }
    if n == 1 {
        let length = g.reads[0].len() - overlap(&g.reads[0], &g.reads[0]);
        return Ok(WalkSolution {
            length,
            walks: vec![vec![0]],
        });
    }
    let cl = closure(g);
    if cl
        .dist
        .iter()
        .enumerate()
        .any(|(a, row)| row.iter().enumerate().any(|(b, &d)| a != b && d == INF))
    {
        return Err(Error::NotStronglyConnected);
    }
    let min_in: Vec<u64> = (0..n)
        .map(|v| {
            (0..n)
                .filter(|&u| u != v)
                .map(|u| cl.dist[u][v])
                .min()
                .unwrap_or(0)
        })
        .collect();
    // every tour ends with an edge into 0, so its bound is paid upfront
    let rest: u64 = min_in.iter().sum();
    let keep = opts.max_optima.max(1);
    let mut s = Search {
        n,
        closure: &cl,
        min_in,
        best: INF,
        walks: BTreeSet::new(),
        keep,
        nodes: 0,
        limit: opts.node_limit,
    };
    let mut visited = vec![false; n];
    visited[0] = true;
    s.run(&mut vec![0], &mut visited, 0, rest)?;
    let walks = s.walks.into_iter().collect();
    Ok(WalkSolution {
        length: s.best as usize,
        walks,
    })
}

/// Appends each read past its overlap with the previous
/// one, then drop the closing overlap.
pub fn spell_walk(g: &OverlapGraph, walk: &[usize]) -> Vec<u8> {
    let mut s = g.reads[walk[0]].clone();
    for w in walk.windows(2) {
        let o = overlap(&g.reads[w[0]], &g.reads[w[1]]);
        s.extend_from_slice(&g.reads[w[1]][o..]);
    }
    let last = *walk.last().expect("non-empty walk");
    let o = overlap(&g.reads[last], &g.reads[walk[0]]);
    s.truncate(s.len() - o);
    s
}

fn split(s: Vec<u8>) -> Result<(Vec<u8>, Vec<u8>)> {
    if s.len() % 2 == 1 {
        return Err(Error::OddLength { length: s.len() });
    }
    let g1 = s[s.len() / 2..].to_vec();
    let mut g0 = s;
    g0.truncate(g0.len() / 2);
    Ok((g0, g1))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OlcAssembly {
    pub edges_before_reduction: usize,
    pub edges_after_reduction: usize,
    pub length: usize,
    pub walk: Vec<usize>,
    pub g0: String,
    pub g1: String,
    /// Other optimal walks and their haplotype pairs, when requested.
    pub alternatives: Vec<(Vec<usize>, String, String)>,
}

pub fn overlap_assemble(
    rs: &ReadSet,
    min_overlap: usize,
    opts: WalkOptions,
) -> Result<OlcAssembly> {
    if rs.is_empty() {
        return Err(Error::EmptyReadSet);
    }
    let g = build_overlap_graph(rs, min_overlap);
    let reduced = transitive_reduction(&g);
    let sol = shortest_node_covering_closed_walk(&reduced, opts)?;
    let text = |v: Vec<u8>| String::from_utf8(v).expect("ASCII bases");
    let mut spelled = Vec::new();
    for w in &sol.walks {
        let (a, b) = split(spell_walk(&reduced, w))?;
        spelled.push((w.clone(), text(a), text(b)));
    }
    let (walk, g0, g1) = spelled.remove(0);
    Ok(OlcAssembly {
        edges_before_reduction: g.n_edges(),
        edges_after_reduction: reduced.n_edges(),
        length: sol.length,
        walk,
        g0,
        g1,
        alternatives: spelled,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OlcConditions {
    pub u1: bool,
    /// Every triple repeat is bridged.
    pub u2: bool,
    /// Every double repeat is bridged, except intra doubles whose copies share
    /// a heterozygous locus.
    pub u3: bool,
    pub it: ItConditions,
}

impl OlcConditions {
    pub fn all(&self) -> bool {
        self.u1 && self.u2 && self.u3
    }
}

pub fn check_conditions_overlap(genome: &DiploidGenome, rs: &ReadSet) -> OlcConditions {
    let pl = Placements::from_occurrences(genome, rs);
    let it = check_conditions_it_with(genome, &pl);
    let cat = RepeatCatalog::build_with(
        genome,
        CatalogOptions {
            min_len: 1,
            triples: true,
            ..Default::default()
        },
    );
    let u2 = cat
        .triples
        .iter()
        .all(|t| t.copies.iter().any(|c| pl.is_bridged(c)));
    let u3 = cat
        .doubles
        .iter()
        .filter(|d| !crate::dbg::shares_het_locus(d, genome))
        .all(|d| d.copies.iter().any(|c| pl.is_bridged(c)));
    OlcConditions {
        u1: it.all(),
        u2,
        u3,
        it,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disjoint_reads_have_no_edges() {
        let rs = ReadSet::from_strs(&["AAAA", "CCCC"]).unwrap();
        let g = build_overlap_graph(&rs, 1);
        assert_eq!(g.n_edges(), 0);
        let opts = WalkOptions::default();
        assert!(matches!(
            shortest_node_covering_closed_walk(&g, opts),
            Err(Error::NotStronglyConnected)
        ));
    }

    #[test]
    fn chain_of_three() {
        let rs = ReadSet::from_strs(&["AACCG", "CCGTT", "CGTTA"]).unwrap();
        let g = build_overlap_graph(&rs, 1);
        assert_eq!(g.weight(0, 1), Some(3));
        assert_eq!(g.weight(1, 2), Some(4));
        assert_eq!(g.weight(0, 2), Some(2));
        assert_eq!(g.weight(2, 0), Some(1));
        let r = transitive_reduction(&g);
        assert_eq!(r.weight(0, 2), None);
        assert_eq!(r.weight(0, 1), Some(3));
        assert!(r.reduced);
    }

    #[test]
    fn duplicates_get_symmetric_edges() {
        let rs = ReadSet::from_strs(&["ACAC", "ACAC"]).unwrap();
        let g = build_overlap_graph(&rs, 1);
        assert_eq!(g.weight(0, 1), g.weight(1, 0));
        assert_eq!(g.weight(0, 1), Some(2));
    }

    #[test]
    fn cycle_is_its_own_walk() {
        // all 4-windows of circular ACGTTGCA
        let g = DiploidGenome::homozygous("ACGTTGCA".parse().unwrap());
        let rs = ReadSet::from_placements(&g, 4, (0..8).map(|s| (0u8, s))).unwrap();
        let og = transitive_reduction(&build_overlap_graph(&rs, 1));
        let sol = shortest_node_covering_closed_walk(&og, WalkOptions::default()).unwrap();
        assert_eq!(sol.length, 8);
        assert_eq!(sol.walks[0], (0..8).collect::<Vec<_>>());
        assert_eq!(spell_walk(&og, &sol.walks[0]), b"ACGTTGCA".to_vec());
    }
}

//! Edge-centric de Bruijn graphs, unitig condensation, Euler tour spelling
//! and the de Bruijn reconstruction conditions.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::genome::{DiploidGenome, ReadSet};
use crate::repeats::{CatalogOptions, DoubleRepeat, Placements, RepeatCatalog};

/// k-mers occurring in the reads, sorted, so ids follow label order.
/// An edge joins two k-mers whose (k+1)-mer union occurs in some read.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeBruijnGraph {
    pub k: usize,
    pub kmers: Vec<Vec<u8>>,
    /// Successor ids, ascending.
    pub succ: Vec<Vec<u32>>,
}

/// Maximal unitigs compacted into labelled vertices, sorted by label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CondensedGraph {
    pub k: usize,
    pub labels: Vec<Vec<u8>>,
    pub succ: Vec<Vec<u32>>,
    /// k-mer ids of the de Bruijn path behind each vertex.
    pub origin: Vec<Vec<u32>>,
}

fn in_degrees(succ: &[Vec<u32>]) -> Vec<usize> {
    let mut d = vec![0; succ.len()];
    for out in succ {
        for &v in out {
            d[v as usize] += 1;
        }
    }
    d
}

impl DeBruijnGraph {
    pub fn n_edges(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        in_degrees(&self.succ)
    }

    /// Largest in-degree and largest out-degree.
    pub fn max_degrees(&self) -> (usize, usize) {
        let din = self.in_degrees().into_iter().max().unwrap_or(0);
        let dout = self.succ.iter().map(Vec::len).max().unwrap_or(0);
        (din, dout)
    }

    pub fn id_of(&self, kmer: &[u8]) -> Option<u32> {
        self.kmers
            .binary_search_by(|x| x.as_slice().cmp(kmer))
            .ok()
            .map(|i| i as u32)
    }
}

pub fn build_dbg(rs: &ReadSet, k: usize) -> Result<DeBruijnGraph> {
    let l = rs.read_length();
    if k <= 1 || k >= l {
        return Err(Error::InvalidK { k, read_length: l });
    }
    let mut set: HashSet<&[u8]> = HashSet::new();
    for r in rs.iter() {
        set.extend(r.seq.windows(k));
    }
    let mut kmers: Vec<&[u8]> = set.into_iter().collect();
    kmers.sort_unstable();
    let ids: HashMap<&[u8], u32> = kmers
        .iter()
        .enumerate()
        .map(|(i, &s)| (s, i as u32))
        .collect();
    let mut edges: HashSet<(u32, u32)> = HashSet::new();
    for r in rs.iter() {
        let w: Vec<u32> = r.seq.windows(k).map(|s| ids[s]).collect();
        edges.extend(w.windows(2).map(|p| (p[0], p[1])));
    }
    let mut succ = vec![Vec::new(); kmers.len()];
    for (u, v) in edges {
        succ[u as usize].push(v);
    }
    for s in &mut succ {
        s.sort_unstable();
    }
    Ok(DeBruijnGraph {
        k,
        kmers: kmers.into_iter().map(<[u8]>::to_vec).collect(),
        succ,
    })
}

/// Unitig compaction over labelled vertices whose adjacent labels overlap by
/// `k - 1`. Returns labels, successors and the input vertices per unitig.
fn compact(
    k: usize,
    labels: &[Vec<u8>],
    succ: &[Vec<u32>],
) -> (Vec<Vec<u8>>, Vec<Vec<u32>>, Vec<Vec<u32>>) {
    let n = labels.len();
    let indeg = in_degrees(succ);
    let mut pred = vec![u32::MAX; n];
    for (u, out) in succ.iter().enumerate() {
        for &v in out {
            pred[v as usize] = u as u32;
        }
    }
    // v extends the unitig of its single predecessor
    let continues = |v: usize| {
        indeg[v] == 1 && {
            let p = pred[v] as usize;
            p != v && succ[p].len() == 1
        }
    };
    let mut unit_of = vec![u32::MAX; n];
    let mut groups: Vec<Vec<u32>> = Vec::new();
    let walk = |start: usize, groups: &mut Vec<Vec<u32>>, unit_of: &mut Vec<u32>| {
        let id = groups.len() as u32;
        let mut path = vec![start as u32];
        unit_of[start] = id;
        let mut u = start;
        while succ[u].len() == 1 {
            let v = succ[u][0] as usize;
            if !continues(v) || unit_of[v] != u32::MAX {
                break;
            }
            unit_of[v] = id;
            path.push(v as u32);
            u = v;
        }
        groups.push(path);
    };
    for v in 0..n {
        if !continues(v) {
            walk(v, &mut groups, &mut unit_of);
        }
    }
    // what remains are isolated cycles; start each at its smallest vertex
    for v in 0..n {
        if unit_of[v] == u32::MAX {
            walk(v, &mut groups, &mut unit_of);
        }
    }
    let spell = |path: &[u32]| {
        let mut s = labels[path[0] as usize].clone();
        for &v in &path[1..] {
            s.extend_from_slice(&labels[v as usize][k - 1..]);
        }
        s
    };
    let mut order: Vec<usize> = (0..groups.len()).collect();
    let glabels: Vec<Vec<u8>> = groups.iter().map(|g| spell(g)).collect();
    order.sort_by(|&a, &b| glabels[a].cmp(&glabels[b]));
    let mut rank = vec![0u32; groups.len()];
    for (r, &g) in order.iter().enumerate() {
        rank[g] = r as u32;
    }
    let mut out_succ = vec![Vec::new(); groups.len()];
    for (g, path) in groups.iter().enumerate() {
        let last = *path.last().expect("non-empty unitig") as usize;
        let mut s: Vec<u32> = succ[last]
            .iter()
            .map(|&v| rank[unit_of[v as usize] as usize])
            .collect();
        s.sort_unstable();
        s.dedup();
        out_succ[rank[g] as usize] = s;
    }
    let mut out_labels = vec![Vec::new(); groups.len()];
    let mut out_groups = vec![Vec::new(); groups.len()];
    for (g, (label, path)) in glabels.into_iter().zip(groups).enumerate() {
        out_labels[rank[g] as usize] = label;
        out_groups[rank[g] as usize] = path;
    }
    (out_labels, out_succ, out_groups)
}

pub fn condense(g: &DeBruijnGraph) -> CondensedGraph {
    let (labels, succ, origin) = compact(g.k, &g.kmers, &g.succ);
    CondensedGraph {
        k: g.k,
        labels,
        succ,
        origin,
    }
}

impl CondensedGraph {
    /// Compacts again; a condensed graph is its own fixpoint.
    pub fn condense(&self) -> CondensedGraph {
        let (labels, succ, groups) = compact(self.k, &self.labels, &self.succ);
        let origin = groups
            .iter()
            .map(|path| {
                path.iter()
                    .flat_map(|&v| self.origin[v as usize].iter().copied())
                    .collect()
            })
            .collect();
        CondensedGraph {
            k: self.k,
            labels,
            succ,
            origin,
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn n_edges(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        in_degrees(&self.succ)
    }

    /// Vertices whose in-degree differs from their out-degree.
    pub fn imbalanced(&self) -> Vec<usize> {
        let din = self.in_degrees();
        (0..self.len())
            .filter(|&v| din[v] != self.succ[v].len())
            .collect()
    }

    /// Weakly connected components, each as ascending vertex ids, ordered by
    /// their smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for (u, out) in self.succ.iter().enumerate() {
            for &v in out {
                let (a, b) = (find(&mut parent, u), find(&mut parent, v as usize));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut by_root: Vec<Vec<usize>> = vec![Vec::new(); n];
        for v in 0..n {
            let r = find(&mut parent, v);
            by_root[r].push(v);
        }
        by_root.into_iter().filter(|c| !c.is_empty()).collect()
    }

    /// Plain adjacency text: `id<TAB>label<TAB>successors` per line.
    pub fn to_adjacency_text(&self) -> String {
        let mut s = String::new();
        for (v, label) in self.labels.iter().enumerate() {
            let succ: Vec<String> = self.succ[v].iter().map(u32::to_string).collect();
            s.push_str(&format!(
                "{v}\t{}\t{}\n",
                String::from_utf8_lossy(label),
                succ.join(",")
            ));
        }
        s
    }

    fn check_eulerian(&self, vertices: &[usize]) -> Result<()> {
        let din = self.in_degrees();
        let imbalanced: Vec<usize> = vertices
            .iter()
            .copied()
            .filter(|&v| din[v] != self.succ[v].len())
            .collect();
        if imbalanced.is_empty() {
            Ok(())
        } else {
            Err(Error::NotEulerian { imbalanced })
        }
    }

    /// Hierholzer circuit from `start`, taking successors in label order.
    /// The closing return to `start` is omitted.
    fn euler_circuit(&self, start: usize) -> Vec<usize> {
        let mut next = vec![0usize; self.len()];
        let mut stack = vec![start];
        let mut circuit = Vec::new();
        while let Some(&u) = stack.last() {
            if next[u] < self.succ[u].len() {
                stack.push(self.succ[u][next[u]] as usize);
                next[u] += 1;
            } else {
                circuit.push(stack.pop().expect("non-empty stack"));
            }
        }
        circuit.reverse();
        circuit.pop();
        circuit
    }

    /// Algorithm-2 spelling of a tour given without its closing vertex.
    pub fn spell_tour(&self, tour: &[usize]) -> Vec<u8> {
        let k = self.k;
        let mut s = self.labels[tour[0]].clone();
        for &v in &tour[1..] {
            s.extend_from_slice(&self.labels[v][k - 1..]);
        }
        s.truncate(s.len() - (k - 1));
        s
    }

    /// Up to `limit` distinct Euler circuits of a connected component,
    /// starting at its smallest vertex, in lexicographic order of vertex
    /// sequences. Stops early after `step_budget` search steps.
    pub fn euler_tours(&self, limit: usize, step_budget: u64) -> Result<Vec<Vec<usize>>> {
        let comps = self.components();
        if comps.len() != 1 {
            return Err(Error::Disconnected {
                components: comps.len(),
            });
        }
        self.check_eulerian(&comps[0])?;
        let m = self.n_edges();
        let mut used: Vec<Vec<bool>> = self.succ.iter().map(|s| vec![false; s.len()]).collect();
        let mut path = vec![0usize];
        let mut out = Vec::new();
        let mut steps = 0u64;
        self.tours_from(
            0,
            m,
            &mut used,
            &mut path,
            &mut out,
            limit,
            &mut steps,
            step_budget,
        );
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn tours_from(
        &self,
        u: usize,
        remaining: usize,
        used: &mut Vec<Vec<bool>>,
        path: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        limit: usize,
        steps: &mut u64,
        budget: u64,
    ) {
        *steps += 1;
        if out.len() >= limit || *steps > budget {
            return;
        }
        if remaining == 0 {
            if u == path[0] {
                out.push(path[..path.len() - 1].to_vec());
            }
            return;
        }
        for i in 0..self.succ[u].len() {
            if used[u][i] {
                continue;
            }
            let v = self.succ[u][i] as usize;
            used[u][i] = true;
            path.push(v);
            self.tours_from(v, remaining - 1, used, path, out, limit, steps, budget);
            path.pop();
            used[u][i] = false;
        }
    }
}

/// Spells the haplotypes from a condensed graph.
///
/// One component: spell an Euler circuit from the smallest vertex and split
/// it in half; a component that is a single cycle carries no heterozygous
/// locus and is returned as both haplotypes. Two components: each spells one
/// haplotype.
pub fn euler_spell(gc: &CondensedGraph) -> Result<(Vec<u8>, Vec<u8>)> {
    euler_spell_with_tour(gc).map(|(g0, g1, _)| (g0, g1))
}

fn is_single_cycle(gc: &CondensedGraph, comp: &[usize]) -> bool {
    comp.len() == 1 && gc.succ[comp[0]] == [comp[0] as u32]
}

fn euler_spell_with_tour(gc: &CondensedGraph) -> Result<(Vec<u8>, Vec<u8>, Vec<usize>)> {
    let comps = gc.components();
    match comps.as_slice() {
        [c] => {
            gc.check_eulerian(c)?;
            let tour = gc.euler_circuit(c[0]);
            let s = gc.spell_tour(&tour);
            if is_single_cycle(gc, c) {
                return Ok((s.clone(), s, tour));
            }
            if s.len() % 2 == 1 {
                return Err(Error::OddLength { length: s.len() });
            }
            let g1 = s[s.len() / 2..].to_vec();
            let mut g0 = s;
            g0.truncate(g0.len() / 2);
            Ok((g0, g1, tour))
        }
        [a, b] => {
            gc.check_eulerian(a)?;
            gc.check_eulerian(b)?;
            let (ta, tb) = (gc.euler_circuit(a[0]), gc.euler_circuit(b[0]));
            let (sa, sb) = (gc.spell_tour(&ta), gc.spell_tour(&tb));
            let tour = ta.into_iter().chain(tb).collect();
            Ok((sa, sb, tour))
        }
        _ => Err(Error::Disconnected {
            components: comps.len(),
        }),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DbgAssembly {
    pub k: usize,
    pub kmers: usize,
    pub edges: usize,
    pub max_in_degree: usize,
    pub max_out_degree: usize,
    pub condensed_vertices: usize,
    pub condensed_edges: usize,
    pub components: usize,
    /// Condensed vertex ids in tour order, closing vertex omitted.
    pub tour: Vec<usize>,
    pub g0: String,
    pub g1: String,
}

/// Build, condense and spell.
pub fn dbg_assemble(rs: &ReadSet, k: usize) -> Result<DbgAssembly> {
    let g = build_dbg(rs, k)?;
    let gc = condense(&g);
    let (g0, g1, tour) = euler_spell_with_tour(&gc)?;
    let (max_in_degree, max_out_degree) = g.max_degrees();
    let text = |v: Vec<u8>| String::from_utf8(v).expect("ASCII bases");
    Ok(DbgAssembly {
        k,
        kmers: g.kmers.len(),
        edges: g.n_edges(),
        max_in_degree,
        max_out_degree,
        condensed_vertices: gc.len(),
        condensed_edges: gc.n_edges(),
        components: gc.components().len(),
        tour,
        g0: text(g0),
        g1: text(g1),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DbgConditions {
    /// k exceeds every double repeat.
    pub d1: bool,
    /// Every (k+1)-substring of both haplotypes lies in a read.
    pub d2: bool,
    /// k exceeds every double repeat except intra doubles whose copies share
    /// a heterozygous locus.
    pub n1: bool,
    pub n2: bool,
    pub special_case_bound: usize,
    pub special_case_ok: bool,
}

impl DbgConditions {
    pub fn sufficient(&self) -> bool {
        self.d1 && self.d2
    }

    pub fn necessary(&self) -> bool {
        self.n1 && self.n2 && self.special_case_ok
    }
}

/// Both copies lie on one haplotype and contain a common heterozygous locus.
pub fn shares_het_locus(d: &DoubleRepeat, genome: &DiploidGenome) -> bool {
    if !d.is_intra() {
        return false;
    }
    let [a, b] = d.copies;
    let len = d.len();
    genome
        .het_loci()
        .iter()
        .any(|&p| genome.cw(a.start, p) < len && genome.cw(b.start, p) < len)
}

/// `max((max_{i<m} g_i) + 1, d)` for one shared-locus intra double, where
/// the union of the copies covers loci `L_1..L_m` and `d` runs from `L_m`
/// to the end of the later copy, both inclusive.
pub fn special_case_requirement(d: &DoubleRepeat, genome: &DiploidGenome) -> Option<usize> {
    if !shares_het_locus(d, genome) {
        return None;
    }
    let len = d.len();
    let [a, b] = d.copies;
    let (r1, r2) = if genome.cw(a.start, b.start) < len {
        (a, b)
    } else {
        (b, a)
    };
    let span = genome.cw(r1.start, r2.start) + len;
    let mut offsets: Vec<usize> = genome
        .het_loci()
        .iter()
        .map(|&p| genome.cw(r1.start, p))
        .filter(|&o| o < span)
        .collect();
    offsets.sort_unstable();
    let last = *offsets.last().expect("shared locus lies in the union");
    let interior = offsets.windows(2).map(|w| w[1] - w[0]).max().unwrap_or(0);
    Some(interior.max(span - last))
}

/// Largest special-case requirement over all shared-locus intra doubles, or
/// 0 when there is none.
pub fn special_case_k_bound(genome: &DiploidGenome) -> usize {
    let cat = RepeatCatalog::build_with(
        genome,
        CatalogOptions {
            min_len: 1,
            ..Default::default()
        },
    );
    cat.doubles
        .iter()
        .filter_map(|d| special_case_requirement(d, genome))
        .max()
        .unwrap_or(0)
}

pub fn check_conditions_dbg(
    genome: &DiploidGenome,
    rs: &ReadSet,
    k: usize,
) -> Result<DbgConditions> {
    let l = rs.read_length();
    if k <= 1 || k >= l {
        return Err(Error::InvalidK { k, read_length: l });
    }
    let long = RepeatCatalog::build_with(
        genome,
        CatalogOptions {
            min_len: k,
            ..Default::default()
        },
    );
    let d1 = long.doubles.is_empty();
    let n1 = long.doubles.iter().all(|d| shares_het_locus(d, genome));
    let pl = Placements::from_occurrences(genome, rs);
    let d2 = pl.covers_all_windows(k + 1);
    let bound = special_case_k_bound(genome);
    Ok(DbgConditions {
        d1,
        d2,
        n1,
        n2: d2,
        special_case_bound: bound,
        special_case_ok: k >= bound,
    })
}

//! Greedy suffix-prefix merging with diploid post-processing, anchor reads
//! and the conditions under which greedy merging recovers both haplotypes.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::genome::{overlap, DiploidGenome, ReadSet};
use crate::oracle::{check_conditions_it_with, ItConditions};
use crate::repeats::{is_well_bridged, CatalogOptions, Placements, RepeatCatalog};

/// One merge: string `src` absorbed string `dst` over `overlap` symbols.
/// Strings are named after their first read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Merge {
    pub src: usize,
    pub dst: usize,
    pub overlap: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum GreedyOutcome {
    Assembled {
        g0: String,
        g1: String,
    },
    /// Merging stopped with more than two strings.
    Fragmented {
        strings: usize,
    },
    /// A single string whose length minus its self-overlap is odd.
    OddLength {
        length: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GreedyConditions {
    pub g1: bool,
    pub g2: bool,
    pub g3a: bool,
    pub g3b: bool,
    pub it: ItConditions,
}

impl GreedyConditions {
    pub fn all(&self) -> bool {
        self.g1 && self.g2 && self.g3a && self.g3b
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GreedyReport {
    pub outcome: GreedyOutcome,
    pub merge_trace: Vec<Merge>,
    /// Strings left when merging stopped, by id.
    pub final_strings: Vec<String>,
    /// Self-overlap of the single remaining string.
    pub alpha: Option<usize>,
    /// Two remaining strings whose trimmed lengths differ.
    pub unequal_lengths: bool,
    pub condition_flags: Option<GreedyConditions>,
}

impl GreedyReport {
    pub fn haplotypes(&self) -> Result<(Vec<u8>, Vec<u8>)> {
        match &self.outcome {
            GreedyOutcome::Assembled { g0, g1 } => {
                Ok((g0.clone().into_bytes(), g1.clone().into_bytes()))
            }
            GreedyOutcome::Fragmented { strings } => Err(Error::Fragmented { strings: *strings }),
            GreedyOutcome::OddLength { length } => Err(Error::OddLength { length: *length }),
        }
    }
}

const BASE: u64 = 0x9E37_79B9_7F4A_7C15;

/// Rolling hashes of every length-`w` window of `s`.
fn window_hashes(s: &[u8], w: usize) -> Vec<u64> {
    if w == 0 || s.len() < w {
        return vec![];
    }
    let top = (1..w).fold(1u64, |p, _| p.wrapping_mul(BASE));
    let mut h = s[..w]
        .iter()
        .fold(0u64, |h, &c| h.wrapping_mul(BASE).wrapping_add(c as u64));
    let mut out = Vec::with_capacity(s.len() - w + 1);
    out.push(h);
    for i in w..s.len() {
        h = h
            .wrapping_sub((s[i - w] as u64).wrapping_mul(top))
            .wrapping_mul(BASE)
            .wrapping_add(s[i] as u64);
        out.push(h);
    }
    out
}

/// Exact read-level overlaps between distinct read strings, `out[a]` listing
/// `(overlap, b)` for every `b` with positive `overlap(a, b)`.
fn string_overlaps(strs: &[&[u8]], l: usize) -> Vec<Vec<(usize, u32)>> {
    let d = strs.len();
    let mut by_prefix: Vec<HashMap<u64, Vec<u32>>> = vec![HashMap::new(); l];
    for (b, s) in strs.iter().enumerate() {
        let mut h = 0u64;
        for t in 1..l {
            h = h.wrapping_mul(BASE).wrapping_add(s[t - 1] as u64);
            by_prefix[t].entry(h).or_default().push(b as u32);
        }
    }
    let mut seen = vec![usize::MAX; d];
    let mut out = vec![Vec::new(); d];
    for (a, s) in strs.iter().enumerate() {
        let mut h = 0u64;
        let mut pw = 1u64;
        let mut suffix_hash = vec![0u64; l];
        for t in 1..l {
            h = h.wrapping_add((s[l - t] as u64).wrapping_mul(pw));
            pw = pw.wrapping_mul(BASE);
            suffix_hash[t] = h;
        }
        for t in (1..l).rev() {
            let Some(hits) = by_prefix[t].get(&suffix_hash[t]) else {
                continue;
            };
            for &b in hits {
                if seen[b as usize] != a && s[l - t..] == strs[b as usize][..t] {
                    seen[b as usize] = a;
                    out[a].push((t, b));
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    /// Overlap below the read length; valid while `src` still ends in read `last`.
    Read { last: u32 },
    /// Overlap of at least a read length; valid while neither string changed.
    Long { vs: u32, vd: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Cand {
    t: usize,
    src: u32,
    dst: u32,
    kind: Kind,
}

impl Cand {
    fn key(&self) -> (usize, Reverse<u32>, Reverse<u32>) {
        (self.t, Reverse(self.src), Reverse(self.dst))
    }
}

impl Ord for Cand {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for Cand {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

struct Merger<'a> {
    l: usize,
    reads: &'a ReadSet,
    sid: Vec<u32>,
    reads_of: Vec<Vec<u32>>,
    out: Vec<Vec<(usize, u32)>>,
    strs_by_hash: HashMap<u64, Vec<u32>>,
    seq: Vec<Vec<u8>>,
    last: Vec<u32>,
    alive: Vec<bool>,
    version: Vec<u32>,
    /// Live strings by the string id of their first / last read.
    first_by: Vec<Vec<u32>>,
    last_by: Vec<Vec<u32>>,
    heap: BinaryHeap<Cand>,
}

impl<'a> Merger<'a> {
    fn new(reads: &'a ReadSet) -> Self {
        let l = reads.read_length();
        let mut ids: HashMap<&[u8], u32> = HashMap::new();
        let mut strs: Vec<&[u8]> = Vec::new();
        let sid: Vec<u32> = reads
            .iter()
            .map(|r| {
                *ids.entry(&r.seq[..]).or_insert_with(|| {
                    strs.push(&r.seq[..]);
                    strs.len() as u32 - 1
                })
            })
            .collect();
        let mut reads_of = vec![Vec::new(); strs.len()];
        for (r, &s) in sid.iter().enumerate() {
            reads_of[s as usize].push(r as u32);
        }
        let out = string_overlaps(&strs, l);
        let mut strs_by_hash: HashMap<u64, Vec<u32>> = HashMap::new();
        for (i, s) in strs.iter().enumerate() {
            strs_by_hash
                .entry(window_hashes(s, l)[0])
                .or_default()
                .push(i as u32);
        }
        let m = reads.len();
        let mut first_by = vec![Vec::new(); strs.len()];
        let mut last_by = vec![Vec::new(); strs.len()];
        for r in 0..m {
            first_by[sid[r] as usize].push(r as u32);
            last_by[sid[r] as usize].push(r as u32);
        }
        Self {
            l,
            reads,
            sid,
            reads_of,
            out,
            strs_by_hash,
            seq: reads.iter().map(|r| r.seq.clone()).collect(),
            last: (0..m as u32).collect(),
            alive: vec![true; m],
            version: vec![0; m],
            first_by,
            last_by,
            heap: BinaryHeap::new(),
        }
    }

    fn push_read_level(&mut self, src: u32) {
        let last = self.last[src as usize];
        for &(t, b) in &self.out[self.sid[last as usize] as usize] {
            for &d in &self.reads_of[b as usize] {
                if d != src && self.alive[d as usize] {
                    self.heap.push(Cand {
                        t,
                        src,
                        dst: d,
                        kind: Kind::Read { last },
                    });
                }
            }
        }
    }

    /// Strings matching the window of `s` at each position.
    fn window_matches<'s>(&'s self, s: &'s [u8]) -> impl Iterator<Item = (usize, u32)> + 's {
        window_hashes(s, self.l)
            .into_iter()
            .enumerate()
            .flat_map(move |(p, h)| {
                self.strs_by_hash
                    .get(&h)
                    .into_iter()
                    .flatten()
                    .filter_map(move |&sid| {
                        let r = self.reads_of[sid as usize][0];
                        (self.reads.get(r as usize).seq[..] == s[p..p + self.l]).then_some((p, sid))
                    })
            })
    }

    /// Overlaps of at least `l` between string `x` and every other live string.
    fn push_long(&mut self, x: u32) {
        let s = &self.seq[x as usize];
        let n = s.len();
        let mut found: Vec<Cand> = Vec::new();
        let mut best_out: HashMap<u32, usize> = HashMap::new();
        let mut best_in: HashMap<u32, usize> = HashMap::new();
        for (p, sid) in self.window_matches(s) {
            // x as source: another string starts with this window
            if p > 0 {
                let t = n - p;
                for &y in &self.first_by[sid as usize] {
                    if y == x || t >= self.seq[y as usize].len() || best_out.contains_key(&y) {
                        continue;
                    }
                    if s[p..] == self.seq[y as usize][..t] {
                        best_out.insert(y, t);
                    }
                }
            }
            // x as target: another string ends with this window
            let t = p + self.l;
            if t < n {
                for &y in &self.last_by[sid as usize] {
                    let ys = &self.seq[y as usize];
                    if y == x || t >= ys.len() {
                        continue;
                    }
                    if ys[ys.len() - t..] == s[..t] {
                        let e = best_in.entry(y).or_insert(0);
                        *e = (*e).max(t);
                    }
                }
            }
        }
        let vx = self.version[x as usize];
        for (y, t) in best_out {
            found.push(Cand {
                t,
                src: x,
                dst: y,
                kind: Kind::Long {
                    vs: vx,
                    vd: self.version[y as usize],
                },
            });
        }
        for (y, t) in best_in {
            found.push(Cand {
                t,
                src: y,
                dst: x,
                kind: Kind::Long {
                    vs: self.version[y as usize],
                    vd: vx,
                },
            });
        }
        self.heap.extend(found);
    }

    fn valid(&self, c: &Cand) -> bool {
        let (s, d) = (c.src as usize, c.dst as usize);
        if s == d || !self.alive[s] || !self.alive[d] {
            return false;
        }
        match c.kind {
            Kind::Read { last } => self.last[s] == last,
            Kind::Long { vs, vd } => self.version[s] == vs && self.version[d] == vd,
        }
    }

    fn remove(list: &mut Vec<u32>, x: u32) {
        if let Some(i) = list.iter().position(|&y| y == x) {
            list.swap_remove(i);
        }
    }

    fn merge(&mut self, c: Cand) {
        let (s, d) = (c.src as usize, c.dst as usize);
        let tail = std::mem::take(&mut self.seq[d]);
        debug_assert_eq!(self.seq[s][self.seq[s].len() - c.t..], tail[..c.t]);
        self.seq[s].extend_from_slice(&tail[c.t..]);
        self.alive[d] = false;
        Self::remove(&mut self.first_by[self.sid[d] as usize], c.dst);
        let (old_last, new_last) = (self.last[s], self.last[d]);
        Self::remove(
            &mut self.last_by[self.sid[old_last as usize] as usize],
            c.src,
        );
        Self::remove(
            &mut self.last_by[self.sid[new_last as usize] as usize],
            c.dst,
        );
        self.last_by[self.sid[new_last as usize] as usize].push(c.src);
        self.last[s] = new_last;
        self.version[s] += 1;
        self.push_read_level(c.src);
        self.push_long(c.src);
    }
}

/// Runs greedy merging and the diploid post-processing.
pub fn greedy_assemble(rs: &ReadSet) -> Result<GreedyReport> {
    if rs.is_empty() {
        return Err(Error::EmptyReadSet);
    }
    let mut m = Merger::new(rs);
    for r in 0..rs.len() as u32 {
        m.push_read_level(r);
    }
    let mut trace = Vec::new();
    let mut live = rs.len();
    while live > 1 {
        let Some(c) = m.heap.pop() else { break };
        if !m.valid(&c) {
            continue;
        }
        trace.push(Merge {
            src: c.src as usize,
            dst: c.dst as usize,
            overlap: c.t,
        });
        m.merge(c);
        live -= 1;
    }
    let finals: Vec<Vec<u8>> = (0..rs.len())
        .filter(|&i| m.alive[i])
        .map(|i| std::mem::take(&mut m.seq[i]))
        .collect();
    Ok(finish(finals, trace))
}

fn finish(finals: Vec<Vec<u8>>, merge_trace: Vec<Merge>) -> GreedyReport {
    let text = |v: &[u8]| String::from_utf8(v.to_vec()).expect("ASCII bases");
    let mut report = GreedyReport {
        outcome: GreedyOutcome::Fragmented {
            strings: finals.len(),
        },
        merge_trace,
        final_strings: finals.iter().map(|s| text(s)).collect(),
        alpha: None,
        unequal_lengths: false,
        condition_flags: None,
    };
    match finals.as_slice() {
        [x] => {
            let alpha = overlap(x, x);
            let m = x.len() - alpha;
            report.alpha = Some(alpha);
            report.outcome = if m % 2 == 1 {
                GreedyOutcome::OddLength { length: m }
            } else {
                GreedyOutcome::Assembled {
                    g0: text(&x[..m / 2]),
                    g1: text(&x[m / 2..m]),
                }
            };
        }
        [y0, y1] => {
            let g0 = &y0[..y0.len() - overlap(y0, y0)];
            let g1 = &y1[..y1.len() - overlap(y1, y1)];
            report.unequal_lengths = g0.len() != g1.len();
            report.outcome = GreedyOutcome::Assembled {
                g0: text(g0),
                g1: text(g1),
            };
        }
        _ => {}
    }
    report
}

/// Extremal reads around each pair of adjacent loci `(L_i, L_{i+1})`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Anchors {
    /// Read ids covering `L_i` on h0 / h1 that reach farthest clockwise.
    pub x1: usize,
    pub x2: usize,
    /// Read ids covering `L_{i+1}` on h0 / h1 that reach farthest anticlockwise.
    pub x3: usize,
    pub x4: usize,
    /// Start offsets of the four reads relative to `L_i`.
    pub offsets: [isize; 4],
}

pub type AnchorReads = Vec<Anchors>;

/// Anchor reads for every locus pair, with reads placed at every occurrence.
pub fn enumerate_anchor_reads(genome: &DiploidGenome, rs: &ReadSet) -> Result<AnchorReads> {
    anchors_with(genome, &Placements::from_occurrences(genome, rs))
}

pub fn anchors_with(genome: &DiploidGenome, pl: &Placements) -> Result<AnchorReads> {
    let loci = genome.het_loci();
    let n = genome.len();
    let l = pl.read_length();
    let k = loci.len();
    let mut out = Vec::with_capacity(k);
    for i in 0..k {
        let (a, b) = (loci[i], loci[(i + 1) % k]);
        let next = if k == 1 { n } else { genome.cw(a, b) };
        let pick = |hap: u8, locus: usize, latest: bool| -> Result<(usize, isize)> {
            for d in 0..l {
                let start = if latest {
                    locus + n - d
                } else {
                    locus + n + 1 + d - l
                };
                if let Some(id) = pl.read_at(hap, start % n) {
                    let rel = if latest {
                        -(d as isize)
                    } else {
                        next as isize + 1 + d as isize - l as isize
                    };
                    return Ok((id, rel));
                }
            }
            Err(Error::UncoveredLocus {
                locus,
                haplotype: hap,
            })
        };
        let (x1, o1) = pick(0, a, true)?;
        let (x2, o2) = pick(1, a, true)?;
        let (x3, o3) = pick(0, b, false)?;
        let (x4, o4) = pick(1, b, false)?;
        out.push(Anchors {
            x1,
            x2,
            x3,
            x4,
            offsets: [o1, o2, o3, o4],
        });
    }
    Ok(out)
}

/// Two placed reads share at least one position, or are the same read.
fn anchored_overlap(a: (usize, isize), b: (usize, isize), l: usize) -> bool {
    a.0 == b.0 || (a.1 - b.1).unsigned_abs() < l
}

/// G1-G3 with reads placed at every exact occurrence. G3a compares the
/// placed extents of the anchor reads.
pub fn check_conditions_greedy(genome: &DiploidGenome, rs: &ReadSet) -> GreedyConditions {
    let pl = Placements::from_occurrences(genome, rs);
    let it = check_conditions_it_with(genome, &pl);
    let l = rs.read_length();
    let g3a = match anchors_with(genome, &pl) {
        Ok(anchors) => {
            !anchors.is_empty()
                && anchors.iter().all(|x| {
                    let p = |j: usize| ([x.x1, x.x2, x.x3, x.x4][j], x.offsets[j]);
                    [(0, 2), (0, 3), (1, 2), (1, 3)]
                        .iter()
                        .all(|&(i, j)| anchored_overlap(p(i), p(j), l))
                })
        }
        Err(_) => false,
    };
    let cat = RepeatCatalog::build_with(
        genome,
        CatalogOptions {
            min_len: 1,
            ..Default::default()
        },
    );
    let g3b = cat.doubles.iter().all(|d| is_well_bridged(d, &pl, genome));
    GreedyConditions {
        g1: it.all(),
        g2: genome.n_het() >= 2,
        g3a,
        g3b,
        it,
    }
}

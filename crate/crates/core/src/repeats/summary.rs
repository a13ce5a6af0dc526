//! The summary row without a full catalog.
//!
//! Double, triple and well-bridging maxima come from one pass over the
//! lcp-interval tree that keeps a few representatives per (child, left flank)
//! group of each node, so no pair is ever materialized. Interleaved and I2
//! maxima are searched among doubles no shorter than a threshold that shrinks
//! until the family's maximum is found above it; doubles are scanned longest
//! first and the first one with a partner fixes the maximum of the shorter
//! lengths.

use std::collections::HashMap;

use log::debug;

use crate::genome::DiploidGenome;

use super::bridging::copy_requirement;
use super::profile::TableStats;
use super::rotations::{Node, RotationIndex};
use super::{node_doubles, RepeatCopy};

/// Summary maxima for genomes too large for [`super::repeat_statistics`].
///
/// Memory is the rotation index (about 24 bytes per haplotype base after
/// construction, 40 during) plus the doubles at or above the final search
/// threshold for the interleaved and I2 maxima.
pub fn summary_statistics(genome: &DiploidGenome) -> TableStats {
    let index = RotationIndex::new(genome);
    let mut stats = TableStats {
        haplotype_length: genome.len() as u64,
        max_gap: genome
            .gaps()
            .ok()
            .and_then(|g| g.into_iter().max())
            .unwrap_or(0) as u64,
        ..Default::default()
    };
    let with_loci = genome.n_het() > 0;
    let mut groups = Vec::new();
    index.for_each_node(1, |node| {
        let depth = node.depth as u64;
        if let Some(best) = best_pair(&index, node, with_loci, &mut groups) {
            stats.max_double = stats.max_double.max(depth);
            if with_loci {
                stats.min_l_wellbridge = stats.min_l_wellbridge.max(best as u64);
            }
        }
        for (h, slot) in [&mut stats.max_triple_h0, &mut stats.max_triple_h1]
            .into_iter()
            .enumerate()
        {
            if depth > *slot && has_intra_triple(&index, node, h as u8) {
                *slot = depth;
            }
        }
    });

    let (interleaved, i2) = crossing_maxima(&index, stats.max_double as usize);
    [stats.max_interleaved_h0, stats.max_interleaved_h1] = interleaved;
    stats.max_i2 = i2;
    stats
}

#[derive(Clone, Copy)]
struct Rep {
    req: usize,
    pos: usize,
}

struct Group {
    child: usize,
    flank: u8,
    /// Best two requirements at distinct positions, best first.
    top: [Option<Rep>; 2],
}

impl Group {
    fn offer(&mut self, r: Rep) {
        // a position's requirement does not depend on the haplotype
        if self.top.iter().flatten().any(|t| t.pos == r.pos) {
            return;
        }
        match self.top {
            [None, _] => self.top[0] = Some(r),
            [Some(a), _] if r.req > a.req => self.top = [Some(r), Some(a)],
            [Some(_), None] => self.top[1] = Some(r),
            [Some(_), Some(b)] if r.req > b.req => self.top[1] = Some(r),
            _ => {}
        }
    }
}

/// Whether `node` has a double repeat and, if so, the largest well-bridging
/// requirement among its doubles.
///
/// A double is two rotations in different children with different left
/// flanks and positions, and its requirement is the smaller of its copies'.
/// Keeping the best two positions per (child, flank) group preserves both the
/// existence of a valid pair and the maximum of that minimum.
fn best_pair(
    index: &RotationIndex<'_>,
    node: &Node<'_>,
    with_loci: bool,
    groups: &mut Vec<Group>,
) -> Option<usize> {
    let genome = index.genome();
    groups.clear();
    for c in 0..node.n_children() {
        let first = groups.len();
        for &u in node.child(c) {
            let (flank, pos) = (index.left_flank(u), index.pos(u));
            let req = if with_loci {
                let copy = RepeatCopy::new(index.hap(u), pos, node.depth);
                copy_requirement(&copy, copy.covers_het(genome), genome)
            } else {
                0
            };
            let g = match groups[first..].iter().position(|g| g.flank == flank) {
                Some(i) => first + i,
                None => {
                    groups.push(Group {
                        child: c,
                        flank,
                        top: [None, None],
                    });
                    groups.len() - 1
                }
            };
            groups[g].offer(Rep { req, pos });
        }
    }
    let mut best = None;
    for (i, a) in groups.iter().enumerate() {
        for b in &groups[i + 1..] {
            if a.child == b.child || a.flank == b.flank {
                continue;
            }
            for x in a.top.iter().flatten() {
                for y in b.top.iter().flatten() {
                    if x.pos != y.pos {
                        best = best.max(Some(x.req.min(y.req)));
                    }
                }
            }
        }
    }
    best
}

/// Three rotations of haplotype `h` meeting at `node` form a triple repeat
/// exactly when they are not all in one child and not all share a left flank.
/// Such a choice exists whenever the haplotype's rotations span two children
/// and two flanks: take two from different children, and if they share a
/// flank add any rotation with another.
fn has_intra_triple(index: &RotationIndex<'_>, node: &Node<'_>, h: u8) -> bool {
    let mut count = 0;
    let mut child = None;
    let mut flank = None;
    let (mut children, mut flanks) = (false, false);
    for c in 0..node.n_children() {
        for &u in node.child(c).iter().filter(|&&u| index.hap(u) == h) {
            count += 1;
            let f = index.left_flank(u);
            children |= *child.get_or_insert(c) != c;
            flanks |= *flank.get_or_insert(f) != f;
        }
    }
    count >= 3 && children && flanks
}

/// Intra double `(j1, j2)` on one haplotype.
#[derive(Clone, Copy)]
struct Intra {
    len: u32,
    string: u32,
    j1: u32,
    j2: u32,
}

/// Inter double by hap-0 start and hap-1 start.
#[derive(Clone, Copy)]
struct Inter {
    len: u32,
    s0: u32,
    s1: u32,
}

/// Interleaved maxima per haplotype and the I2 maximum.
fn crossing_maxima(index: &RotationIndex<'_>, max_double: usize) -> ([u64; 2], u64) {
    if max_double == 0 {
        return ([0, 0], 0);
    }
    let mut interleaved = [None, None];
    let mut i2 = None;
    let mut tau = (max_double * 3 / 4).max(1);
    loop {
        let mut intra: [Vec<Intra>; 2] = [Vec::new(), Vec::new()];
        let mut inter = Vec::new();
        let want = [
            interleaved[0].is_none(),
            interleaved[1].is_none(),
            i2.is_none(),
        ];
        index.for_each_node(tau, |node| {
            node_doubles(index, node, |d| {
                let [a, b] = d.copies;
                if a.hap == b.hap {
                    if want[a.hap as usize] {
                        let j = [a.start as u32, b.start as u32];
                        intra[a.hap as usize].push(Intra {
                            len: a.len as u32,
                            string: node.id,
                            j1: j[0],
                            j2: j[1],
                        });
                    }
                } else if want[2] {
                    let (c0, c1) = if a.hap == 0 { (a, b) } else { (b, a) };
                    inter.push(Inter {
                        len: a.len as u32,
                        s0: c0.start as u32,
                        s1: c1.start as u32,
                    });
                }
            });
        });
        debug!(
            "threshold {tau}: {} + {} intra doubles, {} inter doubles",
            intra[0].len(),
            intra[1].len(),
            inter.len()
        );
        for h in 0..2 {
            if want[h] {
                interleaved[h] = longest_crossing(&mut intra[h]);
            }
        }
        if want[2] {
            i2 = longest_i2(&mut inter);
        }
        if tau == 1 {
            break;
        }
        if interleaved.iter().all(Option::is_some) && i2.is_some() {
            break;
        }
        // small steps keep the collected doubles close to the answer
        tau = (tau * 3 / 4).min(tau - 1).max(1);
    }
    (interleaved.map(|x| x.unwrap_or(0)), i2.unwrap_or(0))
}

/// Longest length `l` such that some two doubles of different strings, both
/// at least `l` long, interleave as `j1 < j3 < j2 < j4`.
fn longest_crossing(doubles: &mut [Intra]) -> Option<u64> {
    doubles.sort_unstable_by_key(|d| (std::cmp::Reverse(d.len), d.string));
    let mut xs1: Vec<u32> = doubles.iter().map(|d| d.j1).collect();
    let mut xs2: Vec<u32> = doubles.iter().map(|d| d.j2).collect();
    for xs in [&mut xs1, &mut xs2] {
        xs.sort_unstable();
        xs.dedup();
    }
    // keyed by j1: largest j2; keyed by j2: smallest j1
    let mut by_start = SegTree::new(xs1.len(), 0, u32::max);
    let mut by_end = SegTree::new(xs2.len(), u32::MAX, u32::min);
    let inside = |xs: &[u32], lo: u32, hi: u32| {
        xs.partition_point(|&v| v <= lo)..xs.partition_point(|&v| v < hi)
    };
    for batch in doubles.chunk_by(|a, b| a.string == b.string) {
        for d in batch {
            let r = inside(&xs1, d.j1, d.j2);
            if by_start.query(r.start, r.end) > d.j2 {
                return Some(d.len as u64);
            }
            let r = inside(&xs2, d.j1, d.j2);
            if by_end.query(r.start, r.end) < d.j1 {
                return Some(d.len as u64);
            }
        }
        for d in batch {
            by_start.update(xs1.binary_search(&d.j1).expect("indexed"), d.j2);
            by_end.update(xs2.binary_search(&d.j2).expect("indexed"), d.j1);
        }
    }
    None
}

/// Longest length `l` such that two inter doubles at least `l` long share
/// the offset between their copies and do not overlap on haplotype 0.
fn longest_i2(doubles: &mut [Inter]) -> Option<u64> {
    doubles.sort_unstable_by_key(|d| std::cmp::Reverse(d.len));
    // offset -> (largest start, smallest end)
    let mut seen: HashMap<i64, (u32, u32)> = HashMap::new();
    for d in doubles.iter() {
        let end = d.s0 + d.len;
        let e = seen.entry(d.s1 as i64 - d.s0 as i64).or_insert((d.s0, end));
        if e.0 > end || e.1 < d.s0 {
            return Some(d.len as u64);
        }
        *e = (e.0.max(d.s0), e.1.min(end));
    }
    None
}

/// Point-update, range-fold segment tree over `u32`.
struct SegTree<F> {
    size: usize,
    identity: u32,
    op: F,
    t: Vec<u32>,
}

impl<F: Fn(u32, u32) -> u32> SegTree<F> {
    fn new(n: usize, identity: u32, op: F) -> Self {
        let size = n.max(1);
        Self {
            size,
            identity,
            op,
            t: vec![identity; 2 * size],
        }
    }

    fn update(&mut self, i: usize, v: u32) {
        let mut i = i + self.size;
        self.t[i] = (self.op)(self.t[i], v);
        while i > 1 {
            i /= 2;
            self.t[i] = (self.op)(self.t[2 * i], self.t[2 * i + 1]);
        }
    }

    /// Fold over `lo..hi`.
    fn query(&self, lo: usize, hi: usize) -> u32 {
        let (mut lo, mut hi) = (lo + self.size, hi + self.size);
        let mut acc = self.identity;
        while lo < hi {
            if lo & 1 == 1 {
                acc = (self.op)(acc, self.t[lo]);
                lo += 1;
            }
            if hi & 1 == 1 {
                hi -= 1;
                acc = (self.op)(acc, self.t[hi]);
            }
            lo /= 2;
            hi /= 2;
        }
        acc
    }
}

//! Repeat enumeration: double, triple and interleaved repeats, the
//! inter-double pairs that make one haplotype's segment swappable with the
//! other's, bridging predicates over read placements, and aggregate profiles.

mod bridging;
mod profile;
mod rotations;
mod summary;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::genome::DiploidGenome;

pub use bridging::{
    is_well_bridged, min_read_length_well_bridge, well_bridge_requirement, Placements,
};
pub use profile::{repeat_profile, repeat_statistics, RepeatProfile, TableStats};
pub use rotations::{Node, RotationIndex};
pub use summary::summary_statistics;

/// `len` symbols of haplotype `hap` starting at `start`, wrapping circularly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RepeatCopy {
    pub hap: u8,
    pub start: usize,
    pub len: usize,
}

impl RepeatCopy {
    pub fn new(hap: u8, start: usize, len: usize) -> Self {
        Self { hap, start, len }
    }

    pub fn spell<'a>(&self, genome: &'a DiploidGenome) -> &'a [u8] {
        genome.hap(self.hap as usize).window(self.start, self.len)
    }

    pub fn covers_het(&self, genome: &DiploidGenome) -> bool {
        genome.covers_het(self.start, self.len)
    }
}

/// A maximal pair of equal substrings; `copies[0].start < copies[1].start`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DoubleRepeat {
    pub copies: [RepeatCopy; 2],
    pub covers_het: [bool; 2],
}

impl DoubleRepeat {
    pub fn new(genome: &DiploidGenome, a: RepeatCopy, b: RepeatCopy) -> Self {
        let (a, b) = if (a.start, a.hap) <= (b.start, b.hap) {
            (a, b)
        } else {
            (b, a)
        };
        Self {
            copies: [a, b],
            covers_het: [a.covers_het(genome), b.covers_het(genome)],
        }
    }

    pub fn len(&self) -> usize {
        self.copies[0].len
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_intra(&self) -> bool {
        self.copies[0].hap == self.copies[1].hap
    }

    fn key(&self) -> (usize, u8, usize, u8, usize) {
        let [a, b] = self.copies;
        (a.start, a.hap, b.start, b.hap, a.len)
    }
}

/// Three equal substrings at strictly increasing starts that cannot all be
/// extended together in either direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TripleRepeat {
    pub copies: [RepeatCopy; 3],
}

impl TripleRepeat {
    pub fn len(&self) -> usize {
        self.copies[0].len
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_intra(&self) -> bool {
        self.copies.iter().all(|c| c.hap == self.copies[0].hap)
    }

    fn key(&self) -> [(usize, u8); 3] {
        self.copies.map(|c| (c.start, c.hap))
    }
}

/// Two double repeats with different strings and alternating starts
/// `j1 < j3 < j2 < j4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InterleavedRepeat {
    pub first: DoubleRepeat,
    pub second: DoubleRepeat,
}

impl InterleavedRepeat {
    pub fn is_intra(&self) -> bool {
        let h = self.first.copies[0].hap;
        self.first
            .copies
            .iter()
            .chain(&self.second.copies)
            .all(|c| c.hap == h)
    }

    /// Read length minus two needed to bridge the shorter double repeat.
    pub fn min_len(&self) -> usize {
        self.first.len().min(self.second.len())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CatalogOptions {
    /// Doubles and triples shorter than this are not reported.
    pub min_len: usize,
    pub triples: bool,
    pub interleaved: bool,
    pub i2_pairs: bool,
}

impl CatalogOptions {
    pub fn all() -> Self {
        Self {
            min_len: 1,
            triples: true,
            interleaved: true,
            i2_pairs: true,
        }
    }
}

/// Every repeat of a genome. Interleaved repeats and I2 pairs refer to
/// `doubles` by index.
#[derive(Debug, Clone, Default)]
pub struct RepeatCatalog {
    pub doubles: Vec<DoubleRepeat>,
    /// Equal ids exactly when the repeated strings are equal.
    pub string_ids: Vec<u32>,
    pub triples: Vec<TripleRepeat>,
    pub interleaved: Vec<(u32, u32)>,
    pub i2_pairs: Vec<(u32, u32)>,
}

impl RepeatCatalog {
    pub fn build(genome: &DiploidGenome) -> Self {
        Self::build_with(genome, CatalogOptions::all())
    }

    pub fn build_with(genome: &DiploidGenome, opts: CatalogOptions) -> Self {
        let index = RotationIndex::new(genome);
        let mut doubles: Vec<(DoubleRepeat, u32)> = Vec::new();
        let mut triples = Vec::new();
        index.for_each_node(opts.min_len, |node| {
            node_doubles(&index, node, |d| doubles.push((d, node.id)));
            if opts.triples {
                node_triples(&index, node, |t| triples.push(t));
            }
        });
        doubles.sort_unstable_by_key(|(d, _)| d.key());
        triples.sort_unstable_by_key(TripleRepeat::key);
        let (doubles, string_ids): (Vec<_>, Vec<_>) = doubles.into_iter().unzip();
        let mut cat = Self {
            doubles,
            string_ids,
            triples,
            ..Default::default()
        };
        if opts.interleaved {
            cat.interleaved = interleaved_pairs(&cat.doubles, &cat.string_ids, |_| true);
        }
        if opts.i2_pairs {
            cat.i2_pairs = i2_pairs(&cat.doubles, |_| true);
        }
        cat
    }

    pub fn interleaved_repeats(&self) -> impl Iterator<Item = InterleavedRepeat> + '_ {
        self.interleaved.iter().map(|&(a, b)| InterleavedRepeat {
            first: self.doubles[a as usize],
            second: self.doubles[b as usize],
        })
    }

    pub fn i2_repeat_pairs(&self) -> impl Iterator<Item = (DoubleRepeat, DoubleRepeat)> + '_ {
        self.i2_pairs
            .iter()
            .map(|&(a, b)| (self.doubles[a as usize], self.doubles[b as usize]))
    }

    pub fn max_double_len(&self) -> usize {
        self.doubles
            .iter()
            .map(DoubleRepeat::len)
            .max()
            .unwrap_or(0)
    }
}

/// Double repeats meeting at `node`: rotations in different children with
/// different left flanks and different start positions.
pub(crate) fn node_doubles(
    index: &RotationIndex<'_>,
    node: &Node<'_>,
    mut emit: impl FnMut(DoubleRepeat),
) {
    let genome = index.genome();
    let l = node.depth;
    for a in 0..node.n_children() {
        for &u in node.child(a) {
            let (fu, pu, hu) = (index.left_flank(u), index.pos(u), index.hap(u));
            for b in a + 1..node.n_children() {
                for &v in node.child(b) {
                    if index.left_flank(v) == fu || index.pos(v) == pu {
                        continue;
                    }
                    emit(DoubleRepeat::new(
                        genome,
                        RepeatCopy::new(hu, pu, l),
                        RepeatCopy::new(index.hap(v), index.pos(v), l),
                    ));
                }
            }
        }
    }
}

/// Triple repeats meeting at `node`: three rotations at distinct positions,
/// not all in one child and not all sharing the left flank.
pub(crate) fn node_triples(
    index: &RotationIndex<'_>,
    node: &Node<'_>,
    mut emit: impl FnMut(TripleRepeat),
) {
    let rot = node.rotations;
    let mut child_of = Vec::with_capacity(rot.len());
    for c in 0..node.n_children() {
        child_of.extend(std::iter::repeat_n(c, node.bounds[c + 1] - node.bounds[c]));
    }
    let l = node.depth;
    for i in 0..rot.len() {
        for j in i + 1..rot.len() {
            let (u, v) = (rot[i], rot[j]);
            if index.pos(u) == index.pos(v) {
                continue;
            }
            let k0 = if child_of[i] == child_of[j] {
                node.bounds[child_of[j] + 1]
            } else {
                j + 1
            };
            for &w in &rot[k0..] {
                let pw = index.pos(w);
                if pw == index.pos(u) || pw == index.pos(v) {
                    continue;
                }
                let f = index.left_flank(u);
                if index.left_flank(v) == f && index.left_flank(w) == f {
                    continue;
                }
                let mut copies = [u, v, w].map(|x| RepeatCopy::new(index.hap(x), index.pos(x), l));
                copies.sort_unstable_by_key(|c| c.start);
                emit(TripleRepeat { copies });
            }
        }
    }
}

/// Index pairs `(a, b)` of doubles with `j1 < j3 < j2 < j4` and different
/// strings, restricted to doubles accepted by `keep`. `doubles` must be
/// sorted by first-copy start.
pub(crate) fn interleaved_pairs(
    doubles: &[DoubleRepeat],
    string_ids: &[u32],
    keep: impl Fn(&DoubleRepeat) -> bool,
) -> Vec<(u32, u32)> {
    let kept: Vec<u32> = (0..doubles.len() as u32)
        .filter(|&i| keep(&doubles[i as usize]))
        .collect();
    let starts: Vec<usize> = kept
        .iter()
        .map(|&i| doubles[i as usize].copies[0].start)
        .collect();
    let mut out = Vec::new();
    for (ka, &a) in kept.iter().enumerate() {
        let da = &doubles[a as usize];
        let (j1, j2) = (da.copies[0].start, da.copies[1].start);
        let lo = ka + starts[ka..].partition_point(|&s| s <= j1);
        let hi = lo + starts[lo..].partition_point(|&s| s < j2);
        for &b in &kept[lo..hi] {
            let db = &doubles[b as usize];
            if db.copies[1].start > j2 && string_ids[a as usize] != string_ids[b as usize] {
                out.push((a, b));
            }
        }
    }
    out
}

/// Index pairs of inter-double repeats `(s_{0,j1}, s_{1,j2})`,
/// `(s_{0,j3}, s_{1,j4})` with `j3 - j1 = j4 - j2` and `j3 > j1 + l1`.
pub(crate) fn i2_pairs(
    doubles: &[DoubleRepeat],
    keep: impl Fn(&DoubleRepeat) -> bool,
) -> Vec<(u32, u32)> {
    // offset -> (hap-0 start, length, index)
    let mut groups: BTreeMap<isize, Vec<(usize, usize, u32)>> = BTreeMap::new();
    for (i, d) in doubles.iter().enumerate() {
        if d.is_intra() || !keep(d) {
            continue;
        }
        let (c0, c1) = if d.copies[0].hap == 0 {
            (d.copies[0], d.copies[1])
        } else {
            (d.copies[1], d.copies[0])
        };
        groups
            .entry(c1.start as isize - c0.start as isize)
            .or_default()
            .push((c0.start, d.len(), i as u32));
    }
    let mut out = Vec::new();
    for group in groups.values_mut() {
        group.sort_unstable();
        for (k, &(a, l, i)) in group.iter().enumerate() {
            let from = k + group[k..].partition_point(|&(a2, _, _)| a2 <= a + l);
            out.extend(group[from..].iter().map(|&(_, _, j)| (i, j)));
        }
    }
    out.sort_unstable();
    out
}

pub fn find_double_repeats(genome: &DiploidGenome) -> Vec<DoubleRepeat> {
    RepeatCatalog::build_with(
        genome,
        CatalogOptions {
            min_len: 1,
            ..Default::default()
        },
    )
    .doubles
}

pub fn find_triple_repeats(genome: &DiploidGenome) -> Vec<TripleRepeat> {
    RepeatCatalog::build_with(
        genome,
        CatalogOptions {
            min_len: 1,
            triples: true,
            ..Default::default()
        },
    )
    .triples
}

pub fn find_interleaved_repeats(genome: &DiploidGenome) -> Vec<InterleavedRepeat> {
    let cat = RepeatCatalog::build_with(
        genome,
        CatalogOptions {
            min_len: 1,
            interleaved: true,
            ..Default::default()
        },
    );
    cat.interleaved_repeats().collect()
}

pub fn find_inter_double_pairs_i2(genome: &DiploidGenome) -> Vec<(DoubleRepeat, DoubleRepeat)> {
    let cat = RepeatCatalog::build_with(
        genome,
        CatalogOptions {
            min_len: 1,
            i2_pairs: true,
            ..Default::default()
        },
    );
    cat.i2_repeat_pairs().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn planted_intra_double() {
        // "GAT" twice on h0 with distinct flanks; h1 identical, so h1 carries
        // the same pair and the cross-haplotype copies pair up too.
        let g = DiploidGenome::from_strs("CGATCAAAATGATT", "CGATCAAAATGATT").unwrap();
        let doubles = find_double_repeats(&g);
        let gat: Vec<_> = doubles.iter().filter(|d| d.len() == 3).collect();
        assert!(!gat.is_empty());
        for d in &doubles {
            assert_eq!(d.copies[0].spell(&g), d.copies[1].spell(&g));
            assert!(d.copies[0].start < d.copies[1].start);
        }
    }

    #[test]
    fn length_one_genome_has_no_repeats() {
        let g = DiploidGenome::from_strs("A", "C").unwrap();
        let cat = RepeatCatalog::build(&g);
        assert!(cat.doubles.is_empty() && cat.triples.is_empty());
        let g = DiploidGenome::from_strs("A", "A").unwrap();
        assert!(RepeatCatalog::build(&g).doubles.is_empty());
    }
}

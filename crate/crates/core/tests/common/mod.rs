//! Test oracles: definitional repeat enumeration, a literal greedy merger and
//! random instance generators.
#![allow(dead_code)]

pub mod suites;

use std::collections::BTreeSet;

use diplab_core::genome::{overlap, union, CircularSequence, DiploidGenome};
use diplab_core::simulate::{random_sequence, rng};
use rand::Rng;

pub type Copy = (u8, usize);

pub fn at(g: &DiploidGenome, c: Copy, i: isize) -> u8 {
    let n = g.len() as isize;
    g.hap(c.0 as usize).as_bytes()[((c.1 as isize + i).rem_euclid(n)) as usize]
}

/// Longest common extension of two rotations, compared symbol by symbol.
pub fn lce(g: &DiploidGenome, a: Copy, b: Copy) -> usize {
    (0..g.len())
        .take_while(|&i| at(g, a, i as isize) == at(g, b, i as isize))
        .count()
}

fn all_copies(g: &DiploidGenome) -> Vec<Copy> {
    (0..2u8)
        .flat_map(|h| (0..g.len()).map(move |p| (h, p)))
        .collect()
}

/// Doubles as `((hap, start), (hap, start), len)` with the first copy
/// ordered by `(start, hap)`.
pub type OracleDouble = (Copy, Copy, usize);

/// Every pair at distinct starts whose windows of length `l` agree while both
/// flanking symbols differ.
pub fn oracle_doubles(g: &DiploidGenome) -> Vec<OracleDouble> {
    let copies = all_copies(g);
    let mut out = Vec::new();
    for (i, &a) in copies.iter().enumerate() {
        for &b in &copies[i + 1..] {
            if a.1 == b.1 {
                continue;
            }
            let (a, b) = if (a.1, a.0) < (b.1, b.0) {
                (a, b)
            } else {
                (b, a)
            };
            let l = lce(g, a, b);
            if l == 0 || l >= g.len() {
                continue;
            }
            // windows agree up to l; right flanks differ at l by construction
            debug_assert_ne!(at(g, a, l as isize), at(g, b, l as isize));
            if at(g, a, -1) != at(g, b, -1) {
                out.push((a, b, l));
            }
        }
    }
    out.sort_by_key(|&(a, b, l)| (a.1, a.0, b.1, b.0, l));
    out
}

pub type OracleTriple = [(u8, usize); 3];

/// Triples at distinct starts: common length is the smallest pairwise
/// extension, and the left flanks are not all equal.
pub fn oracle_triples(g: &DiploidGenome) -> BTreeSet<(OracleTriple, usize)> {
    let copies = all_copies(g);
    let m = copies.len();
    let mut table = vec![vec![0usize; m]; m];
    for i in 0..m {
        for j in i + 1..m {
            let l = lce(g, copies[i], copies[j]);
            table[i][j] = l;
            table[j][i] = l;
        }
    }
    let mut out = BTreeSet::new();
    for i in 0..m {
        for j in i + 1..m {
            if copies[i].1 == copies[j].1 || table[i][j] == 0 {
                continue;
            }
            for k in j + 1..m {
                if copies[k].1 == copies[i].1 || copies[k].1 == copies[j].1 {
                    continue;
                }
                let l = table[i][j].min(table[i][k]).min(table[j][k]);
                if l == 0 || l >= g.len() {
                    continue;
                }
                let f = [i, j, k].map(|x| at(g, copies[x], -1));
                let r = [i, j, k].map(|x| at(g, copies[x], l as isize));
                if (f[0] == f[1] && f[1] == f[2]) || (r[0] == r[1] && r[1] == r[2]) {
                    continue;
                }
                let mut t = [copies[i], copies[j], copies[k]];
                t.sort_by_key(|c| c.1);
                out.insert((t, l));
            }
        }
    }
    out
}

pub fn spell(g: &DiploidGenome, c: Copy, l: usize) -> Vec<u8> {
    g.hap(c.0 as usize).window(c.1, l).to_vec()
}

/// Interleaved pairs as indices into `doubles`, sorted.
pub fn oracle_interleaved(g: &DiploidGenome, doubles: &[OracleDouble]) -> Vec<(u32, u32)> {
    let mut ids = std::collections::HashMap::new();
    let id: Vec<usize> = doubles
        .iter()
        .map(|d| {
            let k = ids.len();
            *ids.entry(spell(g, d.0, d.2)).or_insert(k)
        })
        .collect();
    let mut out = Vec::new();
    for (i, d1) in doubles.iter().enumerate() {
        for (j, d2) in doubles.iter().enumerate() {
            let (j1, j2, j3, j4) = (d1.0 .1, d1.1 .1, d2.0 .1, d2.1 .1);
            if j1 < j3 && j3 < j2 && j2 < j4 && id[i] != id[j] {
                out.push((i as u32, j as u32));
            }
        }
    }
    out
}

/// I2 pairs: inter doubles `(0, j1)-(1, j2)` and `(0, j3)-(1, j4)` with
/// `j3 - j1 = j4 - j2` and `j3 > j1 + l1`.
pub fn oracle_i2(doubles: &[OracleDouble]) -> Vec<(u32, u32)> {
    let orient = |d: &OracleDouble| {
        if d.0 .0 == 0 {
            (d.0 .1 as isize, d.1 .1 as isize)
        } else {
            (d.1 .1 as isize, d.0 .1 as isize)
        }
    };
    let mut out = Vec::new();
    for (i, a) in doubles.iter().enumerate() {
        if a.0 .0 == a.1 .0 {
            continue;
        }
        for (j, b) in doubles.iter().enumerate() {
            if b.0 .0 == b.1 .0 {
                continue;
            }
            let ((j1, j2), (j3, j4)) = (orient(a), orient(b));
            if j3 - j1 == j4 - j2 && j3 > j1 + a.2 as isize {
                out.push((i as u32, j as u32));
            }
        }
    }
    out
}

/// Genome with `n_het` heterozygous loci at random positions.
pub fn random_genome<R: Rng>(len: usize, n_het: usize, rng: &mut R) -> DiploidGenome {
    let base = random_sequence(len, rng).unwrap();
    with_het_loci(&base, n_het, rng)
}

pub fn with_het_loci<R: Rng>(base: &CircularSequence, n_het: usize, rng: &mut R) -> DiploidGenome {
    let len = base.len();
    let mut h1 = base.as_bytes().to_vec();
    let mut loci = BTreeSet::new();
    while loci.len() < n_het.min(len) {
        loci.insert(rng.random_range(0..len));
    }
    for &p in &loci {
        let alts: Vec<u8> = b"ACGT".iter().copied().filter(|&c| c != h1[p]).collect();
        h1[p] = alts[rng.random_range(0..3)];
    }
    DiploidGenome::new(base.clone(), CircularSequence::new(h1).unwrap()).unwrap()
}

/// Random base sequence with a few segments copied elsewhere, so that
/// longer repeats appear.
pub fn planted_sequence<R: Rng>(
    len: usize,
    copies: usize,
    max_len: usize,
    rng: &mut R,
) -> CircularSequence {
    let mut s = random_sequence(len, rng).unwrap().as_bytes().to_vec();
    for _ in 0..copies {
        let l = rng.random_range(2..=max_len.min(len / 3).max(2));
        let from = rng.random_range(0..len);
        let to = rng.random_range(0..len);
        let seg: Vec<u8> = (0..l).map(|i| s[(from + i) % len]).collect();
        for (i, c) in seg.into_iter().enumerate() {
            s[(to + i) % len] = c;
        }
    }
    CircularSequence::new(s).unwrap()
}

pub fn seeded(seed: u64) -> rand_chacha::ChaCha8Rng {
    rng(seed)
}

/// Greedy merging done the slow way: recompute every pairwise overlap each
/// round and merge the smallest `(src, dst)` among the maximal ones.
pub fn naive_greedy(reads: &[Vec<u8>]) -> (Vec<(usize, usize, usize)>, Vec<Vec<u8>>) {
    let mut live: Vec<(usize, Vec<u8>)> = reads.iter().cloned().enumerate().collect();
    let mut trace = Vec::new();
    while live.len() > 1 {
        let mut best: Option<(usize, usize, usize)> = None;
        for (a, (ia, x)) in live.iter().enumerate() {
            for (b, (ib, y)) in live.iter().enumerate() {
                if a == b {
                    continue;
                }
                let o = overlap(x, y);
                let better = match best {
                    None => true,
                    Some((bo, ba, bb)) => {
                        (o, std::cmp::Reverse(*ia), std::cmp::Reverse(*ib))
                            > (
                                bo,
                                std::cmp::Reverse(live[ba].0),
                                std::cmp::Reverse(live[bb].0),
                            )
                    }
                };
                if better {
                    best = Some((o, a, b));
                }
            }
        }
        let (o, a, b) = best.unwrap();
        if o == 0 {
            break;
        }
        trace.push((live[a].0, live[b].0, o));
        let merged = union(&live[a].1, &live[b].1);
        live[a].1 = merged;
        live.remove(b);
    }
    live.sort_by_key(|x| x.0);
    (trace, live.into_iter().map(|x| x.1).collect())
}

/// The same reads with repeated placements dropped, so each `(hap, start)`
/// is sampled at most once.
pub fn distinct_placements(rs: &diplab_core::ReadSet, g: &DiploidGenome) -> diplab_core::ReadSet {
    let mut seen = BTreeSet::new();
    let kept: Vec<(u8, usize)> = rs
        .iter()
        .map(|r| r.provenance.unwrap())
        .map(|p| (p.hap, p.start))
        .filter(|&p| seen.insert(p))
        .collect();
    diplab_core::ReadSet::from_placements(g, rs.read_length(), kept).unwrap()
}

/// Strings left after applying `merges` to `reads` in order.
pub fn replay_merges(reads: &[Vec<u8>], merges: &[diplab_core::greedy::Merge]) -> Vec<Vec<u8>> {
    let mut strs: Vec<Option<Vec<u8>>> = reads.iter().cloned().map(Some).collect();
    for m in merges {
        let tail = strs[m.dst].take().expect("merged string is live");
        strs[m.src]
            .as_mut()
            .expect("merging string is live")
            .extend_from_slice(&tail[m.overlap..]);
    }
    strs.into_iter().flatten().collect()
}

/// Smallest L likely to meet the greedy conditions: half the largest gap,
/// the well-bridging requirement and the longest double repeat plus two.
pub fn greedy_read_length_floor(g: &DiploidGenome) -> usize {
    let doubles = diplab_core::repeats::find_double_repeats(g);
    let wb = diplab_core::repeats::min_read_length_well_bridge(g, &doubles).unwrap_or(0);
    let longest = doubles.iter().map(|d| d.len()).max().unwrap_or(0);
    ((g.max_gap().unwrap_or(0) + 4) / 2)
        .max(wb)
        .max(longest + 2)
}

//! Read placements and the covered / bridged / well-bridged predicates.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::genome::{DiploidGenome, ReadSet};

use super::{DoubleRepeat, RepeatCopy};

const NO_READ: u32 = u32::MAX;

/// Where reads sit on the two haplotypes, with O(1) range queries.
#[derive(Debug, Clone)]
pub struct Placements {
    n: usize,
    read_length: usize,
    /// `prefix[h][i]` = placements on haplotype `h` starting in `[0, i)`,
    /// over doubled coordinates `0..=2n`.
    prefix: [Vec<u32>; 2],
    /// Lowest read id placed at each start, or `NO_READ`.
    read_at: [Vec<u32>; 2],
}

impl Placements {
    /// Every exact occurrence of every read string, on either haplotype.
    ///
    /// This is the string semantics of "a read covers a substring": a read
    /// sits wherever its sequence occurs.
    pub fn from_occurrences(genome: &DiploidGenome, rs: &ReadSet) -> Self {
        let n = genome.len();
        let l = rs.read_length();
        let mut lowest: HashMap<&[u8], u32> = HashMap::with_capacity(rs.len());
        for (id, r) in rs.iter().enumerate() {
            lowest.entry(&r.seq[..]).or_insert(id as u32);
        }
        let mut read_at = [vec![NO_READ; n], vec![NO_READ; n]];
        if l >= 1 && l <= n && !rs.is_empty() {
            for (h, slots) in read_at.iter_mut().enumerate() {
                let hap = genome.hap(h);
                for (s, slot) in slots.iter_mut().enumerate() {
                    if let Some(&id) = lowest.get(hap.window(s, l)) {
                        *slot = id;
                    }
                }
            }
        }
        let counts = read_at
            .clone()
            .map(|v| v.into_iter().map(|id| (id != NO_READ) as u32).collect());
        Self::from_counts(n, l, counts, read_at)
    }

    /// Ground-truth placements recorded by the simulator.
    pub fn from_provenance(genome: &DiploidGenome, rs: &ReadSet) -> Result<Self> {
        let n = genome.len();
        let mut counts = [vec![0u32; n], vec![0u32; n]];
        let mut read_at = [vec![NO_READ; n], vec![NO_READ; n]];
        for (id, r) in rs.iter().enumerate() {
            let p = r.provenance.ok_or_else(|| {
                Error::InvalidParameter(format!("read {id} carries no provenance"))
            })?;
            let (h, s) = (p.hap as usize, p.start % n);
            counts[h][s] += 1;
            read_at[h][s] = read_at[h][s].min(id as u32);
        }
        Ok(Self::from_counts(n, rs.read_length(), counts, read_at))
    }

    fn from_counts(
        n: usize,
        read_length: usize,
        counts: [Vec<u32>; 2],
        read_at: [Vec<u32>; 2],
    ) -> Self {
        let prefix = counts.map(|c| {
            let mut p = Vec::with_capacity(2 * n + 1);
            p.push(0u32);
            let mut acc = 0u32;
            for i in 0..2 * n {
                acc += c[i % n];
                p.push(acc);
            }
            p
        });
        Self {
            n,
            read_length,
            prefix,
            read_at,
        }
    }

    pub fn read_length(&self) -> usize {
        self.read_length
    }

    /// Placements on `hap` whose start lies in the circular range
    /// `[from, from + count)`.
    pub fn starts_in(&self, hap: u8, from: isize, count: usize) -> u32 {
        let p = &self.prefix[hap as usize];
        if count == 0 || self.n == 0 {
            return 0;
        }
        if count >= self.n {
            return p[self.n];
        }
        let s = from.rem_euclid(self.n as isize) as usize;
        p[s + count] - p[s]
    }

    /// Lowest id of a read placed at `(hap, start)`.
    pub fn read_at(&self, hap: u8, start: usize) -> Option<usize> {
        match self.read_at[hap as usize][start % self.n] {
            NO_READ => None,
            id => Some(id as usize),
        }
    }

    /// Some read covers one base on each side of the copy.
    pub fn is_bridged(&self, copy: &RepeatCopy) -> bool {
        self.is_bridged_at(copy.hap, copy.start, copy.len)
    }

    pub fn is_bridged_at(&self, hap: u8, start: usize, len: usize) -> bool {
        let l = self.read_length;
        if l < len + 2 {
            return false;
        }
        self.starts_in(hap, (start + len + 1) as isize - l as isize, l - len - 1) > 0
    }

    /// Every length-`w` substring of both haplotypes lies inside some read.
    pub fn covers_all_windows(&self, w: usize) -> bool {
        let l = self.read_length;
        if w == 0 {
            return true;
        }
        if w > l {
            return false;
        }
        (0..2u8).all(|h| {
            (0..self.n).all(|p| self.starts_in(h, (p + w) as isize - l as isize, l - w + 1) > 0)
        })
    }

    /// Every pair of adjacent bases on both haplotypes lies inside some read.
    pub fn is_covered(&self) -> bool {
        self.covers_all_windows(2)
    }
}

/// Heterozygous loci bounding the gap that contains a copy covering none.
fn enclosing_loci(copy: &RepeatCopy, genome: &DiploidGenome) -> Option<(usize, usize)> {
    let loci = genome.het_loci();
    let gi = genome.gap_index(copy.start)?;
    Some((loci[gi], loci[(gi + 1) % loci.len()]))
}

/// Distances that a double-bridging pair must span from the enclosing loci:
/// `(a .. end of copy)` and `(start of copy .. b)`, both inclusive of the locus
/// and of one flanking base.
fn spans_to_loci(copy: &RepeatCopy, genome: &DiploidGenome) -> Option<(usize, usize)> {
    let (a, b) = enclosing_loci(copy, genome)?;
    let dist_a = genome.cw(a, copy.start) + copy.len;
    let dist_b = genome.cw(copy.start, b) + 1;
    Some((dist_a, dist_b))
}

fn double_bridged_through_locus(
    copy: &RepeatCopy,
    pl: &Placements,
    genome: &DiploidGenome,
) -> bool {
    let Some((dist_a, dist_b)) = spans_to_loci(copy, genome) else {
        return false;
    };
    let l = pl.read_length();
    let s = copy.start as isize;
    let via_a = l > dist_a && {
        let from = s + copy.len as isize + 1 - l as isize;
        (0..2u8).all(|h| pl.starts_in(h, from, l - dist_a) > 0)
    };
    let via_b = l > dist_b && {
        let (_, b) = enclosing_loci(copy, genome).expect("loci exist");
        let from = b as isize - l as isize + 1;
        (0..2u8).all(|h| pl.starts_in(h, from, l - dist_b) > 0)
    };
    via_a || via_b
}

/// A copy covering a heterozygous locus is bridged, or a copy inside a
/// homozygous gap is bridged on both haplotypes by reads that also reach the
/// same bounding locus.
pub fn is_well_bridged(d: &DoubleRepeat, pl: &Placements, genome: &DiploidGenome) -> bool {
    d.copies.iter().zip(d.covers_het).any(|(c, covers)| {
        if covers {
            pl.is_bridged(c)
        } else {
            double_bridged_through_locus(c, pl, genome)
        }
    })
}

/// Shortest read length at which `d` can be well-bridged; `usize::MAX` when
/// no copy covers a locus and the genome has none.
pub fn well_bridge_requirement(d: &DoubleRepeat, genome: &DiploidGenome) -> usize {
    d.copies
        .iter()
        .zip(d.covers_het)
        .map(|(c, covers)| copy_requirement(c, covers, genome))
        .min()
        .unwrap_or(usize::MAX)
}

/// Shortest read length that well-bridges one copy on its own.
pub(crate) fn copy_requirement(c: &RepeatCopy, covers: bool, genome: &DiploidGenome) -> usize {
    if covers {
        c.len + 2
    } else {
        spans_to_loci(c, genome).map_or(usize::MAX, |(da, db)| da.min(db) + 1)
    }
}

/// Shortest read length at which every double repeat can be well-bridged.
pub fn min_read_length_well_bridge(
    genome: &DiploidGenome,
    doubles: &[DoubleRepeat],
) -> Result<usize> {
    if genome.het_loci().is_empty() {
        return Err(Error::EmptyLocusSet);
    }
    Ok(doubles
        .iter()
        .map(|d| well_bridge_requirement(d, genome))
        .max()
        .unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn genome() -> DiploidGenome {
        // het loci at 3 and 12
        DiploidGenome::from_strs("ACGTACGGATCAGTCA", "ACGAACGGATCACTCA").unwrap()
    }

    #[test]
    fn bridging_needs_one_base_each_side() {
        let g = genome();
        let copy = RepeatCopy::new(0, 5, 3);
        // a read over [4, 8] bridges [5, 7]
        let rs = ReadSet::from_placements(&g, 5, [(0, 4)]).unwrap();
        let pl = Placements::from_provenance(&g, &rs).unwrap();
        assert!(pl.is_bridged(&copy));
        // a read exactly over the copy does not
        let rs = ReadSet::from_placements(&g, 3, [(0, 5)]).unwrap();
        let pl = Placements::from_provenance(&g, &rs).unwrap();
        assert!(!pl.is_bridged(&copy));
    }

    #[test]
    fn occurrences_include_other_haplotype() {
        let g = genome();
        // window [5, 10) is homozygous, so a hap-1 read also sits on hap 0
        let rs = ReadSet::from_placements(&g, 5, [(1, 5)]).unwrap();
        let pl = Placements::from_occurrences(&g, &rs);
        assert_eq!(pl.read_at(0, 5), Some(0));
        assert_eq!(pl.read_at(1, 5), Some(0));
        assert_eq!(pl.starts_in(0, 0, 16), 1);
    }

    #[test]
    fn coverage_of_all_windows() {
        let g = genome();
        let all = ReadSet::all_windows(&g, 4).unwrap();
        let pl = Placements::from_occurrences(&g, &all);
        assert!(pl.is_covered());
        assert!(pl.covers_all_windows(4));
        assert!(!pl.covers_all_windows(5));
        let some = ReadSet::from_placements(&g, 4, (0..16).step_by(2).map(|s| (0, s))).unwrap();
        assert!(!Placements::from_provenance(&g, &some).unwrap().is_covered());
    }

    #[test]
    fn requirement_for_gap_copy() {
        let g = genome();
        // copy [6, 8) sits between loci 3 and 12
        let d = DoubleRepeat {
            copies: [RepeatCopy::new(0, 6, 2), RepeatCopy::new(1, 6, 2)],
            covers_het: [false, false],
        };
        // through locus 3: [3, 8] is 6 bases; through 12: [5, 12] is 8 bases
        assert_eq!(well_bridge_requirement(&d, &g), 6);
        let covering = DoubleRepeat {
            copies: [RepeatCopy::new(0, 2, 3), RepeatCopy::new(0, 9, 3)],
            covers_het: [true, false],
        };
        assert_eq!(well_bridge_requirement(&covering, &g), 5);
    }

    #[test]
    fn double_bridge_needs_both_haplotypes() {
        let g = genome();
        let copy = RepeatCopy::new(0, 6, 2);
        let d = DoubleRepeat {
            copies: [copy, RepeatCopy::new(0, 14, 2)],
            covers_het: [false, false],
        };
        // read of length 7 starting at 2 covers [2, 8] which holds locus 3 and bridges [6, 7]
        let one = ReadSet::from_placements(&g, 7, [(0, 2)]).unwrap();
        assert!(!is_well_bridged(
            &d,
            &Placements::from_provenance(&g, &one).unwrap(),
            &g
        ));
        let both = ReadSet::from_placements(&g, 7, [(0, 2), (1, 3)]).unwrap();
        assert!(is_well_bridged(
            &d,
            &Placements::from_provenance(&g, &both).unwrap(),
            &g
        ));
    }
}

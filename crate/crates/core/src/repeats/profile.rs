//! Aggregate repeat statistics: the per-genome summary row and the count
//! families that feed the coverage bounds.

use std::collections::BTreeMap;
use std::io::{Read as IoRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::genome::DiploidGenome;

use super::bridging::well_bridge_requirement;
use super::{DoubleRepeat, RepeatCatalog};

/// Summary maxima for one diploid genome. `G` is the haplotype length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TableStats {
    #[serde(rename = "G")]
    pub haplotype_length: u64,
    pub max_gap: u64,
    pub max_double: u64,
    #[serde(rename = "min_L_wellbridge")]
    pub min_l_wellbridge: u64,
    pub max_interleaved_h0: u64,
    pub max_interleaved_h1: u64,
    #[serde(rename = "max_I2")]
    pub max_i2: u64,
    pub max_triple_h0: u64,
    pub max_triple_h1: u64,
}

impl TableStats {
    pub const CSV_HEADER: &'static str =
        "G,max_gap,max_double,min_L_wellbridge,max_interleaved_h0,max_interleaved_h1,max_I2,max_triple_h0,max_triple_h1";

    /// Reads every row of a stats CSV.
    pub fn read_csv<R: IoRead>(input: R) -> Result<Vec<TableStats>> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(input);
        let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
        if header.join(",") != Self::CSV_HEADER {
            return Err(Error::Parse {
                line: 1,
                message: format!(
                    "expected header `{}`, found `{}`",
                    Self::CSV_HEADER,
                    header.join(",")
                ),
            });
        }
        rdr.deserialize().map(|r| r.map_err(Error::from)).collect()
    }

    pub fn write_csv<W: Write>(rows: &[TableStats], out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        if rows.is_empty() {
            w.write_record(Self::CSV_HEADER.split(','))?;
        }
        for r in rows {
            w.serialize(r)?;
        }
        w.flush()?;
        Ok(())
    }

    /// The five repeat maxima that must be bridged for any reconstruction.
    pub fn information_maxima(&self) -> [u64; 5] {
        [
            self.max_interleaved_h0,
            self.max_interleaved_h1,
            self.max_i2,
            self.max_triple_h0,
            self.max_triple_h1,
        ]
    }
}

/// Per-genome repeat statistics plus the count families used by the coverage
/// bounds. Pairs of lengths are stored with the smaller first.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RepeatProfile {
    pub stats: TableStats,
    /// Homozygous positions between consecutive heterozygous loci.
    pub gaps: Vec<u64>,
    /// Intra-haplotype interleaved repeats by `(shorter, longer)` length.
    pub interleaved: Vec<(u64, u64, u64)>,
    /// Intra-haplotype triple repeats by length.
    pub triples: Vec<(u64, u64)>,
    /// Swappable inter-double pairs by `(shorter, longer)` length.
    pub i2_pairs: Vec<(u64, u64, u64)>,
    /// Doubles whose copies both cover a heterozygous locus, by length.
    pub both_cover: Vec<(u64, u64)>,
    /// Doubles with exactly one covering copy, by `(length, gap index)` of
    /// the other copy.
    pub one_cover: Vec<(u64, u64, u64)>,
    /// Doubles with no covering copy, by `(length, gap of copy 1, gap of copy 2)`.
    pub no_cover: Vec<(u64, u64, u64, u64)>,
}

impl RepeatProfile {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// A profile that keeps only the dominant term of each family, as far as
    /// a summary row determines it.
    ///
    /// Interleaved pairs, triples and I2 pairs become a single count at the
    /// maximal length (both members equal); the gap list is the maximal gap;
    /// well-bridging demand becomes one double whose copies both cover a locus
    /// with length `min_L_wellbridge - 2`.
    pub fn from_stats(stats: &TableStats) -> Self {
        let pair = |x: u64| if x > 0 { vec![(x, x, 1)] } else { vec![] };
        let triple = stats.max_triple_h0.max(stats.max_triple_h1);
        Self {
            stats: *stats,
            gaps: vec![stats.max_gap],
            interleaved: pair(stats.max_interleaved_h0.max(stats.max_interleaved_h1)),
            triples: if triple > 0 {
                vec![(triple, 1)]
            } else {
                vec![]
            },
            i2_pairs: pair(stats.max_i2),
            both_cover: if stats.min_l_wellbridge >= 3 {
                vec![(stats.min_l_wellbridge - 2, 1)]
            } else {
                vec![]
            },
            one_cover: vec![],
            no_cover: vec![],
        }
    }

    /// Diploid length `2|H|` used by the coverage bounds.
    pub fn diploid_length(&self) -> f64 {
        2.0 * self.stats.haplotype_length as f64
    }
}

fn flatten2(m: BTreeMap<(u64, u64), u64>) -> Vec<(u64, u64, u64)> {
    m.into_iter().map(|((a, b), c)| (a, b, c)).collect()
}

/// Profile and summary row from a full catalog.
pub fn repeat_profile(genome: &DiploidGenome, cat: &RepeatCatalog) -> RepeatProfile {
    let gaps: Vec<u64> = genome
        .gaps()
        .map(|g| g.into_iter().map(|x| x as u64).collect())
        .unwrap_or_default();
    let mut stats = TableStats {
        haplotype_length: genome.len() as u64,
        max_gap: gaps.iter().copied().max().unwrap_or(0),
        max_double: cat.max_double_len() as u64,
        ..Default::default()
    };
    if genome.n_het() > 0 {
        stats.min_l_wellbridge = cat
            .doubles
            .iter()
            .map(|d| well_bridge_requirement(d, genome) as u64)
            .max()
            .unwrap_or(0);
    }

    let mut interleaved = BTreeMap::new();
    for ir in cat.interleaved_repeats().filter(|ir| ir.is_intra()) {
        let (a, b) = (ir.first.len() as u64, ir.second.len() as u64);
        *interleaved.entry((a.min(b), a.max(b))).or_insert(0u64) += 1;
        let slot = if ir.first.copies[0].hap == 0 {
            &mut stats.max_interleaved_h0
        } else {
            &mut stats.max_interleaved_h1
        };
        *slot = (*slot).max(a.min(b));
    }

    let mut triples = BTreeMap::new();
    for t in cat.triples.iter().filter(|t| t.is_intra()) {
        *triples.entry(t.len() as u64).or_insert(0u64) += 1;
        let slot = if t.copies[0].hap == 0 {
            &mut stats.max_triple_h0
        } else {
            &mut stats.max_triple_h1
        };
        *slot = (*slot).max(t.len() as u64);
    }

    let mut i2 = BTreeMap::new();
    for (a, b) in cat.i2_repeat_pairs() {
        let (x, y) = (a.len() as u64, b.len() as u64);
        *i2.entry((x.min(y), x.max(y))).or_insert(0u64) += 1;
        stats.max_i2 = stats.max_i2.max(x.min(y));
    }

    let mut both = BTreeMap::new();
    let mut one = BTreeMap::new();
    let mut none = BTreeMap::new();
    if genome.n_het() > 0 {
        let gap_of = |d: &DoubleRepeat, k: usize| {
            genome.gap_index(d.copies[k].start).expect("copy in a gap") as u64
        };
        for d in &cat.doubles {
            let l = d.len() as u64;
            match d.covers_het {
                [true, true] => *both.entry(l).or_insert(0u64) += 1,
                [true, false] => *one.entry((l, gap_of(d, 1))).or_insert(0u64) += 1,
                [false, true] => *one.entry((l, gap_of(d, 0))).or_insert(0u64) += 1,
                [false, false] => *none.entry((l, gap_of(d, 0), gap_of(d, 1))).or_insert(0u64) += 1,
            }
        }
    }

    RepeatProfile {
        stats,
        gaps,
        interleaved: flatten2(interleaved),
        triples: triples.into_iter().collect(),
        i2_pairs: flatten2(i2),
        both_cover: both.into_iter().collect(),
        one_cover: flatten2(one),
        no_cover: none
            .into_iter()
            .map(|((a, b, c), n)| (a, b, c, n))
            .collect(),
    }
}

/// Builds the full catalog and summarizes it.
pub fn repeat_statistics(genome: &DiploidGenome) -> RepeatProfile {
    repeat_profile(genome, &RepeatCatalog::build(genome))
}

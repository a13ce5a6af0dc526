//! Random diploid genomes and read sampling.
//!
//! All randomness flows from a 64-bit seed through `ChaCha8Rng`, so equal
//! seeds give bit-identical genomes and read sets on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::genome::{CircularSequence, DiploidGenome, ReadSet, ALPHABET};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationParams {
    pub het_prob: f64,
    pub read_length: usize,
    /// Read count for uniform sampling.
    pub read_count: usize,
    /// Read-start rate per position per haplotype for Poisson sampling.
    pub rate: f64,
    pub seed: u64,
}

impl Default for SimulationParams {
    fn default() -> Self {
        Self {
            het_prob: 0.001,
            read_length: 100,
            read_count: 0,
            rate: 0.0,
            seed: 0,
        }
    }
}

impl SimulationParams {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.het_prob) {
            return Err(Error::InvalidParameter(format!(
                "het_prob must lie in [0, 1], got {}",
                self.het_prob
            )));
        }
        if self.read_length < 2 {
            return Err(Error::InvalidParameter(
                "read length must be at least 2".into(),
            ));
        }
        if !(self.rate >= 0.0 && self.rate.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "invalid rate {}",
                self.rate
            )));
        }
        Ok(())
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform i.i.d. sequence over `{A,C,G,T}`.
pub fn random_sequence<R: Rng>(len: usize, rng: &mut R) -> Result<CircularSequence> {
    let bases: Vec<u8> = (0..len).map(|_| ALPHABET[rng.random_range(0..4)]).collect();
    CircularSequence::new(bases)
}

fn alternate_base<R: Rng>(b: u8, rng: &mut R) -> u8 {
    let others: Vec<u8> = ALPHABET.iter().copied().filter(|&c| c != b).collect();
    others[rng.random_range(0..3)]
}

/// `h0 = base`; every position independently becomes heterozygous with
/// probability `het_prob`, taking a uniformly chosen different base on `h1`.
pub fn simulate_diploid(
    base: &CircularSequence,
    params: &SimulationParams,
) -> Result<DiploidGenome> {
    params.validate()?;
    let mut rng = rng(params.seed);
    let h1: Vec<u8> = base
        .as_bytes()
        .iter()
        .map(|&b| {
            if rng.random_bool(params.het_prob) {
                alternate_base(b, &mut rng)
            } else {
                b
            }
        })
        .collect();
    DiploidGenome::new(base.clone(), CircularSequence::new(h1)?)
}

/// `n` reads, each from a uniform haplotype and a uniform start.
pub fn sample_reads_uniform(
    genome: &DiploidGenome,
    n: usize,
    l: usize,
    seed: u64,
) -> Result<ReadSet> {
    if l > genome.len() {
        return Err(Error::ReadTooLong {
            read_length: l,
            genome_length: genome.len(),
        });
    }
    let mut rng = rng(seed);
    let placements: Vec<(u8, usize)> = (0..n)
        .map(|_| (rng.random_range(0..2u8), rng.random_range(0..genome.len())))
        .collect();
    ReadSet::from_placements(genome, l, placements)
}

/// Read starts as independent Poisson(`rate`) counts at every position of
/// each haplotype, so the whole diploid genome of length `G = 2|H|` carries
/// rate `rate` per position and `rate * G` reads in expectation.
pub fn sample_reads_poisson(
    genome: &DiploidGenome,
    rate: f64,
    l: usize,
    seed: u64,
) -> Result<ReadSet> {
    if l > genome.len() {
        return Err(Error::ReadTooLong {
            read_length: l,
            genome_length: genome.len(),
        });
    }
    let poisson = Poisson::new(rate)
        .map_err(|e| Error::InvalidParameter(format!("Poisson rate {rate}: {e}")))?;
    let mut rng = rng(seed);
    let mut placements = Vec::new();
    for hap in 0..2u8 {
        for start in 0..genome.len() {
            let k = poisson.sample(&mut rng) as usize;
            placements.extend(std::iter::repeat_n((hap, start), k));
        }
    }
    ReadSet::from_placements(genome, l, placements)
}

/// Average sampling depth `|R| L / (2|H|)`.
pub fn coverage_depth(rs: &ReadSet, genome: &DiploidGenome) -> f64 {
    if rs.is_empty() {
        return 0.0;
    }
    (rs.len() * rs.read_length()) as f64 / (2 * genome.len()) as f64
}

/// Lander-Waterman read count `(G/L) ln(G/(L eps))` needed to cover a
/// length-`g` genome with probability about `1 - eps`.
pub fn lander_waterman_reads(g: f64, l: f64, eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Domain(format!("eps must lie in (0, 1), got {eps}")));
    }
    if !(l > 0.0 && l < g) {
        return Err(Error::Domain(format!(
            "need 0 < L < G, got L = {l}, G = {g}"
        )));
    }
    let arg = g / (l * eps);
    if arg < 1.0 {
        return Err(Error::Domain(format!(
            "log argument G/(L eps) = {arg} is below 1"
        )));
    }
    Ok(g / l * arg.ln())
}

/// Lander-Waterman depth `c_LW = N_LW L / G = ln(G/(L eps))`.
pub fn lander_waterman_depth(g: f64, l: f64, eps: f64) -> Result<f64> {
    Ok(lander_waterman_reads(g, l, eps)? * l / g)
}

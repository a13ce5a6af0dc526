//! Circular diploid genomes, reads, and the string primitives shared by every
//! assembler: `overlap`, `union`, heterozygous gaps and switch-error
//! equivalence.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The DNA alphabet accepted by every parser in this crate.
pub const ALPHABET: [u8; 4] = *b"ACGT";

pub fn validate_bases(bases: &[u8]) -> Result<()> {
    match bases.iter().position(|b| !ALPHABET.contains(b)) {
        Some(position) => Err(Error::InvalidSymbol {
            symbol: bases[position] as char,
            position,
        }),
        None => Ok(()),
    }
}

/// A circular sequence over `{A,C,G,T}`.
///
/// The bases are stored twice in a row so that any window of length at most
/// `len()` is a contiguous slice regardless of where it starts.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CircularSequence {
    doubled: Vec<u8>,
}

impl CircularSequence {
    pub fn new(bases: impl Into<Vec<u8>>) -> Result<Self> {
        let mut doubled = bases.into();
        if doubled.is_empty() {
            return Err(Error::EmptySequence);
        }
        validate_bases(&doubled)?;
        doubled.extend_from_within(..);
        Ok(Self { doubled })
    }

    pub fn len(&self) -> usize {
        self.doubled.len() / 2
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.doubled[..self.len()]
    }

    /// Base at `i` modulo the length.
    #[inline]
    pub fn at(&self, i: usize) -> u8 {
        self.doubled[i % self.len()]
    }

    /// Base at a signed offset, e.g. `start - 1` for a left flank.
    #[inline]
    pub fn at_signed(&self, i: isize) -> u8 {
        let n = self.len() as isize;
        self.doubled[i.rem_euclid(n) as usize]
    }

    /// The window `s[start .. start + len]`, wrapping around the origin.
    ///
    /// `len` may not exceed the sequence length.
    #[inline]
    pub fn window(&self, start: usize, len: usize) -> &[u8] {
        assert!(len <= self.len(), "window longer than the circle");
        let s = start % self.len();
        &self.doubled[s..s + len]
    }

    pub fn rotated(&self, offset: usize) -> CircularSequence {
        let n = self.len();
        Self::new(self.window(offset % n, n).to_vec()).expect("rotation of a valid sequence")
    }
}

impl std::fmt::Debug for CircularSequence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "CircularSequence({})",
            String::from_utf8_lossy(self.as_bytes())
        )
    }
}

impl std::str::FromStr for CircularSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::new(s.as_bytes().to_vec())
    }
}

/// Two equal-length circular haplotypes together with their heterozygous loci.
#[derive(Clone, PartialEq, Eq)]
pub struct DiploidGenome {
    haps: [CircularSequence; 2],
    het_loci: Vec<usize>,
    /// `het_prefix[i]` = number of heterozygous loci in `[0, i)` of the doubled coordinates.
    het_prefix: Vec<u32>,
}

impl DiploidGenome {
    pub fn new(h0: CircularSequence, h1: CircularSequence) -> Result<Self> {
        if h0.len() != h1.len() {
            return Err(Error::LengthMismatch {
                h0: h0.len(),
                h1: h1.len(),
            });
        }
        let n = h0.len();
        let het_loci: Vec<usize> = (0..n).filter(|&i| h0.at(i) != h1.at(i)).collect();
        let mut het_prefix = Vec::with_capacity(2 * n + 1);
        het_prefix.push(0u32);
        let mut count = 0u32;
        for i in 0..2 * n {
            if h0.at(i) != h1.at(i) {
                count += 1;
            }
            het_prefix.push(count);
        }
        Ok(Self {
            haps: [h0, h1],
            het_loci,
            het_prefix,
        })
    }

    pub fn from_strs(h0: &str, h1: &str) -> Result<Self> {
        Self::new(h0.parse()?, h1.parse()?)
    }

    /// A genome with identical haplotypes.
    pub fn homozygous(seq: CircularSequence) -> Self {
        Self::new(seq.clone(), seq).expect("equal lengths")
    }

    /// Haplotype length |H|.
    pub fn len(&self) -> usize {
        self.haps[0].len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn hap(&self, i: usize) -> &CircularSequence {
        &self.haps[i]
    }

    pub fn haps(&self) -> &[CircularSequence; 2] {
        &self.haps
    }

    /// Sorted heterozygous loci.
    pub fn het_loci(&self) -> &[usize] {
        &self.het_loci
    }

    pub fn n_het(&self) -> usize {
        self.het_loci.len()
    }

    pub fn is_het(&self, pos: usize) -> bool {
        let p = pos % self.len();
        self.het_prefix[p + 1] != self.het_prefix[p]
    }

    /// Number of heterozygous loci inside the circular span `[start, start + len)`.
    pub fn het_count(&self, start: usize, len: usize) -> usize {
        let n = self.len();
        let s = start % n;
        let len = len.min(n);
        (self.het_prefix[s + len] - self.het_prefix[s]) as usize
    }

    pub fn covers_het(&self, start: usize, len: usize) -> bool {
        self.het_count(start, len) > 0
    }

    /// Index `i` into `het_loci` such that `pos` lies strictly inside gap `i`,
    /// i.e. between `het_loci[i]` and `het_loci[(i + 1) % n]`.
    ///
    /// Returns `None` when there are no loci or `pos` is itself heterozygous.
    pub fn gap_index(&self, pos: usize) -> Option<usize> {
        if self.het_loci.is_empty() || self.is_het(pos) {
            return None;
        }
        let p = pos % self.len();
        // number of loci strictly before p, minus one, wrapping to the last locus
        let before = self.het_prefix[p] as usize;
        Some(if before == 0 {
            self.het_loci.len() - 1
        } else {
            before - 1
        })
    }

    /// Gap lengths `g_i`: homozygous positions strictly between `het_loci[i]`
    /// and the next locus clockwise.
    pub fn gaps(&self) -> Result<Vec<usize>> {
        let n = self.len();
        let k = self.het_loci.len();
        if k == 0 {
            return Err(Error::EmptyLocusSet);
        }
        if k == 1 {
            return Ok(vec![n - 1]);
        }
        Ok((0..k)
            .map(|i| {
                let a = self.het_loci[i];
                let b = self.het_loci[(i + 1) % k];
                (b + n - a - 1) % n
            })
            .collect())
    }

    pub fn max_gap(&self) -> Option<usize> {
        self.gaps().ok().and_then(|g| g.into_iter().max())
    }

    /// Clockwise distance from `from` to `to`, in `[0, |H|)`.
    #[inline]
    pub fn cw(&self, from: usize, to: usize) -> usize {
        let n = self.len();
        (to % n + n - from % n) % n
    }
}

impl std::fmt::Debug for DiploidGenome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DiploidGenome")
            .field("h0", &String::from_utf8_lossy(self.haps[0].as_bytes()))
            .field("h1", &String::from_utf8_lossy(self.haps[1].as_bytes()))
            .field("het_loci", &self.het_loci)
            .finish()
    }
}

/// Ground-truth origin of a simulated read.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Provenance {
    pub hap: u8,
    pub start: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Read {
    pub seq: Vec<u8>,
    pub provenance: Option<Provenance>,
}

impl Read {
    pub fn new(seq: impl Into<Vec<u8>>) -> Self {
        Self {
            seq: seq.into(),
            provenance: None,
        }
    }

    pub fn with_provenance(seq: impl Into<Vec<u8>>, hap: u8, start: usize) -> Self {
        Self {
            seq: seq.into(),
            provenance: Some(Provenance { hap, start }),
        }
    }
}

/// A multiset of equal-length reads. Read ids are indices into `reads`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReadSet {
    reads: Vec<Read>,
    read_length: usize,
}

impl ReadSet {
    pub fn new(reads: Vec<Read>, read_length: usize) -> Result<Self> {
        for (index, r) in reads.iter().enumerate() {
            if r.seq.len() != read_length {
                return Err(Error::InconsistentReadLength {
                    index,
                    expected: read_length,
                    found: r.seq.len(),
                });
            }
            validate_bases(&r.seq)?;
        }
        Ok(Self { reads, read_length })
    }

    /// Builds a read set from plain strings; the length is taken from the first one.
    pub fn from_strs<S: AsRef<str>>(seqs: &[S]) -> Result<Self> {
        let l = seqs.first().map(|s| s.as_ref().len()).unwrap_or(0);
        Self::new(
            seqs.iter()
                .map(|s| Read::new(s.as_ref().as_bytes()))
                .collect(),
            l,
        )
    }

    /// Every length-`l` window of both haplotypes, in (haplotype, start) order.
    pub fn all_windows(genome: &DiploidGenome, l: usize) -> Result<Self> {
        Self::from_placements(
            genome,
            l,
            (0..2u8).flat_map(|h| (0..genome.len()).map(move |s| (h, s))),
        )
    }

    /// Reads spelled at the given `(haplotype, start)` placements.
    pub fn from_placements(
        genome: &DiploidGenome,
        l: usize,
        placements: impl IntoIterator<Item = (u8, usize)>,
    ) -> Result<Self> {
        if l > genome.len() {
            return Err(Error::ReadTooLong {
                read_length: l,
                genome_length: genome.len(),
            });
        }
        let reads = placements
            .into_iter()
            .map(|(h, s)| {
                let s = s % genome.len();
                Read::with_provenance(genome.hap(h as usize).window(s, l), h, s)
            })
            .collect();
        Ok(Self {
            reads,
            read_length: l,
        })
    }

    pub fn read_length(&self) -> usize {
        self.read_length
    }

    pub fn len(&self) -> usize {
        self.reads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reads.is_empty()
    }

    pub fn reads(&self) -> &[Read] {
        &self.reads
    }

    pub fn get(&self, id: usize) -> &Read {
        &self.reads[id]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Read> {
        self.reads.iter()
    }

    pub fn has_provenance(&self) -> bool {
        self.reads.iter().all(|r| r.provenance.is_some())
    }

    pub fn without_provenance(&self) -> Self {
        Self {
            reads: self
                .reads
                .iter()
                .map(|r| Read::new(r.seq.clone()))
                .collect(),
            read_length: self.read_length,
        }
    }

    /// Same multiset with ids permuted: new id `i` is old id `order[i]`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        Self {
            reads: order.iter().map(|&i| self.reads[i].clone()).collect(),
            read_length: self.read_length,
        }
    }
}

/// Length of the longest proper suffix of `x` that is also a proper prefix of `y`.
pub fn overlap(x: &[u8], y: &[u8]) -> usize {
    let m = x.len().min(y.len());
    if m <= 1 {
        return 0;
    }
    let pattern = &y[..m - 1];
    let fail = failure_function(pattern);
    let mut j = 0usize;
    for &c in &x[x.len() - (m - 1)..] {
        while j > 0 && (j == pattern.len() || pattern[j] != c) {
            j = fail[j - 1];
        }
        if pattern[j] == c {
            j += 1;
        }
    }
    j
}

/// KMP failure function: `f[i]` is the longest proper border of `p[..=i]`.
pub(crate) fn failure_function(p: &[u8]) -> Vec<usize> {
    let mut f = vec![0usize; p.len()];
    let mut k = 0usize;
    for i in 1..p.len() {
        while k > 0 && p[i] != p[k] {
            k = f[k - 1];
        }
        if p[i] == p[k] {
            k += 1;
        }
        f[i] = k;
    }
    f
}

/// `x` followed by `y` with their common overlap written once.
pub fn union(x: &[u8], y: &[u8]) -> Vec<u8> {
    let o = overlap(x, y);
    let mut out = Vec::with_capacity(x.len() + y.len() - o);
    out.extend_from_slice(x);
    out.extend_from_slice(&y[o..]);
    out
}

/// Rotation offsets `r` such that `seq` rotated by `r` agrees with `truth` at
/// every homozygous position and carries one of the two alleles at every
/// heterozygous locus.
fn admissible_rotations(seq: &[u8], truth: &DiploidGenome) -> Vec<usize> {
    let n = truth.len();
    let (t0, t1) = (truth.hap(0).as_bytes(), truth.hap(1).as_bytes());
    (0..n)
        .filter(|&r| {
            (0..n).all(|i| {
                let c = seq[(i + r) % n];
                c == t0[i] || c == t1[i]
            })
        })
        .collect()
}

/// Whether `(g0, g1)` reconstructs `truth` up to switch errors.
///
/// The two reconstructed haplotypes may be rotated independently.
pub fn switch_equivalent_seqs(g0: &[u8], g1: &[u8], truth: &DiploidGenome) -> bool {
    let n = truth.len();
    if g0.len() != n || g1.len() != n {
        return false;
    }
    let v0 = admissible_rotations(g0, truth);
    if v0.is_empty() {
        return false;
    }
    let v1 = admissible_rotations(g1, truth);
    let loci = truth.het_loci();
    v0.iter().any(|&r0| {
        v1.iter()
            .any(|&r1| loci.iter().all(|&i| g0[(i + r0) % n] != g1[(i + r1) % n]))
    })
}

pub fn switch_equivalent(g: &DiploidGenome, truth: &DiploidGenome) -> bool {
    switch_equivalent_seqs(g.hap(0).as_bytes(), g.hap(1).as_bytes(), truth)
}

//! Small instances on which a condition fails and an assembler (or the
//! likelihood itself) cannot recover the genome.
//!
//! Each instance is laid out by position: a seeded random filler, a repeat
//! string planted at given copies, heterozygous loci at given positions, and
//! reads at given placements. Seeds were picked so that no chance repeat
//! disturbs the intended arrangement; the tests re-check the arrangement.

use std::collections::BTreeSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dbg::dbg_assemble;
use crate::error::{Error, Result};
use crate::genome::{
    overlap, switch_equivalent_seqs, CircularSequence, DiploidGenome, ReadSet, ALPHABET,
};
use crate::greedy::{check_conditions_greedy, greedy_assemble};
use crate::olc::{overlap_assemble, WalkOptions};
use crate::oracle::{ambiguity_against, EnumerationOptions};
use crate::repeats::{CatalogOptions, Placements, RepeatCatalog};
use crate::simulate::{random_sequence, rng};

/// Haplotype selector for a planted copy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum On {
    H0,
    H1,
    Both,
}

impl On {
    fn has(self, h: usize) -> bool {
        matches!((self, h), (On::Both, _) | (On::H0, 0) | (On::H1, 1))
    }
}

/// A string planted at several positions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Planted {
    pub len: usize,
    pub copies: Vec<(On, usize)>,
    /// `(p, i)`: the string repeats with period `p` except at index `i`, so
    /// two copies `p` apart on opposite haplotypes differ at one position.
    pub period: Option<(usize, usize)>,
}

impl Planted {
    pub fn new(len: usize, copies: Vec<(On, usize)>) -> Self {
        Self {
            len,
            copies,
            period: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layout {
    pub len: usize,
    pub seed: u64,
    /// The first copy of each string is random; later copies copy it base
    /// by base, so overlapping copies come out periodic.
    pub repeats: Vec<Planted>,
    /// Heterozygous loci. A locus inside a copy keeps the copy on the
    /// haplotype named by its `On` and changes the other haplotype.
    pub loci: Vec<usize>,
}

impl Layout {
    pub fn build(&self) -> Result<DiploidGenome> {
        let n = self.len;
        let mut r = rng(self.seed);
        let h0 = random_sequence(n, &mut r)?.as_bytes().to_vec();
        let mut strings = Vec::new();
        for rep in &self.repeats {
            let mut s = random_sequence(rep.len, &mut r)?.as_bytes().to_vec();
            if let Some((p, skip)) = rep.period {
                for i in p..s.len() {
                    if i != skip {
                        s[i] = s[i - p];
                    } else if s[i] == s[i - p] {
                        s[i] =
                            ALPHABET[(ALPHABET.iter().position(|&c| c == s[i]).unwrap() + 1) % 4];
                    }
                }
            }
            strings.push(s);
        }
        let mut h = [h0.clone(), h0];
        let mut planted = [vec![false; n], vec![false; n]];
        // each haplotype gets its own copies, and the other haplotype's
        // copies wherever its own do not reach
        for (rep, s) in self.repeats.iter().zip(&strings) {
            for (hap, seq) in h.iter_mut().enumerate() {
                let (own, other): (Vec<&(On, usize)>, Vec<_>) =
                    rep.copies.iter().partition(|c| c.0.has(hap));
                let mut theirs = seq.clone();
                plant(&mut theirs, s, other.iter().map(|c| c.1));
                plant(seq, s, own.iter().map(|c| c.1));
                for &(_, start) in &own {
                    for i in 0..rep.len {
                        planted[hap][(start + i) % n] = true;
                    }
                }
                for &(_, start) in &other {
                    for i in 0..rep.len {
                        let p = (start + i) % n;
                        if !planted[hap][p] {
                            seq[p] = theirs[p];
                        }
                    }
                }
            }
        }
        for &p in &self.loci {
            let p = p % n;
            if h[0][p] != h[1][p] {
                continue;
            }
            let alts: Vec<u8> = ALPHABET.iter().copied().filter(|&c| c != h[0][p]).collect();
            let alt = alts[r.random_range(0..alts.len())];
            let change = if planted[1][p] && !planted[0][p] {
                0
            } else {
                1
            };
            h[change][p] = alt;
        }
        let [h0, h1] = h;
        DiploidGenome::new(CircularSequence::new(h0)?, CircularSequence::new(h1)?)
    }
}

/// Writes `s` at the first start and copies it base by base to the others.
fn plant(seq: &mut [u8], s: &[u8], starts: impl Iterator<Item = usize>) {
    let n = seq.len();
    let mut first = None;
    for start in starts {
        let from = *first.get_or_insert(start);
        for i in 0..s.len() {
            seq[(start + i) % n] = if start == from {
                s[i]
            } else {
                seq[(from + i) % n]
            };
        }
    }
}

/// Reads of length `l` starting every `stride` bases on each haplotype from
/// `offsets[h]`, minus `drop` and plus `extra`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReadLayout {
    pub l: usize,
    pub stride: usize,
    pub offsets: [usize; 2],
    pub drop: Vec<(u8, usize)>,
    pub extra: Vec<(u8, usize)>,
}

impl ReadLayout {
    pub fn placements(&self, n: usize) -> Vec<(u8, usize)> {
        let mut out = BTreeSet::new();
        for h in 0..2u8 {
            let mut s = self.offsets[h as usize] % n;
            for _ in 0..n.div_ceil(self.stride) {
                out.insert((h, s));
                s = (s + self.stride) % n;
            }
        }
        for d in &self.drop {
            out.remove(d);
        }
        out.extend(self.extra.iter().copied());
        out.into_iter().collect()
    }

    pub fn reads(&self, g: &DiploidGenome) -> Result<ReadSet> {
        ReadSet::from_placements(g, self.l, self.placements(g.len()))
    }
}

/// One read per distinct string, keeping the first placement.
pub fn distinct_reads(rs: &ReadSet) -> ReadSet {
    let mut seen = BTreeSet::new();
    let reads = rs
        .iter()
        .filter(|r| seen.insert(r.seq.clone()))
        .cloned()
        .collect();
    ReadSet::new(reads, rs.read_length()).expect("same read length")
}

/// The failure an instance is built to trigger.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Expected {
    /// Genomes from more than one switch-equivalence class explain the reads
    /// equally well.
    Ambiguous,
    /// Greedy merging fragments or returns a non-equivalent genome.
    GreedyFails,
    /// The condensed graph at the given `k` is not Eulerian.
    NotEulerian,
    /// The condensed graph is Eulerian but some tour spells a non-equivalent
    /// genome.
    AmbiguousTours,
    /// At least two optimal closed walks spell non-equivalent genomes, and
    /// the reads flanking the two repeat copies overlap by the same total in
    /// both pairings.
    TiedWalks,
    /// de Bruijn assembly succeeds for every k from the special-case bound
    /// to L - 1 and fails for some smaller k.
    SpecialCaseBound,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub name: &'static str,
    pub description: &'static str,
    pub layout: Layout,
    pub reads: ReadLayout,
    /// k for the de Bruijn instances.
    pub k: Option<usize>,
    pub min_overlap: usize,
    pub expected: Expected,
}

impl Counterexample {
    /// Whether both copies of `d` intersect planted copies, i.e. the repeat
    /// belongs to the intended arrangement rather than to the filler.
    pub fn is_planted(&self, d: &crate::DoubleRepeat) -> bool {
        let n = self.layout.len;
        d.copies.iter().all(|c| {
            self.layout.repeats.iter().any(|rep| {
                rep.copies
                    .iter()
                    .any(|&(_, s)| (s + n - c.start) % n < c.len || (c.start + n - s) % n < rep.len)
            })
        })
    }

    pub fn genome(&self) -> DiploidGenome {
        self.layout.build().expect("valid layout")
    }

    /// Reads as placed; overlap-graph instances keep one read per string.
    pub fn read_set(&self) -> ReadSet {
        let rs = self
            .reads
            .reads(&self.genome())
            .expect("reads fit the genome");
        if self.expected == Expected::TiedWalks {
            distinct_reads(&rs)
        } else {
            rs
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evaluation {
    pub name: String,
    pub expected: Expected,
    pub triggered: bool,
    pub detail: String,
}

fn equivalent(out: &(Vec<u8>, Vec<u8>), g: &DiploidGenome) -> bool {
    switch_equivalent_seqs(&out.0, &out.1, g)
}

fn halves(mut s: Vec<u8>) -> (Vec<u8>, Vec<u8>) {
    let b = s.split_off(s.len() / 2);
    (s, b)
}

/// Spelled outcome of de Bruijn assembly at `k`: `Ok(true)` when Eulerian
/// and every tour (up to `limit`) spells an equivalent genome.
fn dbg_unique(g: &DiploidGenome, rs: &ReadSet, k: usize) -> Result<bool> {
    let gc = crate::dbg::condense(&crate::dbg::build_dbg(rs, k)?);
    if gc.components().len() == 2 {
        return crate::dbg::euler_spell(&gc).map(|out| equivalent(&out, g));
    }
    let tours = gc.euler_tours(256, 5_000_000)?;
    Ok(!tours.is_empty()
        && tours
            .iter()
            .all(|t| equivalent(&halves(gc.spell_tour(t)), g)))
}

/// Reads overlapping a copy from the left and from the right: the last
/// placement starting before the copy and ending inside it, and the first
/// starting inside it and ending past it.
fn flank_reads(
    g: &DiploidGenome,
    pl: &[(u8, usize)],
    l: usize,
    copy: &crate::RepeatCopy,
) -> Option<(Vec<u8>, Vec<u8>)> {
    let n = g.len() as isize;
    let rel = |s: usize| {
        let d = (s as isize - copy.start as isize).rem_euclid(n);
        if d > n / 2 {
            d - n
        } else {
            d
        }
    };
    let (l, len) = (l as isize, copy.len as isize);
    let on_hap = pl
        .iter()
        .filter(|p| p.0 == copy.hap)
        .map(|p| (rel(p.1), p.1));
    let before = on_hap
        .clone()
        .filter(|&(d, _)| d < 0 && d + l > 0 && d + l - 1 < len)
        .max()?;
    let after = on_hap
        .filter(|&(d, _)| d >= 0 && d < len && d + l > len)
        .min()?;
    let hap = g.hap(copy.hap as usize);
    Some((
        hap.window(before.1, l as usize).to_vec(),
        hap.window(after.1, l as usize).to_vec(),
    ))
}

/// Runs the assembler or search an instance targets and reports whether the
/// expected failure occurred.
pub fn evaluate(cx: &Counterexample) -> Result<Evaluation> {
    let g = cx.genome();
    let rs = cx.read_set();
    let (triggered, detail) = match cx.expected {
        Expected::Ambiguous => {
            let opts = EnumerationOptions {
                het_count_bound: Some(g.n_het() + 2),
                ..Default::default()
            };
            let rep = ambiguity_against(&g, &rs, opts)?;
            let it = crate::oracle::check_conditions_it(&g, &rs);
            (
                rep.n_classes() > 1,
                format!(
                    "{} classes; I1 {} I2 {} I3 {}",
                    rep.n_classes(),
                    it.i1,
                    it.i2,
                    it.i3
                ),
            )
        }
        Expected::GreedyFails => {
            let c = check_conditions_greedy(&g, &rs);
            let r = greedy_assemble(&rs)?;
            let outcome = match r.haplotypes() {
                Ok(out) if equivalent(&out, &g) => "equivalent".to_string(),
                Ok(_) => "not equivalent".to_string(),
                Err(e) => e.to_string(),
            };
            let flags = format!("G1 {} G2 {} G3a {} G3b {}", c.g1, c.g2, c.g3a, c.g3b);
            (outcome != "equivalent", format!("{outcome}; {flags}"))
        }
        Expected::NotEulerian => {
            let k = cx.k.expect("k given");
            match dbg_assemble(&rs, k) {
                Err(Error::NotEulerian { imbalanced }) => {
                    (true, format!("k={k}: imbalanced vertices {imbalanced:?}"))
                }
                Err(e) => (false, format!("k={k}: {e}")),
                Ok(_) => (false, format!("k={k}: Eulerian")),
            }
        }
        Expected::AmbiguousTours => {
            let k = cx.k.expect("k given");
            let gc = crate::dbg::condense(&crate::dbg::build_dbg(&rs, k)?);
            match gc.euler_tours(256, 5_000_000) {
                Ok(tours) => {
                    let bad = tours
                        .iter()
                        .filter(|t| !equivalent(&halves(gc.spell_tour(t)), &g))
                        .count();
                    (
                        bad > 0,
                        format!("k={k}: {} tours, {bad} not equivalent", tours.len()),
                    )
                }
                Err(e) => (false, format!("k={k}: {e}")),
            }
        }
        Expected::TiedWalks => tied_walks(cx, &g, &rs)?,
        Expected::SpecialCaseBound => {
            let bound = crate::dbg::special_case_k_bound(&g);
            // smallest k above every chance repeat of the filler
            let cat = RepeatCatalog::build_with(
                &g,
                CatalogOptions {
                    min_len: 1,
                    ..Default::default()
                },
            );
            let from = 1 + cat
                .doubles
                .iter()
                .filter(|d| !cx.is_planted(d))
                .map(|d| d.len())
                .max()
                .unwrap_or(1);
            let mut below = Vec::new();
            let mut above_ok = true;
            for k in from..rs.read_length() {
                let ok = matches!(dbg_unique(&g, &rs, k), Ok(true));
                if k < bound && !ok {
                    below.push(k);
                }
                above_ok &= k < bound || ok;
            }
            (
                above_ok && !below.is_empty(),
                format!("bound {bound}; k from {from}; fails at k in {below:?}; unique for all k >= bound: {above_ok}"),
            )
        }
    };
    Ok(Evaluation {
        name: cx.name.to_string(),
        expected: cx.expected,
        triggered,
        detail,
    })
}

fn tied_walks(cx: &Counterexample, g: &DiploidGenome, rs: &ReadSet) -> Result<(bool, String)> {
    let opts = WalkOptions {
        max_optima: 16,
        ..Default::default()
    };
    let a = overlap_assemble(rs, cx.min_overlap, opts)?;
    let mut outs = vec![(a.g0.into_bytes(), a.g1.into_bytes())];
    outs.extend(
        a.alternatives
            .into_iter()
            .map(|(_, x, y)| (x.into_bytes(), y.into_bytes())),
    );
    let classes = outs
        .iter()
        .map(|o| equivalent(o, g))
        .collect::<BTreeSet<_>>();
    let tied = outs.len() >= 2 && classes.contains(&false);
    let pl = Placements::from_occurrences(g, rs);
    let cat = RepeatCatalog::build_with(
        g,
        CatalogOptions {
            min_len: 1,
            ..Default::default()
        },
    );
    let d = cat
        .doubles
        .iter()
        .filter(|d| {
            !d.copies.iter().any(|c| pl.is_bridged(c)) && !crate::dbg::shares_het_locus(d, g)
        })
        .max_by_key(|d| d.len());
    let Some(d) = d else {
        return Ok((false, "every double repeat is bridged".into()));
    };
    let placements = cx.reads.placements(g.len());
    let l = rs.read_length();
    let flanks = flank_reads(g, &placements, l, &d.copies[0]).zip(flank_reads(
        g,
        &placements,
        l,
        &d.copies[1],
    ));
    let Some(((a1, b1), (a2, b2))) = flanks else {
        return Ok((false, "repeat copies lack flanking reads".into()));
    };
    let (straight, crossed) = (
        overlap(&a1, &b1) + overlap(&a2, &b2),
        overlap(&a1, &b2) + overlap(&a2, &b1),
    );
    let identity = straight == crossed && overlap(&a1, &b2) > 0 && overlap(&a2, &b1) > 0;
    Ok((
        tied && identity,
        format!(
            "{} optimal walks of length {}, {} not equivalent; flank overlaps {straight} straight vs {crossed} crossed",
            outs.len(),
            a.length,
            outs.iter().filter(|o| !equivalent(o, g)).count()
        ),
    ))
}

fn layout(len: usize, seed: u64, repeats: Vec<Planted>, loci: Vec<usize>) -> Layout {
    Layout {
        len,
        seed,
        repeats,
        loci,
    }
}

fn one(len: usize, copies: Vec<(On, usize)>) -> Vec<Planted> {
    vec![Planted::new(len, copies)]
}

fn periodic(len: usize, copies: Vec<(On, usize)>, p: usize, skip: usize) -> Vec<Planted> {
    vec![Planted {
        len,
        copies,
        period: Some((p, skip)),
    }]
}

fn tiled(l: usize, stride: usize, drop: &[(u8, usize)]) -> ReadLayout {
    ReadLayout {
        l,
        stride,
        offsets: [0, 0],
        drop: drop.to_vec(),
        extra: vec![],
    }
}

fn greedy(
    name: &'static str,
    description: &'static str,
    layout: Layout,
    drop: &[(u8, usize)],
) -> Counterexample {
    Counterexample {
        name,
        description,
        layout,
        reads: tiled(14, 3, drop),
        k: None,
        min_overlap: 1,
        expected: Expected::GreedyFails,
    }
}

fn dbg(
    name: &'static str,
    description: &'static str,
    layout: Layout,
    expected: Expected,
) -> Counterexample {
    Counterexample {
        name,
        description,
        layout,
        reads: tiled(11, 1, &[]),
        k: Some(8),
        min_overlap: 1,
        expected,
    }
}

fn olc(name: &'static str, description: &'static str, layout: Layout) -> Counterexample {
    Counterexample {
        name,
        description,
        layout,
        reads: tiled(10, 4, &[]),
        k: None,
        min_overlap: 5,
        expected: Expected::TiedWalks,
    }
}

/// Every instance, in a fixed order.
pub fn counterexample_suite() -> Vec<Counterexample> {
    use On::*;
    vec![
        Counterexample {
            name: "it-interleaved-inter-doubles",
            description: "Two inter double repeats of length 4, each with one copy per haplotype at the same offset, \
                          all unbridged by reads of length 5. Swapping the haplotype segments between them explains the reads equally well.",
            layout: layout(28, 5, vec![Planted::new(4, vec![(H0, 2), (H1, 9)]), Planted::new(4, vec![(H0, 14), (H1, 21)])], vec![3, 10, 15, 22]),
            reads: tiled(5, 1, &[]),
            k: None,
            min_overlap: 1,
            expected: Expected::Ambiguous,
        },
        greedy(
            "greedy-single-locus",
            "One heterozygous locus, so there is nothing to phase against; haplotype-1 reads only near the locus.",
            layout(60, 0, vec![], vec![20]),
            &[(0, 9), (0, 27), (0, 48), (1, 0), (1, 3), (1, 6), (1, 21), (1, 24), (1, 27), (1, 30), (1, 33), (1, 36), (1, 39), (1, 42), (1, 45), (1, 48), (1, 51), (1, 54), (1, 57)],
        ),
        greedy(
            "greedy-unanchored-loci",
            "Three loci with no repeat; the reads covering consecutive loci do not overlap each other.",
            layout(60, 1, vec![], vec![10, 30, 50]),
            &[(0, 9), (0, 18), (0, 54), (1, 9), (1, 12), (1, 15), (1, 18), (1, 33), (1, 36), (1, 51), (1, 54)],
        ),
        greedy(
            "greedy-overlapping-homozygous-copies",
            "A homozygous double repeat whose two copies overlap, not well bridged.",
            layout(60, 1, one(10, vec![(Both, 12), (Both, 15)]), vec![8, 28, 48]),
            &[(0, 12), (1, 9), (1, 12), (1, 30), (1, 33), (1, 42), (1, 51), (1, 54)],
        ),
        greedy(
            "greedy-separate-homozygous-copies",
            "A homozygous double repeat with separate copies, not well bridged.",
            layout(60, 1, one(10, vec![(Both, 12), (Both, 33)]), vec![8, 28, 48]),
            &[(1, 9), (1, 12), (1, 15), (1, 30), (1, 33), (1, 36), (1, 51), (1, 54)],
        ),
        greedy(
            "greedy-heterozygous-and-homozygous-copy",
            "A double repeat with one copy on haplotype 0 only and one on both haplotypes, not well bridged.",
            layout(60, 3, one(10, vec![(H0, 24), (Both, 50)]), vec![8, 28, 48]),
            &[(0, 3), (0, 9), (1, 9), (1, 12), (1, 30), (1, 33), (1, 51), (1, 54), (1, 57)],
        ),
        greedy(
            "greedy-intra-separate-copies",
            "An intra double repeat on haplotype 0 with separate copies, not well bridged.",
            layout(60, 3, one(10, vec![(H0, 24), (H0, 44)]), vec![8, 28, 48]),
            &[(0, 21), (0, 24), (0, 42), (0, 45), (1, 6), (1, 9), (1, 12), (1, 30), (1, 33), (1, 36), (1, 45), (1, 51), (1, 54)],
        ),
        greedy(
            "greedy-inter-overlapping-copies",
            "Overlapping copies on opposite haplotypes that differ at one locus, not well bridged.",
            layout(60, 2, periodic(10, vec![(H0, 24), (H1, 27)], 3, 4), vec![8, 48]),
            &[(0, 0), (0, 12), (0, 21), (0, 24), (0, 30), (0, 36), (1, 0), (1, 9), (1, 12), (1, 24), (1, 30), (1, 33), (1, 51), (1, 54)],
        ),
        greedy(
            "greedy-intra-overlapping-copies",
            "An intra double repeat on haplotype 0 whose copies overlap, not well bridged.",
            layout(60, 1, one(10, vec![(H0, 24), (H0, 27)]), vec![8, 28, 48]),
            &[(1, 9), (1, 12), (1, 15), (1, 30), (1, 33), (1, 36), (1, 51), (1, 54)],
        ),
        dbg(
            "dbg-overlapping-homozygous-copies",
            "A homozygous double repeat of length k whose copies overlap; the condensed graph is unbalanced.",
            layout(60, 1, one(8, vec![(Both, 20), (Both, 23)]), vec![5, 40, 50]),
            Expected::NotEulerian,
        ),
        dbg(
            "dbg-heterozygous-and-homozygous-copy",
            "A double repeat of length k with one copy on haplotype 0 only and one on both haplotypes.",
            layout(60, 2, one(8, vec![(H0, 14), (Both, 38)]), vec![17, 30, 50]),
            Expected::NotEulerian,
        ),
        dbg(
            "dbg-separate-homozygous-copies",
            "A homozygous double repeat of length k with separate copies, each next to a locus.",
            layout(60, 2, one(8, vec![(Both, 14), (Both, 38)]), vec![5, 28, 50]),
            Expected::NotEulerian,
        ),
        dbg(
            "dbg-inter-overlapping-copies",
            "Overlapping copies of length k on opposite haplotypes; the graph is Eulerian but tours disagree.",
            layout(60, 3, periodic(8, vec![(H0, 14), (H1, 18)], 4, 5), vec![40, 52]),
            Expected::AmbiguousTours,
        ),
        dbg(
            "dbg-intra-separate-copies",
            "An intra double repeat of length k on haplotype 0; the graph is Eulerian but tours disagree.",
            layout(60, 2, one(8, vec![(H0, 14), (H0, 38)]), vec![17, 41, 55]),
            Expected::AmbiguousTours,
        ),
        olc(
            "olc-inter-copies",
            "An unbridged inter double repeat between two loci; both pairings of its flanking reads give shortest walks.",
            layout(44, 0, one(7, vec![(H0, 7), (H1, 27)]), vec![9, 30, 19]),
        ),
        olc(
            "olc-heterozygous-and-homozygous-copy",
            "An unbridged double repeat with one copy on haplotype 0 only and one on both haplotypes.",
            layout(44, 0, one(7, vec![(H0, 7), (Both, 27)]), vec![9, 40, 19]),
        ),
        olc(
            "olc-separate-homozygous-copies",
            "An unbridged homozygous double repeat with separate copies.",
            layout(44, 0, one(7, vec![(Both, 7), (Both, 27)]), vec![2, 36, 19]),
        ),
        olc(
            "olc-inter-overlapping-copies",
            "Overlapping unbridged copies on opposite haplotypes that differ at one locus.",
            layout(44, 0, periodic(7, vec![(H0, 7), (H1, 11)], 4, 4), vec![30, 24]),
        ),
        olc(
            "olc-intra-separate-copies",
            "An unbridged intra double repeat on haplotype 0 with separate copies.",
            layout(44, 0, one(7, vec![(H0, 7), (H0, 27)]), vec![9, 30, 19]),
        ),
        Counterexample {
            name: "special-one-shared-locus",
            description: "An intra double repeat whose overlapping copies share one locus. de Bruijn assembly is unique for every k \
                          from the special-case bound up and fails just below it.",
            layout: layout(60, 3, one(8, vec![(H0, 20), (H0, 24)]), vec![24, 5, 45]),
            reads: tiled(16, 1, &[]),
            k: None,
            min_overlap: 1,
            expected: Expected::SpecialCaseBound,
        },
        Counterexample {
            name: "special-two-shared-loci",
            description: "As above with two loci shared by the overlapping copies.",
            layout: layout(60, 1, one(10, vec![(H0, 20), (H0, 26)]), vec![26, 34, 5, 50]),
            reads: tiled(16, 1, &[]),
            k: None,
            min_overlap: 1,
            expected: Expected::SpecialCaseBound,
        },
    ]
}

pub fn find(name: &str) -> Option<Counterexample> {
    counterexample_suite().into_iter().find(|c| c.name == name)
}

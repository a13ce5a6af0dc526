//! Information-theoretic conditions and the exhaustive search for genomes
//! that explain a read multiset equally well.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::genome::{switch_equivalent, CircularSequence, DiploidGenome, ReadSet, ALPHABET};
use crate::repeats::{
    i2_pairs, interleaved_pairs, node_doubles, DoubleRepeat, Placements, RotationIndex,
};

/// Flags for the three necessary conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ItConditions {
    /// Intra-triple and intra-interleaved repeats are bridged.
    pub i1: bool,
    /// Every swappable inter-double pair has a bridged member.
    pub i2: bool,
    /// Reads cover both haplotypes.
    pub i3: bool,
}

impl ItConditions {
    pub fn all(&self) -> bool {
        self.i1 && self.i2 && self.i3
    }
}

fn double_bridged(d: &DoubleRepeat, pl: &Placements) -> bool {
    d.copies.iter().any(|c| pl.is_bridged(c))
}

/// Evaluates I1-I3 with reads placed at every exact occurrence.
pub fn check_conditions_it(genome: &DiploidGenome, rs: &ReadSet) -> ItConditions {
    check_conditions_it_with(genome, &Placements::from_occurrences(genome, rs))
}

pub fn check_conditions_it_with(genome: &DiploidGenome, pl: &Placements) -> ItConditions {
    let index = RotationIndex::new(genome);
    let mut doubles: Vec<(DoubleRepeat, u32)> = Vec::new();
    let mut unbridged_triple = false;
    index.for_each_node(1, |node| {
        node_doubles(&index, node, |d| {
            if !double_bridged(&d, pl) {
                doubles.push((d, node.id));
            }
        });
        if !unbridged_triple {
            unbridged_triple = has_unbridged_intra_triple(&index, node, pl);
        }
    });
    doubles.sort_unstable_by_key(|(d, _)| {
        let [a, b] = d.copies;
        (a.start, a.hap, b.start, b.hap)
    });
    let (doubles, ids): (Vec<_>, Vec<_>) = doubles.into_iter().unzip();
    let interleaved = interleaved_pairs(&doubles, &ids, DoubleRepeat::is_intra)
        .into_iter()
        .any(|(a, b)| doubles[a as usize].copies[0].hap == doubles[b as usize].copies[0].hap);
    let i2 = i2_pairs(&doubles, |_| true).is_empty();
    ItConditions {
        i1: !unbridged_triple && !interleaved,
        i2,
        i3: pl.is_covered(),
    }
}

/// Whether some intra triple meeting at `node` has no bridged copy. Among
/// the unbridged rotations of one haplotype such a triple exists exactly when
/// there are at least three of them, spread over two children and carrying
/// two different left flanks.
fn has_unbridged_intra_triple(
    index: &RotationIndex<'_>,
    node: &crate::repeats::Node<'_>,
    pl: &Placements,
) -> bool {
    (0..2u8).any(|h| {
        let mut count = 0usize;
        let mut child = None;
        let mut children = false;
        let mut flank = None;
        let mut flanks = false;
        for c in 0..node.n_children() {
            for &u in node.child(c) {
                if index.hap(u) != h || pl.is_bridged_at(h, index.pos(u), node.depth) {
                    continue;
                }
                count += 1;
                children |= *child.get_or_insert(c) != c;
                let f = index.left_flank(u);
                flanks |= *flank.get_or_insert(f) != f;
            }
        }
        count >= 3 && children && flanks
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationOptions {
    /// Restrict to genomes whose haplotypes are aligned with at most this
    /// many mismatching positions. `None` lets the second haplotype take any
    /// rotation, canonicalized afterwards.
    pub het_count_bound: Option<usize>,
    /// Search-tree nodes visited before giving up.
    pub node_limit: u64,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        Self {
            het_count_bound: None,
            node_limit: 50_000_000,
        }
    }
}

/// Genomes indistinguishable from each other by the reads, partitioned by
/// switch equivalence.
#[derive(Debug, Clone)]
pub struct AmbiguityReport {
    pub candidates: Vec<DiploidGenome>,
    /// Indices into `candidates`; the first member of each class is its
    /// representative.
    pub equivalence_classes: Vec<Vec<usize>>,
}

impl AmbiguityReport {
    pub fn n_classes(&self) -> usize {
        self.equivalence_classes.len()
    }

    pub fn is_unique(&self) -> bool {
        self.n_classes() == 1
    }

    /// Class whose representative is related to `truth` up to switch errors.
    pub fn class_of(&self, truth: &DiploidGenome) -> Option<usize> {
        self.equivalence_classes
            .iter()
            .position(|c| related(&self.candidates[c[0]], truth))
    }
}

/// Either genome reconstructs the other up to switch errors. Read counts do
/// not fix the relative rotation of the haplotypes, so candidates include
/// misaligned pairs whose spurious loci make the one-sided test asymmetric.
fn related(a: &DiploidGenome, b: &DiploidGenome) -> bool {
    switch_equivalent(a, b) || switch_equivalent(b, a)
}

/// Greedy partition against class representatives; candidates related to
/// `anchor` form the first class.
fn partition(candidates: &[DiploidGenome], anchor: Option<&DiploidGenome>) -> Vec<Vec<usize>> {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    if let Some(t) = anchor {
        let first: Vec<usize> = (0..candidates.len())
            .filter(|&i| related(&candidates[i], t))
            .collect();
        if !first.is_empty() {
            classes.push(first);
        }
    }
    for (i, g) in candidates.iter().enumerate() {
        if classes
            .first()
            .is_some_and(|c| anchor.is_some() && c.contains(&i))
        {
            continue;
        }
        match classes
            .iter_mut()
            .skip(usize::from(anchor.is_some()))
            .find(|c| related(g, &candidates[c[0]]))
        {
            Some(c) => c.push(i),
            None => classes.push(vec![i]),
        }
    }
    classes
}

/// All genomes of length `genome_length` in which every distinct read
/// string occurs, over both haplotypes and circularly, exactly as often as
/// it appears in `rs`. This is the right notion when `rs` holds every
/// occurrence once, e.g. all `L`-windows of a genome.
pub fn enumerate_equally_likely_genomes(
    rs: &ReadSet,
    genome_length: usize,
    het_count_bound: Option<usize>,
) -> Result<AmbiguityReport> {
    let mut targets: HashMap<Vec<u8>, usize> = HashMap::new();
    for r in rs.iter() {
        *targets.entry(r.seq.clone()).or_insert(0) += 1;
    }
    enumerate_with_targets(
        &targets,
        rs.read_length(),
        genome_length,
        EnumerationOptions {
            het_count_bound,
            ..Default::default()
        },
    )
}

/// Genomes that give every read string of `rs` the same occurrence count as
/// `truth` does, hence the same likelihood under uniform sampling.
pub fn ambiguity_against(
    truth: &DiploidGenome,
    rs: &ReadSet,
    opts: EnumerationOptions,
) -> Result<AmbiguityReport> {
    let l = rs.read_length();
    let mut targets: HashMap<Vec<u8>, usize> = rs.iter().map(|r| (r.seq.clone(), 0)).collect();
    if l >= 1 && l <= truth.len() {
        for h in 0..2 {
            for s in 0..truth.len() {
                if let Some(c) = targets.get_mut(truth.hap(h).window(s, l)) {
                    *c += 1;
                }
            }
        }
    }
    let mut rep = enumerate_with_targets(&targets, l, truth.len(), opts)?;
    rep.equivalence_classes = partition(&rep.candidates, Some(truth));
    Ok(rep)
}

/// Exhaustive search over genomes of length `n` with prescribed occurrence
/// counts for the strings in `targets` (all of length `l`). Symbols are
/// drawn from those appearing in the targets, or all four when none do.
pub fn enumerate_with_targets(
    targets: &HashMap<Vec<u8>, usize>,
    l: usize,
    n: usize,
    opts: EnumerationOptions,
) -> Result<AmbiguityReport> {
    if n == 0 {
        return Err(Error::EmptySequence);
    }
    let mut keys: Vec<&Vec<u8>> = targets.keys().collect();
    keys.sort();
    if !keys.is_empty() && l > n {
        return Err(Error::ReadTooLong {
            read_length: l,
            genome_length: n,
        });
    }
    let ids: HashMap<&[u8], usize> = keys
        .iter()
        .enumerate()
        .map(|(i, k)| (k.as_slice(), i))
        .collect();
    let target: Vec<usize> = keys.iter().map(|k| targets[*k]).collect();
    let total: usize = target.iter().sum();
    let windows = if keys.is_empty() { 0 } else { 2 * n };
    if total > windows {
        return Ok(AmbiguityReport {
            candidates: vec![],
            equivalence_classes: vec![],
        });
    }
    let mut alphabet: Vec<u8> = keys
        .iter()
        .flat_map(|k| k.iter().copied())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if alphabet.is_empty() {
        alphabet = ALPHABET.to_vec();
    }
    let mut search = Search {
        n,
        l,
        ids,
        target,
        alphabet,
        counts: vec![0; keys.len()],
        spare: windows - total,
        visited: 0,
        limit: opts.node_limit,
        bound: opts.het_count_bound,
        found: BTreeSet::new(),
    };
    // Rotating both haplotypes together and swapping them leave the counts
    // unchanged, so the first haplotype may start with the smallest read.
    let anchor = keys.first().map(|k| k.to_vec()).unwrap_or_default();
    let mut h0 = Vec::with_capacity(n);
    search.extend_first(&mut h0, &anchor)?;

    let candidates: Vec<DiploidGenome> = search
        .found
        .into_iter()
        .map(|(a, b)| {
            DiploidGenome::new(
                CircularSequence::new(a).expect("valid bases"),
                CircularSequence::new(b).expect("valid bases"),
            )
            .expect("equal lengths")
        })
        .collect();
    let classes = partition(&candidates, None);
    Ok(AmbiguityReport {
        candidates,
        equivalence_classes: classes,
    })
}

struct Search<'a> {
    n: usize,
    l: usize,
    ids: HashMap<&'a [u8], usize>,
    target: Vec<usize>,
    alphabet: Vec<u8>,
    counts: Vec<usize>,
    /// Windows that may spell no read string.
    spare: usize,
    visited: u64,
    limit: u64,
    bound: Option<usize>,
    found: BTreeSet<(Vec<u8>, Vec<u8>)>,
}

/// Undo record for one window accounted in the counts.
enum Mark {
    Read(usize),
    Spare,
}

impl Search<'_> {
    fn tick(&mut self) -> Result<()> {
        self.visited += 1;
        if self.visited > self.limit {
            return Err(Error::BudgetExceeded {
                what: "genome enumeration nodes".into(),
                limit: self.limit as usize,
            });
        }
        Ok(())
    }

    /// Accounts the window ending at the last symbol of `s`, wrapping when
    /// `wrap` is set. Returns `None` when a count overflows.
    fn account(&mut self, window: &[u8]) -> Option<Mark> {
        if self.target.is_empty() {
            return Some(Mark::Spare);
        }
        match self.ids.get(window) {
            Some(&id) if self.counts[id] < self.target[id] => {
                self.counts[id] += 1;
                Some(Mark::Read(id))
            }
            Some(_) => None,
            None if self.spare > 0 => {
                self.spare -= 1;
                Some(Mark::Spare)
            }
            None => None,
        }
    }

    fn undo(&mut self, marks: Vec<Mark>) {
        for m in marks {
            match m {
                Mark::Read(id) => self.counts[id] -= 1,
                Mark::Spare => {
                    if !self.target.is_empty() {
                        self.spare += 1
                    }
                }
            }
        }
    }

    /// Accounts the window ending at position `p` of a partial linear string.
    fn push_linear(&mut self, s: &[u8]) -> std::result::Result<Vec<Mark>, ()> {
        let p = s.len();
        if self.target.is_empty() || p < self.l {
            return Ok(vec![]);
        }
        self.account(&s[p - self.l..]).map(|m| vec![m]).ok_or(())
    }

    /// Accounts the `l - 1` windows that wrap the origin of a complete string.
    fn close(&mut self, s: &[u8]) -> std::result::Result<Vec<Mark>, ()> {
        let mut marks = Vec::new();
        if self.target.is_empty() {
            return Ok(marks);
        }
        let seq = CircularSequence::new(s.to_vec()).expect("valid bases");
        for start in self.n + 1 - self.l..self.n {
            match self.account(seq.window(start, self.l)) {
                Some(m) => marks.push(m),
                None => {
                    self.undo(marks);
                    return Err(());
                }
            }
        }
        Ok(marks)
    }

    fn extend_first(&mut self, s: &mut Vec<u8>, anchor: &[u8]) -> Result<()> {
        self.tick()?;
        if s.len() == self.n {
            if let Ok(marks) = self.close(s) {
                let h0 = s.clone();
                let mut h1 = Vec::with_capacity(self.n);
                match self.bound {
                    Some(b) => self.extend_aligned(&h0, &mut h1, b)?,
                    None => {
                        let anchor = self.smallest_remaining();
                        self.extend_free(&h0, &mut h1, &anchor)?;
                    }
                }
                self.undo(marks);
            }
            return Ok(());
        }
        let choices: Vec<u8> = match anchor.get(s.len()) {
            Some(&c) => vec![c],
            None => self.alphabet.clone(),
        };
        for c in choices {
            s.push(c);
            if let Ok(marks) = self.push_linear(s) {
                self.extend_first(s, anchor)?;
                self.undo(marks);
            }
            s.pop();
        }
        Ok(())
    }

    fn smallest_remaining(&self) -> Vec<u8> {
        let mut best: Option<&[u8]> = None;
        for (&k, &id) in &self.ids {
            if self.counts[id] < self.target[id] && best.is_none_or(|b| k < b) {
                best = Some(k);
            }
        }
        best.map(<[u8]>::to_vec).unwrap_or_default()
    }

    fn finish(&mut self, h0: &[u8], h1: &[u8]) {
        if self.counts == self.target {
            let pair = if self.bound.is_some() {
                canonical_aligned(h0, h1)
            } else {
                canonical_free(h0, h1)
            };
            self.found.insert(pair);
        }
    }

    fn extend_free(&mut self, h0: &[u8], s: &mut Vec<u8>, anchor: &[u8]) -> Result<()> {
        self.tick()?;
        if s.len() == self.n {
            if let Ok(marks) = self.close(s) {
                self.finish(h0, s);
                self.undo(marks);
            }
            return Ok(());
        }
        let choices: Vec<u8> = match anchor.get(s.len()) {
            Some(&c) => vec![c],
            None => self.alphabet.clone(),
        };
        for c in choices {
            s.push(c);
            if let Ok(marks) = self.push_linear(s) {
                self.extend_free(h0, s, anchor)?;
                self.undo(marks);
            }
            s.pop();
        }
        Ok(())
    }

    fn extend_aligned(&mut self, h0: &[u8], s: &mut Vec<u8>, budget: usize) -> Result<()> {
        self.tick()?;
        if s.len() == self.n {
            if let Ok(marks) = self.close(s) {
                self.finish(h0, s);
                self.undo(marks);
            }
            return Ok(());
        }
        let same = h0[s.len()];
        let mut choices = vec![same];
        if budget > 0 {
            choices.extend(ALPHABET.iter().copied().filter(|&c| c != same));
        }
        for c in choices {
            s.push(c);
            if let Ok(marks) = self.push_linear(s) {
                self.extend_aligned(h0, s, if c == same { budget } else { budget - 1 })?;
                self.undo(marks);
            }
            s.pop();
        }
        Ok(())
    }
}

fn rotate(s: &[u8], r: usize) -> Vec<u8> {
    let mut v = s[r..].to_vec();
    v.extend_from_slice(&s[..r]);
    v
}

fn min_rotation(s: &[u8]) -> Vec<u8> {
    (0..s.len()).map(|r| rotate(s, r)).min().unwrap_or_default()
}

/// Smallest form of an aligned pair under joint rotation and swapping.
fn canonical_aligned(h0: &[u8], h1: &[u8]) -> (Vec<u8>, Vec<u8>) {
    let mut best: Option<(Vec<u8>, Vec<u8>)> = None;
    for r in 0..h0.len() {
        for (a, b) in [(h0, h1), (h1, h0)] {
            let cand = (rotate(a, r), rotate(b, r));
            if best.as_ref().is_none_or(|x| cand < *x) {
                best = Some(cand);
            }
        }
    }
    best.expect("non-empty")
}

/// Canonical form of an unaligned pair: each haplotype at its minimal
/// rotation, the smaller first, then the second aligned to the first at the
/// rotation with fewest mismatches.
fn canonical_free(h0: &[u8], h1: &[u8]) -> (Vec<u8>, Vec<u8>) {
    let (a, b) = (min_rotation(h0), min_rotation(h1));
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    let mismatches = |r: usize| {
        (0..a.len())
            .filter(|&i| a[i] != b[(i + r) % b.len()])
            .count()
    };
    let r = (0..b.len())
        .min_by_key(|&r| (mismatches(r), r))
        .unwrap_or(0);
    let b = rotate(&b, r);
    (a, b)
}

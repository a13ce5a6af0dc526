//! Random-instance suites shared by the module tests and the acceptance run.

use std::collections::BTreeMap;

use diplab_core::dbg::{build_dbg, check_conditions_dbg, condense, dbg_assemble};
use diplab_core::genome::{switch_equivalent_seqs, DiploidGenome, ReadSet};
use diplab_core::greedy::{check_conditions_greedy, greedy_assemble};
use diplab_core::repeats::{
    find_double_repeats, repeat_profile, well_bridge_requirement, RepeatProfile, TableStats,
};
use diplab_core::simulate::{sample_reads_poisson, sample_reads_uniform};
use diplab_core::{DoubleRepeat, Placements, RepeatCatalog, RepeatCopy};
use rand::Rng;

use super::*;

/// Outcome of one random instance on which the greedy conditions hold.
pub enum Trial {
    Equivalent,
    /// Both haplotype chains closed on themselves and a short chance overlap
    /// joined them; stopping one merge earlier recovers the genome.
    JoinedClosedChains,
}

pub fn greedy_trial(g: &diplab_core::DiploidGenome, rs: &ReadSet) -> Trial {
    let r = greedy_assemble(rs).unwrap();
    let len = g.len();
    if let Ok((g0, g1)) = r.haplotypes() {
        if switch_equivalent_seqs(&g0, &g1, g) {
            if let Some(alpha) = r.alpha {
                assert_eq!(r.final_strings[0].len() - alpha, 2 * len);
            }
            return Trial::Equivalent;
        }
    }
    assert_eq!(
        r.final_strings.len(),
        1,
        "unexpected fragmentation on {g:?}"
    );
    let alpha = r.alpha.unwrap();
    assert!(
        r.final_strings[0].len() - alpha > 2 * len,
        "failure without over-wrap on {g:?}"
    );
    let reads: Vec<Vec<u8>> = rs.iter().map(|x| x.seq.clone()).collect();
    let trace = &r.merge_trace;
    let before = replay_merges(&reads, &trace[..trace.len() - 1]);
    assert_eq!(before.len(), 2);
    let trim = |y: &[u8]| y[..y.len() - diplab_core::overlap(y, y)].to_vec();
    assert!(
        switch_equivalent_seqs(&trim(&before[0]), &trim(&before[1]), g),
        "failure not explained by the final merge on {g:?}"
    );
    Trial::JoinedClosedChains
}

/// Instances drawn as in the sufficiency criterion: up to 300 bases, 2 to 12
/// loci, L a little above the read-length floor, distinct read placements.
pub fn greedy_instances(seed: u64, wanted: usize) -> Vec<(diplab_core::DiploidGenome, ReadSet)> {
    let mut rng = seeded(seed);
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < wanted {
        attempts += 1;
        assert!(
            attempts < 20 * wanted,
            "too few instances satisfy the conditions"
        );
        let len = rng.random_range(40..=300);
        let n_het = rng.random_range(2..=12);
        let base = planted_sequence(len, rng.random_range(0..3), 12, &mut rng);
        let g = with_het_loci(&base, n_het, &mut rng);
        let l = greedy_read_length_floor(&g) + rng.random_range(0..6);
        if l > len {
            continue;
        }
        let depth = rng.random_range(4.0..20.0);
        let count = (depth * 2.0 * len as f64 / l as f64).ceil() as usize;
        let rs = distinct_placements(
            &sample_reads_uniform(&g, count, l, rng.random()).unwrap(),
            &g,
        );
        if check_conditions_greedy(&g, &rs).all() {
            out.push((g, rs));
        }
    }
    out
}

/// Random instances meeting the de Bruijn conditions with `k` above the
/// longest double repeat; returns the count and a description of every
/// instance that is not recovered (non-Eulerian, a degree above 2, or a
/// non-equivalent spelling).
pub fn dbg_sufficiency(seed: u64, wanted: usize) -> (usize, Vec<String>) {
    let mut rng = seeded(seed);
    let mut passed = 0;
    let mut attempts = 0;
    let mut failures = Vec::new();
    while passed < wanted {
        attempts += 1;
        assert!(
            attempts < 20 * wanted,
            "too few instances satisfy the conditions"
        );
        let len = rng.random_range(40..=300);
        let n_het = rng.random_range(2..=12);
        let base = planted_sequence(len, rng.random_range(0..3), 12, &mut rng);
        let g = with_het_loci(&base, n_het, &mut rng);
        let l_double = find_double_repeats(&g)
            .iter()
            .map(|d| d.len())
            .max()
            .unwrap_or(0);
        let k = l_double + 1 + rng.random_range(0..4);
        let l = k + 1 + rng.random_range(0..8);
        if l > len {
            continue;
        }
        let count = (rng.random_range(6.0..20.0) * 2.0 * len as f64 / l as f64).ceil() as usize;
        let rs = sample_reads_uniform(&g, count, l, rng.random()).unwrap();
        if !check_conditions_dbg(&g, &rs, k).unwrap().sufficient() {
            continue;
        }
        passed += 1;
        let dbg = build_dbg(&rs, k).unwrap();
        let (din, dout) = dbg.max_degrees();
        let balanced = condense(&dbg).imbalanced().is_empty();
        let ok = match dbg_assemble(&rs, k) {
            Ok(a) => switch_equivalent_seqs(a.g0.as_bytes(), a.g1.as_bytes(), &g),
            Err(_) => false,
        };
        if din > 2 || dout > 2 || !balanced || !ok {
            failures.push(format!(
                "{g:?} k={k} L={l}: degrees {din}/{dout}, balanced {balanced}, equivalent {ok}"
            ));
        }
    }
    (passed, failures)
}

fn as_oracle(d: &DoubleRepeat) -> OracleDouble {
    let [a, b] = d.copies;
    ((a.hap, a.start), (b.hap, b.start), a.len)
}

fn to_double(g: &DiploidGenome, d: &OracleDouble) -> DoubleRepeat {
    DoubleRepeat::new(
        g,
        RepeatCopy::new(d.0 .0, d.0 .1, d.2),
        RepeatCopy::new(d.1 .0, d.1 .1, d.2),
    )
}

fn bump<K: Ord>(m: &mut BTreeMap<K, u64>, k: K) {
    *m.entry(k).or_insert(0) += 1;
}

/// The profile computed from the definitional catalogs.
pub fn oracle_profile(
    g: &DiploidGenome,
    doubles: &[OracleDouble],
    inter: &[(u32, u32)],
    i2: &[(u32, u32)],
) -> RepeatProfile {
    let gaps: Vec<u64> = g
        .gaps()
        .map(|v| v.into_iter().map(|x| x as u64).collect())
        .unwrap_or_default();
    let mut stats = TableStats {
        haplotype_length: g.len() as u64,
        max_gap: gaps.iter().copied().max().unwrap_or(0),
        max_double: doubles.iter().map(|d| d.2 as u64).max().unwrap_or(0),
        ..Default::default()
    };
    let mut interleaved = BTreeMap::new();
    for &(i, j) in inter {
        let (a, b) = (&doubles[i as usize], &doubles[j as usize]);
        let h = a.0 .0;
        if [a.0 .0, a.1 .0, b.0 .0, b.1 .0].iter().all(|&x| x == h) {
            let (x, y) = (a.2.min(b.2) as u64, a.2.max(b.2) as u64);
            bump(&mut interleaved, (x, y));
            let slot = if h == 0 {
                &mut stats.max_interleaved_h0
            } else {
                &mut stats.max_interleaved_h1
            };
            *slot = (*slot).max(x);
        }
    }
    let mut triples = BTreeMap::new();
    for (t, l) in oracle_triples(g) {
        if t.iter().all(|c| c.0 == t[0].0) {
            bump(&mut triples, l as u64);
            let slot = if t[0].0 == 0 {
                &mut stats.max_triple_h0
            } else {
                &mut stats.max_triple_h1
            };
            *slot = (*slot).max(l as u64);
        }
    }
    let mut i2_len = BTreeMap::new();
    for &(i, j) in i2 {
        let (x, y) = (doubles[i as usize].2 as u64, doubles[j as usize].2 as u64);
        bump(&mut i2_len, (x.min(y), x.max(y)));
        stats.max_i2 = stats.max_i2.max(x.min(y));
    }
    let (mut both, mut one, mut none) = (BTreeMap::new(), BTreeMap::new(), BTreeMap::new());
    if g.n_het() > 0 {
        let covers = |c: Copy, l: usize| (0..l).any(|i| g.is_het((c.1 + i) % g.len()));
        let gap = |c: Copy| g.gap_index(c.1).unwrap() as u64;
        for d in doubles {
            let l = d.2 as u64;
            match (covers(d.0, d.2), covers(d.1, d.2)) {
                (true, true) => bump(&mut both, l),
                (true, false) => bump(&mut one, (l, gap(d.1))),
                (false, true) => bump(&mut one, (l, gap(d.0))),
                (false, false) => bump(&mut none, (l, gap(d.0), gap(d.1))),
            }
            stats.min_l_wellbridge = stats
                .min_l_wellbridge
                .max(well_bridge_requirement(&to_double(g, d), g) as u64);
        }
    }
    let flat = |m: BTreeMap<(u64, u64), u64>| m.into_iter().map(|((a, b), c)| (a, b, c)).collect();
    RepeatProfile {
        stats,
        gaps,
        interleaved: flat(interleaved),
        triples: triples.into_iter().collect(),
        i2_pairs: flat(i2_len),
        both_cover: both.into_iter().collect(),
        one_cover: flat(one),
        no_cover: none
            .into_iter()
            .map(|((a, b, c), n)| (a, b, c, n))
            .collect(),
    }
}

pub fn check_catalogs(g: &DiploidGenome) {
    let cat = RepeatCatalog::build(g);
    let doubles = oracle_doubles(g);
    let got: Vec<_> = cat.doubles.iter().map(as_oracle).collect();
    assert_eq!(got, doubles, "doubles of {g:?}");

    let triples: BTreeSet<_> = cat
        .triples
        .iter()
        .map(|t| (t.copies.map(|c| (c.hap, c.start)), t.len()))
        .collect();
    assert_eq!(triples, oracle_triples(g), "triples of {g:?}");
    assert_eq!(triples.len(), cat.triples.len());

    // doubles agree, so pair indices refer to the same repeats on both sides
    let inter = oracle_interleaved(g, &doubles);
    assert!(
        cat.interleaved == inter,
        "interleaved of {g:?}: {} vs {}",
        cat.interleaved.len(),
        inter.len()
    );
    let i2 = oracle_i2(&doubles);
    assert!(
        cat.i2_pairs == i2,
        "I2 pairs of {g:?}: {} vs {}",
        cat.i2_pairs.len(),
        i2.len()
    );

    assert_eq!(
        repeat_profile(g, &cat),
        oracle_profile(g, &doubles, &inter, &i2),
        "profile of {g:?}"
    );
}

/// Genome for the oracle comparison: lengths up to 150 with planted copies,
/// some without loci and some with many.
pub fn oracle_genome<R: Rng>(case: usize, rng: &mut R) -> DiploidGenome {
    let len = if case < 50 {
        rng.random_range(1..=12)
    } else {
        rng.random_range(13..=150)
    };
    let base = planted_sequence(len, rng.random_range(0..4), 20, rng);
    let n_het = match case % 10 {
        0 => 0,
        1 => len / 2,
        _ => rng.random_range(1..=(len / 10).max(1)),
    };
    with_het_loci(&base, n_het, rng)
}

/// Both copies of a length-`i` repeat unbridged under Poisson read starts,
/// counted over independent trials.
pub fn unbridged_frequency(lambda: f64, l: usize, i: usize, trials: u64) -> f64 {
    let g = DiploidGenome::from_strs(&"ACGT".repeat(30), &"ACGT".repeat(30)).unwrap();
    let mut hits = 0;
    for seed in 0..trials {
        let rs = sample_reads_poisson(&g, lambda, l, seed).unwrap();
        let pl = Placements::from_provenance(&g, &rs).unwrap();
        if !pl.is_bridged_at(0, 45, i) && !pl.is_bridged_at(1, 90, i) {
            hits += 1;
        }
    }
    hits as f64 / trials as f64
}

mod common;

use common::suites::*;
use common::*;
use diplab_core::repeats::{repeat_statistics, summary_statistics};
use diplab_core::{DiploidGenome, RepeatCatalog};

#[test]
fn catalogs_match_brute_force() {
    let mut rng = seeded(7);
    let t = std::time::Instant::now();
    for case in 0..500 {
        check_catalogs(&oracle_genome(case, &mut rng));
    }
    eprintln!("500 genomes checked in {:?}", t.elapsed());
}

#[test]
fn small_examples() {
    // identical haplotypes: only same-position pairs would be inter repeats,
    // and those are excluded
    let g = DiploidGenome::from_strs("ACGT", "ACGT").unwrap();
    check_catalogs(&g);
    assert!(RepeatCatalog::build(&g)
        .doubles
        .iter()
        .all(|d| d.copies[0].start != d.copies[1].start));
    check_catalogs(&DiploidGenome::from_strs("A", "C").unwrap());
    check_catalogs(&DiploidGenome::from_strs("AAAA", "AAAA").unwrap());
    // three copies of GAT with pairwise-distinct flanks
    let g = DiploidGenome::from_strs("CGATAAGATCTGATGC", "CGATAAGATCTGATGC").unwrap();
    check_catalogs(&g);
    let cat = RepeatCatalog::build(&g);
    assert!(cat
        .triples
        .iter()
        .any(|t| t.is_intra() && t.len() == 3 && t.copies.map(|c| c.start) == [1, 6, 11]));
}

#[test]
fn maximality_holds() {
    let mut rng = seeded(8);
    for _ in 0..100 {
        let g = with_het_loci(&planted_sequence(60, 3, 15, &mut rng), 4, &mut rng);
        for d in RepeatCatalog::build(&g).doubles {
            let [a, b] = d.copies.map(|c| (c.hap, c.start));
            assert_eq!(spell(&g, a, d.len()), spell(&g, b, d.len()));
            assert_ne!(at(&g, a, -1), at(&g, b, -1));
            assert_ne!(at(&g, a, d.len() as isize), at(&g, b, d.len() as isize));
        }
    }
}

#[test]
fn summary_matches_full_profile() {
    let mut rng = seeded(9);
    for case in 0..400 {
        let g = oracle_genome(case, &mut rng);
        assert_eq!(summary_statistics(&g), repeat_statistics(&g).stats, "{g:?}");
    }
    // long planted repeats, where the interleaved and I2 searches need
    // several thresholds
    for _ in 0..30 {
        let g = with_het_loci(&planted_sequence(200, 4, 40, &mut rng), 4, &mut rng);
        assert_eq!(summary_statistics(&g), repeat_statistics(&g).stats, "{g:?}");
    }
}

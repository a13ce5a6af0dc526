mod common;

use common::suites::*;
use common::*;
use diplab_core::genome::ReadSet;
use diplab_core::greedy::greedy_assemble;
use proptest::prelude::*;

fn reads_strategy() -> impl Strategy<Value = Vec<Vec<u8>>> {
    (2usize..7).prop_flat_map(|l| {
        prop::collection::vec(
            prop::collection::vec(prop::sample::select(b"ACG".to_vec()), l),
            1..14,
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn merger_matches_literal_algorithm(reads in reads_strategy()) {
        let l = reads[0].len();
        let rs = ReadSet::new(reads.iter().cloned().map(diplab_core::Read::new).collect(), l).unwrap();
        let report = greedy_assemble(&rs).unwrap();
        let (trace, finals) = naive_greedy(&reads);
        let got: Vec<_> = report.merge_trace.iter().map(|m| (m.src, m.dst, m.overlap)).collect();
        prop_assert_eq!(got, trace);
        let want: Vec<String> = finals.into_iter().map(|s| String::from_utf8(s).unwrap()).collect();
        prop_assert_eq!(report.final_strings, want);
    }
}

#[test]
fn sufficiency_on_random_instances() {
    let instances = greedy_instances(11, 1000);
    let joined = instances
        .iter()
        .filter(|(g, rs)| matches!(greedy_trial(g, rs), Trial::JoinedClosedChains))
        .count();
    eprintln!(
        "greedy: {} of {} instances equivalent; {joined} joined closed chains",
        instances.len() - joined,
        instances.len()
    );
}

#[test]
fn merge_overlaps_never_increase_for_distinct_reads() {
    for (_, rs) in greedy_instances(12, 300) {
        let mut seen = std::collections::HashSet::new();
        let distinct: Vec<_> = rs
            .iter()
            .filter(|x| seen.insert(x.seq.clone()))
            .cloned()
            .collect();
        let rs = ReadSet::new(distinct, rs.read_length()).unwrap();
        let r = greedy_assemble(&rs).unwrap();
        for w in r.merge_trace.windows(2) {
            assert!(
                w[0].overlap >= w[1].overlap,
                "{:?} L={}",
                w,
                rs.read_length()
            );
        }
    }
}

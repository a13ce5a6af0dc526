use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use diplab_core::{io, DiploidGenome, TableStats};
use tempfile::TempDir;

fn diplab(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_diplab"))
        .args(args)
        .current_dir(dir)
        .env("DIPLAB_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str], dir: &Path) -> Output {
    let out = diplab(args, dir);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Longest double repeat and longest homozygous run between loci, by direct
/// comparison of every pair of start positions.
fn brute_force_stats(g: &DiploidGenome) -> (u64, u64) {
    let n = g.len();
    let at = |h: usize, i: isize| g.hap(h).as_bytes()[i.rem_euclid(n as isize) as usize];
    let mut max_double = 0;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for (ha, hb) in [(0, 0), (0, 1), (1, 1)] {
                if ha == hb && j < i {
                    continue;
                }
                let (i, j) = (i as isize, j as isize);
                if at(ha, i - 1) == at(hb, j - 1) {
                    continue;
                }
                let l = (0..n as isize)
                    .take_while(|&t| at(ha, i + t) == at(hb, j + t))
                    .count();
                if l < n {
                    max_double = max_double.max(l as u64);
                }
            }
        }
    }
    let loci: Vec<usize> = (0..n)
        .filter(|&p| at(0, p as isize) != at(1, p as isize))
        .collect();
    let max_gap = (0..loci.len())
        .map(|k| {
            let next = if k + 1 < loci.len() {
                loci[k + 1]
            } else {
                loci[0] + n
            };
            (next - loci[k] - 1) as u64
        })
        .max()
        .unwrap_or(0);
    (max_double, max_gap)
}

#[test]
fn simulate_is_deterministic_and_round_trips() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    ok(
        &[
            "simulate",
            "--length",
            "300",
            "--het-prob",
            "0.05",
            "--seed",
            "9",
            "-o",
            "a.fa",
        ],
        d,
    );
    ok(
        &[
            "simulate",
            "--length",
            "300",
            "--het-prob",
            "0.05",
            "--seed",
            "9",
            "-o",
            "b.fa",
        ],
        d,
    );
    let a = fs::read(d.join("a.fa")).unwrap();
    assert_eq!(a, fs::read(d.join("b.fa")).unwrap());

    let g = io::read_genome(&a[..]).unwrap();
    assert_eq!(g.len(), 300);
    assert!(g.n_het() > 0);
    let mut again = Vec::new();
    io::write_genome(&mut again, &g).unwrap();
    assert_eq!(again, a);

    let s = ok(
        &[
            "simulate",
            "--length",
            "300",
            "--het-prob",
            "0.05",
            "--seed",
            "9",
        ],
        d,
    );
    assert_eq!(s.stdout, a);
}

#[test]
fn sampled_reads_keep_provenance() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    ok(
        &["simulate", "--length", "200", "--seed", "1", "-o", "g.fa"],
        d,
    );
    ok(
        &[
            "sample", "--genome", "g.fa", "-L", "25", "--count", "40", "--seed", "2", "-o", "r.fa",
        ],
        d,
    );
    let g = io::read_genome(&fs::read(d.join("g.fa")).unwrap()[..]).unwrap();
    let rs = io::read_reads(&fs::read(d.join("r.fa")).unwrap()[..]).unwrap();
    assert_eq!((rs.len(), rs.read_length()), (40, 25));
    for r in rs.iter() {
        let p = r.provenance.unwrap();
        assert_eq!(r.seq, g.hap(p.hap as usize).window(p.start, 25));
    }
    ok(
        &[
            "sample",
            "--genome",
            "g.fa",
            "-L",
            "25",
            "--count",
            "40",
            "--seed",
            "2",
            "--no-provenance",
            "-o",
            "s.fa",
        ],
        d,
    );
    let bare = io::read_reads(&fs::read(d.join("s.fa")).unwrap()[..]).unwrap();
    assert_eq!(bare, rs.without_provenance());
}

#[test]
fn stats_match_brute_force() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    for seed in 0..5 {
        let seed = seed.to_string();
        ok(
            &[
                "simulate",
                "--length",
                "120",
                "--het-prob",
                "0.05",
                "--seed",
                &seed,
                "-o",
                "g.fa",
            ],
            d,
        );
        let out = ok(&["stats", "--genome", "g.fa"], d);
        let rows = TableStats::read_csv(out.stdout.as_slice()).unwrap();
        let g = io::read_genome(&fs::read(d.join("g.fa")).unwrap()[..]).unwrap();
        let (max_double, max_gap) = brute_force_stats(&g);
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].haplotype_length, 120);
        assert_eq!(
            (rows[0].max_double, rows[0].max_gap),
            (max_double, max_gap),
            "seed {seed}"
        );
        assert_eq!(rows[0], diplab_core::repeats::repeat_statistics(&g).stats);
    }
}

#[test]
fn feasibility_reports_published_thresholds() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let stats = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/chr19_stats.csv");
    let out = ok(
        &[
            "feasibility",
            "--stats",
            stats,
            "--eps",
            "0.01",
            "--L-min",
            "5000",
            "--L-max",
            "40000",
            "--L-step",
            "5000",
            "-o",
            "f.csv",
            "--summary",
            "s.json",
        ],
        d,
    );
    let header = String::from_utf8(out.stderr).unwrap();
    assert!(
        header.contains(
            "L >= 9319 for any algorithm, L >= 16812 for greedy, k >= 16811 for de Bruijn"
        ),
        "{header}"
    );
    assert!(header.contains("L >= 39261 for greedy"), "{header}");
    assert!(out.stdout.is_empty());

    let csv = fs::read_to_string(d.join("f.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        diplab_core::coverage::FEASIBILITY_HEADER
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 8);
    // below the information bound no curve is finite
    assert_eq!(rows[0], ["5000", "", "", "", "false", "false", "false"]);
    // greedy becomes feasible between 15000 and 20000 for the first row
    assert_eq!(rows[2][5], "false");
    assert_eq!(rows[3][5], "true");

    let s: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(d.join("s.json")).unwrap()).unwrap();
    assert_eq!(s["thresholds"][1]["min_l_greedy"], 39261);
    assert_eq!(s["first_feasible_lower"], 10000);
}

#[test]
fn greedy_assembly_report_and_exit_codes() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    // every 40-window of a small genome
    ok(
        &[
            "simulate",
            "--length",
            "150",
            "--het-prob",
            "0.04",
            "--seed",
            "3",
            "-o",
            "g.fa",
        ],
        d,
    );
    let g = io::read_genome(&fs::read(d.join("g.fa")).unwrap()[..]).unwrap();
    let rs = diplab_core::ReadSet::all_windows(&g, 40).unwrap();
    let mut buf = Vec::new();
    io::write_reads(&mut buf, &rs, true).unwrap();
    fs::write(d.join("r.fa"), buf).unwrap();

    let out = diplab(
        &[
            "assemble", "--algo", "dbg", "-k", "39", "--reads", "r.fa", "--truth", "g.fa",
            "--report", "rep.json", "-o", "h.fa",
        ],
        d,
    );
    let rep: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(d.join("rep.json")).unwrap()).unwrap();
    let sufficient = rep["condition_flags"]["d1"] == true && rep["condition_flags"]["d2"] == true;
    if sufficient {
        assert!(out.status.success());
        assert_eq!(rep["equivalent"], true);
    }
    assert_eq!(
        out.status.code() == Some(0),
        rep["assembled"] == true && rep["equivalent"] == true
    );

    let out = diplab(
        &[
            "assemble", "--algo", "greedy", "--reads", "r.fa", "--truth", "g.fa", "--report",
            "gr.json", "-o", "x.fa",
        ],
        d,
    );
    let rep: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(d.join("gr.json")).unwrap()).unwrap();
    assert!(rep["result"]["merge_trace"]
        .as_array()
        .is_some_and(|t| !t.is_empty()));
    assert!(rep["condition_flags"]["g1"].is_boolean());
    let code = out.status.code().unwrap();
    assert_eq!(code == 0, rep["equivalent"] == true);
    assert!(code == 0 || code == 1);
}

#[test]
fn dbg_failure_exits_one() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    // two reads whose 3-mer graph is not Eulerian
    fs::write(d.join("r.fa"), ">read0\nACGTACGA\n>read1\nACGTTCGA\n").unwrap();
    let out = diplab(
        &[
            "assemble", "--algo", "dbg", "-k", "3", "--reads", "r.fa", "--report", "rep.json",
        ],
        d,
    );
    assert_eq!(out.status.code(), Some(1));
    let rep: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(d.join("rep.json")).unwrap()).unwrap();
    assert_eq!(rep["assembled"], false);
    assert!(rep["error"].is_string());
    assert!(out.stdout.is_empty());
}

#[test]
fn usage_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    assert_eq!(diplab(&["stats", "--bogus"], d).status.code(), Some(2));
    assert_eq!(diplab(&["frobnicate"], d).status.code(), Some(2));
    assert_eq!(
        diplab(&["stats", "--genome", "missing.fa"], d)
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        diplab(&["verify", "--figure", "no-such-instance"], d)
            .status
            .code(),
        Some(2)
    );
    fs::write(d.join("r.fa"), ">read0\nACGT\n").unwrap();
    assert_eq!(
        diplab(&["assemble", "--algo", "dbg", "--reads", "r.fa"], d)
            .status
            .code(),
        Some(2)
    );
    assert_eq!(diplab(&["--help"], d).status.code(), Some(0));
}

#[test]
fn verify_single_instance_and_suite() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let list = stdout(&ok(&["verify", "--list"], d));
    assert_eq!(list.lines().count(), 21);
    let one = stdout(&ok(&["verify", "--figure", "dbg-intra-separate-copies"], d));
    let mut lines = one.lines();
    assert_eq!(lines.next(), Some("name,expected,result,detail"));
    assert!(lines
        .next()
        .unwrap()
        .starts_with("dbg-intra-separate-copies,ambiguous-tours,pass,"));

    let all = stdout(&ok(&["verify", "--all"], d));
    assert_eq!(all.lines().count(), 22);
    assert!(
        all.lines()
            .skip(1)
            .all(|l| l.split(',').nth(2) == Some("pass")),
        "{all}"
    );
}

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use log::info;
use serde::Serialize;
use serde_json::Value;

use diplab_core::counterexamples::{self, distinct_reads, Evaluation};
use diplab_core::coverage::{self, Requirement};
use diplab_core::dbg::{self, check_conditions_dbg, dbg_assemble};
use diplab_core::genome::switch_equivalent_seqs;
use diplab_core::greedy::{check_conditions_greedy, greedy_assemble};
use diplab_core::olc::{self, check_conditions_overlap, overlap_assemble, WalkOptions};
use diplab_core::oracle::check_conditions_it;
use diplab_core::repeats::{repeat_statistics, summary_statistics};
use diplab_core::simulate::{self, sample_reads_poisson, sample_reads_uniform, simulate_diploid};
use diplab_core::{
    io as dio, DiploidGenome, Error, ReadSet, RepeatProfile, SimulationParams, TableStats,
};

use crate::pool::par_map;
use crate::{
    Algo, AssembleArgs, CheckArgs, Command, FeasibilityArgs, SampleArgs, SimulateArgs, StatsArgs,
    VerifyArgs,
};

pub enum Status {
    Ok,
    /// Assembly failed, the output is not equivalent to the truth, or a
    /// counterexample did not trigger.
    Failed,
}

pub fn run(cmd: Command, threads: usize) -> Result<Status> {
    match cmd {
        Command::Simulate(a) => simulate_cmd(a),
        Command::Sample(a) => sample_cmd(a),
        Command::Stats(a) => stats_cmd(a),
        Command::Assemble(a) => assemble_cmd(a),
        Command::Check(a) => check_cmd(a),
        Command::Feasibility(a) => feasibility_cmd(a, threads),
        Command::Verify(a) => verify_cmd(a, threads),
    }
}

fn open(path: &Path) -> Result<BufReader<File>> {
    Ok(BufReader::new(File::open(path).with_context(|| {
        format!("cannot open {}", path.display())
    })?))
}

/// Buffered writer to `path`, or stdout.
fn create(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json<T: Serialize>(path: Option<&Path>, value: &T) -> Result<()> {
    let mut out = create(path)?;
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn load_genome(path: &Path) -> Result<DiploidGenome> {
    dio::read_genome(open(path)?).with_context(|| format!("reading genome {}", path.display()))
}

fn load_reads(path: &Path) -> Result<ReadSet> {
    dio::read_reads(open(path)?).with_context(|| format!("reading reads {}", path.display()))
}

fn simulate_cmd(a: SimulateArgs) -> Result<Status> {
    // Separate streams for the base sequence and the mutations.
    let base = match &a.base {
        Some(p) => dio::read_sequence(open(p)?)?,
        None => simulate::random_sequence(a.length, &mut simulate::rng(a.seed))?,
    };
    let params = SimulationParams {
        het_prob: a.het_prob,
        seed: a.seed ^ 0x5eed_0001,
        ..Default::default()
    };
    let genome = simulate_diploid(&base, &params)?;
    info!(
        "simulated |H| = {} with {} heterozygous loci",
        genome.len(),
        genome.n_het()
    );
    let mut out = create(a.output.as_deref())?;
    dio::write_genome(&mut out, &genome)?;
    out.flush()?;
    Ok(Status::Ok)
}

fn sample_cmd(a: SampleArgs) -> Result<Status> {
    let genome = load_genome(&a.genome)?;
    let l = a.read_length;
    let rs = match (a.count, a.rate, a.depth) {
        (Some(n), _, _) => sample_reads_uniform(&genome, n, l, a.seed)?,
        (_, Some(rate), _) => sample_reads_poisson(&genome, rate, l, a.seed)?,
        (_, _, Some(depth)) => {
            if !(depth >= 0.0 && depth.is_finite()) || l == 0 {
                bail!("depth must be finite and non-negative, read length positive");
            }
            let n = (depth * 2.0 * genome.len() as f64 / l as f64).ceil() as usize;
            sample_reads_uniform(&genome, n, l, a.seed)?
        }
        _ => unreachable!("clap requires one sampling mode"),
    };
    info!(
        "sampled {} reads, depth {:.2}",
        rs.len(),
        simulate::coverage_depth(&rs, &genome)
    );
    let mut out = create(a.output.as_deref())?;
    dio::write_reads(&mut out, &rs, !a.no_provenance)?;
    out.flush()?;
    Ok(Status::Ok)
}

fn stats_cmd(a: StatsArgs) -> Result<Status> {
    let genome = load_genome(&a.genome)?;
    // the full profile enumerates every repeat pair; the summary row alone does not
    let stats = match &a.profile {
        Some(p) => {
            let profile = repeat_statistics(&genome);
            write_json(Some(p), &profile)?;
            profile.stats
        }
        None => summary_statistics(&genome),
    };
    TableStats::write_csv(&[stats], create(a.output.as_deref())?)?;
    Ok(Status::Ok)
}

fn is_assembly_failure(e: &Error) -> bool {
    matches!(
        e,
        Error::Fragmented { .. }
            | Error::OddLength { .. }
            | Error::NotEulerian { .. }
            | Error::Disconnected { .. }
            | Error::NotStronglyConnected
            | Error::BudgetExceeded { .. }
            | Error::UncoveredLocus { .. }
    )
}

#[derive(Serialize)]
struct AssemblyReport {
    algo: &'static str,
    reads: usize,
    read_length: usize,
    assembled: bool,
    error: Option<String>,
    /// Algorithm-specific details: merge trace, tour or walk.
    result: Option<Value>,
    condition_flags: Option<Value>,
    /// Switch equivalence to the supplied truth.
    equivalent: Option<bool>,
}

fn assemble_cmd(a: AssembleArgs) -> Result<Status> {
    let mut rs = load_reads(&a.reads)?;
    if a.distinct {
        rs = distinct_reads(&rs);
    }
    let truth = a.truth.as_deref().map(load_genome).transpose()?;
    let mut report = AssemblyReport {
        algo: "",
        reads: rs.len(),
        read_length: rs.read_length(),
        assembled: false,
        error: None,
        result: None,
        condition_flags: None,
        equivalent: None,
    };

    let outcome: std::result::Result<(String, String), Error> = match a.algo {
        Algo::Greedy => {
            report.algo = "greedy";
            let mut r = greedy_assemble(&rs)?;
            r.condition_flags = truth.as_ref().map(|g| check_conditions_greedy(g, &rs));
            report.condition_flags = r.condition_flags.map(serde_json::to_value).transpose()?;
            let haps = r.haplotypes().map(|(x, y)| (ascii(x), ascii(y)));
            report.result = Some(serde_json::to_value(&r)?);
            haps
        }
        Algo::Dbg => {
            report.algo = "dbg";
            let k = a.k.context("--k is required for the de Bruijn algorithm")?;
            if let Some(p) = &a.emit_graph {
                let gc = dbg::condense(&dbg::build_dbg(&rs, k)?);
                write_text(p, &gc.to_adjacency_text())?;
            }
            if let Some(g) = &truth {
                report.condition_flags =
                    Some(serde_json::to_value(check_conditions_dbg(g, &rs, k)?)?);
            }
            match dbg_assemble(&rs, k) {
                Ok(d) => {
                    let haps = (d.g0.clone(), d.g1.clone());
                    report.result = Some(serde_json::to_value(&d)?);
                    Ok(haps)
                }
                Err(e) => Err(e),
            }
        }
        Algo::Overlap => {
            report.algo = "overlap";
            if let Some(p) = &a.emit_graph {
                let g = olc::transitive_reduction(&olc::build_overlap_graph(&rs, a.min_overlap));
                write_text(p, &g.to_edge_list())?;
            }
            if let Some(g) = &truth {
                report.condition_flags =
                    Some(serde_json::to_value(check_conditions_overlap(g, &rs))?);
            }
            let opts = WalkOptions {
                max_vertices: a.max_vertices,
                max_optima: if a.all_optima { 64 } else { 1 },
                ..Default::default()
            };
            match overlap_assemble(&rs, a.min_overlap, opts) {
                Ok(o) => {
                    let haps = (o.g0.clone(), o.g1.clone());
                    report.result = Some(serde_json::to_value(&o)?);
                    Ok(haps)
                }
                Err(e) => Err(e),
            }
        }
    };

    let status = match outcome {
        Ok((g0, g1)) => {
            report.assembled = true;
            report.equivalent = truth
                .as_ref()
                .map(|t| switch_equivalent_seqs(g0.as_bytes(), g1.as_bytes(), t));
            let mut out = create(a.output.as_deref())?;
            dio::write_haplotypes(&mut out, g0.as_bytes(), g1.as_bytes())?;
            out.flush()?;
            if report.equivalent == Some(false) {
                log::warn!("assembly is not switch-equivalent to the truth");
                Status::Failed
            } else {
                Status::Ok
            }
        }
        Err(e) if is_assembly_failure(&e) => {
            log::warn!("assembly failed: {e}");
            report.error = Some(e.to_string());
            Status::Failed
        }
        Err(e) => return Err(e.into()),
    };
    if let Some(p) = &a.report {
        write_json(Some(p), &report)?;
    }
    Ok(status)
}

fn ascii(v: Vec<u8>) -> String {
    String::from_utf8(v).expect("ASCII bases")
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

#[derive(Serialize)]
struct CheckReport {
    reads: usize,
    read_length: usize,
    it: Value,
    greedy: Value,
    dbg: Option<Value>,
    overlap: Value,
}

fn check_cmd(a: CheckArgs) -> Result<Status> {
    let genome = load_genome(&a.genome)?;
    let rs = load_reads(&a.reads)?;
    let report = CheckReport {
        reads: rs.len(),
        read_length: rs.read_length(),
        it: serde_json::to_value(check_conditions_it(&genome, &rs))?,
        greedy: serde_json::to_value(check_conditions_greedy(&genome, &rs))?,
        dbg: a
            .k
            .map(|k| check_conditions_dbg(&genome, &rs, k))
            .transpose()?
            .map(serde_json::to_value)
            .transpose()?,
        overlap: serde_json::to_value(check_conditions_overlap(&genome, &rs))?,
    };
    write_json(a.output.as_deref(), &report)?;
    Ok(Status::Ok)
}

/// Read-length thresholds for one stats row.
#[derive(Serialize)]
struct Thresholds {
    #[serde(rename = "G")]
    g: u64,
    min_l_lower_bound: u64,
    min_l_greedy: u64,
    min_k_dbg: u64,
}

impl Thresholds {
    fn of(s: &TableStats) -> Self {
        Self {
            g: s.haplotype_length,
            min_l_lower_bound: coverage::min_read_length_lower_bound(s),
            min_l_greedy: coverage::min_read_length_greedy(s),
            min_k_dbg: coverage::min_k_dbg(s),
        }
    }
}

#[derive(Serialize)]
struct FeasibilitySummary {
    eps: f64,
    thresholds: Vec<Thresholds>,
    /// Smallest grid read length at which each curve is finite.
    first_feasible_lower: Option<usize>,
    first_feasible_greedy: Option<usize>,
    first_feasible_dbg: Option<usize>,
}

fn feasibility_cmd(a: FeasibilityArgs, threads: usize) -> Result<Status> {
    let (rows, profile) = match (&a.stats, &a.profile) {
        (Some(p), _) => {
            let rows = TableStats::read_csv(open(p)?)
                .with_context(|| format!("reading {}", p.display()))?;
            let row = rows
                .get(a.row)
                .with_context(|| format!("row {} not in {} rows", a.row, rows.len()))?;
            let profile = RepeatProfile::from_stats(row);
            (rows, profile)
        }
        (_, Some(p)) => {
            let text = std::fs::read_to_string(p)
                .with_context(|| format!("cannot read {}", p.display()))?;
            let profile = RepeatProfile::from_json(&text)?;
            (vec![profile.stats], profile)
        }
        _ => unreachable!("clap requires a source"),
    };
    if !(a.eps > 0.0 && a.eps < 1.0) {
        bail!("eps must lie in (0, 1), got {}", a.eps);
    }
    if a.l_step == 0 || a.l_min < 2 || a.l_min > a.l_max {
        bail!(
            "bad read-length grid {}..={} step {}",
            a.l_min,
            a.l_max,
            a.l_step
        );
    }
    let grid: Vec<usize> = (a.l_min..=a.l_max).step_by(a.l_step).collect();
    let points = par_map(&grid, threads, |&l| {
        coverage::feasibility_point(&profile, l, a.eps)
    })
    .into_iter()
    .collect::<diplab_core::Result<Vec<_>>>()?;

    let thresholds: Vec<Thresholds> = rows.iter().map(Thresholds::of).collect();
    for t in &thresholds {
        eprintln!(
            "# G={}: L >= {} for any algorithm, L >= {} for greedy, k >= {} for de Bruijn",
            t.g, t.min_l_lower_bound, t.min_l_greedy, t.min_k_dbg
        );
    }
    let first =
        |f: fn(&coverage::FeasibilityPoint) -> bool| points.iter().find(|p| f(p)).map(|p| p.l);
    let summary = FeasibilitySummary {
        eps: a.eps,
        thresholds,
        first_feasible_lower: first(|p| p.feasible_lower),
        first_feasible_greedy: first(|p| p.feasible_greedy),
        first_feasible_dbg: first(|p| p.feasible_dbg),
    };
    if let Some(p) = &a.summary {
        write_json(Some(p), &summary)?;
    }
    if let Some(p) = &a.breakdown {
        let reqs: Vec<Requirement> = par_map(&grid, threads, |&l| {
            coverage::requirement(&profile, l, a.eps)
        })
        .into_iter()
        .collect::<diplab_core::Result<_>>()?;
        write_json(Some(p), &reqs)?;
    }
    coverage::write_feasibility_csv(&points, create(a.output.as_deref())?)?;
    Ok(Status::Ok)
}

#[derive(Serialize)]
struct VerifyRow {
    name: String,
    expected: String,
    result: &'static str,
    detail: String,
}

fn verify_cmd(a: VerifyArgs, threads: usize) -> Result<Status> {
    let suite = counterexamples::counterexample_suite();
    if a.list {
        let mut out = create(a.output.as_deref())?;
        for cx in &suite {
            writeln!(out, "{}\t{}", cx.name, cx.description)?;
        }
        out.flush()?;
        return Ok(Status::Ok);
    }
    let chosen: Vec<_> = match &a.figure {
        Some(name) => vec![counterexamples::find(name)
            .with_context(|| format!("unknown instance `{name}`; see `diplab verify --list`"))?],
        None => suite,
    };
    let evals: Vec<diplab_core::Result<Evaluation>> =
        par_map(&chosen, threads, counterexamples::evaluate);
    let mut rows = Vec::with_capacity(evals.len());
    for (cx, ev) in chosen.iter().zip(evals) {
        let expected = serde_json::to_value(cx.expected)?
            .as_str()
            .unwrap_or_default()
            .to_string();
        let (result, detail) = match ev {
            Ok(e) => (if e.triggered { "pass" } else { "fail" }, e.detail),
            Err(e) => ("fail", format!("error: {e}")),
        };
        rows.push(VerifyRow {
            name: cx.name.to_string(),
            expected,
            result,
            detail,
        });
    }
    let failed = rows.iter().filter(|r| r.result == "fail").count();
    info!(
        "{} of {} instances triggered",
        rows.len() - failed,
        rows.len()
    );
    let mut w = csv::Writer::from_writer(create(a.output.as_deref())?);
    for r in &rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(if failed == 0 {
        Status::Ok
    } else {
        Status::Failed
    })
}

//! Read-count and read-length requirements derived from repeat statistics,
//! and the normalized-coverage feasibility curves built from them.
//!
//! Read starts are a Poisson process of rate `lambda = N / G` over the
//! diploid length `G = 2|H|`. Every read-count function returns
//! `f64::INFINITY` when no read count suffices at the given `L`.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::repeats::{RepeatProfile, TableStats};
use crate::simulate::{lander_waterman_depth, lander_waterman_reads};

/// Probability that both copies of a length-`i` repeat go unbridged.
pub fn p_unbridged(lambda: f64, l: usize, i: usize) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::Domain(format!(
            "lambda must be positive, got {lambda}"
        )));
    }
    if l < i + 1 {
        return Err(Error::Domain(format!(
            "need L >= i + 1, got L = {l}, i = {i}"
        )));
    }
    Ok((-2.0 * lambda * (l - i - 1) as f64).exp())
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("eps must lie in (0, 1), got {eps}")))
    }
}

/// `G / (a (L - x - 1)) ln(count / denom)`, clamped at 0, infinite when
/// `L <= x + 1`.
fn branch(g: f64, a: f64, l: usize, x: f64, count: u64, denom: f64) -> f64 {
    let span = l as f64 - x - 1.0;
    if span <= 0.0 {
        return f64::INFINITY;
    }
    (g / (a * span) * (count as f64 / denom).ln()).max(0.0)
}

/// Dominant terms of a family of length pairs `(shorter, longer, count)`:
/// one-side-bridged and both-sides-bridged branches. A pair with both lengths
/// at least `L - 1` can never be bridged.
fn pair_branches(pairs: &[(u64, u64, u64)], g: f64, l: usize, eps: f64) -> [f64; 2] {
    let cut = l.saturating_sub(1) as u64;
    if pairs.iter().any(|&(m, _, c)| c > 0 && m >= cut) {
        return [f64::INFINITY; 2];
    }
    let one: Vec<_> = pairs
        .iter()
        .filter(|&&(m, n, c)| c > 0 && m < cut && n >= cut)
        .collect();
    let one_side = one.iter().map(|p| p.0).max().map_or(0.0, |m| {
        let count = one.iter().filter(|p| p.0 == m).map(|p| p.2).sum();
        branch(g, 2.0, l, m as f64, count, 2.0 * eps)
    });
    let both: Vec<_> = pairs
        .iter()
        .filter(|&&(m, n, c)| c > 0 && m < cut && n < cut)
        .collect();
    let both_sides = both.iter().map(|p| p.0 + p.1).max().map_or(0.0, |s| {
        let count = both.iter().filter(|p| p.0 + p.1 == s).map(|p| p.2).sum();
        branch(g, 4.0, l, s as f64 / 2.0, count, 2.0 * eps)
    });
    [one_side, both_sides]
}

/// Read counts demanded by each repeat family for any reconstruction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundTerms {
    pub interleaved_one_side: f64,
    pub interleaved_both_sides: f64,
    pub triple: f64,
    pub i2_one_side: f64,
    pub i2_both_sides: f64,
}

impl LowerBoundTerms {
    pub fn max(&self) -> f64 {
        [
            self.interleaved_one_side,
            self.interleaved_both_sides,
            self.triple,
            self.i2_one_side,
            self.i2_both_sides,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

pub fn lower_bound_terms(profile: &RepeatProfile, l: usize, eps: f64) -> Result<LowerBoundTerms> {
    check_eps(eps)?;
    let g = profile.diploid_length();
    let [interleaved_one_side, interleaved_both_sides] =
        pair_branches(&profile.interleaved, g, l, eps);
    let [i2_one_side, i2_both_sides] = pair_branches(&profile.i2_pairs, g, l, eps);
    let triple = profile
        .triples
        .iter()
        .filter(|t| t.1 > 0)
        .map(|t| t.0)
        .max()
        .map_or(0.0, |p| {
            let count = profile
                .triples
                .iter()
                .filter(|t| t.0 == p)
                .map(|t| t.1)
                .sum();
            branch(g, 3.0, l, p as f64, count, 2.0 * eps)
        });
    Ok(LowerBoundTerms {
        interleaved_one_side,
        interleaved_both_sides,
        triple,
        i2_one_side,
        i2_both_sides,
    })
}

/// Reads needed so that intra-interleaved, intra-triple and swappable
/// inter-double repeats all get bridged with probability `1 - eps`.
pub fn n_lower_it(profile: &RepeatProfile, l: usize, eps: f64) -> Result<f64> {
    Ok(lower_bound_terms(profile, l, eps)?.max())
}

/// Union bound on the probability that some pair of adjacent loci lacks
/// overlapping anchor reads, with `N` reads of length `L`.
pub fn p_err_greedy_gap(profile: &RepeatProfile, n: u64, l: usize) -> f64 {
    let g = profile.diploid_length();
    let (n, l) = (n as f64, l as i64);
    let lambda = n / g;
    let mut total = 0.0;
    for &gap in &profile.gaps {
        let gap = gap as i64;
        let js = (gap - l + 2).max(0);
        let je = gap.min(l - 1);
        if je >= js {
            let reach = (l - (gap - js) - 1) as f64;
            let per = (gap - js + 1) as f64 / (g * g) * 2.0 * (-(n - 2.0) / g * reach).exp();
            total += 2.0 * (je - js + 1) as f64 * per;
        }
        if l < gap + 2 {
            total += 2.0 * (-lambda * (l - (gap - l + 1) - 1) as f64).exp();
        }
    }
    total
}

/// Smallest `N` with `p_err_greedy_gap(N) < eps`; infinite when the bound
/// stays above `eps` for every `N` (a gap of `2L - 2` or more).
pub fn n_greedy_gap(profile: &RepeatProfile, l: usize, eps: f64) -> Result<f64> {
    check_eps(eps)?;
    if profile.gaps.iter().any(|&gap| 2 * l as u64 <= gap + 2) {
        return Ok(f64::INFINITY);
    }
    let ok = |n: u64| p_err_greedy_gap(profile, n, l) < eps;
    if ok(0) {
        return Ok(0.0);
    }
    let mut hi = 1u64;
    while !ok(hi) {
        if hi >= 1 << 60 {
            return Ok(f64::INFINITY);
        }
        hi *= 2;
    }
    let mut lo = hi / 2;
    // bound(lo) >= eps > bound(hi)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi as f64)
}

/// Read counts demanded by well-bridging, per class of double repeat.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WellBridgeTerms {
    pub both_cover: f64,
    pub one_cover: f64,
    pub no_cover: f64,
}

impl WellBridgeTerms {
    pub fn max(&self) -> f64 {
        self.both_cover.max(self.one_cover).max(self.no_cover)
    }
}

pub fn well_bridge_terms(profile: &RepeatProfile, l: usize, eps: f64) -> Result<WellBridgeTerms> {
    check_eps(eps)?;
    let g = profile.diploid_length();
    let gap = |j: u64| -> Result<u64> {
        profile
            .gaps
            .get(j as usize)
            .copied()
            .ok_or_else(|| Error::InvalidParameter(format!("gap index {j} out of range")))
    };
    let both_cover = profile
        .both_cover
        .iter()
        .filter(|a| a.1 > 0)
        .map(|a| a.0)
        .max()
        .map_or(0.0, |i| {
            let count = profile
                .both_cover
                .iter()
                .filter(|a| a.0 == i)
                .map(|a| a.1)
                .sum();
            branch(g, 2.0, l, i as f64, count, eps)
        });
    // alpha = (3i + 2g_j) / 5 and beta = (g_j1 + g_j2 + 2i) / 4, kept as
    // integer numerators so ties are exact
    let mut one = Vec::new();
    for &(i, j, c) in profile.one_cover.iter().filter(|b| b.2 > 0) {
        one.push((3 * i + 2 * gap(j)?, c));
    }
    let one_cover = dominant(&one).map_or(0.0, |(a, c)| branch(g, 5.0, l, a as f64 / 5.0, c, eps));
    let mut none = Vec::new();
    for &(i, j1, j2, c) in profile.no_cover.iter().filter(|x| x.3 > 0) {
        none.push((gap(j1)? + gap(j2)? + 2 * i, c));
    }
    let no_cover = dominant(&none).map_or(0.0, |(b, c)| branch(g, 8.0, l, b as f64 / 4.0, c, eps));
    Ok(WellBridgeTerms {
        both_cover,
        one_cover,
        no_cover,
    })
}

/// Largest key and the total count at that key.
fn dominant(xs: &[(u64, u64)]) -> Option<(u64, u64)> {
    let top = xs.iter().map(|x| x.0).max()?;
    Some((top, xs.iter().filter(|x| x.0 == top).map(|x| x.1).sum()))
}

pub fn n_greedy_wellbridge(profile: &RepeatProfile, l: usize, eps: f64) -> Result<f64> {
    Ok(well_bridge_terms(profile, l, eps)?.max())
}

/// Normalized coverage of the de Bruijn algorithm at `k = l_double + 1`;
/// infinite when `L <= l_double + 1`.
pub fn dbg_normalized_coverage(l: usize, l_double: u64) -> f64 {
    let k = l_double as f64 + 1.0;
    if (l as f64) <= k {
        return f64::INFINITY;
    }
    1.0 / (1.0 - k / l as f64)
}

pub fn min_read_length_lower_bound(stats: &TableStats) -> u64 {
    stats.information_maxima().into_iter().max().unwrap_or(0) + 2
}

pub fn min_read_length_greedy(stats: &TableStats) -> u64 {
    (stats.max_gap + 3)
        .div_ceil(2)
        .max(stats.min_l_wellbridge)
        .max(min_read_length_lower_bound(stats))
}

pub fn min_k_dbg(stats: &TableStats) -> u64 {
    (stats.max_double + 1).max(min_read_length_lower_bound(stats))
}

/// All read-count terms at one read length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Requirement {
    #[serde(rename = "L")]
    pub l: usize,
    pub lander_waterman: f64,
    pub lower: LowerBoundTerms,
    pub greedy_gap: f64,
    pub well_bridge: WellBridgeTerms,
}

impl Requirement {
    pub fn n_lower(&self) -> f64 {
        self.lower.max().max(self.lander_waterman)
    }

    pub fn n_greedy(&self) -> f64 {
        self.n_lower()
            .max(self.greedy_gap)
            .max(self.well_bridge.max())
    }
}

pub fn requirement(profile: &RepeatProfile, l: usize, eps: f64) -> Result<Requirement> {
    let g = profile.diploid_length();
    Ok(Requirement {
        l,
        lander_waterman: lander_waterman_reads(g, l as f64, eps)?,
        lower: lower_bound_terms(profile, l, eps)?,
        greedy_gap: n_greedy_gap(profile, l, eps)?,
        well_bridge: well_bridge_terms(profile, l, eps)?,
    })
}

/// One row of the feasibility CSV. Normalized coverages are empty where the
/// curve is infeasible.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityPoint {
    #[serde(rename = "L")]
    pub l: usize,
    pub cbar_lower: Option<f64>,
    pub cbar_greedy: Option<f64>,
    pub cbar_dbg: Option<f64>,
    pub feasible_lower: bool,
    pub feasible_greedy: bool,
    pub feasible_dbg: bool,
}

pub const FEASIBILITY_HEADER: &str =
    "L,cbar_lower,cbar_greedy,cbar_dbg,feasible_lower,feasible_greedy,feasible_dbg";

pub fn feasibility_point(profile: &RepeatProfile, l: usize, eps: f64) -> Result<FeasibilityPoint> {
    let g = profile.diploid_length();
    let req = requirement(profile, l, eps)?;
    let c_lw = lander_waterman_depth(g, l as f64, eps)?;
    let norm = |n: f64| n.is_finite().then(|| n * l as f64 / g / c_lw);
    let cbar_lower = norm(req.n_lower());
    let cbar_greedy = norm(req.n_greedy());
    let dbg = dbg_normalized_coverage(l, profile.stats.max_double);
    let cbar_dbg = dbg.is_finite().then_some(dbg);
    Ok(FeasibilityPoint {
        l,
        cbar_lower,
        cbar_greedy,
        cbar_dbg,
        feasible_lower: cbar_lower.is_some(),
        feasible_greedy: cbar_greedy.is_some(),
        feasible_dbg: cbar_dbg.is_some(),
    })
}

/// Points for `L = from, from + step, ..., <= to`.
pub fn feasibility_curves(
    profile: &RepeatProfile,
    from: usize,
    to: usize,
    step: usize,
    eps: f64,
) -> Result<Vec<FeasibilityPoint>> {
    if step == 0 || from == 0 || from > to {
        return Err(Error::InvalidParameter(format!(
            "bad L range {from}..={to} step {step}"
        )));
    }
    (from..=to)
        .step_by(step)
        .map(|l| feasibility_point(profile, l, eps))
        .collect()
}

pub fn write_feasibility_csv<W: Write>(points: &[FeasibilityPoint], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if points.is_empty() {
        w.write_record(FEASIBILITY_HEADER.split(','))?;
    }
    for p in points {
        w.serialize(p)?;
    }
    w.flush()?;
    Ok(())
}

//! Entropy quantities of currents on marked metric graphs.
//!
//! The central quantity is the geometric entropy: the slowest exponential
//! decay rate of cylinder weights, measured per unit of metric length. For a
//! Markov current the defining liminf over long support paths equals the
//! minimum over directed cycles of (sum of -log transition probabilities) /
//! (metric length of the cycle), because the per-path cost differs from the
//! sum of transition costs only by bounded boundary terms. The exhaustive
//! envelope [`geometric_entropy_bruteforce`] is kept as an independent oracle
//! for that reduction.

use crate::currents::{to_markov, Current, CurrentKind, MarkovCurrent};
use crate::error::{Error, Result};
use crate::graph::SerreGraph;
use crate::marked::MarkedMetricGraph;
use crate::min_ratio::{minimum_cycle_ratio, RatioArc};
use crate::prng::Prng;
use crate::spectral::power_radius;
use crate::tol;

/// What an [`EntropyReport`] measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntropyKind {
    Volume,
    Geometric,
    MeasureTheoretic,
    Hausdorff,
    SupportGrowth,
    SftGeometric,
}

impl EntropyKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            EntropyKind::Volume => "volume",
            EntropyKind::Geometric => "geometric",
            EntropyKind::MeasureTheoretic => "measure_theoretic",
            EntropyKind::Hausdorff => "hausdorff",
            EntropyKind::SupportGrowth => "support_growth",
            EntropyKind::SftGeometric => "sft_geometric",
        }
    }
}

/// How a value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    CycleRatio,
    Bisection,
    ClosedForm,
    BruteForce,
    MonteCarlo,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::CycleRatio => "cycle_ratio",
            Method::Bisection => "bisection",
            Method::ClosedForm => "closed_form",
            Method::BruteForce => "brute_force",
            Method::MonteCarlo => "monte_carlo",
        }
    }
}

/// A computed entropy with method and tolerance metadata. `value` may be
/// `+inf` (only for the zero current). The witness, when present, is the
/// state sequence of a cycle or path achieving the extremum.
#[derive(Debug, Clone)]
pub struct EntropyReport {
    pub kind: EntropyKind,
    pub value: f64,
    pub method: Method,
    pub tolerance: f64,
    pub witness: Option<Vec<usize>>,
}

/// Volume entropy of `t`, packaged as a report.
pub fn volume_entropy_report(t: &MarkedMetricGraph) -> Result<EntropyReport> {
    Ok(EntropyReport {
        kind: EntropyKind::Volume,
        value: crate::spectral::volume_entropy(t)?,
        method: Method::Bisection,
        tolerance: tol::ENTROPY_BISECTION,
        witness: None,
    })
}

/// Geometric entropy of `current` with respect to the metric of `t`.
///
/// The current must live over the graph of `t`; the metric may differ from
/// the one the current was built on, which is how a current is measured
/// against another point of the same simplicial chart.
pub fn geometric_entropy(current: &Current, t: &MarkedMetricGraph) -> Result<EntropyReport> {
    current.check_graph(&t.graph)?;
    match &current.kind {
        CurrentKind::Rational(rc) => Ok(EntropyReport {
            kind: EntropyKind::Geometric,
            value: 0.0,
            method: Method::ClosedForm,
            tolerance: 0.0,
            witness: Some(rc.axis().to_vec()),
        }),
        CurrentKind::Markov(mc) => markov_geometric_entropy(mc, t),
        CurrentKind::PattersonSullivan(ps) => {
            let mc = to_markov(ps, &t.graph)?;
            markov_geometric_entropy(&mc, t)
        }
    }
}

fn markov_geometric_entropy(mc: &MarkovCurrent, t: &MarkedMetricGraph) -> Result<EntropyReport> {
    let arcs = ratio_arcs(mc, t);
    let out = minimum_cycle_ratio(t.graph.num_edges(), &arcs)?;
    Ok(EntropyReport {
        kind: EntropyKind::Geometric,
        value: out.value,
        method: Method::CycleRatio,
        tolerance: tol::CYCLE_RATIO,
        witness: Some(out.cycle),
    })
}

/// Transition costs `-log P` against metric lengths, over the support.
fn ratio_arcs(mc: &MarkovCurrent, t: &MarkedMetricGraph) -> Vec<RatioArc> {
    mc.support_arcs()
        .into_iter()
        .map(|(from, to, q)| RatioArc {
            from,
            to,
            cost: -q.ln(),
            len: t.metric.length(to),
        })
        .collect()
}

/// Finite-depth envelope of the defining liminf:
/// `m_n = min over support paths of n edges of (-log weight) / length`.
pub fn geometric_entropy_bruteforce(
    current: &Current,
    t: &MarkedMetricGraph,
    n_max: usize,
    cap: usize,
) -> Result<Vec<(usize, f64)>> {
    current.check_graph(&t.graph)?;
    let g = &t.graph;
    let mut best = vec![f64::INFINITY; n_max + 1];
    let mut visited = 0usize;

    // Markov weights extend by one kernel factor per step; other variants
    // are re-evaluated on the whole path.
    let markov: Option<&MarkovCurrent> = match &current.kind {
        CurrentKind::Markov(mc) => Some(mc),
        _ => None,
    };
    fn recurse(
        current: &Current,
        markov: Option<&MarkovCurrent>,
        t: &MarkedMetricGraph,
        path: &mut Vec<usize>,
        weight: f64,
        len: f64,
        n_max: usize,
        best: &mut [f64],
        visited: &mut usize,
        cap: usize,
    ) -> Result<()> {
        *visited += 1;
        if *visited > cap {
            return Err(Error::EnumerationCap { cap });
        }
        let depth = path.len();
        let ratio = -(weight.ln()) / len;
        if ratio < best[depth] {
            best[depth] = ratio;
        }
        if depth == n_max {
            return Ok(());
        }
        let last = *path.last().unwrap();
        for f in t.graph.successors(last) {
            let w = match markov {
                Some(mc) => {
                    let q = mc.transition(last, f);
                    if q == 0.0 {
                        continue;
                    }
                    weight * q
                }
                None => {
                    path.push(f);
                    let w = current.weight(&t.graph, path)?;
                    path.pop();
                    if w == 0.0 {
                        continue;
                    }
                    w
                }
            };
            path.push(f);
            recurse(current, markov, t, path, w, len + t.metric.length(f), n_max, best, visited, cap)?;
            path.pop();
        }
        Ok(())
    }
    for e in 0..g.num_edges() {
        let w = current.weight(g, &[e])?;
        if w > 0.0 {
            let mut path = vec![e];
            recurse(
                current,
                markov,
                t,
                &mut path,
                w,
                t.metric.length(e),
                n_max,
                &mut best,
                &mut visited,
                cap,
            )?;
        }
    }
    Ok((1..=n_max)
        .filter(|&n| best[n].is_finite())
        .map(|n| (n, best[n]))
        .collect())
}

/// Shannon entropy rate of a normalized Markov current:
/// `-sum_e p(e) sum_f P(e,f) log P(e,f)`.
pub fn markov_entropy(mc: &MarkovCurrent) -> Result<EntropyReport> {
    let mass = mc.total_mass();
    if (mass - 1.0).abs() > tol::MASS {
        return Err(Error::Unnormalized(mass));
    }
    let mut h = 0.0;
    for (e, row) in mc.rows().iter().enumerate() {
        let p = mc.stationary()[e];
        if p <= 0.0 {
            continue;
        }
        for &(_, q) in row {
            if q > 0.0 {
                h -= p * q * q.ln();
            }
        }
    }
    Ok(EntropyReport {
        kind: EntropyKind::MeasureTheoretic,
        value: h,
        method: Method::ClosedForm,
        tolerance: 0.0,
        witness: None,
    })
}

/// Entropy per unit of metric length: the Hausdorff dimension of the
/// boundary measure driven by the chain, `hbar / sum_e p(e) length(e)`.
pub fn hausdorff_dimension(mc: &MarkovCurrent, t: &MarkedMetricGraph) -> Result<EntropyReport> {
    if mc.num_edges() != t.graph.num_edges() {
        return Err(Error::CurrentGraphMismatch(
            "chain does not match the graph".into(),
        ));
    }
    let hbar = markov_entropy(mc)?.value;
    let mean_len: f64 = (0..mc.num_edges())
        .map(|e| mc.stationary()[e] * t.metric.length(e))
        .sum();
    Ok(EntropyReport {
        kind: EntropyKind::Hausdorff,
        value: hbar / mean_len,
        method: Method::ClosedForm,
        tolerance: 0.0,
        witness: None,
    })
}

/// Monte Carlo configuration for the dimension cross-check.
#[derive(Debug, Clone, Copy)]
pub struct McConfig {
    pub seed: u64,
    pub rays: usize,
    pub ray_length: f64,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig {
            seed: 0,
            rays: 1000,
            ray_length: 200.0,
        }
    }
}

/// Samples rays from the chain and averages `-log weight(prefix) / length`.
/// Converges to the closed-form dimension; used as an independent check of
/// the almost-sure decay-rate formula.
pub fn hausdorff_mc_estimate(
    mc: &MarkovCurrent,
    t: &MarkedMetricGraph,
    cfg: &McConfig,
) -> Result<f64> {
    let mass = mc.total_mass();
    if (mass - 1.0).abs() > tol::MASS {
        return Err(Error::Unnormalized(mass));
    }
    let mut rng = Prng::new(cfg.seed);
    let mut sum = 0.0;
    for _ in 0..cfg.rays {
        let mut e = rng.weighted(mc.stationary());
        let mut cost = -mc.stationary()[e].ln();
        let mut len = t.metric.length(e);
        while len < cfg.ray_length {
            let row = &mc.rows()[e];
            let weights: Vec<f64> = row.iter().map(|&(_, q)| q).collect();
            let pick = rng.weighted(&weights);
            let (f, q) = row[pick];
            cost -= q.ln();
            len += t.metric.length(f);
            e = f;
        }
        sum += cost / len;
    }
    Ok(sum / cfg.rays as f64)
}

/// Exponential growth rate of the support: the parameter where the transfer
/// operator restricted to support transitions has unit spectral radius.
/// Single-cycle supports (rational currents) grow linearly, rate zero.
pub fn support_growth(current: &Current, t: &MarkedMetricGraph) -> Result<EntropyReport> {
    current.check_graph(&t.graph)?;
    let mc = match &current.kind {
        CurrentKind::Rational(rc) => {
            return Ok(EntropyReport {
                kind: EntropyKind::SupportGrowth,
                value: 0.0,
                method: Method::ClosedForm,
                tolerance: 0.0,
                witness: Some(rc.axis().to_vec()),
            });
        }
        CurrentKind::Markov(mc) => mc.clone(),
        CurrentKind::PattersonSullivan(ps) => to_markov(ps, &t.graph)?,
    };
    // relabel the support states densely for the eigensolver
    let mut states: Vec<usize> = (0..mc.num_edges())
        .filter(|&e| mc.stationary()[e] > 0.0)
        .collect();
    states.sort_unstable();
    let pos = |e: usize| states.binary_search(&e).unwrap();
    let support: Vec<(usize, usize, usize)> = mc
        .support_arcs()
        .into_iter()
        .map(|(e, f, _)| (pos(e), pos(f), f))
        .collect();
    let radius_at = |s: f64| -> Result<f64> {
        let arcs: Vec<(usize, usize, f64)> = support
            .iter()
            .map(|&(e, f, orig)| (e, f, (-s * t.metric.length(orig)).exp()))
            .collect();
        Ok(power_radius(states.len(), &arcs)?.0)
    };
    if radius_at(0.0)? <= 1.0 + 1e-12 {
        return Ok(EntropyReport {
            kind: EntropyKind::SupportGrowth,
            value: 0.0,
            method: Method::Bisection,
            tolerance: tol::ENTROPY_BISECTION,
            witness: None,
        });
    }
    let mut lo = 0.0f64;
    let mut hi = {
        let max_degree = (0..t.graph.num_vertices())
            .map(|v| t.graph.degree(v))
            .max()
            .unwrap_or(0) as f64;
        max_degree.ln() / t.metric.min_length() + 1.0
    };
    if radius_at(hi)? >= 1.0 {
        return Err(Error::BracketingFailure("support growth bracket".into()));
    }
    while hi - lo > tol::BISECTION_INTERNAL {
        let mid = 0.5 * (lo + hi);
        if radius_at(mid)? > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(EntropyReport {
        kind: EntropyKind::SupportGrowth,
        value: 0.5 * (lo + hi),
        method: Method::Bisection,
        tolerance: tol::ENTROPY_BISECTION,
        witness: None,
    })
}

/// Empirical bound for how much a cylinder weight can grow when a bounded
/// prefix and suffix are stripped: the maximum of `weight(v) / weight(u v u')`
/// over support paths `u v u'` with both margins of metric length at most
/// `m`, up to `depth` edges in total.
#[derive(Debug, Clone)]
pub struct TamenessReport {
    pub margin: f64,
    pub depth: usize,
    pub max_ratio: f64,
    pub max_ratio_prev_depth: f64,
    /// True when deepening from `depth - 1` to `depth` increased the bound.
    pub grew: bool,
}

pub fn tameness_bound(
    current: &Current,
    t: &MarkedMetricGraph,
    margin: f64,
    depth: usize,
) -> Result<TamenessReport> {
    current.check_graph(&t.graph)?;
    let g = &t.graph;
    let metric = &t.metric;
    let mut max_at = vec![0.0f64; depth + 1];
    crate::currents::for_each_support_path(current, g, depth, &mut |path, w| {
        let n = path.len();
        // all splittings path = u . v . u' with margins within `margin`
        let mut prefix = vec![0.0f64; n + 1];
        for i in 0..n {
            prefix[i + 1] = prefix[i] + metric.length(path[i]);
        }
        let total = prefix[n];
        for i in 0..n {
            if prefix[i] > margin {
                break;
            }
            for j in (i + 1)..=n {
                if total - prefix[j] > margin {
                    continue;
                }
                if i == 0 && j == n {
                    continue;
                }
                let v = &path[i..j];
                let wv = current.weight(g, v)?;
                if wv > 0.0 && w > 0.0 {
                    let r = wv / w;
                    if r > max_at[n] {
                        max_at[n] = r;
                    }
                }
            }
        }
        Ok(())
    })?;
    let up_to = |d: usize| max_at[..=d].iter().cloned().fold(0.0f64, f64::max);
    let max_ratio = up_to(depth);
    let max_prev = if depth > 1 { up_to(depth - 1) } else { 0.0 };
    Ok(TamenessReport {
        margin,
        depth,
        max_ratio,
        max_ratio_prev_depth: max_prev,
        grew: max_ratio > max_prev + 1e-15,
    })
}

/// Generic stretching factor of `target` relative to `base`: the ratio of
/// the volume entropy of `base` to the dimension of its Patterson-Sullivan
/// chain re-measured in the metric of `target`. Equals the mean length
/// distortion under the stationary law.
pub fn generic_stretch(base: &MarkedMetricGraph, target: &MarkedMetricGraph) -> Result<f64> {
    if base.graph != target.graph {
        return Err(Error::GraphMismatch);
    }
    let ps = crate::currents::patterson_sullivan(base)?;
    let mc = to_markov(&ps, &base.graph)?;
    let h = ps.entropy;
    let hbar = markov_entropy(&mc)?.value;
    let mean_len_target: f64 = (0..mc.num_edges())
        .map(|e| mc.stationary()[e] * target.metric.length(e))
        .sum();
    Ok(h / (hbar / mean_len_target))
}

//! The length-weighted non-backtracking transfer operator and the volume
//! entropy of a marked metric graph.
//!
//! States are the oriented edges; the transition `e -> e'` is allowed when
//! `e'` continues `e` without backtracking and carries weight
//! `exp(-s * length(e'))`. The volume entropy is the unique `s > 0` where the
//! spectral radius crosses one; `growth_count` provides the matching
//! brute-force ball count so the two can be checked against each other.

use crate::error::{Error, Result};
use crate::marked::MarkedMetricGraph;
use crate::tol;

const MAX_POWER_ITERATIONS: usize = 500_000;

/// Sparse nonnegative operator on oriented-edge states.
#[derive(Debug, Clone)]
pub struct TransferMatrix {
    num_states: usize,
    /// `(from, to, weight)` with weight `exp(-s * length(to))`.
    arcs: Vec<(usize, usize, f64)>,
    s: f64,
}

impl TransferMatrix {
    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn parameter(&self) -> f64 {
        self.s
    }

    pub fn entry(&self, from: usize, to: usize) -> f64 {
        self.arcs
            .iter()
            .find(|&&(f, t, _)| f == from && t == to)
            .map(|&(_, _, w)| w)
            .unwrap_or(0.0)
    }

    pub fn arcs(&self) -> &[(usize, usize, f64)] {
        &self.arcs
    }

    pub fn perron(&self) -> Result<PerronData> {
        let (rho, right, left) = power_radius(self.num_states, &self.arcs)?;
        Ok(PerronData::normalized(rho, right, left))
    }
}

/// Builds the transfer operator of `t` at parameter `s`.
pub fn transfer_matrix(t: &MarkedMetricGraph, s: f64) -> TransferMatrix {
    let g = &t.graph;
    let mut arcs = Vec::new();
    for e in 0..g.num_edges() {
        for f in g.successors(e) {
            arcs.push((e, f, (-s * t.metric.length(f)).exp()));
        }
    }
    TransferMatrix {
        num_states: g.num_edges(),
        arcs,
        s,
    }
}

/// Perron root with positive right/left eigenvectors, normalized so that
/// `sum_e left_e * right_e = 1`.
#[derive(Debug, Clone)]
pub struct PerronData {
    pub spectral_radius: f64,
    pub right: Vec<f64>,
    pub left: Vec<f64>,
}

impl PerronData {
    fn normalized(spectral_radius: f64, right: Vec<f64>, mut left: Vec<f64>) -> Self {
        let dot: f64 = left.iter().zip(&right).map(|(l, r)| l * r).sum();
        for l in &mut left {
            *l /= dot;
        }
        PerronData {
            spectral_radius,
            right,
            left,
        }
    }

    /// Relative eigen-residuals `||M v - rho v||_inf / ||v||_inf`, right and
    /// left.
    pub fn residuals(&self, m: &TransferMatrix) -> (f64, f64) {
        let n = m.num_states;
        let mut mr = vec![0.0; n];
        let mut lm = vec![0.0; n];
        for &(from, to, w) in &m.arcs {
            mr[from] += w * self.right[to];
            lm[to] += self.left[from] * w;
        }
        let rmax = self.right.iter().cloned().fold(0.0f64, f64::max);
        let lmax = self.left.iter().cloned().fold(0.0f64, f64::max);
        let res_r = (0..n)
            .map(|i| (mr[i] - self.spectral_radius * self.right[i]).abs())
            .fold(0.0f64, f64::max)
            / rmax;
        let res_l = (0..n)
            .map(|i| (lm[i] - self.spectral_radius * self.left[i]).abs())
            .fold(0.0f64, f64::max)
            / lmax;
        (res_r, res_l)
    }
}

/// Spectral radius with right and left Perron vectors of a nonnegative
/// irreducible operator given by arcs. Deterministic power iteration from
/// the all-ones vector; the operator is shifted by the identity so periodic
/// supports converge too.
pub(crate) fn power_radius(
    n: usize,
    arcs: &[(usize, usize, f64)],
) -> Result<(f64, Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(Error::EigenNoConvergence(0));
    }
    strong_connectivity(n, arcs)?;
    let iterate = |transpose: bool| -> Result<(f64, Vec<f64>)> {
        let mut v = vec![1.0f64; n];
        let mut rho = 0.0f64;
        for it in 0..MAX_POWER_ITERATIONS {
            let mut next = v.clone(); // identity shift
            for &(from, to, w) in arcs {
                if transpose {
                    next[to] += w * v[from];
                } else {
                    next[from] += w * v[to];
                }
            }
            let norm = next.iter().cloned().fold(0.0f64, f64::max);
            for x in &mut next {
                *x /= norm;
            }
            rho = norm - 1.0;
            // residual of the unshifted operator
            let mut res = 0.0f64;
            let mut mv = vec![0.0f64; n];
            for &(from, to, w) in arcs {
                if transpose {
                    mv[to] += w * next[from];
                } else {
                    mv[from] += w * next[to];
                }
            }
            let vmax = next.iter().cloned().fold(0.0f64, f64::max);
            for i in 0..n {
                res = res.max((mv[i] - rho * next[i]).abs());
            }
            v = next;
            if res / vmax <= tol::EIGEN_RESIDUAL * 0.5 && it > 2 {
                return Ok((rho, v));
            }
        }
        Err(Error::EigenNoConvergence(MAX_POWER_ITERATIONS))
    };
    let (rho, right) = iterate(false)?;
    let (_, left) = iterate(true)?;
    Ok((rho, right, left))
}

fn strong_connectivity(n: usize, arcs: &[(usize, usize, f64)]) -> Result<()> {
    let reach = |forward: bool| -> usize {
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut stack = vec![0usize];
        while let Some(v) = stack.pop() {
            for &(from, to, _) in arcs {
                let (a, b) = if forward { (from, to) } else { (to, from) };
                if a == v && !seen[b] {
                    seen[b] = true;
                    stack.push(b);
                }
            }
        }
        seen.iter().filter(|&&s| s).count()
    };
    if reach(true) == n && reach(false) == n {
        Ok(())
    } else {
        Err(Error::InvalidGraph(
            "transfer operator support is not strongly connected".into(),
        ))
    }
}

/// Volume entropy: the unique `s > 0` with spectral radius one, found by
/// bisection on the strictly decreasing map `s -> log rho(M(s))`.
pub fn volume_entropy(t: &MarkedMetricGraph) -> Result<f64> {
    let radius_at = |s: f64| -> Result<f64> {
        let m = transfer_matrix(t, s);
        Ok(m.perron()?.spectral_radius)
    };
    let max_degree = (0..t.graph.num_vertices())
        .map(|v| t.graph.degree(v))
        .max()
        .unwrap_or(0);
    let mut lo = 0.0f64;
    let mut hi = (max_degree as f64).ln() / t.metric.min_length() + 1.0;
    if radius_at(lo)? <= 1.0 {
        return Err(Error::BracketingFailure(
            "spectral radius at s = 0 is not above one".into(),
        ));
    }
    if radius_at(hi)? >= 1.0 {
        return Err(Error::BracketingFailure(
            "upper bracket does not bring the spectral radius below one".into(),
        ));
    }
    while hi - lo > tol::BISECTION_INTERNAL {
        let mid = 0.5 * (lo + hi);
        if radius_at(mid)? > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Result of a ball count; `complete` is false when the enumeration cap was
/// hit and the count is only a lower bound.
#[derive(Debug, Clone, Copy)]
pub struct GrowthCount {
    pub count: u64,
    pub complete: bool,
}

/// Number of nonempty reduced edge paths starting at `v` of metric length at
/// most `radius`, by exhaustive depth-first enumeration.
pub fn growth_count(t: &MarkedMetricGraph, v: usize, radius: f64, cap: usize) -> GrowthCount {
    if radius < 0.0 {
        return GrowthCount {
            count: 0,
            complete: true,
        };
    }
    let g = &t.graph;
    let mut count = 0u64;
    let mut visited = 0usize;
    // stack of (last edge, used length)
    let mut stack: Vec<(usize, f64)> = Vec::new();
    for e in 0..g.num_edges() {
        if g.origin(e) == v && t.metric.length(e) <= radius {
            stack.push((e, t.metric.length(e)));
        }
    }
    while let Some((e, used)) = stack.pop() {
        count += 1;
        visited += 1;
        if visited > cap {
            return GrowthCount {
                count,
                complete: false,
            };
        }
        for f in g.successors(e) {
            let next = used + t.metric.length(f);
            if next <= radius {
                stack.push((f, next));
            }
        }
    }
    GrowthCount {
        count,
        complete: true,
    }
}

/// Largest radius below `limit` whose ball stays within the enumeration cap,
/// together with the count there. Walks outward in steps of the shortest
/// edge length and backs off just before the cap is breached.
pub fn largest_feasible_radius(
    t: &MarkedMetricGraph,
    v: usize,
    cap: usize,
    limit: f64,
) -> (f64, u64) {
    let step = t.metric.min_length().max(0.25);
    let mut best = (0.0, 0u64);
    let mut radius = step;
    while radius <= limit {
        let gc = growth_count(t, v, radius, cap);
        if !gc.complete {
            break;
        }
        // evaluate just under the next jump: counts are step functions, so
        // the same ball is worth its maximal radius
        best = (radius + step - 1e-9, gc.count);
        radius += step;
    }
    best
}

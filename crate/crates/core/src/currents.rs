//! Geodesic currents as cylinder-weight systems on reduced edge paths.
//!
//! A current assigns a nonnegative weight to every finite reduced path of the
//! quotient graph, subject to the two shift-consistency identities: the
//! weight of a path equals the sum of the weights of its reduced one-edge
//! extensions, on either side. Three concrete families are provided:
//!
//! * [`MarkovCurrent`] -- a stationary law on oriented edges plus a
//!   transition kernel supported on non-backtracking moves;
//! * [`RationalCurrent`] -- the counting current of a conjugacy class,
//!   weighting a path by its occurrences in the periodic axis word;
//! * [`PsCurrent`] -- the Patterson-Sullivan current of a marked metric
//!   graph, whose weights decay exactly like `exp(-h * length)`.

use crate::error::{Error, Result};
use crate::graph::{EdgePath, SerreGraph};
use crate::marked::MarkedMetricGraph;
use crate::marking::Word;
use crate::spectral::{transfer_matrix, volume_entropy};
use crate::tol;

/// A geodesic current: one of the concrete weight systems, times a positive
/// scalar.
#[derive(Debug, Clone)]
pub struct Current {
    pub kind: CurrentKind,
    /// Scalar multiplier applied to every weight.
    pub coeff: f64,
}

#[derive(Debug, Clone)]
pub enum CurrentKind {
    Markov(MarkovCurrent),
    Rational(RationalCurrent),
    PattersonSullivan(PsCurrent),
}

impl Current {
    pub fn markov(mc: MarkovCurrent) -> Current {
        Current {
            kind: CurrentKind::Markov(mc),
            coeff: 1.0,
        }
    }

    pub fn rational(rc: RationalCurrent) -> Current {
        Current {
            kind: CurrentKind::Rational(rc),
            coeff: 1.0,
        }
    }

    pub fn patterson_sullivan(ps: PsCurrent) -> Current {
        Current {
            kind: CurrentKind::PattersonSullivan(ps),
            coeff: 1.0,
        }
    }

    /// Cylinder weight of a nonempty reduced path.
    pub fn weight(&self, g: &SerreGraph, path: &[usize]) -> Result<f64> {
        if path.is_empty() || !g.is_path(path) || !g.is_reduced(path) {
            return Err(Error::UnreducedPath);
        }
        Ok(self.coeff * self.kind.raw_weight(g, path))
    }

    /// All weights multiplied by `c`.
    pub fn scale(&self, c: f64) -> Current {
        Current {
            kind: self.kind.clone(),
            coeff: self.coeff * c,
        }
    }

    /// The reversed current `v -> weight(v^{-1})`.
    pub fn flip(&self, g: &SerreGraph) -> Current {
        Current {
            kind: self.kind.flip(g),
            coeff: self.coeff,
        }
    }

    /// Sum of weights over one-edge paths.
    pub fn total_mass(&self, g: &SerreGraph) -> f64 {
        (0..g.num_edges())
            .map(|e| self.coeff * self.kind.raw_weight(g, &[e]))
            .sum()
    }

    pub fn check_graph(&self, g: &SerreGraph) -> Result<()> {
        self.kind.check_graph(g)
    }
}

impl CurrentKind {
    fn raw_weight(&self, g: &SerreGraph, path: &[usize]) -> f64 {
        match self {
            CurrentKind::Markov(mc) => mc.weight(path),
            CurrentKind::Rational(rc) => rc.weight(g, path),
            CurrentKind::PattersonSullivan(ps) => ps.weight(g, path),
        }
    }

    fn flip(&self, g: &SerreGraph) -> CurrentKind {
        match self {
            CurrentKind::Markov(mc) => CurrentKind::Markov(mc.flip(g)),
            CurrentKind::Rational(rc) => CurrentKind::Rational(rc.flip(g)),
            CurrentKind::PattersonSullivan(ps) => CurrentKind::PattersonSullivan(ps.clone()),
        }
    }

    fn check_graph(&self, g: &SerreGraph) -> Result<()> {
        let n = match self {
            CurrentKind::Markov(mc) => mc.num_edges(),
            CurrentKind::Rational(rc) => rc.num_edges,
            CurrentKind::PattersonSullivan(ps) => ps.right.len(),
        };
        if n == g.num_edges() {
            Ok(())
        } else {
            Err(Error::CurrentGraphMismatch(format!(
                "current built over {n} oriented edges, graph has {}",
                g.num_edges()
            )))
        }
    }
}

// ---------------------------------------------------------------------------
// Markov currents
// ---------------------------------------------------------------------------

/// Stationary edge law `p` with a non-backtracking transition kernel `P`;
/// the weight of `e_1 .. e_n` is `p(e_1) * prod P(e_i, e_{i+1})`.
#[derive(Debug, Clone)]
pub struct MarkovCurrent {
    stationary: Vec<f64>,
    /// Sparse rows, sorted by target edge.
    rows: Vec<Vec<(usize, f64)>>,
}

impl MarkovCurrent {
    /// Validates stationarity, row-stochasticity on the support, closure of
    /// the support under transitions, and strong connectivity.
    pub fn new(
        g: &SerreGraph,
        stationary: Vec<f64>,
        rows: Vec<Vec<(usize, f64)>>,
    ) -> Result<Self> {
        let mc = MarkovCurrent::new_unchecked(g, stationary, rows)?;
        let row_res = mc.row_sum_residual();
        if row_res > tol::MASS {
            return Err(Error::InvalidCurrent(format!(
                "transition rows on the support sum to 1 +- {row_res:e}"
            )));
        }
        let res = mc.stationarity_residual();
        if res > tol::MASS {
            return Err(Error::InvalidCurrent(format!(
                "stationary law has residual {res:e}"
            )));
        }
        mc.check_support_connectivity()?;
        Ok(mc)
    }

    /// Skips the stochastic checks (structure is still validated). Used to
    /// represent deliberately corrupted inputs for the consistency reporter.
    pub fn new_unchecked(
        g: &SerreGraph,
        stationary: Vec<f64>,
        mut rows: Vec<Vec<(usize, f64)>>,
    ) -> Result<Self> {
        let n = g.num_edges();
        if stationary.len() != n || rows.len() != n {
            return Err(Error::CurrentGraphMismatch(format!(
                "stationary/transition data sized {}/{} for {n} edges",
                stationary.len(),
                rows.len()
            )));
        }
        if stationary.iter().any(|&p| p < 0.0 || !p.is_finite()) {
            return Err(Error::InvalidCurrent("negative stationary mass".into()));
        }
        for (e, row) in rows.iter_mut().enumerate() {
            row.sort_unstable_by_key(|&(f, _)| f);
            for &(f, q) in row.iter() {
                if q < 0.0 || !q.is_finite() {
                    return Err(Error::InvalidCurrent("negative transition weight".into()));
                }
                if q > 0.0 && (g.terminus(e) != g.origin(f) || f == g.inverse(e)) {
                    return Err(Error::InvalidCurrent(format!(
                        "transition {e} -> {f} is not a non-backtracking move"
                    )));
                }
            }
        }
        Ok(MarkovCurrent { stationary, rows })
    }

    pub fn num_edges(&self) -> usize {
        self.stationary.len()
    }

    pub fn stationary(&self) -> &[f64] {
        &self.stationary
    }

    pub fn rows(&self) -> &[Vec<(usize, f64)>] {
        &self.rows
    }

    pub fn transition(&self, e: usize, f: usize) -> f64 {
        self.rows[e]
            .binary_search_by_key(&f, |&(t, _)| t)
            .map(|i| self.rows[e][i].1)
            .unwrap_or(0.0)
    }

    pub fn total_mass(&self) -> f64 {
        self.stationary.iter().sum()
    }

    /// Rescales the stationary law to total mass one.
    pub fn normalize(&self) -> MarkovCurrent {
        let total = self.total_mass();
        MarkovCurrent {
            stationary: self.stationary.iter().map(|p| p / total).collect(),
            rows: self.rows.clone(),
        }
    }

    pub fn weight(&self, path: &[usize]) -> f64 {
        let mut w = self.stationary[path[0]];
        for pair in path.windows(2) {
            if w == 0.0 {
                return 0.0;
            }
            w *= self.transition(pair[0], pair[1]);
        }
        w
    }

    /// Support states (positive stationary mass) and transitions.
    pub fn support_arcs(&self) -> Vec<(usize, usize, f64)> {
        let mut arcs = Vec::new();
        for (e, row) in self.rows.iter().enumerate() {
            if self.stationary[e] <= 0.0 {
                continue;
            }
            for &(f, q) in row {
                if q > 0.0 {
                    arcs.push((e, f, q));
                }
            }
        }
        arcs
    }

    pub fn row_sum_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for (e, row) in self.rows.iter().enumerate() {
            if self.stationary[e] > 0.0 {
                let sum: f64 = row.iter().map(|&(_, q)| q).sum();
                worst = worst.max((sum - 1.0).abs());
            }
        }
        worst
    }

    pub fn stationarity_residual(&self) -> f64 {
        let n = self.num_edges();
        let mut flow = vec![0.0f64; n];
        for (e, row) in self.rows.iter().enumerate() {
            for &(f, q) in row {
                flow[f] += self.stationary[e] * q;
            }
        }
        (0..n)
            .map(|e| (flow[e] - self.stationary[e]).abs())
            .fold(0.0f64, f64::max)
    }

    fn check_support_connectivity(&self) -> Result<()> {
        let support: Vec<usize> = (0..self.num_edges())
            .filter(|&e| self.stationary[e] > 0.0)
            .collect();
        if support.is_empty() {
            return Err(Error::InvalidCurrent("empty support".into()));
        }
        for &e in &support {
            for &(f, q) in &self.rows[e] {
                if q > 0.0 && self.stationary[f] <= 0.0 {
                    return Err(Error::InvalidCurrent(format!(
                        "support is not closed under transitions ({e} -> {f})"
                    )));
                }
            }
        }
        // strong connectivity of the support digraph
        let arcs = self.support_arcs();
        let m = support.len();
        let pos = |e: usize| support.binary_search(&e).unwrap();
        let reach = |forward: bool| -> usize {
            let mut seen = vec![false; m];
            seen[0] = true;
            let mut stack = vec![0usize];
            while let Some(i) = stack.pop() {
                for &(from, to, _) in &arcs {
                    let (a, b) = if forward { (from, to) } else { (to, from) };
                    if pos(a) == i && !seen[pos(b)] {
                        seen[pos(b)] = true;
                        stack.push(pos(b));
                    }
                }
            }
            seen.iter().filter(|&&s| s).count()
        };
        if reach(true) == m && reach(false) == m {
            Ok(())
        } else {
            Err(Error::InvalidCurrent(
                "support digraph is not strongly connected".into(),
            ))
        }
    }

    /// The reversed chain, realizing the flipped current as a Markov current:
    /// `p'(e) = p(ē)` and `P'(e, f) = p(f̄) P(f̄, ē) / p(ē)`.
    pub fn flip(&self, g: &SerreGraph) -> MarkovCurrent {
        let n = self.num_edges();
        let stationary: Vec<f64> = (0..n).map(|e| self.stationary[g.inverse(e)]).collect();
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for e in 0..n {
            if stationary[e] <= 0.0 {
                continue;
            }
            let ie = g.inverse(e);
            for f in g.successors(e) {
                let iff = g.inverse(f);
                let q = self.stationary[iff] * self.transition(iff, ie);
                if q > 0.0 {
                    rows[e].push((f, q / stationary[e]));
                }
            }
        }
        MarkovCurrent { stationary, rows }
    }
}

// ---------------------------------------------------------------------------
// Rational currents
// ---------------------------------------------------------------------------

/// Counting current of a conjugacy class: the weight of a path is the number
/// of period positions at which it occurs in the bi-infinite periodic word
/// spelled by the axis loop.
#[derive(Debug, Clone)]
pub struct RationalCurrent {
    loop_edges: Vec<usize>,
    num_edges: usize,
}

impl RationalCurrent {
    pub fn new(g: &SerreGraph, axis: EdgePath) -> Result<Self> {
        if axis.is_empty() {
            return Err(Error::IdentityWord);
        }
        if !g.is_cyclically_reduced(axis.edges()) {
            return Err(Error::UnreducedPath);
        }
        Ok(RationalCurrent {
            loop_edges: axis.edges().to_vec(),
            num_edges: g.num_edges(),
        })
    }

    pub fn axis(&self) -> &[usize] {
        &self.loop_edges
    }

    pub fn period(&self) -> usize {
        self.loop_edges.len()
    }

    pub fn weight(&self, _g: &SerreGraph, path: &[usize]) -> f64 {
        let p = self.loop_edges.len();
        let mut count = 0u64;
        for start in 0..p {
            if (0..path.len()).all(|i| self.loop_edges[(start + i) % p] == path[i]) {
                count += 1;
            }
        }
        count as f64
    }

    pub fn flip(&self, g: &SerreGraph) -> RationalCurrent {
        RationalCurrent {
            loop_edges: g
                .invert_path(&EdgePath::from(self.loop_edges.clone()))
                .edges()
                .to_vec(),
            num_edges: self.num_edges,
        }
    }
}

/// Builds the counting current of the conjugacy class of `w` on `t`.
pub fn rational_current(t: &MarkedMetricGraph, w: &Word) -> Result<RationalCurrent> {
    let axis = t.axis_loop(w);
    if axis.is_empty() {
        return Err(Error::IdentityWord);
    }
    RationalCurrent::new(&t.graph, axis)
}

// ---------------------------------------------------------------------------
// Patterson-Sullivan currents
// ---------------------------------------------------------------------------

/// The Patterson-Sullivan current of a marked metric graph: with `h` the
/// volume entropy and `r` the right Perron vector of the transfer operator
/// at `h`, the weight of `v = e_1 .. e_n` is
/// `r(e_1^{-1}) * r(e_n) * exp(-h * length(v)) / Z`.
///
/// Both consistency identities hold because `r` is an eigenvector at radius
/// one, flip invariance is built into the formula since lengths are
/// orientation-blind, and on simplicial metrics the induced chain is the
/// unique measure of maximal entropy of the edge shift. Total mass is
/// normalized to one on one-edge cylinders.
#[derive(Debug, Clone)]
pub struct PsCurrent {
    pub entropy: f64,
    pub right: Vec<f64>,
    pub normalizer: f64,
    lengths: Vec<f64>,
    inverse: Vec<usize>,
}

impl PsCurrent {
    pub fn weight(&self, _g: &SerreGraph, path: &[usize]) -> f64 {
        let total: f64 = path.iter().map(|&e| self.lengths[e]).sum();
        self.right[self.inverse[path[0]]] * self.right[*path.last().unwrap()]
            * (-self.entropy * total).exp()
            / self.normalizer
    }

    /// Upper constant of the two-sided decay bound
    /// `C2 exp(-h L) <= weight <= C1 exp(-h L)`.
    pub fn upper_constant(&self) -> f64 {
        let max = self.right.iter().cloned().fold(0.0f64, f64::max);
        max * max / self.normalizer
    }

    pub fn lower_constant(&self) -> f64 {
        let min = self.right.iter().cloned().fold(f64::INFINITY, f64::min);
        min * min / self.normalizer
    }
}

/// Computes the Patterson-Sullivan current of `t`.
pub fn patterson_sullivan(t: &MarkedMetricGraph) -> Result<PsCurrent> {
    let h = volume_entropy(t)?;
    let m = transfer_matrix(t, h);
    let perron = m.perron()?;
    let g = &t.graph;
    let r = perron.right;
    let z: f64 = (0..g.num_edges())
        .map(|e| r[g.inverse(e)] * r[e] * (-h * t.metric.length(e)).exp())
        .sum();
    Ok(PsCurrent {
        entropy: h,
        right: r,
        normalizer: z,
        lengths: (0..g.num_edges()).map(|e| t.metric.length(e)).collect(),
        inverse: (0..g.num_edges()).map(|e| g.inverse(e)).collect(),
    })
}

/// The Markov form of a Patterson-Sullivan current:
/// `p(e) = r(ē) r(e) exp(-h len e) / Z`,
/// `P(e, e') = exp(-h len e') r(e') / r(e)` on allowed transitions.
/// Weights agree with the product formula exactly.
pub fn to_markov(ps: &PsCurrent, g: &SerreGraph) -> Result<MarkovCurrent> {
    let n = g.num_edges();
    if ps.right.len() != n {
        return Err(Error::CurrentGraphMismatch(
            "Patterson-Sullivan data does not match the graph".into(),
        ));
    }
    let stationary: Vec<f64> = (0..n)
        .map(|e| ps.right[g.inverse(e)] * ps.right[e] * (-ps.entropy * ps.lengths[e]).exp() / ps.normalizer)
        .collect();
    let rows: Vec<Vec<(usize, f64)>> = (0..n)
        .map(|e| {
            g.successors(e)
                .into_iter()
                .map(|f| {
                    (
                        f,
                        (-ps.entropy * ps.lengths[f]).exp() * ps.right[f] / ps.right[e],
                    )
                })
                .collect()
        })
        .collect();
    MarkovCurrent::new(g, stationary, rows)
}

// ---------------------------------------------------------------------------
// Validation reports
// ---------------------------------------------------------------------------

/// Worst violation of the left/right consistency identities over the support
/// up to a simplicial depth.
#[derive(Debug, Clone)]
pub struct ConsistencyReport {
    pub depth: usize,
    pub paths_checked: usize,
    pub max_violation: f64,
}

/// Enumerates support paths of length `< depth` and compares each weight
/// with the sums of its reduced extensions on both sides.
pub fn validate_consistency(
    current: &Current,
    g: &SerreGraph,
    depth: usize,
) -> Result<ConsistencyReport> {
    current.check_graph(g)?;
    let mut report = ConsistencyReport {
        depth,
        paths_checked: 0,
        max_violation: 0.0,
    };
    let mut check = |path: &[usize], w: f64| -> Result<()> {
        let mut right = 0.0;
        for f in g.successors(*path.last().unwrap()) {
            let mut ext = path.to_vec();
            ext.push(f);
            right += current.weight(g, &ext)?;
        }
        let mut left = 0.0;
        let first = path[0];
        for e in 0..g.num_edges() {
            if g.terminus(e) == g.origin(first) && e != g.inverse(first) {
                let mut ext = vec![e];
                ext.extend_from_slice(path);
                left += current.weight(g, &ext)?;
            }
        }
        report.paths_checked += 1;
        report.max_violation = report
            .max_violation
            .max((right - w).abs())
            .max((left - w).abs());
        Ok(())
    };
    for_each_support_path(current, g, depth, &mut |path, w| {
        if path.len() < depth {
            check(path, w)?;
        }
        Ok(())
    })?;
    Ok(report)
}

/// Depth-first enumeration of positive-weight paths up to `depth` edges.
/// Weight systems are monotone under extension, so pruning at zero is exact.
pub fn for_each_support_path(
    current: &Current,
    g: &SerreGraph,
    depth: usize,
    f: &mut dyn FnMut(&[usize], f64) -> Result<()>,
) -> Result<()> {
    fn recurse(
        current: &Current,
        g: &SerreGraph,
        depth: usize,
        path: &mut Vec<usize>,
        f: &mut dyn FnMut(&[usize], f64) -> Result<()>,
    ) -> Result<()> {
        let w = current.weight(g, path)?;
        if w <= 0.0 {
            return Ok(());
        }
        f(path, w)?;
        if path.len() == depth {
            return Ok(());
        }
        for next in g.successors(*path.last().unwrap()) {
            path.push(next);
            recurse(current, g, depth, path, f)?;
            path.pop();
        }
        Ok(())
    }
    for e in 0..g.num_edges() {
        let mut path = vec![e];
        recurse(current, g, depth, &mut path, f)?;
    }
    Ok(())
}

/// Worst asymmetry `|w(v) - w(v^{-1})|` over support paths up to `depth`.
#[derive(Debug, Clone)]
pub struct FlipReport {
    pub depth: usize,
    pub max_violation: f64,
}

pub fn is_flip_invariant(current: &Current, g: &SerreGraph, depth: usize) -> Result<FlipReport> {
    let mut max_violation = 0.0f64;
    for_each_support_path(current, g, depth, &mut |path, w| {
        let inv = g.invert_path(&EdgePath::from(path.to_vec()));
        let wi = current.weight(g, inv.edges())?;
        max_violation = max_violation.max((w - wi).abs());
        Ok(())
    })?;
    Ok(FlipReport {
        depth,
        max_violation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn ps_rose2() -> (MarkedMetricGraph, Current) {
        let t = fixtures::rose_marked(2);
        let ps = patterson_sullivan(&t).unwrap();
        let c = Current::patterson_sullivan(ps);
        (t, c)
    }

    #[test]
    fn rational_weights_count_occurrences() {
        let t = fixtures::rose_marked(2);
        let a = t.marking.parse_word("a").unwrap();
        let eta = Current::rational(rational_current(&t, &a).unwrap());
        // a^n has weight 1 for every n, b has weight 0
        for n in 1..6 {
            let path: Vec<usize> = vec![0; n];
            assert_eq!(eta.weight(&t.graph, &path).unwrap(), 1.0);
        }
        assert_eq!(eta.weight(&t.graph, &[2]).unwrap(), 0.0);
    }

    #[test]
    fn rational_current_strips_conjugation() {
        let t = fixtures::rose_marked(2);
        let w = t.marking.parse_word("ba(b)^-1").unwrap();
        let rc = rational_current(&t, &w).unwrap();
        assert_eq!(rc.axis(), &[0]);
        // identity word is rejected
        let e = t.marking.parse_word("a(a)^-1").unwrap();
        assert!(matches!(rational_current(&t, &e), Err(Error::IdentityWord)));
        // theta marking: a -> e1 e2^{-1}
        let theta = fixtures::theta_marked();
        let a = theta.marking.parse_word("a").unwrap();
        assert_eq!(rational_current(&theta, &a).unwrap().axis(), &[0, 3]);
    }

    #[test]
    fn rational_weights_monotone_and_bounded() {
        let t = fixtures::rose_marked(2);
        let w = t.marking.parse_word("ab(a)^-1b").unwrap();
        let eta = Current::rational(rational_current(&t, &w).unwrap());
        let g = &t.graph;
        for_each_support_path(&eta, g, 6, &mut |path, weight| {
            assert!(weight <= 4.0, "weight cannot exceed the period");
            assert_eq!(weight, weight.round(), "counts are integers");
            if path.len() > 1 {
                let parent = &path[..path.len() - 1];
                assert!(eta.weight(g, parent)? >= weight);
            }
            Ok(())
        })
        .unwrap();
    }

    #[test]
    fn ps_weights_on_rose2() {
        let (t, c) = ps_rose2();
        for e in 0..4 {
            assert!((c.weight(&t.graph, &[e]).unwrap() - 0.25).abs() < 1e-10);
        }
        // any reduced two-edge path has weight 1/12
        assert!((c.weight(&t.graph, &[0, 0]).unwrap() - 1.0 / 12.0).abs() < 1e-10);
        assert!((c.weight(&t.graph, &[0, 2]).unwrap() - 1.0 / 12.0).abs() < 1e-10);
        // length-n cylinders carry (1/4) 3^{-(n-1)}
        let path = vec![0usize; 5];
        assert!((c.weight(&t.graph, &path).unwrap() - 0.25 / 81.0).abs() < 1e-10);
        assert!((c.total_mass(&t.graph) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn ps_weights_on_theta() {
        let t = fixtures::theta_marked();
        let ps = patterson_sullivan(&t).unwrap();
        assert!((ps.entropy - 2.0f64.ln()).abs() < 1e-9);
        let c = Current::patterson_sullivan(ps);
        for e in 0..6 {
            assert!((c.weight(&t.graph, &[e]).unwrap() - 1.0 / 6.0).abs() < 1e-10);
        }
        // weight at depth n is (1/6) 2^{-(n-1)}
        let w = c.weight(&t.graph, &[0, 3, 4, 1]).unwrap();
        assert!((w - 1.0 / 6.0 / 8.0).abs() < 1e-10);
    }

    #[test]
    fn ps_two_sided_bounds() {
        for (_, t) in fixtures::all_marked() {
            let t = t.with_metric(crate::sampling::random_metric(
                &t,
                &mut crate::prng::Prng::new(9),
                0.5,
                2.0,
            ));
            let ps = patterson_sullivan(&t).unwrap();
            let (c1, c2) = (ps.upper_constant(), ps.lower_constant());
            let h = ps.entropy;
            let cur = Current::patterson_sullivan(ps);
            let metric = t.metric.clone();
            for_each_support_path(&cur, &t.graph, 10, &mut |path, w| {
                let l: f64 = path.iter().map(|&e| metric.length(e)).sum();
                let decay = (-h * l).exp();
                assert!(w <= c1 * decay * (1.0 + 1e-9));
                assert!(w >= c2 * decay * (1.0 - 1e-9));
                Ok(())
            })
            .unwrap();
        }
    }

    #[test]
    fn ps_flip_invariance() {
        for (_, t) in fixtures::all_marked() {
            let c = Current::patterson_sullivan(patterson_sullivan(&t).unwrap());
            let rep = is_flip_invariant(&c, &t.graph, 5).unwrap();
            assert!(rep.max_violation <= tol::FLIP, "{}", rep.max_violation);
        }
    }

    #[test]
    fn ps_left_vector_matches_reversed_right() {
        let t = fixtures::dumbbell_marked();
        let h = volume_entropy(&t).unwrap();
        let m = transfer_matrix(&t, h);
        let p = m.perron().unwrap();
        let g = &t.graph;
        let ratios: Vec<f64> = (0..g.num_edges())
            .map(|e| {
                p.left[e] / (p.right[g.inverse(e)] * (-h * t.metric.length(e)).exp())
            })
            .collect();
        let (lo, hi) = ratios
            .iter()
            .fold((f64::INFINITY, 0.0f64), |(lo, hi), &r| (lo.min(r), hi.max(r)));
        assert!(hi / lo - 1.0 < 1e-8, "left vector deviates: {ratios:?}");
    }

    #[test]
    fn to_markov_matches_ps_weights_exactly() {
        let (t, c) = ps_rose2();
        let CurrentKind::PattersonSullivan(ps) = &c.kind else {
            unreachable!()
        };
        let mc = to_markov(ps, &t.graph).unwrap();
        // uniform transitions 1/3 on the rose
        for e in 0..4 {
            for &(f, q) in &mc.rows()[e] {
                let _ = f;
                assert!((q - 1.0 / 3.0).abs() < 1e-10);
            }
            let sum: f64 = mc.rows()[e].iter().map(|&(_, q)| q).sum();
            assert!((sum - 1.0).abs() < 1e-10);
        }
        assert!(mc.stationarity_residual() < 1e-10);
        let m = Current::markov(mc);
        for_each_support_path(&c, &t.graph, 5, &mut |path, w| {
            let wm = m.weight(&t.graph, path)?;
            assert!((w - wm).abs() < 1e-12);
            Ok(())
        })
        .unwrap();
    }

    #[test]
    fn markov_consistency_identities() {
        let t = fixtures::theta_marked();
        let mut rng = crate::prng::Prng::new(4);
        let mc = crate::sampling::random_markov_current(&t, &mut rng).unwrap();
        let c = Current::markov(mc);
        let rep = validate_consistency(&c, &t.graph, 6).unwrap();
        assert!(rep.max_violation <= 1e-12, "{}", rep.max_violation);
        assert!(rep.paths_checked > 0);
    }

    #[test]
    fn ps_consistency_identities() {
        for (_, t) in fixtures::all_marked() {
            let c = Current::patterson_sullivan(patterson_sullivan(&t).unwrap());
            let rep = validate_consistency(&c, &t.graph, 6).unwrap();
            assert!(rep.max_violation <= tol::CONSISTENCY, "{}", rep.max_violation);
        }
    }

    #[test]
    fn corrupted_row_is_detected() {
        let t = fixtures::rose_marked(2);
        let g = &t.graph;
        let ps = patterson_sullivan(&t).unwrap();
        let good = to_markov(&ps, g).unwrap();
        let mut rows = good.rows().to_vec();
        // scale one row down by 10%
        for entry in &mut rows[0] {
            entry.1 *= 0.9;
        }
        let bad = MarkovCurrent::new_unchecked(g, good.stationary().to_vec(), rows).unwrap();
        let c = Current::markov(bad);
        let rep = validate_consistency(&c, g, 3).unwrap();
        assert!(
            (rep.max_violation - 0.1 * 0.25).abs() < 1e-6,
            "expected a violation near 0.1 * p_e, got {}",
            rep.max_violation
        );
        // and the strict constructor rejects it
        let CurrentKind::Markov(good) = Current::markov(good).kind else {
            unreachable!()
        };
        let mut rows = good.rows().to_vec();
        for entry in &mut rows[0] {
            entry.1 *= 0.9;
        }
        assert!(MarkovCurrent::new(g, good.stationary().to_vec(), rows).is_err());
    }

    #[test]
    fn rational_consistency_is_exact() {
        let t = fixtures::dumbbell_marked();
        let w = t.marking.parse_word("ab").unwrap();
        let c = Current::rational(rational_current(&t, &w).unwrap());
        let rep = validate_consistency(&c, &t.graph, 6).unwrap();
        assert_eq!(rep.max_violation, 0.0);
    }

    #[test]
    fn flip_of_rational_is_inverse_class() {
        let t = fixtures::rose_marked(2);
        let w = t.marking.parse_word("ab").unwrap();
        let eta = Current::rational(rational_current(&t, &w).unwrap());
        let flipped = eta.flip(&t.graph);
        let eta_inv = Current::rational(rational_current(&t, &w.inverse()).unwrap());
        for_each_support_path(&flipped, &t.graph, 4, &mut |path, wgt| {
            assert_eq!(wgt, eta_inv.weight(&t.graph, path)?);
            Ok(())
        })
        .unwrap();
        // ab is not conjugate to its inverse: the flip is a genuinely
        // different current
        let asym = is_flip_invariant(&eta, &t.graph, 3).unwrap();
        assert!(asym.max_violation > 0.0);
    }

    #[test]
    fn flipped_markov_is_still_markov_and_detects_bias() {
        let t = fixtures::rose_marked(2);
        let mut rng = crate::prng::Prng::new(12);
        let mc = crate::sampling::random_markov_current(&t, &mut rng).unwrap();
        let flipped = mc.flip(&t.graph);
        assert!(flipped.stationarity_residual() < 1e-12);
        assert!(flipped.row_sum_residual() < 1e-12);
        let c = Current::markov(mc);
        let rep = is_flip_invariant(&c, &t.graph, 4).unwrap();
        assert!(rep.max_violation > 1e-6, "a random chain is not symmetric");
        // flip is an involution at the weight level
        let double = c.flip(&t.graph).flip(&t.graph);
        for_each_support_path(&c, &t.graph, 4, &mut |path, w| {
            assert!((w - double.weight(&t.graph, path)?).abs() < 1e-12);
            Ok(())
        })
        .unwrap();
    }

    #[test]
    fn scaling_scales_mass_only() {
        let (t, c) = ps_rose2();
        assert!((c.scale(1.0).total_mass(&t.graph) - c.total_mass(&t.graph)).abs() < 1e-15);
        let scaled = c.scale(3.0);
        assert!((scaled.total_mass(&t.graph) - 3.0).abs() < 1e-9);
        let w0 = c.weight(&t.graph, &[0, 2]).unwrap();
        assert!((scaled.weight(&t.graph, &[0, 2]).unwrap() - 3.0 * w0).abs() < 1e-12);
    }

    #[test]
    fn weight_rejects_unreduced_paths() {
        let (t, c) = ps_rose2();
        assert!(c.weight(&t.graph, &[0, 1]).is_err());
        assert!(c.weight(&t.graph, &[]).is_err());
    }
}

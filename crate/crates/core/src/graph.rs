//! Finite Serre graphs, metric structures, and reduced edge paths.
//!
//! A graph is a set of oriented edges with origin/terminus maps and a
//! fixed-point-free involution `e -> e^{-1}`. Vertices and oriented edges are
//! stored densely; the external (document) ids are kept alongside so reports
//! can refer back to the input labelling.

use crate::error::{Error, Result};

/// Minimum vertex degree required of a valid graph (degree counts oriented
/// edges with the given origin, so a loop edge contributes twice).
pub const MIN_DEGREE: usize = 3;

/// A finite graph in Serre's convention: oriented edges with a fixed-point
/// free inverse involution.
#[derive(Debug, Clone, PartialEq)]
pub struct SerreGraph {
    vertex_ids: Vec<i64>,
    edge_ids: Vec<i64>,
    origin: Vec<usize>,
    terminus: Vec<usize>,
    inverse: Vec<usize>,
}

/// One oriented edge given in external ids: `(id, inverse_id, from, to)`.
pub type EdgeSpec = (i64, i64, i64, i64);

impl SerreGraph {
    /// Builds a graph from external ids. Checks structural consistency
    /// (resolvable references, involution without fixed points, matching
    /// endpoints) but not the validity requirements; see [`SerreGraph::validate`].
    pub fn new(vertex_ids: Vec<i64>, edges: &[EdgeSpec]) -> Result<Self> {
        let mut vids = vertex_ids;
        vids.sort_unstable();
        vids.dedup();
        let vindex = |id: i64, vids: &[i64]| -> Result<usize> {
            vids.binary_search(&id)
                .map_err(|_| Error::GraphStructure(format!("unknown vertex id {id}")))
        };

        let mut eids: Vec<i64> = edges.iter().map(|e| e.0).collect();
        eids.sort_unstable();
        eids.dedup();
        if eids.len() != edges.len() {
            return Err(Error::GraphStructure("duplicate edge id".into()));
        }
        let eindex = |id: i64, eids: &[i64]| -> Result<usize> {
            eids.binary_search(&id)
                .map_err(|_| Error::GraphStructure(format!("dangling edge reference {id}")))
        };

        let n = eids.len();
        let mut origin = vec![usize::MAX; n];
        let mut terminus = vec![usize::MAX; n];
        let mut inverse = vec![usize::MAX; n];
        for &(id, inv, from, to) in edges {
            let e = eindex(id, &eids)?;
            origin[e] = vindex(from, &vids)?;
            terminus[e] = vindex(to, &vids)?;
            inverse[e] = eindex(inv, &eids)?;
        }
        let g = SerreGraph {
            vertex_ids: vids,
            edge_ids: eids,
            origin,
            terminus,
            inverse,
        };
        for e in 0..n {
            if g.inverse[e] == e {
                return Err(Error::GraphStructure(format!(
                    "edge {} is its own inverse",
                    g.edge_ids[e]
                )));
            }
            if g.inverse[g.inverse[e]] != e {
                return Err(Error::GraphStructure(format!(
                    "inverse map is not an involution at edge {}",
                    g.edge_ids[e]
                )));
            }
            if g.origin[e] != g.terminus[g.inverse[e]] {
                return Err(Error::GraphStructure(format!(
                    "endpoints of edge {} disagree with its inverse",
                    g.edge_ids[e]
                )));
            }
        }
        Ok(g)
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_ids.len()
    }

    /// Number of oriented edges.
    pub fn num_edges(&self) -> usize {
        self.edge_ids.len()
    }

    pub fn origin(&self, e: usize) -> usize {
        self.origin[e]
    }

    pub fn terminus(&self, e: usize) -> usize {
        self.terminus[e]
    }

    pub fn inverse(&self, e: usize) -> usize {
        self.inverse[e]
    }

    pub fn edge_id(&self, e: usize) -> i64 {
        self.edge_ids[e]
    }

    pub fn vertex_id(&self, v: usize) -> i64 {
        self.vertex_ids[v]
    }

    pub fn edge_index(&self, id: i64) -> Option<usize> {
        self.edge_ids.binary_search(&id).ok()
    }

    pub fn vertex_index(&self, id: i64) -> Option<usize> {
        self.vertex_ids.binary_search(&id).ok()
    }

    /// Oriented edges leaving `v`, in index order.
    pub fn edges_from(&self, v: usize) -> Vec<usize> {
        (0..self.num_edges()).filter(|&e| self.origin[e] == v).collect()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.origin.iter().filter(|&&o| o == v).count()
    }

    /// First Betti number `|E|/2 - |V| + 1`.
    pub fn rank(&self) -> i64 {
        self.num_edges() as i64 / 2 - self.num_vertices() as i64 + 1
    }

    pub fn is_connected(&self) -> bool {
        if self.num_vertices() == 0 {
            return false;
        }
        let mut seen = vec![false; self.num_vertices()];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for e in 0..self.num_edges() {
                if self.origin[e] == v && !seen[self.terminus[e]] {
                    seen[self.terminus[e]] = true;
                    stack.push(self.terminus[e]);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Edges that can follow `e` in a reduced path.
    pub fn successors(&self, e: usize) -> Vec<usize> {
        let v = self.terminus[e];
        let inv = self.inverse[e];
        (0..self.num_edges())
            .filter(|&f| self.origin[f] == v && f != inv)
            .collect()
    }

    /// Per-invariant diagnostics; structural consistency is already
    /// guaranteed by construction.
    pub fn validate(&self) -> GraphDiagnostics {
        let min_degree = (0..self.num_vertices()).map(|v| self.degree(v)).min().unwrap_or(0);
        GraphDiagnostics {
            involution_ok: true,
            connected: self.is_connected(),
            min_degree,
            degree_ok: min_degree >= MIN_DEGREE,
            rank: self.rank(),
            rank_ok: self.rank() >= 2,
        }
    }

    /// Errors unless every validity requirement holds.
    pub fn require_valid(&self) -> Result<()> {
        let d = self.validate();
        if d.pass() {
            Ok(())
        } else {
            Err(Error::InvalidGraph(d.summary()))
        }
    }

    // ------------------------------------------------------------------
    // Path operations
    // ------------------------------------------------------------------

    pub fn is_path(&self, edges: &[usize]) -> bool {
        edges.windows(2).all(|w| self.terminus[w[0]] == self.origin[w[1]])
    }

    fn check_path(&self, edges: &[usize]) -> Result<()> {
        for w in edges.windows(2) {
            if self.terminus[w[0]] != self.origin[w[1]] {
                return Err(Error::NonConsecutivePath(w[0], w[1]));
            }
        }
        Ok(())
    }

    pub fn is_reduced(&self, edges: &[usize]) -> bool {
        edges.windows(2).all(|w| w[1] != self.inverse[w[0]])
    }

    pub fn is_closed(&self, edges: &[usize]) -> bool {
        match (edges.first(), edges.last()) {
            (Some(&a), Some(&b)) => self.origin[a] == self.terminus[b],
            _ => true, // the empty path counts as closed
        }
    }

    pub fn is_cyclically_reduced(&self, edges: &[usize]) -> bool {
        if edges.is_empty() {
            return true;
        }
        self.is_reduced(edges)
            && self.is_closed(edges)
            && edges[0] != self.inverse[*edges.last().unwrap()]
    }

    /// Freely reduces a path by cancelling adjacent `e e^{-1}` pairs.
    /// Idempotent; preserves endpoints.
    pub fn reduce_path(&self, path: &EdgePath) -> Result<EdgePath> {
        self.check_path(path.edges())?;
        let mut stack: Vec<usize> = Vec::with_capacity(path.len());
        for &e in path.edges() {
            if stack.last().is_some_and(|&top| self.inverse[top] == e) {
                stack.pop();
            } else {
                stack.push(e);
            }
        }
        Ok(EdgePath::from(stack))
    }

    /// Splits a freely reduced closed path into a cyclically reduced core
    /// and the conjugating prefix: `loop = conj . core . conj^{-1}`.
    pub fn cyclic_reduce(&self, closed: &EdgePath) -> Result<(EdgePath, EdgePath)> {
        self.check_path(closed.edges())?;
        if !self.is_closed(closed.edges()) {
            return Err(Error::OpenPath);
        }
        if !self.is_reduced(closed.edges()) {
            return Err(Error::UnreducedPath);
        }
        let mut edges = closed.edges().to_vec();
        let mut conj: Vec<usize> = Vec::new();
        while edges.len() >= 2 && edges[0] == self.inverse[*edges.last().unwrap()] {
            conj.push(edges[0]);
            edges.remove(0);
            edges.pop();
        }
        Ok((EdgePath::from(edges), EdgePath::from(conj)))
    }

    pub fn invert_path(&self, path: &EdgePath) -> EdgePath {
        EdgePath::from(
            path.edges()
                .iter()
                .rev()
                .map(|&e| self.inverse[e])
                .collect::<Vec<_>>(),
        )
    }

    pub fn concat(&self, a: &EdgePath, b: &EdgePath) -> EdgePath {
        let mut edges = a.edges().to_vec();
        edges.extend_from_slice(b.edges());
        EdgePath::from(edges)
    }

    /// Canonical representative of a cyclically reduced loop under rotation
    /// and inversion; used to deduplicate free homotopy classes.
    pub fn canonical_cyclic(&self, edges: &[usize]) -> Vec<usize> {
        if edges.is_empty() {
            return Vec::new();
        }
        let inv: Vec<usize> = edges.iter().rev().map(|&e| self.inverse[e]).collect();
        let mut best: Option<Vec<usize>> = None;
        for cand in [edges, inv.as_slice()] {
            for i in 0..cand.len() {
                let rot: Vec<usize> = cand[i..].iter().chain(cand[..i].iter()).copied().collect();
                if best.as_ref().is_none_or(|b| rot < *b) {
                    best = Some(rot);
                }
            }
        }
        best.unwrap()
    }
}

/// Pass/fail report for the graph validity requirements.
#[derive(Debug, Clone)]
pub struct GraphDiagnostics {
    pub involution_ok: bool,
    pub connected: bool,
    pub min_degree: usize,
    pub degree_ok: bool,
    pub rank: i64,
    pub rank_ok: bool,
}

impl GraphDiagnostics {
    pub fn pass(&self) -> bool {
        self.involution_ok && self.connected && self.degree_ok && self.rank_ok
    }

    pub fn summary(&self) -> String {
        let mut bad = Vec::new();
        if !self.involution_ok {
            bad.push("involution".to_string());
        }
        if !self.connected {
            bad.push("not connected".to_string());
        }
        if !self.degree_ok {
            bad.push(format!("minimum degree {} < {}", self.min_degree, MIN_DEGREE));
        }
        if !self.rank_ok {
            bad.push(format!("rank {} < 2", self.rank));
        }
        if bad.is_empty() {
            "ok".to_string()
        } else {
            bad.join("; ")
        }
    }
}

/// A finite sequence of oriented edges.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct EdgePath(Vec<usize>);

impl EdgePath {
    pub fn empty() -> Self {
        EdgePath(Vec::new())
    }

    pub fn edges(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<Vec<usize>> for EdgePath {
    fn from(edges: Vec<usize>) -> Self {
        EdgePath(edges)
    }
}

/// Positive edge lengths, constant on inverse pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct Metric {
    lengths: Vec<f64>,
}

impl Metric {
    pub fn new(graph: &SerreGraph, lengths: Vec<f64>) -> Result<Self> {
        if lengths.len() != graph.num_edges() {
            return Err(Error::GraphStructure(format!(
                "{} lengths for {} edges",
                lengths.len(),
                graph.num_edges()
            )));
        }
        for (e, &l) in lengths.iter().enumerate() {
            if !(l > 0.0) || !l.is_finite() {
                return Err(Error::GraphStructure(format!(
                    "edge {} has nonpositive length {l}",
                    graph.edge_id(e)
                )));
            }
            if lengths[graph.inverse(e)] != l {
                return Err(Error::GraphStructure(format!(
                    "edge {} and its inverse have different lengths",
                    graph.edge_id(e)
                )));
            }
        }
        Ok(Metric { lengths })
    }

    /// Simplicial metric: every edge has length one.
    pub fn simplicial(graph: &SerreGraph) -> Self {
        Metric {
            lengths: vec![1.0; graph.num_edges()],
        }
    }

    pub fn length(&self, e: usize) -> f64 {
        self.lengths[e]
    }

    pub fn path_length(&self, path: &EdgePath) -> f64 {
        path.edges().iter().map(|&e| self.lengths[e]).sum()
    }

    /// Total length over one orientation class.
    pub fn volume(&self, graph: &SerreGraph) -> f64 {
        (0..graph.num_edges())
            .filter(|&e| e < graph.inverse(e))
            .map(|e| self.lengths[e])
            .sum()
    }

    pub fn scale(&self, c: f64) -> Metric {
        Metric {
            lengths: self.lengths.iter().map(|l| l * c).collect(),
        }
    }

    pub fn min_length(&self) -> f64 {
        self.lengths.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max_length(&self) -> f64 {
        self.lengths.iter().cloned().fold(0.0, f64::max)
    }

    pub fn is_simplicial(&self) -> bool {
        self.lengths.iter().all(|&l| l == 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn rose2_is_valid_rank_two() {
        let (g, _) = fixtures::rose(2);
        let d = g.validate();
        assert!(d.pass(), "{}", d.summary());
        assert_eq!(d.rank, 2);
        assert_eq!(g.degree(0), 4);
    }

    #[test]
    fn theta_is_valid_rank_two() {
        let (g, _) = fixtures::theta();
        let d = g.validate();
        assert!(d.pass(), "{}", d.summary());
        assert_eq!(d.rank, 2);
        assert_eq!(g.degree(0), 3);
        assert_eq!(g.degree(1), 3);
    }

    #[test]
    fn single_loop_fails_degree_and_rank() {
        let g = SerreGraph::new(vec![0], &[(0, 1, 0, 0), (1, 0, 0, 0)]).unwrap();
        let d = g.validate();
        assert!(!d.pass());
        assert!(!d.degree_ok);
        assert!(!d.rank_ok);
        assert_eq!(d.rank, 1);
    }

    #[test]
    fn fixed_point_involution_rejected() {
        let err = SerreGraph::new(vec![0], &[(0, 0, 0, 0)]).unwrap_err();
        assert!(matches!(err, Error::GraphStructure(_)));
    }

    #[test]
    fn reduce_path_cancels() {
        let (g, _) = fixtures::rose(2);
        // e1 e1^{-1} e2 -> e2
        let p = EdgePath::from(vec![0, 1, 2]);
        assert_eq!(g.reduce_path(&p).unwrap(), EdgePath::from(vec![2]));
        // already reduced is a fixpoint
        let q = EdgePath::from(vec![0, 2]);
        assert_eq!(g.reduce_path(&q).unwrap(), q);
        // full cancellation
        let r = EdgePath::from(vec![0, 2, 3, 1]);
        assert!(g.reduce_path(&r).unwrap().is_empty());
    }

    #[test]
    fn reduce_path_idempotent() {
        let (g, _) = fixtures::rose(2);
        let p = EdgePath::from(vec![0, 0, 1, 2, 3, 3]);
        let once = g.reduce_path(&p).unwrap();
        let twice = g.reduce_path(&once).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn cyclic_reduce_strips_conjugator() {
        let (g, _) = fixtures::rose(2);
        // e_a e_b e_a^{-1} -> core e_b, conjugator e_a
        let p = EdgePath::from(vec![0, 2, 1]);
        let (core, conj) = g.cyclic_reduce(&p).unwrap();
        assert_eq!(core, EdgePath::from(vec![2]));
        assert_eq!(conj, EdgePath::from(vec![0]));
        // cyclically reduced loops are fixed
        let q = EdgePath::from(vec![0, 2]);
        let (core, conj) = g.cyclic_reduce(&q).unwrap();
        assert_eq!(core, q);
        assert!(conj.is_empty());
        // the empty loop
        let (core, conj) = g.cyclic_reduce(&EdgePath::empty()).unwrap();
        assert!(core.is_empty() && conj.is_empty());
    }

    #[test]
    fn cyclic_reduce_rejects_open_path() {
        let (g, _) = fixtures::theta();
        assert!(matches!(
            g.cyclic_reduce(&EdgePath::from(vec![0])),
            Err(Error::OpenPath)
        ));
    }

    #[test]
    fn path_length_adds_up() {
        let (g, _) = fixtures::rose(2);
        let m = Metric::simplicial(&g);
        assert_eq!(m.path_length(&EdgePath::empty()), 0.0);
        assert_eq!(m.path_length(&EdgePath::from(vec![0, 2, 0, 2, 0])), 5.0);

        let (g, _) = fixtures::theta();
        let m = Metric::new(&g, vec![1.0, 1.0, 2.0, 2.0, 3.0, 3.0]).unwrap();
        // e1 e2^{-1}
        assert_eq!(m.path_length(&EdgePath::from(vec![0, 3])), 3.0);
        assert_eq!(m.volume(&g), 6.0);
    }

    #[test]
    fn volume_of_simplicial_rose() {
        let (g, _) = fixtures::rose(2);
        let m = Metric::simplicial(&g);
        assert_eq!(m.volume(&g), 2.0);
    }

    #[test]
    fn non_consecutive_rejected() {
        let (g, _) = fixtures::theta();
        // e1 (0->1) followed by e2 (0->1) is not a path
        assert!(g.reduce_path(&EdgePath::from(vec![0, 2])).is_err());
    }

    #[test]
    fn canonical_cyclic_identifies_rotations_and_inverses() {
        let (g, _) = fixtures::theta();
        // the bigon e1 e2^{-1} in its four guises
        let a = g.canonical_cyclic(&[0, 3]);
        let b = g.canonical_cyclic(&[3, 0]);
        let c = g.canonical_cyclic(&[2, 1]);
        let d = g.canonical_cyclic(&[1, 2]);
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert_eq!(a, d);
    }
}

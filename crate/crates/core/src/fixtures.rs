//! Standard test graphs.
//!
//! The same five shapes ship as JSON fixtures with the command-line tool;
//! together they exhibit every candidate-loop shape (embedded circles,
//! figure-eights on the roses, barbells on the dumbbell).

use crate::graph::{EdgePath, Metric, SerreGraph};
use crate::marked::MarkedMetricGraph;
use crate::marking::Marking;

fn names(k: usize) -> Vec<String> {
    const ALPHA: [&str; 6] = ["a", "b", "c", "d", "e", "f"];
    (0..k).map(|i| ALPHA[i].to_string()).collect()
}

/// Rose with `k` petals: one vertex, oriented edges `2i` (petal `i`) and
/// `2i+1` (its inverse).
pub fn rose(k: usize) -> (SerreGraph, Vec<usize>) {
    let edges: Vec<_> = (0..k as i64)
        .flat_map(|i| [(2 * i, 2 * i + 1, 0, 0), (2 * i + 1, 2 * i, 0, 0)])
        .collect();
    let g = SerreGraph::new(vec![0], &edges).unwrap();
    (g, Vec::new())
}

/// Identity marking on the rose: generator `i` is petal `i`.
pub fn rose_marked(k: usize) -> MarkedMetricGraph {
    let (g, tree) = rose(k);
    let loops = (0..k).map(|i| EdgePath::from(vec![2 * i])).collect();
    let marking = Marking::new(&g, 0, &tree, names(k), loops).unwrap();
    let metric = Metric::simplicial(&g);
    MarkedMetricGraph::new(g, metric, marking).unwrap()
}

/// Two vertices joined by three edges. Oriented edges `2i`: vertex 0 to
/// vertex 1, `2i+1` back. Tree edge: 0.
pub fn theta() -> (SerreGraph, Vec<usize>) {
    let edges: Vec<_> = (0..3i64)
        .flat_map(|i| [(2 * i, 2 * i + 1, 0, 1), (2 * i + 1, 2 * i, 1, 0)])
        .collect();
    let g = SerreGraph::new(vec![0, 1], &edges).unwrap();
    (g, vec![0])
}

/// Marking `a -> e1 e2^{-1}`, `b -> e1 e3^{-1}` over the tree `{e1}`.
pub fn theta_marked() -> MarkedMetricGraph {
    let (g, tree) = theta();
    let loops = vec![EdgePath::from(vec![0, 3]), EdgePath::from(vec![0, 5])];
    let marking = Marking::new(&g, 0, &tree, names(2), loops).unwrap();
    let metric = Metric::simplicial(&g);
    MarkedMetricGraph::new(g, metric, marking).unwrap()
}

/// Two vertices joined by four edges; rank three.
pub fn theta4() -> (SerreGraph, Vec<usize>) {
    let edges: Vec<_> = (0..4i64)
        .flat_map(|i| [(2 * i, 2 * i + 1, 0, 1), (2 * i + 1, 2 * i, 1, 0)])
        .collect();
    let g = SerreGraph::new(vec![0, 1], &edges).unwrap();
    (g, vec![0])
}

pub fn theta4_marked() -> MarkedMetricGraph {
    let (g, tree) = theta4();
    let loops = vec![
        EdgePath::from(vec![0, 3]),
        EdgePath::from(vec![0, 5]),
        EdgePath::from(vec![0, 7]),
    ];
    let marking = Marking::new(&g, 0, &tree, names(3), loops).unwrap();
    let metric = Metric::simplicial(&g);
    MarkedMetricGraph::new(g, metric, marking).unwrap()
}

/// Two loop edges joined by a bar: loop 0/1 at vertex 0, loop 2/3 at
/// vertex 1, bar 4/5 from vertex 0 to vertex 1. The only fixture with a pair
/// of disjoint embedded circles, hence with barbell candidates.
pub fn dumbbell() -> (SerreGraph, Vec<usize>) {
    let edges = [
        (0, 1, 0, 0),
        (1, 0, 0, 0),
        (2, 3, 1, 1),
        (3, 2, 1, 1),
        (4, 5, 0, 1),
        (5, 4, 1, 0),
    ];
    let g = SerreGraph::new(vec![0, 1], &edges).unwrap();
    (g, vec![4])
}

/// Marking `a -> loop at 0`, `b -> bar . loop . bar^{-1}`.
pub fn dumbbell_marked() -> MarkedMetricGraph {
    let (g, tree) = dumbbell();
    let loops = vec![EdgePath::from(vec![0]), EdgePath::from(vec![4, 2, 5])];
    let marking = Marking::new(&g, 0, &tree, names(2), loops).unwrap();
    let metric = Metric::simplicial(&g);
    MarkedMetricGraph::new(g, metric, marking).unwrap()
}

/// All five standard fixtures with simplicial metrics.
pub fn all_marked() -> Vec<(&'static str, MarkedMetricGraph)> {
    vec![
        ("rose2", rose_marked(2)),
        ("rose3", rose_marked(3)),
        ("theta", theta_marked()),
        ("theta4", theta4_marked()),
        ("dumbbell", dumbbell_marked()),
    ]
}

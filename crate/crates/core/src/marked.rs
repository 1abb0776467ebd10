//! Marked metric graphs: points of non-projectivized Outer space.

use crate::error::Result;
use crate::graph::{EdgePath, Metric, SerreGraph};
use crate::marking::{Automorphism, Marking, Word};

/// A valid Serre graph with a metric structure and a marking. One point of
/// the space of free, discrete isometric actions of `F_k` on trees.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkedMetricGraph {
    pub graph: SerreGraph,
    pub metric: Metric,
    pub marking: Marking,
}

impl MarkedMetricGraph {
    /// Validates every component invariant before assembly.
    pub fn new(graph: SerreGraph, metric: Metric, marking: Marking) -> Result<Self> {
        graph.require_valid()?;
        Ok(MarkedMetricGraph {
            graph,
            metric,
            marking,
        })
    }

    pub fn rank(&self) -> usize {
        self.marking.rank()
    }

    pub fn volume(&self) -> f64 {
        self.metric.volume(&self.graph)
    }

    /// Rescales so the quotient graph has volume one.
    pub fn normalize_covolume(&self) -> MarkedMetricGraph {
        self.scale(1.0 / self.volume())
    }

    pub fn scale(&self, c: f64) -> MarkedMetricGraph {
        MarkedMetricGraph {
            graph: self.graph.clone(),
            metric: self.metric.scale(c),
            marking: self.marking.clone(),
        }
    }

    /// Same metric, marking precomposed with `phi`.
    pub fn precompose(&self, phi: &Automorphism) -> Result<MarkedMetricGraph> {
        Ok(MarkedMetricGraph {
            graph: self.graph.clone(),
            metric: self.metric.clone(),
            marking: self.marking.apply_automorphism(&self.graph, phi)?,
        })
    }

    /// Replaces the metric, keeping graph and marking.
    pub fn with_metric(&self, metric: Metric) -> MarkedMetricGraph {
        MarkedMetricGraph {
            graph: self.graph.clone(),
            metric,
            marking: self.marking.clone(),
        }
    }

    /// Metric length of the cyclically reduced loop realizing `w`; zero
    /// exactly when `w` reduces to the identity.
    pub fn translation_length(&self, w: &Word) -> f64 {
        let l = self.marking.word_to_loop(&self.graph, w);
        let (core, _) = self
            .graph
            .cyclic_reduce(&l)
            .expect("realized loops are closed and reduced");
        self.metric.path_length(&core)
    }

    /// The cyclically reduced loop representing the conjugacy class of `w`.
    pub fn axis_loop(&self, w: &Word) -> EdgePath {
        let l = self.marking.word_to_loop(&self.graph, w);
        let (core, _) = self
            .graph
            .cyclic_reduce(&l)
            .expect("realized loops are closed and reduced");
        core
    }

    /// True when the underlying graph and marking coincide (metrics may
    /// differ).
    pub fn same_marked_graph(&self, other: &MarkedMetricGraph) -> bool {
        self.graph == other.graph && self.marking == other.marking
    }
}

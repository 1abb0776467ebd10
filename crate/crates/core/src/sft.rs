//! Subshifts of finite type over an abstract alphabet, with the geometric
//! entropy of a measure defined by cylinder decay per symbol.
//!
//! This is the combinatorial twin of the graph setting: unit lengths in the
//! denominator, an explicit transition relation instead of non-backtracking
//! moves.

use crate::entropy::{EntropyKind, EntropyReport, Method};
use crate::error::{Error, Result};
use crate::min_ratio::{minimum_cycle_ratio, RatioArc};
use crate::spectral::power_radius;
use crate::tol;

/// A subshift of finite type: alphabet symbols `0..n` and the set of allowed
/// two-letter transitions.
#[derive(Debug, Clone)]
pub struct Sft {
    num_symbols: usize,
    allowed: Vec<Vec<bool>>,
}

impl Sft {
    pub fn new(num_symbols: usize, transitions: &[(usize, usize)]) -> Result<Self> {
        let mut allowed = vec![vec![false; num_symbols]; num_symbols];
        for &(a, b) in transitions {
            if a >= num_symbols || b >= num_symbols {
                return Err(Error::Document(format!(
                    "transition ({a}, {b}) outside alphabet of size {num_symbols}"
                )));
            }
            allowed[a][b] = true;
        }
        Ok(Sft {
            num_symbols,
            allowed,
        })
    }

    /// Full shift: every transition allowed.
    pub fn full(num_symbols: usize) -> Self {
        Sft {
            num_symbols,
            allowed: vec![vec![true; num_symbols]; num_symbols],
        }
    }

    pub fn num_symbols(&self) -> usize {
        self.num_symbols
    }

    pub fn is_allowed(&self, a: usize, b: usize) -> bool {
        self.allowed[a][b]
    }

    fn arcs(&self) -> Vec<(usize, usize, f64)> {
        let mut arcs = Vec::new();
        for a in 0..self.num_symbols {
            for b in 0..self.num_symbols {
                if self.allowed[a][b] {
                    arcs.push((a, b, 1.0));
                }
            }
        }
        arcs
    }

    /// Log of the Perron root of the transition matrix.
    pub fn topological_entropy(&self) -> Result<f64> {
        let (rho, _, _) = power_radius(self.num_symbols, &self.arcs())
            .map_err(|_| Error::ReducibleShift)?;
        Ok(rho.ln())
    }

    pub fn require_irreducible(&self) -> Result<()> {
        power_radius(self.num_symbols, &self.arcs()).map_err(|_| Error::ReducibleShift)?;
        Ok(())
    }

    /// The unique measure of maximal entropy, from the Perron eigendata of
    /// the transition matrix.
    pub fn parry_measure(&self) -> Result<SftMeasure> {
        let (rho, right, left) = power_radius(self.num_symbols, &self.arcs())
            .map_err(|_| Error::ReducibleShift)?;
        let weights: Vec<f64> = (0..self.num_symbols).map(|i| left[i] * right[i]).collect();
        let total: f64 = weights.iter().sum();
        let initial: Vec<f64> = weights.into_iter().map(|w| w / total).collect();
        let mut transition = vec![vec![0.0; self.num_symbols]; self.num_symbols];
        for a in 0..self.num_symbols {
            for b in 0..self.num_symbols {
                if self.allowed[a][b] {
                    transition[a][b] = right[b] / (rho * right[a]);
                }
            }
        }
        Ok(SftMeasure::Markov {
            initial,
            transition,
        })
    }
}

/// A shift-invariant measure on an SFT.
#[derive(Debug, Clone)]
pub enum SftMeasure {
    Markov {
        initial: Vec<f64>,
        transition: Vec<Vec<f64>>,
    },
    Periodic {
        word: Vec<usize>,
    },
}

impl SftMeasure {
    fn validate(&self, shift: &Sft) -> Result<()> {
        match self {
            SftMeasure::Markov {
                initial,
                transition,
            } => {
                let n = shift.num_symbols();
                if initial.len() != n || transition.len() != n {
                    return Err(Error::Document("measure size does not match alphabet".into()));
                }
                for a in 0..n {
                    if initial[a] > 0.0 {
                        let sum: f64 = transition[a].iter().sum();
                        if (sum - 1.0).abs() > tol::MASS {
                            return Err(Error::InvalidCurrent(format!(
                                "row {a} sums to {sum}"
                            )));
                        }
                    }
                    for b in 0..n {
                        if transition[a][b] > 0.0 && !shift.is_allowed(a, b) {
                            return Err(Error::InvalidCurrent(format!(
                                "measure charges forbidden transition ({a}, {b})"
                            )));
                        }
                    }
                }
                Ok(())
            }
            SftMeasure::Periodic { word } => {
                if word.is_empty() {
                    return Err(Error::Document("empty periodic word".into()));
                }
                for i in 0..word.len() {
                    let a = word[i];
                    let b = word[(i + 1) % word.len()];
                    if a >= shift.num_symbols() || !shift.is_allowed(a, b) {
                        return Err(Error::InvalidCurrent(
                            "periodic word leaves the subshift".into(),
                        ));
                    }
                }
                Ok(())
            }
        }
    }

    /// Shannon entropy rate (zero for periodic orbits).
    pub fn entropy_rate(&self, shift: &Sft) -> Result<f64> {
        self.validate(shift)?;
        match self {
            SftMeasure::Markov {
                initial,
                transition,
            } => {
                let mut h = 0.0;
                for (a, &p) in initial.iter().enumerate() {
                    if p <= 0.0 {
                        continue;
                    }
                    for &q in &transition[a] {
                        if q > 0.0 {
                            h -= p * q * q.ln();
                        }
                    }
                }
                Ok(h)
            }
            SftMeasure::Periodic { .. } => Ok(0.0),
        }
    }
}

/// Geometric entropy of a measure on an irreducible SFT: the slowest decay
/// rate of cylinder masses per symbol, i.e. the minimum cycle mean of
/// `-log P` over the support digraph.
pub fn sft_geometric_entropy(shift: &Sft, measure: &SftMeasure) -> Result<EntropyReport> {
    shift.require_irreducible()?;
    measure.validate(shift)?;
    match measure {
        SftMeasure::Periodic { word } => Ok(EntropyReport {
            kind: EntropyKind::SftGeometric,
            value: 0.0,
            method: Method::ClosedForm,
            tolerance: 0.0,
            witness: Some(word.clone()),
        }),
        SftMeasure::Markov {
            initial,
            transition,
        } => {
            let mut arcs = Vec::new();
            for (a, row) in transition.iter().enumerate() {
                if initial[a] <= 0.0 {
                    continue;
                }
                for (b, &q) in row.iter().enumerate() {
                    if q > 0.0 {
                        arcs.push(RatioArc {
                            from: a,
                            to: b,
                            cost: -q.ln(),
                            len: 1.0,
                        });
                    }
                }
            }
            let out = minimum_cycle_ratio(shift.num_symbols(), &arcs)?;
            Ok(EntropyReport {
                kind: EntropyKind::SftGeometric,
                value: out.value,
                method: Method::CycleRatio,
                tolerance: tol::CYCLE_RATIO,
                witness: Some(out.cycle),
            })
        }
    }
}

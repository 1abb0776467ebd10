//! Seeded random inputs for verification suites.
//!
//! Everything here is driven by an explicit [`Prng`], so suites reproduce
//! exactly from `(seed, configuration)`.

use crate::currents::MarkovCurrent;
use crate::error::Result;
use crate::graph::Metric;
use crate::marked::MarkedMetricGraph;
use crate::marking::{Automorphism, Letter, Word};
use crate::prng::Prng;

/// Random edge lengths, uniform on `[lo, hi)`, constant on inverse pairs.
pub fn random_metric(t: &MarkedMetricGraph, rng: &mut Prng, lo: f64, hi: f64) -> Metric {
    let g = &t.graph;
    let mut lengths = vec![0.0; g.num_edges()];
    for e in 0..g.num_edges() {
        if e <= g.inverse(e) {
            let l = rng.uniform(lo, hi);
            lengths[e] = l;
            lengths[g.inverse(e)] = l;
        }
    }
    Metric::new(g, lengths).expect("sampled lengths are positive and symmetric")
}

/// Random nontrivial freely reduced word of length up to `max_len`.
pub fn random_reduced_word(rng: &mut Prng, rank: usize, max_len: usize) -> Word {
    loop {
        let len = 1 + rng.below(max_len);
        let mut letters: Vec<Letter> = Vec::with_capacity(len);
        for _ in 0..len {
            loop {
                let l = Letter {
                    gen: rng.below(rank),
                    inv: rng.below(2) == 1,
                };
                if letters.last().is_some_and(|&t| t == l.inverse()) {
                    continue;
                }
                letters.push(l);
                break;
            }
        }
        let w = Word::from_letters(letters);
        if !w.is_identity() {
            return w;
        }
    }
}

/// Random composition of `moves` elementary Nielsen substitutions.
pub fn random_automorphism(rng: &mut Prng, rank: usize, moves: usize) -> Automorphism {
    let mut phi = Automorphism::identity(rank);
    for _ in 0..moves {
        let i = rng.below(rank);
        let mut j = rng.below(rank);
        while j == i && rank > 1 {
            j = rng.below(rank);
        }
        let kind = rng.below(3);
        let mut images: Vec<Word> = (0..rank).map(Word::generator).collect();
        match kind {
            0 => images[i] = Word::generator(i).mul(&Word::generator(j)),
            1 => images[i] = Word::generator(i).mul(&Word::generator(j).inverse()),
            _ => images[i] = Word::generator(i).inverse(),
        }
        let step = Automorphism::new(rank, images).expect("Nielsen moves are automorphisms");
        phi = step.compose(&phi);
    }
    phi
}

/// Random fully supported Markov current: every non-backtracking transition
/// gets a weight uniform on `[0.5, 1.5)`, rows are normalized, and the
/// stationary law is solved to machine accuracy. The resulting weight system
/// satisfies both shift-consistency identities and has total mass one.
pub fn random_markov_current(t: &MarkedMetricGraph, rng: &mut Prng) -> Result<MarkovCurrent> {
    let g = &t.graph;
    let n = g.num_edges();
    let mut rows: Vec<Vec<(usize, f64)>> = Vec::with_capacity(n);
    for e in 0..n {
        let succ = g.successors(e);
        let mut weights: Vec<f64> = succ.iter().map(|_| rng.uniform(0.5, 1.5)).collect();
        let sum: f64 = weights.iter().sum();
        for w in &mut weights {
            *w /= sum;
        }
        rows.push(succ.into_iter().zip(weights).collect());
    }
    let p = stationary_law(n, &rows);
    MarkovCurrent::new(g, p, rows)
}

/// Stationary distribution of an irreducible row-stochastic matrix, via
/// power iteration on the lazy chain (handles periodic supports).
pub(crate) fn stationary_law(n: usize, rows: &[Vec<(usize, f64)>]) -> Vec<f64> {
    let mut p = vec![1.0 / n as f64; n];
    for _ in 0..100_000 {
        let mut next = vec![0.0; n];
        for (e, row) in rows.iter().enumerate() {
            for &(f, q) in row {
                next[f] += p[e] * q;
            }
        }
        let mut delta = 0.0f64;
        for e in 0..n {
            next[e] = 0.5 * next[e] + 0.5 * p[e];
            delta = delta.max((next[e] - p[e]).abs());
        }
        p = next;
        if delta < 1e-15 {
            break;
        }
    }
    let total: f64 = p.iter().sum();
    for x in &mut p {
        *x /= total;
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn random_words_are_reduced_and_nontrivial() {
        let mut rng = Prng::new(0);
        for _ in 0..200 {
            let w = random_reduced_word(&mut rng, 3, 12);
            assert!(!w.is_identity());
            assert_eq!(Word::from_letters(w.letters().to_vec()), w);
        }
    }

    #[test]
    fn random_automorphisms_invert() {
        let mut rng = Prng::new(1);
        for _ in 0..20 {
            let phi = random_automorphism(&mut rng, 3, 4);
            let w = random_reduced_word(&mut rng, 3, 6);
            assert_eq!(phi.inverse().apply(&phi.apply(&w)), w);
        }
    }

    #[test]
    fn random_markov_currents_are_stationary() {
        let t = fixtures::theta_marked();
        let mut rng = Prng::new(2);
        let mc = random_markov_current(&t, &mut rng).unwrap();
        assert!(mc.stationarity_residual() < 1e-12);
        assert!((mc.total_mass() - 1.0).abs() < 1e-12);
    }
}

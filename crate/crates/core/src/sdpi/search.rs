//! Global search for the supremum of the divergence ratio over the simplex.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, Exp1};
use rayon::prelude::*;

use super::simplex;
use crate::prob::{kl_term_nats, push_forward_into, total_variation, Channel};

/// The map `q -> D(qW || P_Y) / D(q || P_X)` for a fixed channel `W`.
///
/// Divergences are evaluated in nats internally; the ratio is unit-free.
pub(crate) struct RatioProblem<'a> {
    pub px: &'a [f64],
    pub py: &'a [f64],
    pub channel: &'a Channel,
    pub exclusion_radius: f64,
}

fn kl_nats(q: &[f64], p: &[f64]) -> f64 {
    q.iter().zip(p).map(|(&a, &b)| kl_term_nats(a, b)).sum()
}

impl RatioProblem<'_> {
    pub fn dim(&self) -> usize {
        self.px.len()
    }

    pub fn excluded(&self, q: &[f64]) -> bool {
        total_variation(q, self.px) <= self.exclusion_radius
    }

    /// `None` inside the exclusion ball.
    pub fn eval(&self, q: &[f64], scratch: &mut [f64]) -> Option<f64> {
        if self.excluded(q) {
            return None;
        }
        let den = kl_nats(q, self.px);
        if den <= 0.0 {
            return None;
        }
        push_forward_into(q, self.channel, scratch);
        Some(kl_nats(scratch, self.py) / den)
    }

    /// Gradient of `ln N(q) - ln D(q)`, with constant components dropped
    /// (the simplex projection is invariant to shifts along the all-ones
    /// direction). Returns `None` when the numerator vanishes.
    fn log_ratio_gradient(&self, q: &[f64], qy: &mut [f64], grad: &mut [f64]) -> Option<()> {
        let den = kl_nats(q, self.px);
        push_forward_into(q, self.channel, qy);
        let num = kl_nats(qy, self.py);
        if num <= 0.0 || den <= 0.0 {
            return None;
        }
        for (y, v) in qy.iter_mut().enumerate() {
            *v = (v.max(1e-300) / self.py[y]).ln();
        }
        for (x, g) in grad.iter_mut().enumerate() {
            let dn: f64 = self
                .channel
                .row(x)
                .iter()
                .zip(qy.iter())
                .map(|(w, l)| w * l)
                .sum();
            let dd = (q[x].max(1e-16) / self.px[x]).ln();
            *g = dn / num - dd / den;
        }
        Some(())
    }
}

/// A candidate maximizer.
#[derive(Debug, Clone)]
pub(crate) struct Candidate {
    pub value: f64,
    pub q: Vec<f64>,
}

impl Candidate {
    /// Larger value wins; equal values fall back to the lexicographically
    /// smaller vector, so reductions are schedule-independent.
    pub fn better_than(&self, other: &Candidate) -> bool {
        if self.value != other.value {
            return self.value > other.value;
        }
        self.q
            .iter()
            .zip(&other.q)
            .find(|(a, b)| a != b)
            .is_some_and(|(a, b)| a < b)
    }

    pub fn best(a: Option<Candidate>, b: Option<Candidate>) -> Option<Candidate> {
        match (a, b) {
            (Some(a), Some(b)) => Some(if b.better_than(&a) { b } else { a }),
            (a, None) => a,
            (None, b) => b,
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct SearchOutcome {
    pub best: Option<Candidate>,
    pub evaluations: usize,
}

/// Exhaustive evaluation on the lattice `{k/n}` of the simplex.
pub(crate) fn grid_search(problem: &RatioProblem<'_>, divisions: usize) -> SearchOutcome {
    let dim = problem.dim();
    let out_dim = problem.channel.output_size();
    let (best, evaluations) = (0..=divisions)
        .into_par_iter()
        .map(|first| {
            let mut scratch = vec![0.0; out_dim];
            let mut best: Option<Candidate> = None;
            let mut evals = 0usize;
            simplex::for_each_lattice_point_with_first(divisions, dim, first, |q| {
                evals += 1;
                if let Some(value) = problem.eval(q, &mut scratch) {
                    let better = match &best {
                        None => true,
                        Some(b) => value > b.value,
                    };
                    if better {
                        best = Some(Candidate {
                            value,
                            q: q.to_vec(),
                        });
                    }
                }
            });
            (best, evals)
        })
        .reduce(
            || (None, 0),
            |(a, ea), (b, eb)| (Candidate::best(a, b), ea + eb),
        );
    SearchOutcome { best, evaluations }
}

pub(crate) struct AscentSettings {
    pub max_iterations: usize,
    pub step_tolerance: f64,
}

/// Projected-gradient ascent on the log-ratio with backtracking.
pub(crate) fn ascend(
    problem: &RatioProblem<'_>,
    start: &[f64],
    settings: &AscentSettings,
) -> (Option<Candidate>, usize) {
    let dim = problem.dim();
    let mut qy = vec![0.0; problem.channel.output_size()];
    let mut grad = vec![0.0; dim];
    let mut evals = 1usize;
    let mut q = start.to_vec();
    let Some(mut value) = problem.eval(&q, &mut qy) else {
        return (None, evals);
    };
    if value <= 0.0 {
        return (Some(Candidate { value, q }), evals);
    }
    let mut step = 1.0f64;
    let mut trial = vec![0.0; dim];
    for _ in 0..settings.max_iterations {
        if problem.log_ratio_gradient(&q, &mut qy, &mut grad).is_none() {
            break;
        }
        let gmax = grad.iter().fold(0.0f64, |m, g| m.max(g.abs()));
        if gmax == 0.0 || !gmax.is_finite() {
            break;
        }
        step = step.min(1.0 / gmax).max(1e-300);
        let mut accepted = None;
        for _ in 0..60 {
            for ((t, &a), &g) in trial.iter_mut().zip(&q).zip(&grad) {
                *t = a + step * g;
            }
            let candidate = simplex::project(&trial);
            evals += 1;
            if let Some(v) = problem.eval(&candidate, &mut qy) {
                if v > value {
                    accepted = Some((candidate, v));
                    break;
                }
            }
            step *= 0.5;
        }
        let Some((next, v)) = accepted else {
            break;
        };
        let moved = next
            .iter()
            .zip(&q)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        q = next;
        value = v;
        step *= 2.0;
        if moved < settings.step_tolerance {
            break;
        }
    }
    (Some(Candidate { value, q }), evals)
}

/// Symmetric Dirichlet(1) draws, i.e. uniform points on the simplex.
pub(crate) fn dirichlet_starts(dim: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let e: Vec<f64> = (0..dim).map(|_| Exp1.sample(&mut rng)).collect();
            let s: f64 = e.iter().sum();
            e.into_iter().map(|v| v / s).collect()
        })
        .collect()
}

pub(crate) fn multistart(
    problem: &RatioProblem<'_>,
    starts: &[Vec<f64>],
    settings: &AscentSettings,
) -> SearchOutcome {
    let (best, evaluations) = starts
        .par_iter()
        .map(|s| ascend(problem, s, settings))
        .reduce(
            || (None, 0),
            |(a, ea), (b, eb)| (Candidate::best(a, b), ea + eb),
        );
    SearchOutcome { best, evaluations }
}

//! Empirical hardness evidence: concrete sparsification strategies run
//! against instance B-matrices across nnz budgets, measuring the achieved
//! relative S_q error. This is evidence for the lower-bound property, not a
//! proof; the reports record it as such.
//!
//! Sampling strategies keep entries independently and rescale kept values
//! by the inverse keep probability, so the sampled matrix is unbiased.
//! Randomness comes from ChaCha8 seeded per run, which is reproducible
//! bit-for-bit across platforms.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forge::HardInstance;
use crate::io::{format_g17, write_atomic};
use crate::matrix::{nnz, Matrix};
use crate::spectra::{schatten_norm, singular_values, SchattenExponent};

/// Sparsification strategies run against hard instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum StrategyKind {
    TopK,
    UniformSample,
    WeightedSample,
}

impl StrategyKind {
    pub const ALL: [StrategyKind; 3] = [
        StrategyKind::TopK,
        StrategyKind::UniformSample,
        StrategyKind::WeightedSample,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StrategyKind::TopK => "topk",
            StrategyKind::UniformSample => "uniform",
            StrategyKind::WeightedSample => "weighted",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "topk" => Ok(StrategyKind::TopK),
            "uniform" => Ok(StrategyKind::UniformSample),
            "weighted" => Ok(StrategyKind::WeightedSample),
            other => Err(Error::invalid(format!(
                "unknown strategy {other:?} (expected topk, uniform, or weighted)"
            ))),
        }
    }
}

/// Outcome of one strategy run at one budget.
#[derive(Debug, Clone, Serialize)]
pub struct AttackResult {
    pub strategy: String,
    pub seed: u64,
    pub budget_frac: f64,
    pub budget: usize,
    pub achieved_nnz: usize,
    pub q: SchattenExponent,
    pub rel_error_q: f64,
}

/// Keeps the `budget` largest-magnitude entries (ties by row-major order),
/// zeros the rest.
pub fn attack_topk(b: &Matrix, budget: usize) -> Result<Matrix> {
    let total = b.rows() * b.cols();
    if budget > total {
        return Err(Error::invalid(format!(
            "budget {budget} exceeds the {total} entries of the matrix"
        )));
    }
    let mut order: Vec<usize> = (0..total).collect();
    let entries = b.entries();
    order.sort_by(|&i, &j| {
        entries[j]
            .abs()
            .partial_cmp(&entries[i].abs())
            .expect("entries are finite")
            .then(i.cmp(&j))
    });
    let mut kept = vec![0.0; total];
    for &flat in order.iter().take(budget) {
        kept[flat] = entries[flat];
    }
    Matrix::new(b.rows(), b.cols(), kept)
}

/// Keeps each entry independently with probability pi = budget / (rows*cols),
/// rescaling kept values by 1/pi so the sample is unbiased.
pub fn attack_uniform(b: &Matrix, budget: usize, seed: u64) -> Matrix {
    let total = (b.rows() * b.cols()) as f64;
    let pi = (budget as f64 / total).clamp(0.0, 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kept: Vec<f64> = b
        .entries()
        .iter()
        .map(|&v| {
            let u: f64 = rng.random();
            if u < pi {
                v / pi
            } else {
                0.0
            }
        })
        .collect();
    Matrix::new(b.rows(), b.cols(), kept).expect("finite by construction")
}

/// Keeps entry (i,j) with probability pi_ij = min(1, budget * b_ij^2 / sum b^2),
/// rescaling kept values by 1/pi_ij for unbiasedness.
pub fn attack_weighted(b: &Matrix, budget: usize, seed: u64) -> Matrix {
    let total_weight = b.sum_of_squares();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if total_weight == 0.0 {
        return b.clone();
    }
    let kept: Vec<f64> = b
        .entries()
        .iter()
        .map(|&v| {
            let u: f64 = rng.random();
            let pi = (budget as f64 * v * v / total_weight).min(1.0);
            if pi > 0.0 && u < pi {
                v / pi
            } else {
                0.0
            }
        })
        .collect();
    Matrix::new(b.rows(), b.cols(), kept).expect("finite by construction")
}

/// Relative S_q error and support size of a candidate.
#[derive(Debug, Clone, Copy)]
pub struct Evaluation {
    pub rel_error_q: f64,
    pub achieved_nnz: usize,
}

/// Exact SVD-based relative error ||b_cand - b||_{S_q} / ||b||_{S_q}.
pub fn evaluate(b: &Matrix, b_cand: &Matrix, q: SchattenExponent) -> Result<Evaluation> {
    let diff = b_cand.sub(b)?;
    let err = schatten_norm(&singular_values(&diff)?, q);
    let norm = schatten_norm(&singular_values(b)?, q);
    let rel_error_q = if norm == 0.0 {
        if err == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        err / norm
    };
    Ok(Evaluation {
        rel_error_q,
        achieved_nnz: nnz(b_cand),
    })
}

fn run_strategy(b: &Matrix, kind: StrategyKind, budget: usize, seed: u64) -> Result<Matrix> {
    match kind {
        StrategyKind::TopK => attack_topk(b, budget),
        StrategyKind::UniformSample => Ok(attack_uniform(b, budget, seed)),
        StrategyKind::WeightedSample => Ok(attack_weighted(b, budget, seed)),
    }
}

/// Full cross-product of strategies x budget fractions x seeds against the
/// instance's B matrix, measured in the instance's S_q norm. Results come
/// back in canonical (strategy, budget, seed) order.
pub fn sweep(
    inst: &HardInstance,
    strategies: &[StrategyKind],
    budget_fracs: &[f64],
    seeds: &[u64],
) -> Result<Vec<AttackResult>> {
    for &frac in budget_fracs {
        if !(0.0..=1.0).contains(&frac) {
            return Err(Error::invalid(format!(
                "budget fraction {frac} must lie in [0, 1]"
            )));
        }
    }
    let total = inst.b.rows() * inst.b.cols();
    let b_norm = schatten_norm(&singular_values(&inst.b)?, inst.q);

    let mut sorted_strategies = strategies.to_vec();
    sorted_strategies.sort();
    sorted_strategies.dedup();
    let mut fracs = budget_fracs.to_vec();
    fracs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    fracs.dedup();
    let mut sorted_seeds = seeds.to_vec();
    sorted_seeds.sort_unstable();
    sorted_seeds.dedup();

    let mut results = Vec::new();
    for &kind in &sorted_strategies {
        for &frac in &fracs {
            let budget = ((frac * total as f64).round() as usize).min(total);
            for &seed in &sorted_seeds {
                let cand = run_strategy(&inst.b, kind, budget, seed)?;
                let diff = cand.sub(&inst.b)?;
                let err = schatten_norm(&singular_values(&diff)?, inst.q);
                let rel_error_q = if b_norm == 0.0 { 0.0 } else { err / b_norm };
                results.push(AttackResult {
                    strategy: kind.name().to_string(),
                    seed,
                    budget_frac: frac,
                    budget,
                    achieved_nnz: nnz(&cand),
                    q: inst.q,
                    rel_error_q,
                });
            }
        }
    }
    Ok(results)
}

/// CSV table: strategy, seed, budget_frac, achieved_nnz, q, rel_error.
pub fn write_results_csv(path: &Path, results: &[AttackResult]) -> Result<()> {
    let mut out = String::from("strategy,seed,budget_frac,achieved_nnz,q,rel_error\n");
    for r in results {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.strategy,
            r.seed,
            r.budget_frac,
            r.achieved_nnz,
            r.q,
            format_g17(r.rel_error_q)
        ));
    }
    write_atomic(path, out.as_bytes())
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepSummaryEntry {
    pub strategy: String,
    pub budget_frac: f64,
    pub budget: usize,
    pub q: SchattenExponent,
    pub runs: usize,
    pub min_rel_error: f64,
    pub max_rel_error: f64,
}

/// Per (strategy, budget) min/max error summary, canonical order.
pub fn summarize(results: &[AttackResult]) -> Vec<SweepSummaryEntry> {
    let mut entries: Vec<SweepSummaryEntry> = Vec::new();
    for r in results {
        match entries
            .iter_mut()
            .find(|e| e.strategy == r.strategy && e.budget == r.budget)
        {
            Some(e) => {
                e.runs += 1;
                e.min_rel_error = e.min_rel_error.min(r.rel_error_q);
                e.max_rel_error = e.max_rel_error.max(r.rel_error_q);
            }
            None => entries.push(SweepSummaryEntry {
                strategy: r.strategy.clone(),
                budget_frac: r.budget_frac,
                budget: r.budget,
                q: r.q,
                runs: 1,
                min_rel_error: r.rel_error_q,
                max_rel_error: r.rel_error_q,
            }),
        }
    }
    entries.sort_by(|a, b| a.strategy.cmp(&b.strategy).then(a.budget.cmp(&b.budget)));
    entries
}

pub fn write_summary_json(path: &Path, results: &[AttackResult]) -> Result<()> {
    let json = serde_json::to_string_pretty(&summarize(results))?;
    write_atomic(path, json.as_bytes())
}

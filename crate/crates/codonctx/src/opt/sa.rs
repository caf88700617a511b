//! Simulated annealing over same-amino-acid codon swaps.
//!
//! Moves exchange the codons at two positions of one amino acid, so the
//! codon counts never change. Each candidate is scored through the
//! constant-work swap delta; improving moves are always taken, worsening
//! moves with probability exp(delta / T) under a geometric cooling schedule.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::scoring::{swap_delta_total, CpsTable};
use crate::seq::{
    random_synonymous_encoding_with, AminoAcidSeq, CodonDistribution, CodonSeq,
    DistributionError, GeneticCode,
};

use super::{Direction, OptMethod, OptimizationResult, SearchStats};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SaError {
    #[error(transparent)]
    Distribution(#[from] DistributionError),
    #[error("invalid annealing parameters: {message}")]
    InvalidParams { message: String },
}

/// Annealing schedule parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct SaParams {
    /// Swap attempts per restart.
    pub iterations: u64,
    /// Starting temperature, in total-score units.
    pub initial_temperature: f64,
    /// Multiplier applied every `iterations / 1000` steps.
    pub cooling_factor: f64,
    pub seed: u64,
    /// Independent restarts; restart r uses seed `seed + r`.
    pub restarts: u32,
}

impl Default for SaParams {
    fn default() -> Self {
        SaParams {
            iterations: 500_000,
            initial_temperature: 1.0,
            cooling_factor: 0.995,
            seed: 0,
            restarts: 5,
        }
    }
}

impl SaParams {
    fn validate(&self) -> Result<(), SaError> {
        let fail = |message: &str| Err(SaError::InvalidParams { message: message.into() });
        if self.iterations < 1 {
            return fail("iterations must be at least 1");
        }
        if !(self.cooling_factor > 0.0 && self.cooling_factor < 1.0) {
            return fail("cooling factor must lie in (0, 1)");
        }
        if self.initial_temperature.is_nan() || self.initial_temperature <= 0.0 {
            return fail("initial temperature must be positive");
        }
        if self.restarts < 1 {
            return fail("restarts must be at least 1");
        }
        Ok(())
    }
}

/// One progress sample. `iteration` counts cumulatively across restarts;
/// `best_cpb` tracks the incrementally maintained best over the whole run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaCheckpoint {
    pub iteration: u64,
    pub current_cpb: f64,
    pub best_cpb: f64,
    pub temperature: f64,
    pub accepted_moves: u64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SaTrace {
    pub checkpoints: Vec<SaCheckpoint>,
}

impl SaTrace {
    /// Tab-separated `iteration  current  best  temperature` rows.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("iteration\tcurrent\tbest\ttemperature\n");
        for c in &self.checkpoints {
            writeln!(out, "{}\t{}\t{}\t{}", c.iteration, c.current_cpb, c.best_cpb, c.temperature)
                .unwrap();
        }
        out
    }
}

/// Anneal toward the requested CPB extreme while preserving `dist` exactly.
/// Deterministic per seed; the best encoding across restarts is returned with
/// its CPB recomputed from scratch.
pub fn optimize_sa(
    protein: &AminoAcidSeq,
    dist: &CodonDistribution,
    table: &CpsTable,
    direction: Direction,
    params: &SaParams,
) -> Result<(OptimizationResult, SaTrace), SaError> {
    params.validate()?;
    let code = GeneticCode::standard();
    dist.check_consistent(protein, code)?;
    assert!(protein.len() >= 2, "optimization requires at least two residues");
    let n_pairs = (protein.len() - 1) as f64;

    // Positions grouped per amino acid occurring at least twice; an amino
    // acid with a single distinct codon still consumes iterations (its swaps
    // are identical-codon draws), matching the iteration-bound runtime.
    let mut multi_positions: Vec<Vec<usize>> = Vec::new();
    let mut swappable = false;
    for aa in crate::seq::AminoAcid::all() {
        let positions: Vec<usize> = protein
            .residues()
            .iter()
            .enumerate()
            .filter(|&(_, &r)| r == aa)
            .map(|(i, _)| i)
            .collect();
        if positions.len() >= 2 {
            if dist.codons_of(aa, code).len() >= 2 {
                swappable = true;
            }
            multi_positions.push(positions);
        }
    }

    if !swappable {
        // Single-point search space: the encoding is forced.
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        let sequence = random_synonymous_encoding_with(protein, dist, &mut rng)?;
        let total = crate::scoring::total_pair_score(sequence.codons(), table);
        let value = total / n_pairs;
        let trace = SaTrace {
            checkpoints: vec![SaCheckpoint {
                iteration: 0,
                current_cpb: value,
                best_cpb: value,
                temperature: params.initial_temperature,
                accepted_moves: 0,
            }],
        };
        let result = OptimizationResult {
            total_score: total,
            cpb: value,
            sequence,
            method: OptMethod::SimulatedAnnealing,
            direction,
            optimal: true,
            stats: SearchStats { restarts: 0, ..Default::default() },
        };
        return Ok((result, trace));
    }

    let cooling_interval = (params.iterations / 1000).max(1);
    let mut trace = SaTrace::default();
    let mut best_total = direction.worst();
    let mut best_codons: Option<Vec<crate::seq::Codon>> = None;
    let mut accepted_total: u64 = 0;
    let mut pair_evaluations: u64 = 0;
    let mut global_iteration: u64 = 0;

    for restart in 0..params.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed.wrapping_add(restart as u64));
        let initial = random_synonymous_encoding_with(protein, dist, &mut rng)?;
        let mut current: Vec<crate::seq::Codon> = initial.codons().to_vec();
        let mut current_total = crate::scoring::total_pair_score(&current, table);
        if direction.better(current_total, best_total) || best_codons.is_none() {
            best_total = current_total;
            best_codons = Some(current.clone());
        }
        let mut temperature = params.initial_temperature;

        for iteration in 0..params.iterations {
            if iteration > 0 && iteration % cooling_interval == 0 {
                temperature *= params.cooling_factor;
            }
            if iteration % cooling_interval == 0 {
                trace.checkpoints.push(SaCheckpoint {
                    iteration: global_iteration,
                    current_cpb: current_total / n_pairs,
                    best_cpb: best_total / n_pairs,
                    temperature,
                    accepted_moves: accepted_total,
                });
            }
            global_iteration += 1;

            let positions = &multi_positions[rng.random_range(0..multi_positions.len())];
            let a = rng.random_range(0..positions.len());
            let b = {
                let raw = rng.random_range(0..positions.len() - 1);
                if raw >= a {
                    raw + 1
                } else {
                    raw
                }
            };
            let (i, j) = (positions[a.min(b)], positions[a.max(b)]);
            if current[i] == current[j] {
                continue; // identical codons: the draw consumes the iteration
            }
            let delta = swap_delta_total(&current, i, j, table);
            pair_evaluations += 8;
            let gain = match direction {
                Direction::Maximize => delta,
                Direction::Minimize => -delta,
            };
            let accept = gain > 0.0 || rng.random::<f64>() < (gain / temperature).exp();
            if accept {
                current.swap(i, j);
                current_total += delta;
                accepted_total += 1;
                if direction.better(current_total, best_total) {
                    best_total = current_total;
                    best_codons = Some(current.clone());
                }
            }
        }

        trace.checkpoints.push(SaCheckpoint {
            iteration: global_iteration,
            current_cpb: current_total / n_pairs,
            best_cpb: best_total / n_pairs,
            temperature,
            accepted_moves: accepted_total,
        });
    }

    let sequence = CodonSeq::new(best_codons.expect("at least one restart ran"))
        .expect("sense codons only");
    debug_assert_eq!(sequence.distribution(), *dist);
    let total = crate::scoring::total_pair_score(sequence.codons(), table);
    let result = OptimizationResult {
        cpb: total / n_pairs,
        total_score: total,
        sequence,
        method: OptMethod::SimulatedAnnealing,
        direction,
        optimal: false,
        stats: SearchStats {
            iterations: params.iterations * params.restarts as u64,
            accepted_moves: accepted_total,
            restarts: params.restarts,
            pair_evaluations,
            ..Default::default()
        },
    };
    Ok((result, trace))
}

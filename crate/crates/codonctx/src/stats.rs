//! Normal-approximation statistics for codon pair bias: population moments
//! of the pair scores, p-values, significant intervals, and empirical
//! randomized baselines.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};
use thiserror::Error;

use crate::scoring::{cpb, CpsTable};
use crate::seq::{random_synonymous_encoding, AminoAcidSeq, CodonDistribution, DistributionError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatsError {
    #[error("table carries no observed counts")]
    MissingCounts,
    #[error("all observed counts are zero")]
    AllZeroCounts,
    #[error("variance must be non-negative, got {variance}")]
    NegativeVariance { variance: f64 },
    #[error("degenerate distribution: variance is zero")]
    DegenerateVariance,
    #[error("number of pairs must be at least 1")]
    NoPairs,
    #[error("alpha must lie in (0, 1), got {alpha}")]
    BadAlpha { alpha: f64 },
    #[error("need at least 2 baseline samples, got {samples}")]
    TooFewSamples { samples: usize },
    #[error(transparent)]
    Distribution(#[from] DistributionError),
}

/// Population mean and variance of the per-pair score, under which the CPB
/// of an n-pair gene is approximately Normal(mean, variance / n).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CpbDistribution {
    pub mean: f64,
    pub variance: f64,
    pub source: String,
}

impl CpbDistribution {
    pub fn new(mean: f64, variance: f64, source: impl Into<String>) -> Result<Self, StatsError> {
        if variance < 0.0 {
            return Err(StatsError::NegativeVariance { variance });
        }
        Ok(CpbDistribution { mean, variance, source: source.into() })
    }

    /// Standard deviation of CPB over n pairs.
    pub fn sigma(&self, n_pairs: usize) -> f64 {
        (self.variance / n_pairs as f64).sqrt()
    }
}

/// Observed-count-weighted mean and variance of the table's pair scores.
pub fn distribution_from_table(table: &CpsTable) -> Result<CpbDistribution, StatsError> {
    if !table.has_counts() {
        return Err(StatsError::MissingCounts);
    }
    let weighted: Vec<(f64, f64)> = table
        .iter_pairs()
        .map(|(_, _, score, counts)| (score, counts.unwrap().observed as f64))
        .collect();
    let total: f64 = weighted.iter().map(|&(_, n)| n).sum();
    if total == 0.0 {
        return Err(StatsError::AllZeroCounts);
    }
    let mean: f64 = weighted.iter().map(|&(s, n)| s * n / total).sum();
    let variance: f64 = weighted.iter().map(|&(s, n)| (s - mean).powi(2) * n / total).sum();
    CpbDistribution::new(mean, variance, table.source().to_string())
}

fn std_normal() -> Normal {
    Normal::new(0.0, 1.0).expect("unit normal")
}

/// Two-tailed probability of a CPB at least as extreme as `c` under
/// Normal(mean, variance / n): p = 2 * Phi((c_low - mean) / sigma) with
/// c_low the reflection of c onto the lower tail.
pub fn pvalue(c: f64, n_pairs: usize, dist: &CpbDistribution) -> Result<f64, StatsError> {
    if n_pairs < 1 {
        return Err(StatsError::NoPairs);
    }
    if dist.variance == 0.0 {
        return Err(StatsError::DegenerateVariance);
    }
    let sigma = (dist.variance / n_pairs as f64).sqrt();
    let c_low = c.min(2.0 * dist.mean - c);
    Ok(2.0 * std_normal().cdf((c_low - dist.mean) / sigma))
}

/// Signed standard score of `c` under Normal(mean, variance / n).
pub fn z_score(c: f64, n_pairs: usize, dist: &CpbDistribution) -> Result<f64, StatsError> {
    if n_pairs < 1 {
        return Err(StatsError::NoPairs);
    }
    if dist.variance == 0.0 {
        return Err(StatsError::DegenerateVariance);
    }
    Ok((c - dist.mean) / (dist.variance / n_pairs as f64).sqrt())
}

/// The (1 - alpha) significant interval for the CPB of an n-pair gene:
/// mean +/- z_{1 - alpha/2} * sqrt(variance) / sqrt(n).
pub fn significant_interval(
    n_pairs: usize,
    alpha: f64,
    dist: &CpbDistribution,
) -> Result<(f64, f64), StatsError> {
    if n_pairs < 1 {
        return Err(StatsError::NoPairs);
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(StatsError::BadAlpha { alpha });
    }
    let z = std_normal().inverse_cdf(1.0 - alpha / 2.0);
    let half_width = z * dist.variance.sqrt() / (n_pairs as f64).sqrt();
    Ok((dist.mean - half_width, dist.mean + half_width))
}

/// Empirical CPB statistics over seeded random same-distribution encodings.
#[derive(Debug, Clone, PartialEq)]
pub struct BaselineSample {
    pub mean: f64,
    pub std_dev: f64,
    pub values: Vec<f64>,
}

/// Number of alternate designs sampled by default.
pub const DEFAULT_BASELINE_SAMPLES: usize = 100;

/// CPB of `samples` independent random synonymous encodings of `protein`
/// with codon counts exactly `dist`. Sample i uses seed `seed + i`, so the
/// result is deterministic and may be evaluated in any order.
pub fn baseline_sample(
    protein: &AminoAcidSeq,
    dist: &CodonDistribution,
    table: &CpsTable,
    samples: usize,
    seed: u64,
) -> Result<BaselineSample, StatsError> {
    if samples < 2 {
        return Err(StatsError::TooFewSamples { samples });
    }
    let mut values = Vec::with_capacity(samples);
    for i in 0..samples {
        let encoding = random_synonymous_encoding(protein, dist, seed.wrapping_add(i as u64))?;
        values.push(cpb(&encoding, table));
    }
    let mean = values.iter().sum::<f64>() / samples as f64;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (samples - 1) as f64;
    Ok(BaselineSample { mean, std_dev: var.sqrt(), values })
}

/// Kolmogorov-Smirnov statistic of `values` against Normal(mean, variance).
pub fn ks_statistic(values: &[f64], mean: f64, variance: f64) -> f64 {
    assert!(!values.is_empty() && variance > 0.0);
    let normal = std_normal();
    let sd = variance.sqrt();
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (i, x) in sorted.iter().enumerate() {
        let f = normal.cdf((x - mean) / sd);
        d = d.max((f - i as f64 / n).abs());
        d = d.max((f - (i as f64 + 1.0) / n).abs());
    }
    d
}

/// Summary of a randomized baseline, embedded in significance reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineSummary {
    pub mean: f64,
    pub std_dev: f64,
    pub samples: usize,
    /// Number of baseline values less than or equal to the gene's CPB.
    pub rank: usize,
}

/// Significance of one gene's CPB under a CPB distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignificanceReport {
    pub cpb: f64,
    pub n_pairs: usize,
    pub p_value: f64,
    pub z_score: f64,
    pub interval_95: (f64, f64),
    pub baseline: Option<BaselineSummary>,
}

/// Assemble the standard significance report for a gene CPB.
pub fn significance_report(
    cpb: f64,
    n_pairs: usize,
    dist: &CpbDistribution,
    baseline: Option<BaselineSummary>,
) -> Result<SignificanceReport, StatsError> {
    Ok(SignificanceReport {
        cpb,
        n_pairs,
        p_value: pvalue(cpb, n_pairs, dist)?,
        z_score: z_score(cpb, n_pairs, dist)?,
        interval_95: significant_interval(n_pairs, 0.05, dist)?,
        baseline,
    })
}

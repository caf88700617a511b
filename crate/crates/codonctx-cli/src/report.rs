//! The machine-readable run report and its human rendering.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use codonctx::stats::SignificanceReport;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<TableMeta>,
    /// Path of a written artifact (recoded FASTA or table file).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub genes: Vec<GeneReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableMeta {
    pub path: String,
    pub log_base: String,
    pub pairs: usize,
    pub source: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneReport {
    pub id: String,
    pub length_codons: usize,
    pub n_pairs: usize,
    pub trailing_stop: bool,
    pub cpb: f64,
    /// Effective number of codons; absent when no amino acid qualifies.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nc: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub nc_excluded: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub significance: Option<SignificanceReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub baseline: Option<BaselineBlock>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub optimizations: Vec<OptimizationBlock>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineBlock {
    pub mean: f64,
    pub std_dev: f64,
    pub samples: usize,
    /// Baseline values less than or equal to the gene's CPB.
    pub rank: usize,
    /// Annealed CPB range, widened to include the gene's own score.
    pub min_cpb: f64,
    pub max_cpb: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationBlock {
    pub method: String,
    pub direction: String,
    pub cpb: f64,
    pub optimal: bool,
    pub recoded: String,
    pub seconds: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes_expanded: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes_pruned: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub states: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iterations: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub accepted_moves: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub restarts: Option<u32>,
}

impl RunReport {
    pub fn new(command: &str) -> RunReport {
        RunReport { command: command.to_string(), table: None, out: None, genes: Vec::new() }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        if let Some(table) = &self.table {
            writeln!(
                out,
                "table {} ({} pairs, log base {})",
                table.path, table.pairs, table.log_base
            )
            .unwrap();
        }
        for gene in &self.genes {
            writeln!(
                out,
                "{}: {} codons, {} pairs{}",
                gene.id,
                gene.length_codons,
                gene.n_pairs,
                if gene.trailing_stop { ", trailing STOP stripped" } else { "" }
            )
            .unwrap();
            writeln!(out, "  cpb        {:+.6}", gene.cpb).unwrap();
            match gene.nc {
                Some(nc) => {
                    writeln!(
                        out,
                        "  nc         {nc:.3} ({} amino acids excluded)",
                        gene.nc_excluded.len()
                    )
                    .unwrap();
                }
                None => writeln!(out, "  nc         undefined (all amino acids excluded)")
                    .unwrap(),
            }
            if let Some(sig) = &gene.significance {
                writeln!(out, "  p_value    {:.6}", sig.p_value).unwrap();
                writeln!(out, "  z_score    {:+.4}", sig.z_score).unwrap();
                writeln!(
                    out,
                    "  95% range  ({:+.6}, {:+.6})",
                    sig.interval_95.0, sig.interval_95.1
                )
                .unwrap();
            }
            if let Some(base) = &gene.baseline {
                writeln!(
                    out,
                    "  baseline   mean {:+.6}, sd {:.6} over {} samples; rank {}/{}",
                    base.mean, base.std_dev, base.samples, base.rank, base.samples
                )
                .unwrap();
                writeln!(
                    out,
                    "  cpb range  [{:+.6}, {:+.6}] (annealed)",
                    base.min_cpb, base.max_cpb
                )
                .unwrap();
            }
            for opt in &gene.optimizations {
                writeln!(
                    out,
                    "  {} ({}): cpb {:+.6} [{}] in {:.3}s{}",
                    opt.method,
                    opt.direction,
                    opt.cpb,
                    if opt.optimal { "optimal" } else { "heuristic" },
                    opt.seconds,
                    match (opt.nodes_expanded, opt.iterations, opt.states) {
                        (Some(n), _, _) => format!(", {n} nodes"),
                        (_, Some(i), _) => format!(", {i} iterations"),
                        (_, _, Some(s)) => format!(", {s} states"),
                        _ => String::new(),
                    }
                )
                .unwrap();
            }
        }
        if let Some(path) = &self.out {
            writeln!(out, "wrote {path}").unwrap();
        }
        out
    }

    /// Every numeric field must be finite (report invariant).
    pub fn validate_finite(&self) {
        for gene in &self.genes {
            debug_assert!(gene.cpb.is_finite());
            if let Some(nc) = gene.nc {
                debug_assert!(nc.is_finite());
            }
            if let Some(sig) = &gene.significance {
                debug_assert!(sig.p_value.is_finite() && sig.z_score.is_finite());
                debug_assert!(sig.interval_95.0.is_finite() && sig.interval_95.1.is_finite());
            }
            if let Some(base) = &gene.baseline {
                debug_assert!(
                    base.mean.is_finite()
                        && base.std_dev.is_finite()
                        && base.min_cpb.is_finite()
                        && base.max_cpb.is_finite()
                );
            }
            for opt in &gene.optimizations {
                debug_assert!(opt.cpb.is_finite() && opt.seconds.is_finite());
            }
        }
    }
}

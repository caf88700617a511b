//! Codon pair bias scoring, significance statistics, and gene recoding.
//!
//! Protein-coding sequences carry a measurable preference for some adjacent
//! codon pairs over their synonymous alternatives. This crate scores that
//! preference (the codon pair bias, the mean of per-pair log odds scores),
//! quantifies how surprising a score is under a normal approximation, and
//! recodes proteins toward maximal or minimal bias with exact dynamic
//! programming, branch and bound, and simulated annealing — optionally while
//! preserving the gene's codon counts exactly.
//!
//! - [`seq`]: sequence domain types, FASTA ingestion, translation, seeded
//!   synonymous recoding.
//! - [`scoring`]: codon pair score tables (construction from a corpus,
//!   TSV ingestion), bias evaluation, effective number of codons.
//! - [`stats`]: population moments, p-values, significant intervals,
//!   randomized baselines.
//! - [`opt`]: the optimizers and their shared result type.

pub mod opt;
pub mod scoring;
pub mod seq;
pub mod stats;

#[cfg(test)]
pub(crate) mod test_support;

pub use opt::{Direction, OptMethod, OptimizationResult, SearchStats};
pub use scoring::{cpb, CpsTable};
pub use seq::{
    parse_fasta, translate, validate_cds, AminoAcid, AminoAcidSeq, Codon, CodonDistribution,
    CodonSeq, GeneticCode,
};

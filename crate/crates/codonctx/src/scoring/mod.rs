//! Codon pair score tables and codon pair bias evaluation.

mod build;
mod io;
mod nc;

use std::fmt;

use thiserror::Error;

use crate::seq::{AminoAcid, Codon, CodonSeq, GeneticCode, SENSE_CODON_COUNT};

pub use build::{
    build_cps_table, build_cps_table_with_floor, normalize_cps, normalize_group, PairCounts,
};
pub use io::{read_cps_table, write_cps_table};
pub use nc::{effective_number_of_codons, CodonUsage, NcExclusion, NcExclusionReason, NcReport};

/// Number of ordered sense-codon pairs.
pub const PAIR_COUNT: usize = SENSE_CODON_COUNT * SENSE_CODON_COUNT;

/// Default score for codon pairs never observed in a corpus (log(0) is
/// undefined); such pairs are additionally flagged on the table.
pub const DEFAULT_FLOOR_SCORE: f64 = -10.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TableError {
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("amino-acid pair {first}{second} has zero total expected count; the corpus does not cover it")]
    EmptyGroup { first: AminoAcid, second: AminoAcid },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: duplicate codon pair {pair}")]
    DuplicatePair { line: usize, pair: String },
    #[error("line {line}: {codon} is a STOP codon; only sense-codon pairs are allowed")]
    StopCodon { line: usize, codon: Codon },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SwapError {
    #[error("swap positions {i} and {j} out of range for {len} codons")]
    OutOfRange { i: usize, j: usize, len: usize },
    #[error("codons at positions {i} and {j} encode different amino acids")]
    DifferentAminoAcids { i: usize, j: usize },
}

/// Base of the logarithm used for codon pair scores.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LogBase {
    /// Natural logarithm.
    Natural,
    Base(f64),
}

impl LogBase {
    pub fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Natural => x.ln(),
            LogBase::Base(b) => x.ln() / b.ln(),
        }
    }

    pub fn parse(text: &str) -> Option<LogBase> {
        match text.trim() {
            "e" | "E" => Some(LogBase::Natural),
            other => {
                let b: f64 = other.parse().ok()?;
                (b.is_finite() && b > 0.0 && b != 1.0).then_some(LogBase::Base(b))
            }
        }
    }
}

impl fmt::Display for LogBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogBase::Natural => write!(f, "e"),
            LogBase::Base(b) => write!(f, "{b}"),
        }
    }
}

/// Observed and expected occurrence counts backing one codon pair score.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairObsExp {
    pub observed: u64,
    pub expected: f64,
}

/// The (up to) 61x61 codon pair score matrix.
///
/// Pairs absent from the table score `default_score` (0 unless configured).
#[derive(Debug, Clone, PartialEq)]
pub struct CpsTable {
    scores: Vec<f64>,
    present: Vec<bool>,
    counts: Option<Vec<PairObsExp>>,
    floored: Vec<(Codon, Codon)>,
    log_base: LogBase,
    source: String,
    default_score: f64,
    floor_score: f64,
}

pub(crate) fn pair_index(a: Codon, b: Codon) -> Option<usize> {
    Some(a.sense_index()? * SENSE_CODON_COUNT + b.sense_index()?)
}

impl CpsTable {
    /// Build a table from explicit scores. STOP codons are rejected.
    pub fn from_scores(
        entries: impl IntoIterator<Item = ((Codon, Codon), f64)>,
        log_base: LogBase,
        source: impl Into<String>,
    ) -> Result<CpsTable, TableError> {
        let mut table = CpsTable::empty(log_base, source.into());
        for (line, ((a, b), score)) in entries.into_iter().enumerate() {
            table.insert(a, b, score, None, line + 1)?;
        }
        Ok(table)
    }

    /// A table where every sense-codon pair scores zero.
    pub fn zeroed() -> CpsTable {
        let mut table = CpsTable::empty(LogBase::Natural, "zero".into());
        table.present = vec![true; PAIR_COUNT];
        table
    }

    pub(crate) fn empty(log_base: LogBase, source: String) -> CpsTable {
        CpsTable {
            scores: vec![0.0; PAIR_COUNT],
            present: vec![false; PAIR_COUNT],
            counts: None,
            floored: Vec::new(),
            log_base,
            source,
            default_score: 0.0,
            floor_score: DEFAULT_FLOOR_SCORE,
        }
    }

    pub(crate) fn insert(
        &mut self,
        a: Codon,
        b: Codon,
        score: f64,
        counts: Option<PairObsExp>,
        line: usize,
    ) -> Result<(), TableError> {
        let code = GeneticCode::standard();
        for c in [a, b] {
            if code.is_stop(c) {
                return Err(TableError::StopCodon { line, codon: c });
            }
        }
        let idx = pair_index(a, b).unwrap();
        if self.present[idx] {
            return Err(TableError::DuplicatePair { line, pair: format!("{a}{b}") });
        }
        self.present[idx] = true;
        self.scores[idx] = score;
        if let Some(c) = counts {
            self.counts
                .get_or_insert_with(|| vec![PairObsExp { observed: 0, expected: 0.0 }; PAIR_COUNT])
                [idx] = c;
        }
        Ok(())
    }

    pub(crate) fn mark_floored(&mut self, a: Codon, b: Codon) {
        self.floored.push((a, b));
    }

    /// Score of the ordered pair (5' codon, 3' codon). Pairs missing from the
    /// table contribute the configured default score.
    pub fn score(&self, a: Codon, b: Codon) -> f64 {
        match pair_index(a, b) {
            Some(idx) if self.present[idx] => self.scores[idx],
            _ => self.default_score,
        }
    }

    pub fn has_pair(&self, a: Codon, b: Codon) -> bool {
        pair_index(a, b).map(|idx| self.present[idx]).unwrap_or(false)
    }

    pub fn observed(&self, a: Codon, b: Codon) -> Option<u64> {
        let idx = pair_index(a, b)?;
        self.counts.as_ref().map(|c| c[idx].observed)
    }

    pub fn expected(&self, a: Codon, b: Codon) -> Option<f64> {
        let idx = pair_index(a, b)?;
        self.counts.as_ref().map(|c| c[idx].expected)
    }

    pub fn has_counts(&self) -> bool {
        self.counts.is_some()
    }

    pub fn log_base(&self) -> LogBase {
        self.log_base
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn default_score(&self) -> f64 {
        self.default_score
    }

    pub fn with_default_score(mut self, score: f64) -> CpsTable {
        self.default_score = score;
        self
    }

    pub fn floor_score(&self) -> f64 {
        self.floor_score
    }

    pub(crate) fn set_floor_score(&mut self, score: f64) {
        self.floor_score = score;
    }

    /// Pairs that were never observed and received the floor score.
    pub fn floored_pairs(&self) -> &[(Codon, Codon)] {
        &self.floored
    }

    pub fn n_pairs(&self) -> usize {
        self.present.iter().filter(|&&p| p).count()
    }

    /// Present pairs in lexicographic order.
    pub fn iter_pairs(&self) -> impl Iterator<Item = (Codon, Codon, f64, Option<PairObsExp>)> + '_ {
        let code = GeneticCode::standard();
        code.sense_codons().iter().flat_map(move |&a| {
            code.sense_codons().iter().filter_map(move |&b| {
                let idx = pair_index(a, b).unwrap();
                self.present[idx].then(|| {
                    (a, b, self.scores[idx], self.counts.as_ref().map(|c| c[idx]))
                })
            })
        })
    }

    /// Adjacent pairs of `seq` that are absent from this table.
    pub fn missing_pairs(&self, seq: &CodonSeq) -> usize {
        seq.pairs().filter(|&(a, b)| !self.has_pair(a, b)).count()
    }

    /// Check that every observed pair's score equals log(O/E) in this
    /// table's base, within `tolerance`. Tables built from a corpus satisfy
    /// this by construction; ingested tables may carry rounded scores, so
    /// the check is opt-in.
    pub fn verify_counts(&self, tolerance: f64) -> Result<(), TableError> {
        for (a, b, score, counts) in self.iter_pairs() {
            let Some(c) = counts else {
                return Err(TableError::Parse {
                    line: 0,
                    message: "table carries no counts".into(),
                });
            };
            if c.observed == 0 {
                continue;
            }
            let recomputed = self.log_base.log(c.observed as f64 / c.expected);
            if (score - recomputed).abs() > tolerance {
                return Err(TableError::Parse {
                    line: 0,
                    message: format!(
                        "pair {a}{b}: score {score} inconsistent with log({}/{}) = {recomputed}",
                        c.observed, c.expected
                    ),
                });
            }
        }
        Ok(())
    }
}

/// Codon pair bias: the arithmetic mean of the codon pair scores over all
/// adjacent pairs of the sequence.
pub fn cpb(seq: &CodonSeq, table: &CpsTable) -> f64 {
    assert!(seq.len() >= 2, "CPB requires at least two codons");
    total_pair_score(seq.codons(), table) / seq.n_pairs() as f64
}

/// Sum of pair scores along `codons`, 5' to 3' (the CPB numerator).
pub(crate) fn total_pair_score(codons: &[Codon], table: &CpsTable) -> f64 {
    codons.windows(2).map(|w| table.score(w[0], w[1])).sum()
}

/// Change in CPB from swapping the codons at positions `i < j` (same amino
/// acid), computed from the affected pairs only: up to 4 in the general case,
/// 3 when `j == i + 1`, fewer at the sequence boundaries.
pub fn cpb_delta_swap(
    seq: &CodonSeq,
    i: usize,
    j: usize,
    table: &CpsTable,
) -> Result<f64, SwapError> {
    let codons = seq.codons();
    let len = codons.len();
    if i >= j || j >= len {
        return Err(SwapError::OutOfRange { i, j, len });
    }
    let code = GeneticCode::standard();
    if code.amino_acid(codons[i]) != code.amino_acid(codons[j]) {
        return Err(SwapError::DifferentAminoAcids { i, j });
    }
    if codons[i] == codons[j] {
        return Ok(0.0);
    }
    Ok(swap_delta_total(codons, i, j, table) / (len - 1) as f64)
}

/// Total-score delta of swapping positions `i < j`; callers have validated
/// the positions.
pub(crate) fn swap_delta_total(codons: &[Codon], i: usize, j: usize, table: &CpsTable) -> f64 {
    let len = codons.len();
    let swapped = |k: usize| {
        if k == i {
            codons[j]
        } else if k == j {
            codons[i]
        } else {
            codons[k]
        }
    };
    // Pair p covers codons (p, p+1); those touching i or j change.
    let mut affected = [usize::MAX; 4];
    let mut n_affected = 0;
    for candidate in [i.wrapping_sub(1), i, j.wrapping_sub(1), j] {
        if candidate < len - 1 && !affected[..n_affected].contains(&candidate) {
            affected[n_affected] = candidate;
            n_affected += 1;
        }
    }
    let mut delta = 0.0;
    for &p in &affected[..n_affected] {
        delta += table.score(swapped(p), swapped(p + 1)) - table.score(codons[p], codons[p + 1]);
    }
    delta
}

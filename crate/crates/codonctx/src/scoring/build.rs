//! CPS table construction from a corpus of coding sequences.

use crate::seq::{AminoAcid, Codon, CodonSeq, GeneticCode, SENSE_CODON_COUNT};

use super::{pair_index, CpsTable, LogBase, PairObsExp, TableError, PAIR_COUNT};

/// Occurrence counts gathered from a corpus: ordered codon pairs, single
/// codons, amino-acid pairs, and single amino acids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairCounts {
    pair_observed: Vec<u64>,
    codon_counts: [u64; SENSE_CODON_COUNT],
    aa_pair_counts: Vec<u64>,
    aa_counts: [u64; 20],
    pub total_codons: u64,
    pub total_pairs: u64,
}

impl PairCounts {
    /// Count all codons and all adjacent codon pairs of each record; pairs
    /// never span record boundaries.
    pub fn from_corpus(corpus: &[CodonSeq]) -> PairCounts {
        let code = GeneticCode::standard();
        let mut counts = PairCounts {
            pair_observed: vec![0; PAIR_COUNT],
            codon_counts: [0; SENSE_CODON_COUNT],
            aa_pair_counts: vec![0; 400],
            aa_counts: [0; 20],
            total_codons: 0,
            total_pairs: 0,
        };
        for seq in corpus {
            for &c in seq.codons() {
                counts.codon_counts[c.sense_index().unwrap()] += 1;
                counts.aa_counts[code.amino_acid(c).unwrap().index()] += 1;
                counts.total_codons += 1;
            }
            for (a, b) in seq.pairs() {
                counts.pair_observed[pair_index(a, b).unwrap()] += 1;
                let x = code.amino_acid(a).unwrap().index();
                let y = code.amino_acid(b).unwrap().index();
                counts.aa_pair_counts[x * 20 + y] += 1;
                counts.total_pairs += 1;
            }
        }
        counts
    }

    pub fn observed(&self, a: Codon, b: Codon) -> u64 {
        self.pair_observed[pair_index(a, b).expect("sense codons")]
    }

    pub fn codon_count(&self, c: Codon) -> u64 {
        self.codon_counts[c.sense_index().expect("sense codon")]
    }

    pub fn aa_count(&self, aa: AminoAcid) -> u64 {
        self.aa_counts[aa.index()]
    }

    pub fn aa_pair_count(&self, x: AminoAcid, y: AminoAcid) -> u64 {
        self.aa_pair_counts[x.index() * 20 + y.index()]
    }

    /// Expected occurrences of the ordered pair (a, b) under codon
    /// independence, in count space:
    /// E_ab = (N_a * N_b) / (N_X * N_Y) * N_XY
    /// where X, Y are the amino acids of a and b.
    pub fn expected(&self, a: Codon, b: Codon) -> f64 {
        let code = GeneticCode::standard();
        let x = code.amino_acid(a).unwrap();
        let y = code.amino_acid(b).unwrap();
        let nx = self.aa_count(x);
        let ny = self.aa_count(y);
        if nx == 0 || ny == 0 {
            return 0.0;
        }
        (self.codon_count(a) as f64 / nx as f64)
            * (self.codon_count(b) as f64 / ny as f64)
            * self.aa_pair_count(x, y) as f64
    }

    /// All counts multiplied by a positive integer. Scores built from scaled
    /// counts are identical: the scale cancels in O/E.
    pub fn scaled(&self, factor: u64) -> PairCounts {
        assert!(factor > 0, "scale factor must be positive");
        let mut scaled = self.clone();
        for v in &mut scaled.pair_observed {
            *v *= factor;
        }
        for v in &mut scaled.codon_counts {
            *v *= factor;
        }
        for v in &mut scaled.aa_pair_counts {
            *v *= factor;
        }
        for v in &mut scaled.aa_counts {
            *v *= factor;
        }
        scaled.total_codons *= factor;
        scaled.total_pairs *= factor;
        scaled
    }
}

/// Build a CPS table from a corpus: score = log(O/E) for observed pairs,
/// the default floor score (flagged) for pairs never observed.
pub fn build_cps_table(
    corpus: &[CodonSeq],
    log_base: LogBase,
) -> Result<(CpsTable, PairCounts), TableError> {
    build_cps_table_with_floor(corpus, log_base, super::DEFAULT_FLOOR_SCORE)
}

/// `build_cps_table` with a configurable floor for zero-observed pairs.
pub fn build_cps_table_with_floor(
    corpus: &[CodonSeq],
    log_base: LogBase,
    floor_score: f64,
) -> Result<(CpsTable, PairCounts), TableError> {
    if corpus.is_empty() {
        return Err(TableError::EmptyCorpus);
    }
    let counts = PairCounts::from_corpus(corpus);
    let mut table = CpsTable::empty(log_base, "corpus".into());
    table.set_floor_score(floor_score);
    let code = GeneticCode::standard();
    for &a in code.sense_codons() {
        for &b in code.sense_codons() {
            let observed = counts.observed(a, b);
            let expected = counts.expected(a, b);
            let score = if observed > 0 {
                log_base.log(observed as f64 / expected)
            } else {
                floor_score
            };
            table.insert(a, b, score, Some(PairObsExp { observed, expected }), 0)?;
            if observed == 0 {
                table.mark_floored(a, b);
            }
        }
    }
    Ok((table, counts))
}

/// Rescale a group's expected counts so their sum equals the observed sum:
/// E_nor_i = (sum O / sum E) * E_i. Returns `None` when `sum E == 0`.
pub fn normalize_group(observed: &[u64], expected: &[f64]) -> Option<Vec<f64>> {
    let sum_o: f64 = observed.iter().map(|&o| o as f64).sum();
    let sum_e: f64 = expected.iter().sum();
    if sum_e == 0.0 {
        return None;
    }
    let coefficient = sum_o / sum_e;
    Some(expected.iter().map(|&e| coefficient * e).collect())
}

/// Build a normalized CPS table: within each group of codon pairs encoding
/// the same amino-acid pair, expected counts are rescaled so the group's
/// expected sum equals its observed sum, and scores use log base 1.5.
pub fn normalize_cps(counts: &PairCounts) -> Result<CpsTable, TableError> {
    let code = GeneticCode::standard();
    let log_base = LogBase::Base(1.5);
    let mut table = CpsTable::empty(log_base, "corpus (normalized)".into());
    for x in AminoAcid::all() {
        for y in AminoAcid::all() {
            let mut members = Vec::new();
            for &a in code.synonymous_codons(x) {
                for &b in code.synonymous_codons(y) {
                    members.push((a, b));
                }
            }
            let observed: Vec<u64> = members.iter().map(|&(a, b)| counts.observed(a, b)).collect();
            let expected: Vec<f64> = members.iter().map(|&(a, b)| counts.expected(a, b)).collect();
            let normalized = normalize_group(&observed, &expected)
                .ok_or(TableError::EmptyGroup { first: x, second: y })?;
            for ((&(a, b), &obs), &e_nor) in members.iter().zip(&observed).zip(&normalized) {
                let score = if obs > 0 {
                    log_base.log(obs as f64 / e_nor)
                } else {
                    table.floor_score()
                };
                table.insert(a, b, score, Some(PairObsExp { observed: obs, expected: e_nor }), 0)?;
                if obs == 0 {
                    table.mark_floored(a, b);
                }
            }
        }
    }
    Ok(table)
}

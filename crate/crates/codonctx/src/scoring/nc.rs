//! Effective number of codons from estimated homozygosity of synonymous
//! codon usage.

use std::fmt;

use crate::seq::{AminoAcid, Codon, CodonSeq, GeneticCode, SENSE_CODON_COUNT};

/// Synonymous codon usage counts of a single gene.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodonUsage {
    counts: [u64; SENSE_CODON_COUNT],
}

impl CodonUsage {
    pub fn from_seq(seq: &CodonSeq) -> CodonUsage {
        let mut usage = CodonUsage { counts: [0; SENSE_CODON_COUNT] };
        for &c in seq.codons() {
            usage.counts[c.sense_index().unwrap()] += 1;
        }
        usage
    }

    pub fn count(&self, codon: Codon) -> u64 {
        codon.sense_index().map(|i| self.counts[i]).unwrap_or(0)
    }

    /// Usage counts n_1..n_k over the synonymous codons of `aa` and their
    /// total n.
    pub fn amino_acid_usage(&self, aa: AminoAcid, code: &GeneticCode) -> (Vec<u64>, u64) {
        let counts: Vec<u64> =
            code.synonymous_codons(aa).iter().map(|&c| self.count(c)).collect();
        let total = counts.iter().sum();
        (counts, total)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NcExclusionReason {
    /// Usage below two codons; estimated homozygosity is undefined.
    InsufficientUsage { n: u64 },
    /// Estimated homozygosity came out non-positive.
    NonPositiveHomozygosity { f_hat: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct NcExclusion {
    pub amino_acid: AminoAcid,
    pub reason: NcExclusionReason,
}

impl fmt::Display for NcExclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.reason {
            NcExclusionReason::InsufficientUsage { n } => {
                write!(f, "{}: usage {} below 2", self.amino_acid, n)
            }
            NcExclusionReason::NonPositiveHomozygosity { f_hat } => {
                write!(f, "{}: homozygosity {:.4} not positive", self.amino_acid, f_hat)
            }
        }
    }
}

/// Per-amino-acid contributions (1 / F_hat) and the exclusions.
#[derive(Debug, Clone, PartialEq)]
pub struct NcReport {
    pub contributions: Vec<(AminoAcid, f64)>,
    pub excluded: Vec<NcExclusion>,
}

impl NcReport {
    /// The whole-gene effective number of codons: the sum of contributions.
    /// `None` when no amino acid qualified.
    pub fn value(&self) -> Option<f64> {
        (!self.contributions.is_empty())
            .then(|| self.contributions.iter().map(|&(_, c)| c).sum())
    }
}

/// Effective number of codons, summed over amino acids. Per amino acid with
/// usage total n >= 2 and usage fractions p_i:
///
///   F_hat = (n * sum(p_i^2) - 1) / (n - 1),    contribution = 1 / F_hat
///
/// Amino acids with n < 2 or F_hat <= 0 are excluded and reported.
pub fn effective_number_of_codons(usage: &CodonUsage) -> NcReport {
    let code = GeneticCode::standard();
    let mut report = NcReport { contributions: Vec::new(), excluded: Vec::new() };
    let mut bounded = true;
    for aa in AminoAcid::all() {
        let (counts, n) = usage.amino_acid_usage(aa, code);
        if n < 2 {
            report.excluded.push(NcExclusion {
                amino_acid: aa,
                reason: NcExclusionReason::InsufficientUsage { n },
            });
            continue;
        }
        let n_f = n as f64;
        let sum_p2: f64 = counts
            .iter()
            .map(|&ni| {
                let p = ni as f64 / n_f;
                p * p
            })
            .sum();
        let f_hat = (n_f * sum_p2 - 1.0) / (n_f - 1.0);
        if f_hat <= 0.0 {
            report.excluded.push(NcExclusion {
                amino_acid: aa,
                reason: NcExclusionReason::NonPositiveHomozygosity { f_hat },
            });
            continue;
        }
        bounded &= f_hat >= 1.0 / counts.len() as f64;
        report.contributions.push((aa, 1.0 / f_hat));
    }
    // The [20, 61] range only holds when every amino acid qualified and no
    // estimated homozygosity fell below 1/k (finite-usage overshoot).
    if report.excluded.is_empty() && bounded {
        let value = report.value().unwrap();
        debug_assert!(
            (20.0 - 1e-9..=61.0 + 1e-9).contains(&value),
            "effective number of codons {value} outside [20, 61]"
        );
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::validate_cds;

    fn usage_of(text: &str) -> CodonUsage {
        CodonUsage::from_seq(&validate_cds(text).unwrap().seq)
    }

    #[test]
    fn monomorphic_usage_contributes_one() {
        // One amino acid, a single codon used 10 times: p = 1,
        // F_hat = (10 - 1) / 9 = 1, contribution 1.
        let usage = usage_of(&"AAA".repeat(10));
        let report = effective_number_of_codons(&usage);
        assert_eq!(report.contributions, vec![(AminoAcid::from_letter('K').unwrap(), 1.0)]);
        assert_eq!(report.value(), Some(1.0));
        assert_eq!(report.excluded.len(), 19);
    }

    #[test]
    fn even_two_codon_usage() {
        // Two codons used 50/50 of n = 100: sum p^2 = 0.5,
        // F_hat = 49/99, contribution = 99/49 = 2.0204...
        let text = format!("{}{}", "AAA".repeat(50), "AAG".repeat(50));
        let report = effective_number_of_codons(&usage_of(&text));
        let value = report.value().unwrap();
        assert!((value - 99.0 / 49.0).abs() < 1e-12, "value {value}");
        assert!((value - 2.0204).abs() < 1e-3);
    }

    #[test]
    fn one_codon_per_amino_acid_gives_twenty() {
        // All 20 amino acids present, each using exactly one codon n >= 2
        // times: the effective number of codons is 20.
        let code = GeneticCode::standard();
        let mut text = String::new();
        for aa in AminoAcid::all() {
            let codon = code.synonymous_codons(aa)[0];
            text.push_str(&codon.to_string().repeat(3));
        }
        let report = effective_number_of_codons(&usage_of(&text));
        assert!(report.excluded.is_empty());
        let value = report.value().unwrap();
        assert!((value - 20.0).abs() < 1e-12, "value {value}");
    }

    #[test]
    fn low_usage_excluded_with_reason() {
        let report = effective_number_of_codons(&usage_of("AAAAAA"));
        // Lysine qualifies; every other amino acid is reported at n = 0.
        assert_eq!(report.contributions.len(), 1);
        assert!(report
            .excluded
            .iter()
            .all(|e| matches!(e.reason, NcExclusionReason::InsufficientUsage { .. })));
    }

    #[test]
    fn nonpositive_homozygosity_excluded() {
        // n = 2 over two distinct codons of a 2-codon amino acid:
        // sum p^2 = 0.5, F_hat = (2 * 0.5 - 1) / 1 = 0 -> excluded.
        let report = effective_number_of_codons(&usage_of("AAAAAG"));
        assert!(report.value().is_none());
        assert_eq!(report.excluded.len(), 20);
        let lys = report
            .excluded
            .iter()
            .find(|e| e.amino_acid == AminoAcid::from_letter('K').unwrap())
            .unwrap();
        assert!(matches!(
            lys.reason,
            NcExclusionReason::NonPositiveHomozygosity { f_hat } if f_hat == 0.0
        ));
    }

    #[test]
    fn uniform_usage_of_all_codons_approaches_61() {
        // Every sense codon used m = 30 times. Per amino acid with k codons:
        // n = 30k, sum p^2 = 1/k, F_hat = 29/(30k - 1), contribution
        // (30k - 1)/29; the total tends to 61 as m grows (overshooting
        // slightly at finite m since F_hat < 1/k).
        let code = GeneticCode::standard();
        let mut text = String::new();
        for &c in code.sense_codons() {
            text.push_str(&c.to_string().repeat(30));
        }
        let report = effective_number_of_codons(&usage_of(&text));
        let value = report.value().unwrap();
        let exact = (30.0 * 61.0 - 20.0) / 29.0;
        assert!((value - exact).abs() < 1e-9, "value {value} exact {exact}");
    }
}

//! Sequence domain types: coding sequences, proteins, codon distributions,
//! FASTA ingestion, and seeded synonymous recoding.

mod code;
mod fasta;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub use code::{AminoAcid, Codon, GeneticCode, AMINO_ACIDS, SENSE_CODON_COUNT};
pub use fasta::{parse_fasta, write_fasta, FastaError, FastaRecord};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeqError {
    #[error("illegal base '{base}'")]
    IllegalBase { base: char },
    #[error("codon must be 3 bases, got {text:?}")]
    BadCodonLength { text: String },
    #[error("'{letter}' is not an amino acid letter")]
    IllegalAminoAcid { letter: char },
}

/// Errors raised while validating a raw nucleotide sequence as a CDS.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CdsError {
    #[error("illegal character '{ch}' at base {offset}")]
    IllegalChar { offset: usize, ch: char },
    #[error("length {len} is not divisible by 3")]
    LengthNotMultipleOfThree { len: usize },
    /// `position` is the 1-based codon position of the offending STOP.
    #[error("internal STOP at codon {position}")]
    InternalStop { position: usize },
    #[error("sequence contains no sense codons")]
    Empty,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DistributionError {
    #[error("inconsistent distribution: amino acid {amino_acid} needs {required} codons, distribution provides {provided}")]
    Inconsistent { amino_acid: AminoAcid, required: usize, provided: usize },
    #[error("distribution contains STOP codon {codon}")]
    StopCodon { codon: Codon },
}

/// An ordered protein sequence over the 20-letter alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AminoAcidSeq {
    residues: Vec<AminoAcid>,
}

impl AminoAcidSeq {
    pub fn new(residues: Vec<AminoAcid>) -> AminoAcidSeq {
        AminoAcidSeq { residues }
    }

    pub fn residues(&self) -> &[AminoAcid] {
        &self.residues
    }

    pub fn len(&self) -> usize {
        self.residues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty()
    }

    /// Occurrences of each amino acid, canonical order, zeros omitted.
    pub fn residue_counts(&self) -> BTreeMap<AminoAcid, usize> {
        let mut counts = BTreeMap::new();
        for &aa in &self.residues {
            *counts.entry(aa).or_insert(0) += 1;
        }
        counts
    }
}

impl FromStr for AminoAcidSeq {
    type Err = SeqError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(AminoAcid::from_letter)
            .collect::<Result<Vec<_>, _>>()
            .map(AminoAcidSeq::new)
    }
}

impl fmt::Display for AminoAcidSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for aa in &self.residues {
            write!(f, "{aa}")?;
        }
        Ok(())
    }
}

/// An mRNA coding sequence as an ordered list of sense codons.
///
/// Construction rejects STOP codons and empty sequences. Scoring and
/// optimization additionally require at least two codons (one codon pair);
/// `validate_cds` may legitimately produce a single-codon sequence after
/// stripping a trailing STOP.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodonSeq {
    codons: Vec<Codon>,
}

impl CodonSeq {
    pub fn new(codons: Vec<Codon>) -> Result<CodonSeq, CdsError> {
        if codons.is_empty() {
            return Err(CdsError::Empty);
        }
        let code = GeneticCode::standard();
        for (i, &c) in codons.iter().enumerate() {
            if code.is_stop(c) {
                return Err(CdsError::InternalStop { position: i + 1 });
            }
        }
        Ok(CodonSeq { codons })
    }

    pub fn codons(&self) -> &[Codon] {
        &self.codons
    }

    /// Length in codons.
    pub fn len(&self) -> usize {
        self.codons.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Number of adjacent codon pairs (length minus one).
    pub fn n_pairs(&self) -> usize {
        self.codons.len() - 1
    }

    /// Adjacent ordered codon pairs, 5' to 3'.
    pub fn pairs(&self) -> impl Iterator<Item = (Codon, Codon)> + '_ {
        self.codons.windows(2).map(|w| (w[0], w[1]))
    }

    /// Codon counts of this sequence.
    pub fn distribution(&self) -> CodonDistribution {
        let mut counts = BTreeMap::new();
        for &c in &self.codons {
            *counts.entry(c).or_insert(0) += 1;
        }
        CodonDistribution { counts }
    }

    pub fn translate(&self, code: &GeneticCode) -> AminoAcidSeq {
        let residues = self
            .codons
            .iter()
            .map(|&c| code.amino_acid(c).expect("CodonSeq holds no STOP codons"))
            .collect();
        AminoAcidSeq::new(residues)
    }

    /// The nucleotide string, e.g. `"AAAAAT"`.
    pub fn to_nucleotides(&self) -> String {
        let mut s = String::with_capacity(self.codons.len() * 3);
        for c in &self.codons {
            s.push_str(&c.to_string());
        }
        s
    }
}

/// Outcome of validating a raw nucleotide sequence as a coding sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidatedCds {
    pub seq: CodonSeq,
    /// The trailing STOP codon, if one was present and stripped.
    pub trailing_stop: Option<Codon>,
}

/// Validate a raw nucleotide sequence as a CDS: normalize case and RNA `U`,
/// require length divisible by 3, strip (and record) a single trailing STOP
/// codon, and reject internal STOPs.
pub fn validate_cds(raw: &str) -> Result<ValidatedCds, CdsError> {
    let mut bases = Vec::with_capacity(raw.len());
    for ch in raw.chars() {
        if ch.is_ascii_whitespace() {
            continue;
        }
        match ch.to_ascii_uppercase() {
            'A' => bases.push(b'A'),
            'C' => bases.push(b'C'),
            'G' => bases.push(b'G'),
            'T' | 'U' => bases.push(b'T'),
            _ => return Err(CdsError::IllegalChar { offset: bases.len() + 1, ch }),
        }
    }
    if bases.len() % 3 != 0 {
        return Err(CdsError::LengthNotMultipleOfThree { len: bases.len() });
    }
    let code = GeneticCode::standard();
    let mut codons: Vec<Codon> = bases
        .chunks_exact(3)
        .map(|c| Codon::from_bytes([c[0], c[1], c[2]]).expect("bases already normalized"))
        .collect();
    let trailing_stop = match codons.last() {
        Some(&last) if code.is_stop(last) => {
            codons.pop();
            Some(last)
        }
        _ => None,
    };
    Ok(ValidatedCds { seq: CodonSeq::new(codons)?, trailing_stop })
}

/// Translate a coding sequence into its protein.
pub fn translate(seq: &CodonSeq, code: &GeneticCode) -> AminoAcidSeq {
    seq.translate(code)
}

/// Per-codon counts that constrained recoding must preserve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodonDistribution {
    counts: BTreeMap<Codon, usize>,
}

impl CodonDistribution {
    /// Build from (codon, count) pairs; zero counts are dropped, duplicate
    /// codons accumulate, STOP codons are rejected.
    pub fn from_counts(
        counts: impl IntoIterator<Item = (Codon, usize)>,
    ) -> Result<CodonDistribution, DistributionError> {
        let code = GeneticCode::standard();
        let mut map = BTreeMap::new();
        for (codon, count) in counts {
            if code.is_stop(codon) {
                return Err(DistributionError::StopCodon { codon });
            }
            if count > 0 {
                *map.entry(codon).or_insert(0) += count;
            }
        }
        Ok(CodonDistribution { counts: map })
    }

    pub fn count(&self, codon: Codon) -> usize {
        self.counts.get(&codon).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    /// Codons with nonzero count, lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (Codon, usize)> + '_ {
        self.counts.iter().map(|(&c, &n)| (c, n))
    }

    /// Codons of `aa` with nonzero count, lexicographic order.
    pub fn codons_of(&self, aa: AminoAcid, code: &GeneticCode) -> Vec<(Codon, usize)> {
        code.synonymous_codons(aa)
            .iter()
            .filter_map(|&c| {
                let n = self.count(c);
                (n > 0).then_some((c, n))
            })
            .collect()
    }

    /// Check that, for every amino acid, the distribution provides exactly
    /// as many codons as `protein` requires.
    pub fn check_consistent(
        &self,
        protein: &AminoAcidSeq,
        code: &GeneticCode,
    ) -> Result<(), DistributionError> {
        let required = protein.residue_counts();
        for aa in AminoAcid::all() {
            let need = required.get(&aa).copied().unwrap_or(0);
            let have: usize = code.synonymous_codons(aa).iter().map(|&c| self.count(c)).sum();
            if need != have {
                return Err(DistributionError::Inconsistent {
                    amino_acid: aa,
                    required: need,
                    provided: have,
                });
            }
        }
        Ok(())
    }
}

/// Extract the codon counts of a coding sequence.
pub fn extract_codon_distribution(seq: &CodonSeq) -> CodonDistribution {
    seq.distribution()
}

/// A uniformly random synonymous encoding of `protein` realizing exactly the
/// codon counts in `dist`. Deterministic per seed.
pub fn random_synonymous_encoding(
    protein: &AminoAcidSeq,
    dist: &CodonDistribution,
    seed: u64,
) -> Result<CodonSeq, DistributionError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_synonymous_encoding_with(protein, dist, &mut rng)
}

/// Variant drawing from a caller-supplied RNG stream.
pub fn random_synonymous_encoding_with<R: Rng>(
    protein: &AminoAcidSeq,
    dist: &CodonDistribution,
    rng: &mut R,
) -> Result<CodonSeq, DistributionError> {
    let code = GeneticCode::standard();
    dist.check_consistent(protein, code)?;

    // One shuffled pool per amino acid; positions consume the pool in order,
    // which is uniform over the distinct arrangements.
    let mut pools: BTreeMap<AminoAcid, Vec<Codon>> = BTreeMap::new();
    for aa in AminoAcid::all() {
        let mut pool = Vec::new();
        for (codon, count) in dist.codons_of(aa, code) {
            pool.extend(std::iter::repeat_n(codon, count));
        }
        if !pool.is_empty() {
            pool.shuffle(rng);
            pools.insert(aa, pool);
        }
    }
    let mut cursors: BTreeMap<AminoAcid, usize> = BTreeMap::new();
    let codons = protein
        .residues()
        .iter()
        .map(|&aa| {
            let cursor = cursors.entry(aa).or_insert(0);
            let codon = pools[&aa][*cursor];
            *cursor += 1;
            codon
        })
        .collect();
    Ok(CodonSeq::new(codons).expect("distribution holds only sense codons"))
}

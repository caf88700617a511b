//! Shared helpers for unit tests: random tables, corpora, and distributions.

use std::collections::BTreeMap;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::scoring::{CpsTable, LogBase};
use crate::seq::{AminoAcid, AminoAcidSeq, Codon, CodonDistribution, CodonSeq, GeneticCode};

/// A full table of uniform random scores in (-3, 3).
pub(crate) fn random_table(rng: &mut ChaCha8Rng) -> CpsTable {
    let code = GeneticCode::standard();
    let mut entries = Vec::new();
    for &a in code.sense_codons() {
        for &b in code.sense_codons() {
            entries.push(((a, b), rng.random_range(-3.0..3.0)));
        }
    }
    CpsTable::from_scores(entries, LogBase::Natural, "random").unwrap()
}

/// Random records of uniform random sense codons.
pub(crate) fn random_corpus(rng: &mut ChaCha8Rng, records: usize, len: usize) -> Vec<CodonSeq> {
    let code = GeneticCode::standard();
    (0..records)
        .map(|_| {
            let codons: Vec<Codon> =
                (0..len).map(|_| *code.sense_codons().choose(rng).unwrap()).collect();
            CodonSeq::new(codons).unwrap()
        })
        .collect()
}

/// Every ordered sense-codon pair as its own 2-codon record; observed and
/// expected counts coincide exactly.
pub(crate) fn uniform_pair_corpus() -> Vec<CodonSeq> {
    let code = GeneticCode::standard();
    let mut corpus = Vec::new();
    for &a in code.sense_codons() {
        for &b in code.sense_codons() {
            corpus.push(CodonSeq::new(vec![a, b]).unwrap());
        }
    }
    corpus
}

/// A random protein of `len` residues.
pub(crate) fn random_protein(rng: &mut ChaCha8Rng, len: usize) -> AminoAcidSeq {
    let pool: Vec<AminoAcid> = AminoAcid::all().collect();
    AminoAcidSeq::new((0..len).map(|_| *pool.choose(rng).unwrap()).collect())
}

/// A random consistent distribution: extracted from a random encoding.
pub(crate) fn random_distribution(
    rng: &mut ChaCha8Rng,
    protein: &AminoAcidSeq,
) -> CodonDistribution {
    let code = GeneticCode::standard();
    let codons: Vec<Codon> = protein
        .residues()
        .iter()
        .map(|&aa| *code.synonymous_codons(aa).choose(rng).unwrap())
        .collect();
    CodonSeq::new(codons).unwrap().distribution()
}

/// The distribution forcing the first synonymous codon everywhere.
pub(crate) fn forced_distribution(protein: &AminoAcidSeq) -> CodonDistribution {
    let code = GeneticCode::standard();
    let mut counts: BTreeMap<Codon, usize> = BTreeMap::new();
    for &aa in protein.residues() {
        *counts.entry(code.synonymous_codons(aa)[0]).or_insert(0) += 1;
    }
    CodonDistribution::from_counts(counts).unwrap()
}

//! Helpers shared by the integration test suites.
#![allow(dead_code)] // each suite uses a different subset

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use codonctx::scoring::LogBase;
use codonctx::{AminoAcid, AminoAcidSeq, Codon, CodonDistribution, CodonSeq, CpsTable, GeneticCode};

/// A full table of uniform random scores in (-3, 3).
pub fn random_table(rng: &mut ChaCha8Rng) -> CpsTable {
    let code = GeneticCode::standard();
    let mut entries = Vec::new();
    for &a in code.sense_codons() {
        for &b in code.sense_codons() {
            entries.push(((a, b), rng.random_range(-3.0..3.0)));
        }
    }
    CpsTable::from_scores(entries, LogBase::Natural, "random").unwrap()
}

/// A random protein of `len` residues over the full amino acid alphabet.
pub fn random_protein(rng: &mut ChaCha8Rng, len: usize) -> AminoAcidSeq {
    let pool: Vec<AminoAcid> = AminoAcid::all().collect();
    AminoAcidSeq::new((0..len).map(|_| *pool.choose(rng).unwrap()).collect())
}

/// A random consistent distribution: the counts of a random encoding.
pub fn random_distribution(rng: &mut ChaCha8Rng, protein: &AminoAcidSeq) -> CodonDistribution {
    let code = GeneticCode::standard();
    let codons: Vec<Codon> = protein
        .residues()
        .iter()
        .map(|&aa| *code.synonymous_codons(aa).choose(rng).unwrap())
        .collect();
    CodonSeq::new(codons).unwrap().distribution()
}

/// Random codon sequence of `len` sense codons.
pub fn random_codon_seq(rng: &mut ChaCha8Rng, len: usize) -> CodonSeq {
    let code = GeneticCode::standard();
    let codons: Vec<Codon> = (0..len).map(|_| *code.sense_codons().choose(rng).unwrap()).collect();
    CodonSeq::new(codons).unwrap()
}

/// All synonymous encodings of `protein`, by full enumeration (test oracle
/// for the unconstrained optimizer). Callers keep the degeneracy product
/// small.
pub fn enumerate_unconstrained(protein: &AminoAcidSeq) -> Vec<CodonSeq> {
    let code = GeneticCode::standard();
    let mut results: Vec<Vec<Codon>> = vec![Vec::new()];
    for &aa in protein.residues() {
        let mut next = Vec::new();
        for prefix in &results {
            for &c in code.synonymous_codons(aa) {
                let mut extended = prefix.clone();
                extended.push(c);
                next.push(extended);
            }
        }
        results = next;
    }
    results.into_iter().map(|cs| CodonSeq::new(cs).unwrap()).collect()
}

/// Degeneracy product of a protein (number of unconstrained encodings).
pub fn encoding_space(protein: &AminoAcidSeq) -> u64 {
    let code = GeneticCode::standard();
    protein
        .residues()
        .iter()
        .map(|&aa| code.synonymous_codons(aa).len() as u64)
        .product()
}

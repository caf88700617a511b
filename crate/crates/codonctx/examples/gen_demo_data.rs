//! Regenerates the bundled demo files under `data/`:
//!
//!   cargo run --release -p codonctx --example gen_demo_data
//!
//! The corpus is synthetic (seeded uniform codon draws), sized so every
//! ordered sense-codon pair is observed; the table is built from it with
//! natural-log scores; the demo genes are random coding sequences with a
//! start codon and a trailing STOP.

use std::path::Path;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use codonctx::scoring::{build_cps_table, write_cps_table, LogBase};
use codonctx::seq::{write_fasta, FastaRecord};
use codonctx::{Codon, CodonSeq, GeneticCode};

fn main() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../..");
    let data = root.join("data");
    std::fs::create_dir_all(&data).expect("create data/");
    let code = GeneticCode::standard();
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);

    // Corpus: 240 records of 300 codons. ~71,760 pairs over 3,721 pair
    // types; verify full coverage rather than trusting the odds.
    let corpus: Vec<CodonSeq> = (0..240)
        .map(|_| {
            let codons: Vec<Codon> =
                (0..300).map(|_| *code.sense_codons().choose(&mut rng).unwrap()).collect();
            CodonSeq::new(codons).unwrap()
        })
        .collect();
    let (table, counts) = build_cps_table(&corpus, LogBase::Natural).unwrap();
    assert!(
        table.floored_pairs().is_empty(),
        "demo corpus must observe every codon pair; re-seed ({} unobserved)",
        table.floored_pairs().len()
    );
    assert_eq!(counts.total_pairs, 240 * 299);

    let corpus_records: Vec<FastaRecord> = corpus
        .iter()
        .enumerate()
        .map(|(i, seq)| FastaRecord {
            id: format!("corpus_{i:03}"),
            sequence: seq.to_nucleotides(),
        })
        .collect();
    std::fs::write(data.join("demo_corpus.fasta"), write_fasta(&corpus_records)).unwrap();
    std::fs::write(data.join("demo_table.tsv"), write_cps_table(&table)).unwrap();

    // Demo genes: random CDSes (start codon, body, trailing STOP).
    let mut genes = Vec::new();
    for (name, len) in [("demo_short", 60usize), ("demo_mid", 150), ("demo_long", 400)] {
        let mut codons = vec!["ATG".parse::<Codon>().unwrap()];
        for _ in 0..len {
            codons.push(*code.sense_codons().choose(&mut rng).unwrap());
        }
        let seq = CodonSeq::new(codons).unwrap();
        genes.push(FastaRecord {
            id: name.to_string(),
            sequence: format!("{}TAA", seq.to_nucleotides()),
        });
    }
    std::fs::write(data.join("demo_genes.fasta"), write_fasta(&genes)).unwrap();

    println!("wrote {}", data.join("demo_corpus.fasta").display());
    println!("wrote {}", data.join("demo_table.tsv").display());
    println!("wrote {}", data.join("demo_genes.fasta").display());
}

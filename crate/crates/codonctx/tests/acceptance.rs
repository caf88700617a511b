//! Acceptance suite: one test per release criterion, each printing a
//! PASS/FAIL line. Criteria 3 and 4 need external reference data (a human
//! codon pair score table and the GFP coding sequence); when the files are
//! absent they print SKIP and are covered by criteria 1 and 5.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use codonctx::opt::{
    enumerate_all, optimize_bnb, optimize_exact_dp, optimize_sa, optimize_unconstrained,
    BnbOptions, Direction, InitialIncumbent, SaParams, DEFAULT_STATE_CAP,
};
use codonctx::scoring::{
    build_cps_table, cpb, cpb_delta_swap, normalize_cps, read_cps_table, LogBase, PairCounts,
};
use codonctx::seq::{parse_fasta, validate_cds};
use codonctx::stats::{distribution_from_table, pvalue, significant_interval, CpbDistribution};
use codonctx::{AminoAcid, AminoAcidSeq, Codon, CodonDistribution, CodonSeq, GeneticCode};

use common::*;

fn criterion(name: &str, f: impl FnOnce()) {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(()) => println!("acceptance {name}: PASS"),
        Err(err) => {
            println!("acceptance {name}: FAIL");
            std::panic::resume_unwind(err);
        }
    }
}

// ---------------------------------------------------------------------------
// Criterion 1: oracle equivalence of the exact optimizers
// ---------------------------------------------------------------------------

#[test]
fn criterion_1_oracle_equivalence() {
    criterion("criterion 1 (oracle equivalence)", || {
        let start = Instant::now();
        let mut rng = ChaCha8Rng::seed_from_u64(0xC0D0);
        let mut instances = 0;
        while instances < 200 {
            let len = 2 + (instances % 9);
            let protein = random_protein(&mut rng, len);
            let dist = random_distribution(&mut rng, &protein);
            let table = random_table(&mut rng);
            let direction =
                if instances % 2 == 0 { Direction::Maximize } else { Direction::Minimize };

            let encodings = match enumerate_all(&protein, &dist, &table) {
                Ok(e) => e,
                Err(_) => continue, // astronomically rare at this size
            };
            let oracle = encodings
                .iter()
                .map(|&(_, c)| c)
                .fold(direction.worst(), |a, v| if direction.better(v, a) { v } else { a });

            let dp = optimize_exact_dp(&protein, &dist, &table, direction, DEFAULT_STATE_CAP)
                .expect("state cap ample at this size");
            let bnb = optimize_bnb(
                &protein,
                &dist,
                &table,
                direction,
                None,
                &BnbOptions { initial: InitialIncumbent::None, ..Default::default() },
            )
            .unwrap();
            assert_eq!(dp.cpb, oracle, "exact DP disagrees with enumeration");
            assert_eq!(bnb.cpb, oracle, "branch and bound disagrees with enumeration");
            assert_eq!(dp.sequence.distribution(), dist);
            assert_eq!(bnb.sequence.distribution(), dist);

            // Unconstrained optimum against unconstrained enumeration, kept
            // to enumerable degeneracy products.
            if encoding_space(&protein) <= 50_000 {
                let free = optimize_unconstrained(&protein, &table, direction);
                let free_oracle = enumerate_unconstrained(&protein)
                    .iter()
                    .map(|s| cpb(s, &table))
                    .fold(direction.worst(), |a, v| if direction.better(v, a) { v } else { a });
                assert_eq!(free.cpb, free_oracle, "DP disagrees with unconstrained enumeration");
            }
            instances += 1;
        }
        let elapsed = start.elapsed();
        assert!(elapsed.as_secs() < 60, "criterion 1 took {elapsed:?}, budget is 60 s");
    });
}

// ---------------------------------------------------------------------------
// Criterion 2: statistics reproduction (reference mean 0.075, variance 0.132)
// ---------------------------------------------------------------------------

#[test]
fn criterion_2_statistics_reproduction() {
    criterion("criterion 2 (statistics reproduction)", || {
        let dist = CpbDistribution::new(0.075, 0.132, "reference").unwrap();
        let cases = [
            (100usize, 0.004, 0.146),
            (400, 0.039, 0.111),
            (1600, 0.057, 0.093),
        ];
        for (n, lo_expected, hi_expected) in cases {
            let (lo, hi) = significant_interval(n, 0.05, &dist).unwrap();
            assert!(
                (lo - lo_expected).abs() <= 0.001,
                "interval lower bound at n={n}: {lo} vs {lo_expected}"
            );
            assert!(
                (hi - hi_expected).abs() <= 0.001,
                "interval upper bound at n={n}: {hi} vs {hi_expected}"
            );
            for bound in [lo_expected, hi_expected] {
                let p = pvalue(bound, n, &dist).unwrap();
                assert!(
                    (p - 0.05).abs() <= 0.005,
                    "p-value at published bound {bound} (n={n}): {p}"
                );
            }
        }
    });
}

// ---------------------------------------------------------------------------
// Criteria 3 and 4: conditional reference-data reproduction
// ---------------------------------------------------------------------------

fn external_path(env_key: &str, default_rel: &str) -> Option<std::path::PathBuf> {
    let path = match std::env::var_os(env_key) {
        Some(p) => std::path::PathBuf::from(p),
        None => {
            std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").join(default_rel)
        }
    };
    path.exists().then_some(path)
}

fn load_human_table() -> Option<codonctx::CpsTable> {
    let path = external_path("CODONCTX_HUMAN_TABLE", "data/external/human_cps.tsv")?;
    let text = std::fs::read_to_string(&path).expect("reference table unreadable");
    Some(read_cps_table(&text, &path.display().to_string()).expect("reference table malformed"))
}

fn load_gfp_prefix(codons: usize) -> Option<CodonSeq> {
    let path = external_path("CODONCTX_GFP_FASTA", "data/external/gfp_m62653.fasta")?;
    let text = std::fs::read_to_string(&path).expect("GFP FASTA unreadable");
    let records = parse_fasta(&text).expect("GFP FASTA malformed");
    let cds = validate_cds(&records[0].sequence).expect("GFP record is not a valid CDS");
    Some(CodonSeq::new(cds.seq.codons()[..codons].to_vec()).unwrap())
}

/// Published maximal CPB of the 10-residue GFP prefix under the reference
/// human table.
const GFP_10_MAX_CPB: f64 = 0.294582188343425;

#[test]
fn criterion_3_reference_gfp_optimization() {
    let (Some(table), Some(prefix)) = (load_human_table(), load_gfp_prefix(10)) else {
        println!(
            "acceptance criterion 3 (reference GFP optimization): SKIP \
             (external reference table or GFP sequence not available; \
             covered by criteria 1 and 5)"
        );
        return;
    };
    criterion("criterion 3 (reference GFP optimization)", || {
        let code = GeneticCode::standard();
        let protein = prefix.translate(code);
        let dist = prefix.distribution(); // wild-type codon counts
        let start = Instant::now();
        let bnb = optimize_bnb(
            &protein,
            &dist,
            &table,
            Direction::Maximize,
            None,
            &BnbOptions { initial: InitialIncumbent::None, ..Default::default() },
        )
        .unwrap();
        let elapsed = start.elapsed();
        assert!(
            (bnb.cpb - GFP_10_MAX_CPB).abs() < 1e-9,
            "BnB optimum {} vs published {GFP_10_MAX_CPB}",
            bnb.cpb
        );
        assert!(elapsed.as_secs_f64() < 1.0, "10-residue BnB took {elapsed:?}");
        let (sa, _) =
            optimize_sa(&protein, &dist, &table, Direction::Maximize, &SaParams::default())
                .unwrap();
        assert_eq!(sa.cpb, bnb.cpb, "annealing missed the exact optimum");
    });
}

#[test]
fn criterion_4_reference_distribution_parameters() {
    let Some(table) = load_human_table() else {
        println!(
            "acceptance criterion 4 (reference distribution parameters): SKIP \
             (external reference table not available; covered by criteria 1 and 5)"
        );
        return;
    };
    criterion("criterion 4 (reference distribution parameters)", || {
        let dist = distribution_from_table(&table).unwrap();
        assert!((dist.mean - 0.075).abs() <= 0.005, "mean {}", dist.mean);
        assert!((dist.variance - 0.132).abs() <= 0.005, "variance {}", dist.variance);
    });
}

// ---------------------------------------------------------------------------
// Criterion 5: always-runnable property suites
// ---------------------------------------------------------------------------

#[test]
fn criterion_5_property_suites() {
    criterion("criterion 5 (property suites)", || {
        let start = Instant::now();
        property_5a_annealing();
        property_5b_delta_swap();
        property_5c_pvalue_interval();
        property_5d_independence_null();
        property_5e_count_scaling();
        property_5f_normalized_group_sums();
        property_5g_prune_equivalence();
        let elapsed = start.elapsed();
        assert!(elapsed.as_secs() < 300, "criterion 5 took {elapsed:?}, budget is 5 min");
    });
}

/// (a) Annealing: distribution preservation, seed determinism, best-so-far
/// monotonicity, across 50 random instances.
fn property_5a_annealing() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5A);
    for trial in 0..50u64 {
        let protein = random_protein(&mut rng, 4 + (trial as usize % 12));
        let dist = random_distribution(&mut rng, &protein);
        let table = random_table(&mut rng);
        let direction = if trial % 2 == 0 { Direction::Maximize } else { Direction::Minimize };
        let params =
            SaParams { iterations: 10_000, restarts: 2, seed: trial, ..SaParams::default() };
        let (result, trace) = optimize_sa(&protein, &dist, &table, direction, &params).unwrap();
        assert_eq!(result.sequence.distribution(), dist, "distribution drifted");
        let (again, trace_again) =
            optimize_sa(&protein, &dist, &table, direction, &params).unwrap();
        assert_eq!(result, again, "same seed, different result");
        assert_eq!(trace, trace_again, "same seed, different trace");
        let mut best = direction.worst();
        for c in &trace.checkpoints {
            assert!(!direction.better(best, c.best_cpb), "best-so-far regressed");
            best = c.best_cpb;
        }
    }
    println!("  (a) annealing invariants over 50 instances: ok");
}

/// (b) Swap delta equals full recomputation within 1e-12 on 10,000 random
/// swaps, including adjacent and boundary positions.
fn property_5b_delta_swap() {
    let code = GeneticCode::standard();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5B);
    let mut swaps = 0;
    let mut adjacent = 0;
    let mut boundary = 0;
    while swaps < 10_000 {
        let table = random_table(&mut rng);
        let len = rng.random_range(2..40);
        let seq = random_codon_seq(&mut rng, len);
        let mut candidates = Vec::new();
        for i in 0..len {
            for j in (i + 1)..len {
                if code.amino_acid(seq.codons()[i]) == code.amino_acid(seq.codons()[j]) {
                    candidates.push((i, j));
                }
            }
        }
        // Up to 25 swaps per (sequence, table) batch.
        candidates.shuffle(&mut rng);
        for &(i, j) in candidates.iter().take(25) {
            let delta = cpb_delta_swap(&seq, i, j, &table).unwrap();
            let mut swapped = seq.codons().to_vec();
            swapped.swap(i, j);
            let after = CodonSeq::new(swapped).unwrap();
            let full = cpb(&after, &table) - cpb(&seq, &table);
            assert!((delta - full).abs() < 1e-12, "delta {delta} vs full {full} (i={i}, j={j})");
            if j == i + 1 {
                adjacent += 1;
            }
            if i == 0 || j == len - 1 {
                boundary += 1;
            }
            swaps += 1;
        }
    }
    assert!(adjacent > 100, "adjacent swaps under-sampled: {adjacent}");
    assert!(boundary > 100, "boundary swaps under-sampled: {boundary}");
    println!(
        "  (b) {swaps} swap deltas vs full recomputation ({adjacent} adjacent, {boundary} boundary): ok"
    );
}

/// (c) P-value two-tail symmetry and interval/p-value duality within 1e-9.
fn property_5c_pvalue_interval() {
    let dist = CpbDistribution::new(0.075, 0.132, "reference").unwrap();
    for n in [1usize, 10, 100, 400, 1600, 10_000] {
        for step in -30i32..=30 {
            let c = dist.mean + step as f64 * 0.01;
            let p = pvalue(c, n, &dist).unwrap();
            let mirrored = pvalue(2.0 * dist.mean - c, n, &dist).unwrap();
            assert!((p - mirrored).abs() < 1e-9, "symmetry broke at c={c}, n={n}");
        }
        for alpha in [0.01, 0.05, 0.2] {
            let (lo, hi) = significant_interval(n, alpha, &dist).unwrap();
            for bound in [lo, hi] {
                let p = pvalue(bound, n, &dist).unwrap();
                assert!((p - alpha).abs() < 1e-9, "p at interval bound: {p} vs {alpha}");
            }
            for c in [lo - 1e-3, lo + 1e-3, hi - 1e-3, hi + 1e-3] {
                let p = pvalue(c, n, &dist).unwrap();
                let inside = c > lo && c < hi;
                if (p - alpha).abs() > 1e-9 {
                    assert_eq!(inside, p > alpha, "duality broke at c={c}, n={n}");
                }
            }
        }
    }
    println!("  (c) p-value symmetry and interval duality: ok");
}

/// (d) Independence null: an i.i.d.-codon corpus of one million pairs yields
/// |CPS| < 0.05 for every observed pair. The alphabet is restricted so every
/// pair is well sampled (the bound is unreachable when expected counts are
/// tiny).
fn property_5d_independence_null() {
    let code = GeneticCode::standard();
    let mut pool: Vec<Codon> = Vec::new();
    for letter in ['M', 'K', 'I', 'T'] {
        pool.extend(code.synonymous_codons(AminoAcid::from_letter(letter).unwrap()));
    }
    assert_eq!(pool.len(), 10);

    let mut rng = ChaCha8Rng::seed_from_u64(0x5D);
    let record_len = 10_001; // 10,000 pairs per record
    let corpus: Vec<CodonSeq> = (0..100)
        .map(|_| {
            let codons: Vec<Codon> =
                (0..record_len).map(|_| *pool.choose(&mut rng).unwrap()).collect();
            CodonSeq::new(codons).unwrap()
        })
        .collect();
    let (table, counts) = build_cps_table(&corpus, LogBase::Natural).unwrap();
    assert_eq!(counts.total_pairs, 1_000_000);

    let mut observed_pairs = 0;
    let mut worst: f64 = 0.0;
    for (a, b, score, c) in table.iter_pairs() {
        if c.unwrap().observed == 0 {
            continue;
        }
        observed_pairs += 1;
        worst = worst.max(score.abs());
        assert!(score.abs() < 0.05, "pair {a}{b} scored {score} under the null");
    }
    assert_eq!(observed_pairs, 100, "every alphabet pair should be observed");
    println!("  (d) independence null over 1e6 pairs (max |CPS| = {worst:.4}): ok");
}

/// (e) Scaling all counts by a positive integer leaves every score unchanged.
fn property_5e_count_scaling() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5E);
    let corpus: Vec<CodonSeq> = (0..50).map(|_| random_codon_seq(&mut rng, 60)).collect();
    let counts = PairCounts::from_corpus(&corpus);
    let code = GeneticCode::standard();
    for factor in [2u64, 7, 1000] {
        let scaled = counts.scaled(factor);
        for &a in code.sense_codons() {
            for &b in code.sense_codons() {
                let o = counts.observed(a, b);
                if o == 0 {
                    continue;
                }
                let before = (o as f64 / counts.expected(a, b)).ln();
                let after = (scaled.observed(a, b) as f64 / scaled.expected(a, b)).ln();
                assert!(
                    (before - after).abs() < 1e-12,
                    "score moved under x{factor}: {before} vs {after}"
                );
            }
        }
    }
    println!("  (e) count-scaling invariance (x2, x7, x1000): ok");
}

/// (f) Normalized tables: per amino-acid-pair group, the expected sum equals
/// the observed sum within 1e-6 relative.
fn property_5f_normalized_group_sums() {
    let code = GeneticCode::standard();
    // Full coverage (every ordered pair once) plus random mass.
    let mut corpus: Vec<CodonSeq> = Vec::new();
    for &a in code.sense_codons() {
        for &b in code.sense_codons() {
            corpus.push(CodonSeq::new(vec![a, b]).unwrap());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5F);
    for _ in 0..200 {
        corpus.push(random_codon_seq(&mut rng, 80));
    }
    let counts = PairCounts::from_corpus(&corpus);
    let table = normalize_cps(&counts).unwrap();
    for x in AminoAcid::all() {
        for y in AminoAcid::all() {
            let mut sum_o = 0.0;
            let mut sum_e = 0.0;
            for &a in code.synonymous_codons(x) {
                for &b in code.synonymous_codons(y) {
                    sum_o += table.observed(a, b).unwrap() as f64;
                    sum_e += table.expected(a, b).unwrap();
                }
            }
            assert!(
                (sum_o - sum_e).abs() <= 1e-6 * sum_o,
                "group {x}{y}: observed {sum_o} vs normalized expected {sum_e}"
            );
        }
    }
    println!("  (f) normalized group sums within 1e-6 relative: ok");
}

/// (g) Pruning on vs off: identical optimal CPB on 100 small instances.
fn property_5g_prune_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x56);
    for trial in 0..100u64 {
        let protein = random_protein(&mut rng, 3 + (trial as usize % 6));
        let dist = random_distribution(&mut rng, &protein);
        let table = random_table(&mut rng);
        let direction = if trial % 2 == 0 { Direction::Maximize } else { Direction::Minimize };
        let base = BnbOptions { initial: InitialIncumbent::None, ..Default::default() };
        let pruned = optimize_bnb(&protein, &dist, &table, direction, None, &base).unwrap();
        let unpruned = optimize_bnb(
            &protein,
            &dist,
            &table,
            direction,
            None,
            &BnbOptions { prune: false, ..base },
        )
        .unwrap();
        assert_eq!(pruned.cpb, unpruned.cpb, "pruning changed the optimum");
    }
    println!("  (g) prune-on/prune-off equality over 100 instances: ok");
}

// ---------------------------------------------------------------------------
// Criterion 6: exponential growth of the constrained search
// ---------------------------------------------------------------------------

/// Split each amino acid's count as evenly as possible across its codons,
/// maximizing the branching the fixed distribution admits.
fn spread_distribution(protein: &AminoAcidSeq) -> CodonDistribution {
    let code = GeneticCode::standard();
    let mut counts: std::collections::BTreeMap<Codon, usize> = Default::default();
    for (aa, m) in protein.residue_counts() {
        let codons = code.synonymous_codons(aa);
        for i in 0..m {
            *counts.entry(codons[i % codons.len()]).or_insert(0) += 1;
        }
    }
    CodonDistribution::from_counts(counts).unwrap()
}

#[test]
fn criterion_6_exponential_wall() {
    criterion("criterion 6 (exponential wall)", || {
        let mut rng = ChaCha8Rng::seed_from_u64(0x60);
        let table = random_table(&mut rng);
        // Amino acids with at least 4 synonymous codons keep the tree bushy.
        let pool: Vec<AminoAcid> =
            "LRSVPTAG".chars().map(|c| AminoAcid::from_letter(c).unwrap()).collect();
        let mut nodes = Vec::new();
        for len in [6usize, 8, 10, 12, 14] {
            let mut total = 0u64;
            for _ in 0..5 {
                let protein = AminoAcidSeq::new(
                    (0..len).map(|_| *pool.choose(&mut rng).unwrap()).collect(),
                );
                let dist = spread_distribution(&protein);
                let result = optimize_bnb(
                    &protein,
                    &dist,
                    &table,
                    Direction::Maximize,
                    None,
                    &BnbOptions { initial: InitialIncumbent::None, ..Default::default() },
                )
                .unwrap();
                total += result.stats.nodes_expanded;
            }
            nodes.push((len, total));
        }
        println!("  node counts by length (5 instances each): {nodes:?}");
        for w in nodes.windows(2) {
            assert!(w[1].1 > w[0].1, "node count did not grow: {nodes:?}");
        }
        // Growing the length 6 -> 14 (x2.33) must multiply the node count
        // far beyond the length ratio; the observed factor is ~80.
        let first = nodes.first().unwrap();
        let last = nodes.last().unwrap();
        let growth = last.1 as f64 / first.1 as f64;
        let length_ratio = last.0 as f64 / first.0 as f64;
        assert!(
            growth > 10.0 * length_ratio,
            "growth {growth:.2} not clearly superlinear vs length ratio {length_ratio:.2}"
        );
    });
}

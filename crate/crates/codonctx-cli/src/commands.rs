//! Subcommand implementations. The CLI performs no arithmetic of its own:
//! every number in a report is the unmodified output of a library call.

use std::path::{Path, PathBuf};
use std::time::Instant;

use codonctx::opt::{
    optimize_bnb, optimize_exact_dp, optimize_sa, optimize_unconstrained, BnbOptions, Direction,
    OptimizationResult, SaParams, DEFAULT_STATE_CAP,
};
use codonctx::scoring::{
    build_cps_table, cpb, effective_number_of_codons, normalize_cps, read_cps_table,
    write_cps_table, CodonUsage, LogBase, PairCounts,
};
use codonctx::seq::{parse_fasta, validate_cds, write_fasta, FastaRecord};
use codonctx::stats::{
    baseline_sample, distribution_from_table, significance_report, CpbDistribution, StatsError,
    DEFAULT_BASELINE_SAMPLES,
};
use codonctx::{CodonSeq, CpsTable, GeneticCode};

use crate::report::{BaselineBlock, GeneReport, OptimizationBlock, RunReport, TableMeta};
use crate::{Cli, CliError, Command, DirectionArg, MethodArg};

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Score { ref fasta, ref table } => cmd_score(cli.json, fasta, table),
        Command::Pvalue { ref fasta, ref table, mean, variance } => {
            cmd_pvalue(cli.json, fasta, table, mean, variance)
        }
        Command::Optimize {
            ref fasta,
            ref table,
            method,
            direction,
            fix_distribution,
            seed,
            iterations,
            restarts,
            ref out,
            ref trace,
        } => cmd_optimize(
            cli.json,
            fasta,
            table,
            method,
            direction,
            fix_distribution,
            seed,
            iterations,
            restarts,
            out.as_deref(),
            trace.as_deref(),
        ),
        Command::BuildTable { ref corpus, ref log_base, normalized, ref out } => {
            cmd_build_table(cli.json, corpus, log_base.as_deref(), normalized, out)
        }
        Command::Baseline { ref fasta, ref table, samples, seed, iterations, restarts } => {
            cmd_baseline(cli.json, fasta, table, samples, seed, iterations, restarts)
        }
    }
}

// ---------------------------------------------------------------------------
// Shared loading
// ---------------------------------------------------------------------------

struct LoadedRecord {
    id: String,
    seq: CodonSeq,
    trailing_stop: Option<codonctx::Codon>,
}

fn load_records(path: &Path) -> Result<Vec<LoadedRecord>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::fasta(format!("{}: {e}", path.display())))?;
    let records = parse_fasta(&text).map_err(CliError::fasta)?;
    records
        .into_iter()
        .map(|record| {
            let cds = validate_cds(&record.sequence)
                .map_err(|e| CliError::fasta(format!("record '{}': {e}", record.id)))?;
            Ok(LoadedRecord { id: record.id, seq: cds.seq, trailing_stop: cds.trailing_stop })
        })
        .collect()
}

fn require_pairs(record: &LoadedRecord) -> Result<(), CliError> {
    if record.seq.len() < 2 {
        return Err(CliError::data(format!(
            "record '{}' has fewer than 2 codons after STOP stripping; CPB is undefined",
            record.id
        )));
    }
    Ok(())
}

fn require_records(records: &[LoadedRecord], path: &Path) -> Result<(), CliError> {
    if records.is_empty() {
        return Err(CliError::data(format!("{}: no records", path.display())));
    }
    Ok(())
}

fn load_table(path: &Path) -> Result<(CpsTable, TableMeta), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::table(format!("{}: {e}", path.display())))?;
    let table = read_cps_table(&text, &path.display().to_string())
        .map_err(|e| CliError::table(format!("{}: {e}", path.display())))?;
    let meta = TableMeta {
        path: path.display().to_string(),
        log_base: table.log_base().to_string(),
        pairs: table.n_pairs(),
        source: table.source().to_string(),
    };
    Ok((table, meta))
}

fn warn_missing_pairs(table: &CpsTable, record: &LoadedRecord) {
    let missing = table.missing_pairs(&record.seq);
    if missing > 0 {
        eprintln!(
            "warning: record '{}': {missing} of {} codon pairs absent from the table; \
             scored as {}",
            record.id,
            record.seq.n_pairs(),
            table.default_score()
        );
    }
}

fn base_gene_report(record: &LoadedRecord, table: &CpsTable) -> GeneReport {
    let nc = effective_number_of_codons(&CodonUsage::from_seq(&record.seq));
    GeneReport {
        id: record.id.clone(),
        length_codons: record.seq.len(),
        n_pairs: record.seq.n_pairs(),
        trailing_stop: record.trailing_stop.is_some(),
        cpb: cpb(&record.seq, table),
        nc: nc.value(),
        nc_excluded: nc.excluded.iter().map(|e| e.to_string()).collect(),
        significance: None,
        baseline: None,
        optimizations: Vec::new(),
    }
}

fn emit(json: bool, report: &RunReport) {
    report.validate_finite();
    if json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.render_text());
    }
}

// ---------------------------------------------------------------------------
// score
// ---------------------------------------------------------------------------

fn cmd_score(json: bool, fasta: &Path, table_path: &Path) -> Result<(), CliError> {
    let records = load_records(fasta)?;
    require_records(&records, fasta)?;
    let (table, meta) = load_table(table_path)?;
    let mut report = RunReport::new("score");
    report.table = Some(meta);
    for record in &records {
        require_pairs(record)?;
        warn_missing_pairs(&table, record);
        report.genes.push(base_gene_report(record, &table));
    }
    emit(json, &report);
    Ok(())
}

// ---------------------------------------------------------------------------
// pvalue
// ---------------------------------------------------------------------------

fn cmd_pvalue(
    json: bool,
    fasta: &Path,
    table_path: &Path,
    mean: Option<f64>,
    variance: Option<f64>,
) -> Result<(), CliError> {
    let records = load_records(fasta)?;
    require_records(&records, fasta)?;
    let (table, meta) = load_table(table_path)?;
    let dist = match (mean, variance) {
        (Some(mean), Some(variance)) => CpbDistribution::new(mean, variance, "override")
            .map_err(|e| CliError::usage(e.to_string()))?,
        _ => distribution_from_table(&table).map_err(|e| match e {
            StatsError::MissingCounts | StatsError::AllZeroCounts => CliError::data(format!(
                "{e}; pass --mean and --variance to supply the distribution"
            )),
            other => CliError::table(other),
        })?,
    };
    let mut report = RunReport::new("pvalue");
    report.table = Some(meta);
    for record in &records {
        require_pairs(record)?;
        warn_missing_pairs(&table, record);
        let mut gene = base_gene_report(record, &table);
        gene.significance = Some(
            significance_report(gene.cpb, gene.n_pairs, &dist, None)
                .map_err(CliError::data)?,
        );
        report.genes.push(gene);
    }
    emit(json, &report);
    Ok(())
}

// ---------------------------------------------------------------------------
// optimize
// ---------------------------------------------------------------------------

#[allow(clippy::too_many_arguments)]
fn cmd_optimize(
    json: bool,
    fasta: &Path,
    table_path: &Path,
    method: MethodArg,
    direction: DirectionArg,
    fix_distribution: bool,
    seed: u64,
    iterations: Option<u64>,
    restarts: Option<u32>,
    out: Option<&Path>,
    trace_path: Option<&Path>,
) -> Result<(), CliError> {
    match method {
        MethodArg::Dp if fix_distribution => {
            return Err(CliError::usage(
                "--method dp optimizes over all encodings; drop --fix-distribution \
                 or pick sa/bnb/exact",
            ));
        }
        MethodArg::Sa | MethodArg::Bnb | MethodArg::Exact if !fix_distribution => {
            return Err(CliError::usage(
                "--method sa/bnb/exact preserve codon counts; pass --fix-distribution",
            ));
        }
        _ => {}
    }
    if matches!(method, MethodArg::Dp | MethodArg::Exact)
        && (iterations.is_some() || restarts.is_some())
    {
        return Err(CliError::usage("--iterations/--restarts apply only to sa and bnb"));
    }
    if trace_path.is_some() && method != MethodArg::Sa {
        return Err(CliError::usage("--trace applies only to --method sa"));
    }

    let records = load_records(fasta)?;
    require_records(&records, fasta)?;
    let (table, meta) = load_table(table_path)?;
    let code = GeneticCode::standard();
    let dir = match direction {
        DirectionArg::Max => Direction::Maximize,
        DirectionArg::Min => Direction::Minimize,
    };
    let mut sa_params = SaParams { seed, ..SaParams::default() };
    if let Some(iterations) = iterations {
        sa_params.iterations = iterations;
    }
    if let Some(restarts) = restarts {
        sa_params.restarts = restarts;
    }

    let mut report = RunReport::new("optimize");
    report.table = Some(meta);
    let mut recoded_records = Vec::new();
    let mut traces = String::new();

    for record in &records {
        require_pairs(record)?;
        warn_missing_pairs(&table, record);
        let protein = record.seq.translate(code);
        let dist = record.seq.distribution();
        let start = Instant::now();
        let result: OptimizationResult = match method {
            MethodArg::Dp => optimize_unconstrained(&protein, &table, dir),
            MethodArg::Exact => {
                optimize_exact_dp(&protein, &dist, &table, dir, DEFAULT_STATE_CAP)
                    .map_err(|e| fixed_error(&record.id, e))?
            }
            MethodArg::Bnb => optimize_bnb(
                &protein,
                &dist,
                &table,
                dir,
                None,
                &BnbOptions {
                    initial: codonctx::opt::InitialIncumbent::SimulatedAnnealing(
                        sa_params.clone(),
                    ),
                    ..Default::default()
                },
            )
            .map_err(|e| fixed_error(&record.id, e))?,
            MethodArg::Sa => {
                let (result, trace) = optimize_sa(&protein, &dist, &table, dir, &sa_params)
                    .map_err(|e| CliError::data(format!("record '{}': {e}", record.id)))?;
                if trace_path.is_some() {
                    traces.push_str(&trace.to_tsv());
                }
                result
            }
        };
        let seconds = start.elapsed().as_secs_f64();

        let mut header = format!(
            "{}|method={}|cpb={}",
            record.id,
            result.method.label(),
            result.cpb
        );
        if method == MethodArg::Sa {
            header.push_str(&format!("|seed={seed}"));
        }
        let mut nucleotides = result.sequence.to_nucleotides();
        if let Some(stop) = record.trailing_stop {
            nucleotides.push_str(&stop.to_string());
        }
        recoded_records.push(FastaRecord { id: header, sequence: nucleotides });

        let mut gene = base_gene_report(record, &table);
        gene.optimizations.push(OptimizationBlock {
            method: result.method.label().to_string(),
            direction: dir.label().to_string(),
            cpb: result.cpb,
            optimal: result.optimal,
            recoded: result.sequence.to_nucleotides(),
            seconds,
            seed: (method == MethodArg::Sa).then_some(seed),
            nodes_expanded: (result.stats.nodes_expanded > 0)
                .then_some(result.stats.nodes_expanded),
            nodes_pruned: (result.stats.nodes_expanded > 0).then_some(result.stats.nodes_pruned),
            states: (result.stats.states > 0).then_some(result.stats.states),
            iterations: (result.stats.iterations > 0).then_some(result.stats.iterations),
            accepted_moves: (result.stats.iterations > 0)
                .then_some(result.stats.accepted_moves),
            restarts: (result.stats.restarts > 0).then_some(result.stats.restarts),
        });
        report.genes.push(gene);
    }

    let fasta_text = write_fasta(&recoded_records);
    if let Some(out) = out {
        std::fs::write(out, &fasta_text)
            .map_err(|e| CliError { code: 1, message: format!("{}: {e}", out.display()) })?;
        report.out = Some(out.display().to_string());
    }
    if let Some(trace_path) = trace_path {
        std::fs::write(trace_path, &traces).map_err(|e| CliError {
            code: 1,
            message: format!("{}: {e}", trace_path.display()),
        })?;
    }
    emit(json, &report);
    if out.is_none() && !json {
        print!("{fasta_text}");
    }
    Ok(())
}

fn fixed_error(record: &str, err: codonctx::opt::FixedError) -> CliError {
    if err.is_resource_cap() {
        CliError::cap(format!("record '{record}': {err}"))
    } else {
        CliError::data(format!("record '{record}': {err}"))
    }
}

// ---------------------------------------------------------------------------
// build-table
// ---------------------------------------------------------------------------

fn cmd_build_table(
    json: bool,
    corpus: &Path,
    log_base: Option<&str>,
    normalized: bool,
    out: &PathBuf,
) -> Result<(), CliError> {
    if normalized && log_base.is_some() {
        return Err(CliError::usage("--normalized fixes log base 1.5; drop --log-base"));
    }
    let base = match log_base {
        None => LogBase::Natural,
        Some(text) => LogBase::parse(text)
            .ok_or_else(|| CliError::usage(format!("bad --log-base value {text:?}")))?,
    };
    let records = load_records(corpus)?;
    require_records(&records, corpus)?;
    let seqs: Vec<CodonSeq> = records.into_iter().map(|r| r.seq).collect();
    let table = if normalized {
        let counts = PairCounts::from_corpus(&seqs);
        normalize_cps(&counts).map_err(CliError::data)?
    } else {
        build_cps_table(&seqs, base).map_err(CliError::data)?.0
    };
    std::fs::write(out, write_cps_table(&table))
        .map_err(|e| CliError::table(format!("{}: {e}", out.display())))?;

    let mut report = RunReport::new("build-table");
    report.table = Some(TableMeta {
        path: out.display().to_string(),
        log_base: table.log_base().to_string(),
        pairs: table.n_pairs(),
        source: table.source().to_string(),
    });
    report.out = Some(out.display().to_string());
    emit(json, &report);
    Ok(())
}

// ---------------------------------------------------------------------------
// baseline
// ---------------------------------------------------------------------------

fn cmd_baseline(
    json: bool,
    fasta: &Path,
    table_path: &Path,
    samples: usize,
    seed: u64,
    iterations: Option<u64>,
    restarts: Option<u32>,
) -> Result<(), CliError> {
    if samples < 2 {
        return Err(CliError::usage("--samples must be at least 2"));
    }
    debug_assert_eq!(DEFAULT_BASELINE_SAMPLES, 100);
    let records = load_records(fasta)?;
    require_records(&records, fasta)?;
    let (table, meta) = load_table(table_path)?;
    let code = GeneticCode::standard();
    let mut sa_params = SaParams { seed, ..SaParams::default() };
    if let Some(iterations) = iterations {
        sa_params.iterations = iterations;
    }
    if let Some(restarts) = restarts {
        sa_params.restarts = restarts;
    }

    let mut report = RunReport::new("baseline");
    report.table = Some(meta);
    for record in &records {
        require_pairs(record)?;
        warn_missing_pairs(&table, record);
        let protein = record.seq.translate(code);
        let dist = record.seq.distribution();
        let sample = baseline_sample(&protein, &dist, &table, samples, seed)
            .map_err(|e| CliError::data(format!("record '{}': {e}", record.id)))?;
        let mut gene = base_gene_report(record, &table);
        let rank = sample.values.iter().filter(|&&v| v <= gene.cpb).count();
        let (min_run, _) = optimize_sa(&protein, &dist, &table, Direction::Minimize, &sa_params)
            .map_err(|e| CliError::data(format!("record '{}': {e}", record.id)))?;
        let (max_run, _) = optimize_sa(&protein, &dist, &table, Direction::Maximize, &sa_params)
            .map_err(|e| CliError::data(format!("record '{}': {e}", record.id)))?;
        gene.baseline = Some(BaselineBlock {
            mean: sample.mean,
            std_dev: sample.std_dev,
            samples,
            rank,
            min_cpb: min_run.cpb.min(gene.cpb),
            max_cpb: max_run.cpb.max(gene.cpb),
        });
        report.genes.push(gene);
    }
    emit(json, &report);
    Ok(())
}

//! CPS table file format: tab-separated text, one pair per line,
//! `PAIR<TAB>SCORE[<TAB>OBSERVED<TAB>EXPECTED]`, `#` comment lines, with
//! `#log_base=<x>` and `#source=<text>` header comments honored.

use std::fmt::Write as _;

use crate::seq::Codon;

use super::{CpsTable, LogBase, PairObsExp, TableError};

/// Parse a CPS table from text. Counts columns must be present on either
/// all data lines or none. The log base defaults to natural when no
/// `#log_base=` header is present.
pub fn read_cps_table(text: &str, source: &str) -> Result<CpsTable, TableError> {
    let mut log_base = LogBase::Natural;
    let mut source = source.to_string();
    let mut rows: Vec<(usize, Codon, Codon, f64, Option<PairObsExp>)> = Vec::new();
    let mut with_counts = 0usize;

    for (line_no, raw) in text.lines().enumerate() {
        let line_no = line_no + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(value) = comment.trim().strip_prefix("log_base=") {
                log_base = LogBase::parse(value).ok_or_else(|| TableError::Parse {
                    line: line_no,
                    message: format!("bad log base {value:?}"),
                })?;
            } else if let Some(value) = comment.trim().strip_prefix("source=") {
                source = value.to_string();
            }
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 2 && fields.len() != 4 {
            return Err(TableError::Parse {
                line: line_no,
                message: format!("expected 2 or 4 tab-separated fields, got {}", fields.len()),
            });
        }
        let pair = fields[0];
        if pair.len() != 6 {
            return Err(TableError::Parse {
                line: line_no,
                message: format!("pair {pair:?} is not 6 bases"),
            });
        }
        let parse_codon = |s: &str| {
            s.parse::<Codon>().map_err(|e| TableError::Parse {
                line: line_no,
                message: e.to_string(),
            })
        };
        let a = parse_codon(&pair[..3])?;
        let b = parse_codon(&pair[3..])?;
        let score: f64 = fields[1].parse().map_err(|_| TableError::Parse {
            line: line_no,
            message: format!("bad score {:?}", fields[1]),
        })?;
        let counts = if fields.len() == 4 {
            let observed: u64 = fields[2].parse().map_err(|_| TableError::Parse {
                line: line_no,
                message: format!("bad observed count {:?}", fields[2]),
            })?;
            let expected: f64 = fields[3].parse().map_err(|_| TableError::Parse {
                line: line_no,
                message: format!("bad expected count {:?}", fields[3]),
            })?;
            with_counts += 1;
            Some(PairObsExp { observed, expected })
        } else {
            None
        };
        rows.push((line_no, a, b, score, counts));
    }

    if with_counts != 0 && with_counts != rows.len() {
        return Err(TableError::Parse {
            line: 0,
            message: "counts columns must be present on all data lines or none".into(),
        });
    }

    let mut table = CpsTable::empty(log_base, source);
    for (line_no, a, b, score, counts) in rows {
        table.insert(a, b, score, counts, line_no)?;
        if matches!(counts, Some(c) if c.observed == 0) {
            table.mark_floored(a, b);
        }
    }
    Ok(table)
}

/// Serialize a table in the TSV format, pairs in lexicographic order.
pub fn write_cps_table(table: &CpsTable) -> String {
    let mut out = String::new();
    writeln!(out, "#log_base={}", table.log_base()).unwrap();
    writeln!(out, "#source={}", table.source()).unwrap();
    for (a, b, score, counts) in table.iter_pairs() {
        match counts {
            Some(c) => {
                writeln!(out, "{a}{b}\t{score}\t{}\t{}", c.observed, c.expected).unwrap()
            }
            None => writeln!(out, "{a}{b}\t{score}").unwrap(),
        }
    }
    out
}

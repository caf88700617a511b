//! Minimal FASTA reader/writer for nucleotide records.

use std::fmt::Write as _;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FastaError {
    #[error("missing header: sequence data before the first '>' line")]
    MissingHeader,
    #[error("record '{record}': illegal character '{ch}' at base {offset}")]
    IllegalChar { record: String, offset: usize, ch: char },
}

/// One FASTA record; the sequence is uppercased with RNA `U` normalized to `T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FastaRecord {
    pub id: String,
    pub sequence: String,
}

/// Parse multi-record FASTA text. Record ids are the first whitespace-separated
/// token of the header line; whitespace inside sequence bodies is ignored.
pub fn parse_fasta(text: &str) -> Result<Vec<FastaRecord>, FastaError> {
    let mut records: Vec<FastaRecord> = Vec::new();
    for line in text.lines() {
        let trimmed = line.trim_end_matches('\r');
        if trimmed.trim().is_empty() {
            continue;
        }
        if let Some(header) = trimmed.strip_prefix('>') {
            let id = header.split_whitespace().next().unwrap_or("").to_string();
            records.push(FastaRecord { id, sequence: String::new() });
            continue;
        }
        let record = records.last_mut().ok_or(FastaError::MissingHeader)?;
        for ch in trimmed.chars() {
            if ch.is_ascii_whitespace() {
                continue;
            }
            match ch.to_ascii_uppercase() {
                'A' => record.sequence.push('A'),
                'C' => record.sequence.push('C'),
                'G' => record.sequence.push('G'),
                'T' | 'U' => record.sequence.push('T'),
                _ => {
                    return Err(FastaError::IllegalChar {
                        record: record.id.clone(),
                        offset: record.sequence.len() + 1,
                        ch,
                    })
                }
            }
        }
    }
    Ok(records)
}

/// Format records as FASTA text, bodies wrapped at 60 columns.
pub fn write_fasta(records: &[FastaRecord]) -> String {
    let mut out = String::new();
    for record in records {
        writeln!(out, ">{}", record.id).unwrap();
        for chunk in record.sequence.as_bytes().chunks(60) {
            writeln!(out, "{}", std::str::from_utf8(chunk).unwrap()).unwrap();
        }
    }
    out
}

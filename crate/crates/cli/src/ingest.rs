//! Reading datasets from `lines`, `fasta` and `csv` files.

use std::fs;
use std::path::Path;

use diverse_medians::{Alphabet, Dataset, Error};

use crate::config::Format;
use crate::error::CliError;

/// Tokenized rows, each tagged with where it came from.
struct Rows {
    tokens: Vec<Vec<String>>,
    origin: Vec<String>,
}

impl Rows {
    fn new() -> Self {
        Rows { tokens: Vec::new(), origin: Vec::new() }
    }

    fn push(&mut self, tokens: Vec<String>, origin: String) {
        self.tokens.push(tokens);
        self.origin.push(origin);
    }
}

/// Parses `--alphabet`: comma-separated symbols, or one symbol per character
/// when there is no comma.
pub fn parse_alphabet(list: &str) -> Result<Alphabet, CliError> {
    let symbols: Vec<String> = if list.contains(',') {
        list.split(',').map(|s| s.trim().to_string()).collect()
    } else {
        list.chars().map(String::from).collect()
    };
    if symbols.iter().any(|s| s.is_empty()) {
        return Err(CliError::Validation(format!("empty symbol in alphabet {list:?}")));
    }
    Ok(Alphabet::new(symbols)?)
}

pub fn ingest(path: &Path, format: Format, alphabet: Option<&str>) -> Result<Dataset, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Io { path: path.display().to_string(), reason: e.to_string() })?;
    let alphabet = alphabet.map(parse_alphabet).transpose()?;
    parse(&text, format, alphabet)
}

/// Parses file contents already in memory.
pub fn parse(text: &str, format: Format, alphabet: Option<Alphabet>) -> Result<Dataset, CliError> {
    let rows = match format {
        Format::Lines => lines(text),
        Format::Fasta => fasta(text)?,
        Format::Csv => csv_rows(text, alphabet.as_ref())?,
    };
    if rows.tokens.is_empty() {
        return Err(CliError::Validation("input contains no strings".into()));
    }
    let d = rows.tokens[0].len();
    for (r, origin) in rows.tokens.iter().zip(&rows.origin) {
        if r.len() != d {
            return Err(CliError::Validation(format!(
                "{origin}: length {} differs from the first string's length {d}",
                r.len()
            )));
        }
    }
    Dataset::from_tokens(&rows.tokens, alphabet).map_err(|e| match e {
        Error::ForeignSymbol { row, position, symbol } => CliError::Validation(format!(
            "{}: symbol {symbol:?} at position {} is not in the alphabet",
            rows.origin[row],
            position + 1
        )),
        other => other.into(),
    })
}

/// One string per line, trailing whitespace stripped, blank lines skipped.
fn lines(text: &str) -> Rows {
    let mut rows = Rows::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        rows.push(line.chars().map(String::from).collect(), format!("line {}", no + 1));
    }
    rows
}

fn fasta(text: &str) -> Result<Rows, CliError> {
    let mut rows = Rows::new();
    let mut current: Option<(String, String)> = None;
    let finish = |rec: Option<(String, String)>, rows: &mut Rows| {
        if let Some((name, seq)) = rec {
            let origin = format!("record {} ({name})", rows.tokens.len() + 1);
            rows.push(seq.chars().map(String::from).collect(), origin);
        }
    };
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with(';') {
            continue;
        }
        if let Some(header) = line.strip_prefix('>') {
            finish(current.take(), &mut rows);
            current = Some((header.trim().to_string(), String::new()));
        } else {
            match current.as_mut() {
                Some((_, seq)) => seq.push_str(line),
                None => {
                    return Err(CliError::Validation(format!("line {}: sequence data before the first '>' header", no + 1)))
                }
            }
        }
    }
    finish(current.take(), &mut rows);
    Ok(rows)
}

/// One symbol per cell. The first row is a header when it contains a cell
/// outside the declared alphabet, or, with no alphabet, when most of its
/// cells appear nowhere else in the file.
fn csv_rows(text: &str, alphabet: Option<&Alphabet>) -> Result<Rows, CliError> {
    let mut reader = csv::ReaderBuilder::new().has_headers(false).flexible(true).from_reader(text.as_bytes());
    let mut records: Vec<(Vec<String>, u64)> = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| CliError::Validation(format!("csv: {e}")))?;
        let line = rec.position().map_or(0, |p| p.line());
        let cells: Vec<String> = rec.iter().map(|c| c.trim().to_string()).collect();
        if cells.iter().all(|c| c.is_empty()) {
            continue;
        }
        if let Some(c) = cells.iter().find(|c| c.is_empty() || c.chars().any(char::is_whitespace)) {
            return Err(CliError::Validation(format!("line {line}: cell {c:?} is not a symbol")));
        }
        records.push((cells, line));
    }
    let header = match (alphabet, records.first()) {
        (_, None) => false,
        (Some(a), Some((first, _))) => first.iter().any(|c| a.id(c).is_none()),
        (None, Some((first, _))) => {
            records.len() >= 2 && {
                let elsewhere: std::collections::HashSet<&str> =
                    records[1..].iter().flat_map(|(r, _)| r.iter().map(String::as_str)).collect();
                let unseen = first.iter().filter(|c| !elsewhere.contains(c.as_str())).count();
                2 * unseen > first.len()
            }
        }
    };
    let mut rows = Rows::new();
    for (cells, line) in records.into_iter().skip(usize::from(header)) {
        rows.push(cells, format!("line {line}"));
    }
    Ok(rows)
}

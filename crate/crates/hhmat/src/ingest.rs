//! TSV edge-list ingestion and stream dumps.
//!
//! The edge-list format is one triple per line: `row<TAB>col<TAB>value`,
//! decimal unsigned row/col, decimal signed value, newline-terminated, no
//! header. Files are streamed in fixed batches of 100,000 lines into a
//! hierarchical accumulator.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::time::Instant;

use hypersparse::{
    generate_batch, CheckedPlus, CutSchedule, EdgeTriple, HierarchicalMatrix, StreamConfig,
};

use crate::error::CliError;
use crate::report::rate;

pub const INGEST_BATCH_SIZE: usize = 100_000;

/// How many of the largest row/column sums the summary reports.
pub const TOP_K: usize = 10;

#[derive(Debug, Clone)]
pub struct IngestSummary {
    pub triples: u64,
    pub nnz: u64,
    pub value_sum: i64,
    /// Largest row sums, descending by sum then ascending by row.
    pub top_row_sums: Vec<(u64, i64)>,
    pub top_col_sums: Vec<(u64, i64)>,
    pub wall_seconds: f64,
    pub updates_per_second: u64,
    pub cascades_per_level: Vec<u64>,
}

/// Parses one edge-list line. The error text describes the problem without
/// file context; the caller prefixes path and line number.
pub fn parse_tsv_line(line: &str) -> Result<EdgeTriple<i64>, String> {
    let line = line.strip_suffix('\r').unwrap_or(line);
    let mut fields = line.split('\t');
    let row = fields.next().unwrap_or("");
    let col = fields.next().ok_or("expected 3 tab-separated fields, got 1")?;
    let val = fields.next().ok_or("expected 3 tab-separated fields, got 2")?;
    if fields.next().is_some() {
        return Err("expected 3 tab-separated fields, got more".to_string());
    }
    let row: u64 = row.parse().map_err(|_| format!("bad row index {row:?}"))?;
    let col: u64 = col.parse().map_err(|_| format!("bad col index {col:?}"))?;
    let val: i64 = val.parse().map_err(|_| format!("bad value {val:?}"))?;
    Ok(EdgeTriple::new(row, col, val))
}

pub fn run_ingest(
    path: &Path,
    cuts: CutSchedule,
    nrows: u64,
    ncols: u64,
) -> Result<IngestSummary, CliError> {
    let file =
        File::open(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let reader = BufReader::new(file);
    let mut matrix = HierarchicalMatrix::new(nrows, ncols, cuts, CheckedPlus)?;

    let start = Instant::now();
    let mut batch: Vec<EdgeTriple<i64>> = Vec::with_capacity(INGEST_BATCH_SIZE);
    let mut triples: u64 = 0;
    for (line_index, line) in reader.lines().enumerate() {
        let line_number = line_index + 1;
        let at = |msg: String| CliError::Io(format!("{}: line {line_number}: {msg}", path.display()));
        let line = line.map_err(|e| at(e.to_string()))?;
        let triple = parse_tsv_line(&line).map_err(at)?;
        if triple.row >= nrows || triple.col >= ncols {
            return Err(at(format!(
                "index ({}, {}) out of range for a {nrows} x {ncols} matrix",
                triple.row, triple.col
            )));
        }
        batch.push(triple);
        triples += 1;
        if batch.len() == INGEST_BATCH_SIZE {
            matrix.update(&batch)?;
            batch.clear();
        }
    }
    if !batch.is_empty() {
        matrix.update(&batch)?;
    }
    let wall_seconds = start.elapsed().as_secs_f64();

    let flat = matrix.flatten()?;
    let stats = matrix.stats();
    Ok(IngestSummary {
        triples,
        nnz: flat.nnz(),
        value_sum: flat.value_sum(&CheckedPlus)?,
        top_row_sums: top_k(flat.row_sums(&CheckedPlus)?),
        top_col_sums: top_k(flat.col_sums(&CheckedPlus)?),
        wall_seconds,
        updates_per_second: rate(triples, wall_seconds),
        cascades_per_level: stats.cascades_per_level,
    })
}

fn top_k(sums: std::collections::BTreeMap<u64, i64>) -> Vec<(u64, i64)> {
    let mut entries: Vec<(u64, i64)> = sums.into_iter().collect();
    entries.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    entries.truncate(TOP_K);
    entries
}

/// Dumps the configured stream, batch by batch, as TSV. Returns the triple
/// count written.
pub fn write_stream_tsv(cfg: &StreamConfig, out: &mut impl Write) -> Result<u64, CliError> {
    cfg.validate().map_err(|e| CliError::Config(e.to_string()))?;
    let mut written: u64 = 0;
    for index in 0..cfg.num_batches {
        for t in generate_batch(cfg, index) {
            writeln!(out, "{}\t{}\t{}", t.row, t.col, t.val)
                .map_err(|e| CliError::Io(e.to_string()))?;
            written += 1;
        }
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_well_formed_lines() {
        assert_eq!(parse_tsv_line("0\t1\t5"), Ok(EdgeTriple::new(0, 1, 5)));
        assert_eq!(parse_tsv_line("3\t4\t-2\r"), Ok(EdgeTriple::new(3, 4, -2)));
        assert_eq!(
            parse_tsv_line("18446744073709551615\t0\t1"),
            Ok(EdgeTriple::new(u64::MAX, 0, 1))
        );
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(parse_tsv_line("a\tb\tc").is_err());
        assert!(parse_tsv_line("").is_err());
        assert!(parse_tsv_line("1\t2").is_err());
        assert!(parse_tsv_line("1\t2\t3\t4").is_err());
        assert!(parse_tsv_line("1,2,3").is_err());
        assert!(parse_tsv_line("-1\t2\t3").is_err());
        assert!(parse_tsv_line("1 \t2\t3").is_err());
    }

    #[test]
    fn top_k_orders_by_sum_then_key() {
        let mut sums = std::collections::BTreeMap::new();
        for (k, v) in [(5u64, 10i64), (2, 10), (9, 3), (1, 50)] {
            sums.insert(k, v);
        }
        assert_eq!(top_k(sums), vec![(1, 50), (2, 10), (5, 10), (9, 3)]);
    }
}

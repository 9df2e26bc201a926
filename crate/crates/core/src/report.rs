//! CSV, JSON and aligned-text rendering for bench and simulation results.
//!
//! Field order is fixed, so output is byte-stable for fixed inputs.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use crate::bench::BenchReport;
use crate::error::Result;
use crate::hexfmt::{grouped, number};
use crate::hopnet::{Interpretation, SimReport, SweepRow};
use crate::mcu::{Operation, UnitInterpretation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    Csv,
    Json,
    #[default]
    Table,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            "table" => Ok(Self::Table),
            other => Err(format!(
                "unknown format '{other}' (expected csv, json or table)"
            )),
        }
    }
}

pub const BENCH_CSV_HEADER: [&str; 6] = [
    "size",
    "direction",
    "host_ns",
    "block_ops",
    "model_ms",
    "model_cycles",
];
pub const SIM_CSV_HEADER: [&str; 7] = [
    "hop",
    "from",
    "to",
    "msg_digest",
    "delay_ms",
    "cumulative_linear_ms",
    "cumulative_summation_ms",
];
pub const SWEEP_CSV_HEADER: [&str; 2] = ["hops", "total_delay_ms"];

fn csv_string<I, R>(header: &[&str], rows: I) -> Result<String>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(header)?;
    for row in rows {
        wtr.write_record(row)?;
    }
    let bytes = wtr.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn bench_csv(report: &BenchReport) -> Result<String> {
    csv_string(
        &BENCH_CSV_HEADER,
        report.cells.iter().map(|c| {
            vec![
                c.size.to_string(),
                c.direction.to_string(),
                c.host_ns.to_string(),
                c.block_ops.to_string(),
                number(c.model_ms),
                number(c.model_cycles),
            ]
        }),
    )
}

/// Modeled MCU figures laid out one column per data size, host medians below.
pub fn bench_table(report: &BenchReport) -> String {
    let sizes = &report.metadata.data_sizes;
    let mut rows: Vec<Vec<String>> = Vec::new();
    let mut header = vec!["Data Size(byte)".to_string(), String::new()];
    header.extend(sizes.iter().map(|s| s.to_string()));
    rows.push(header);

    for op in Operation::BOTH {
        let label = match op {
            Operation::Enc => "Enc",
            Operation::Dec => "Dec",
        };
        let cells = |f: &dyn Fn(&crate::bench::BenchCell) -> String| -> Vec<String> {
            sizes
                .iter()
                .map(|&s| report.cell(s, op).map(f).unwrap_or_default())
                .collect()
        };
        let mut time = vec![label.to_string(), "Model time (ms)".to_string()];
        time.extend(cells(&|c| grouped(c.model_ms)));
        let mut cyc = vec![String::new(), "Model CPU cycle".to_string()];
        cyc.extend(cells(&|c| grouped(c.model_cycles)));
        let mut host = vec![String::new(), "Host median (ns)".to_string()];
        host.extend(cells(&|c| grouped(c.host_ns as f64)));
        rows.extend([time, cyc, host]);
    }

    let mut out = render_aligned(&rows);
    let _ = writeln!(
        out,
        "repetitions: {}  model clock: {} Hz  model units: {}",
        report.metadata.repetitions,
        report.metadata.model_frequency_hz,
        match report.metadata.model_units {
            UnitInterpretation::AsPrinted => "as-printed",
            UnitInterpretation::Physical => "physical (time column read as us)",
        }
    );
    out
}

pub fn sim_csv(report: &SimReport) -> Result<String> {
    csv_string(
        &SIM_CSV_HEADER,
        report.ledger.iter().map(|h| {
            vec![
                h.hop.to_string(),
                h.from.to_string(),
                h.to.to_string(),
                h.msg_digest.clone(),
                number(h.delay_ms),
                number(h.cumulative_linear_ms),
                number(h.cumulative_summation_ms),
            ]
        }),
    )
}

pub fn sim_table(report: &SimReport, interpretation: Interpretation) -> String {
    let mut rows = vec![vec![
        "hop".to_string(),
        "from".to_string(),
        "to".to_string(),
        "msg_E digest".to_string(),
        "hop delay (ms)".to_string(),
        "cumulative (ms)".to_string(),
    ]];
    for h in &report.ledger {
        let cumulative = match interpretation {
            Interpretation::Linear => h.cumulative_linear_ms,
            Interpretation::Summation => h.cumulative_summation_ms,
        };
        rows.push(vec![
            h.hop.to_string(),
            h.from.to_string(),
            h.to.to_string(),
            h.msg_digest.clone(),
            grouped(h.delay_ms),
            grouped(cumulative),
        ]);
    }
    let mut out = render_aligned(&rows);
    let _ = writeln!(
        out,
        "total delay ({}): {} ms over {} hops",
        interpretation_name(interpretation),
        grouped(report.total(interpretation)),
        report.hops
    );
    let _ = writeln!(
        out,
        "plaintext intact: {}",
        if report.plaintext_intact { "yes" } else { "no" }
    );
    out
}

pub fn sweep_csv(rows: &[SweepRow]) -> Result<String> {
    csv_string(
        &SWEEP_CSV_HEADER,
        rows.iter()
            .map(|r| vec![r.hops.to_string(), number(r.total_delay_ms)]),
    )
}

pub fn sweep_table(rows: &[SweepRow]) -> String {
    let mut table = vec![vec!["hops".to_string(), "total delay (ms)".to_string()]];
    table.extend(
        rows.iter()
            .map(|r| vec![r.hops.to_string(), grouped(r.total_delay_ms)]),
    );
    render_aligned(&table)
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    json_string(value)
}

fn interpretation_name(i: Interpretation) -> &'static str {
    match i {
        Interpretation::Linear => "linear",
        Interpretation::Summation => "summation",
    }
}

/// Left-aligns the first column, right-aligns the rest.
fn render_aligned(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| {
            rows.iter()
                .filter_map(|r| r.get(c))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for row in rows {
        let mut line = String::new();
        for (c, width) in widths.iter().enumerate() {
            let cell = row.get(c).map(String::as_str).unwrap_or("");
            if c == 0 {
                let _ = write!(line, "{cell:<width$}");
            } else {
                let _ = write!(line, "  {cell:>width$}");
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::{run_bench, BenchConfig};
    use crate::hopnet::{sweep, DelayParams};
    use crate::mcu::CalibrationTable;

    #[test]
    fn empty_bench_is_header_only() {
        let cfg = BenchConfig {
            data_sizes: vec![],
            repetitions: Some(1),
            ..BenchConfig::default()
        };
        let r = run_bench(&cfg, &CalibrationTable::default()).unwrap();
        assert_eq!(
            bench_csv(&r).unwrap(),
            "size,direction,host_ns,block_ops,model_ms,model_cycles\n"
        );
    }

    #[test]
    fn sweep_csv_layout() {
        let rows = sweep(&DelayParams::default(), 3, Interpretation::Linear);
        assert_eq!(
            sweep_csv(&rows).unwrap(),
            "hops,total_delay_ms\n1,915\n2,1830\n3,2745\n"
        );
        let table = sweep_table(&rows);
        assert!(table.contains("2,745"));
    }

    #[test]
    fn csv_and_json_agree() {
        let cfg = BenchConfig {
            data_sizes: vec![16, 64],
            repetitions: Some(3),
            ..BenchConfig::default()
        };
        let r = run_bench(&cfg, &CalibrationTable::default()).unwrap();
        let csv = bench_csv(&r).unwrap();
        let json: serde_json::Value = serde_json::from_str(&to_json(&r).unwrap()).unwrap();
        let cells = json["cells"].as_array().unwrap();
        let lines: Vec<&str> = csv.lines().skip(1).collect();
        assert_eq!(lines.len(), cells.len());
        for (line, cell) in lines.iter().zip(cells) {
            let from_json = format!(
                "{},{},{},{},{},{}",
                cell["size"],
                cell["direction"].as_str().unwrap(),
                cell["host_ns"],
                cell["block_ops"],
                number(cell["model_ms"].as_f64().unwrap()),
                number(cell["model_cycles"].as_f64().unwrap()),
            );
            assert_eq!(*line, from_json);
        }
    }

    #[test]
    fn default_bench_has_twelve_rows() {
        let cfg = BenchConfig {
            repetitions: Some(1),
            ..BenchConfig::default()
        };
        let r = run_bench(&cfg, &CalibrationTable::default()).unwrap();
        assert_eq!(bench_csv(&r).unwrap().lines().count(), 13);
    }

    #[test]
    fn format_parsing() {
        assert_eq!("csv".parse::<Format>().unwrap(), Format::Csv);
        assert!("xml".parse::<Format>().is_err());
    }
}

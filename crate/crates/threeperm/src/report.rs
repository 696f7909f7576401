//! Report output: JSON documents, one-line summaries and CSV tables.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::verify::{Status, VerificationReport};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum OutputFormat {
    #[default]
    Json,
    Text,
    Csv,
}

/// Writes `report` to `out` (stdout when `None`) in `format`. The one-line
/// summary also goes to stderr for JSON and CSV output.
pub fn emit(report: &VerificationReport, format: OutputFormat, out: Option<&Path>) -> Result<(), CliError> {
    let mut buf = Vec::new();
    match format {
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut buf, report).expect("plain data serializes");
            buf.push(b'\n');
        }
        OutputFormat::Text => {
            buf.extend_from_slice(report.summary().as_bytes());
            buf.push(b'\n');
        }
        OutputFormat::Csv => write_csv(report, &mut buf)?,
    }
    if format != OutputFormat::Text {
        eprintln!("{}", report.summary());
    }
    write_output(&buf, out)
}

pub fn write_output(bytes: &[u8], out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, bytes).map_err(|e| CliError::Io(path.display().to_string(), e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(bytes)
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Io("stdout".into(), e))
        }
    }
}

/// CSV rows for sweep tables: one per `(k, variant)`.
pub fn write_csv<W: std::io::Write>(report: &VerificationReport, out: W) -> Result<(), CliError> {
    #[derive(Serialize)]
    struct Row<'a> {
        claim: String,
        k: u32,
        variant: &'a str,
        method: String,
        bound: Option<u32>,
        value: Option<u32>,
        status: String,
        checked: u64,
        violations: u64,
        millis: u64,
    }
    let name = |x: &dyn erased::AsJson| x.as_json();
    let mut w = csv::Writer::from_writer(out);
    if report.per_variant.is_empty() {
        w.serialize(Row {
            claim: name(&report.claim),
            k: report.k,
            variant: &report.variant,
            method: report
                .mode
                .map(|m| name(&m))
                .or(report.method.map(|m| name(&m)))
                .unwrap_or_default(),
            bound: report.bound,
            value: report.value,
            status: name(&report.status),
            checked: report.checked,
            violations: report.violations,
            millis: report.wall_time_ms,
        })?;
    } else {
        for v in &report.per_variant {
            let status = if v.theorem == Status::Pass && v.lemma2 == Status::Pass {
                Status::Pass
            } else if v.theorem == Status::Inconclusive {
                Status::Inconclusive
            } else {
                Status::Finding
            };
            w.serialize(Row {
                claim: name(&report.claim),
                k: report.k,
                variant: &v.variant,
                method: name(&v.theorem_method),
                bound: report.bound,
                value: v.theorem_value,
                status: name(&status),
                checked: v.lemma2_checked,
                violations: v.lemma2_violations,
                millis: v.millis,
            })?;
        }
    }
    w.flush().map_err(|e| CliError::Io("csv".into(), e))?;
    Ok(())
}

mod erased {
    pub trait AsJson {
        fn as_json(&self) -> String;
    }

    impl<T: serde::Serialize> AsJson for T {
        fn as_json(&self) -> String {
            match serde_json::to_value(self) {
                Ok(serde_json::Value::String(s)) => s,
                Ok(other) => other.to_string(),
                Err(_) => String::new(),
            }
        }
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::solve::Budget;
    use crate::verify::verify_variants;

    #[test]
    fn csv_has_one_row_per_variant() {
        let r = verify_variants(1, None, Budget::default(), 1).unwrap();
        let mut buf = Vec::new();
        write_csv(&r, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 3);
        assert!(text.starts_with("claim,k,variant,method,bound,value,status,checked,violations,millis\n"));
        assert!(text.contains("variants,1,L,oracle,2,2,pass,4,0,"));
    }
}

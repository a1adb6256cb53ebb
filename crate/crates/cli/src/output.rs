//! Report plumbing: JSON envelopes, RFC-4180 CSV artifacts, and the
//! one-line console summary.

use std::path::{Path, PathBuf};

use serde::Serialize;
use stripspec::{Error, Result};

/// Output routing shared by every subcommand.
#[derive(Debug, Clone, Default)]
pub struct OutputOpts {
    /// Print the full JSON report to stdout instead of the summary
    /// (the summary then goes to stderr).
    pub json: bool,
    pub out_json: Option<PathBuf>,
    pub out_csv: Option<PathBuf>,
}

/// One CSV artifact: an optional suffix inserted before the file
/// extension (for commands that export more than one table), the
/// header record, and one record per row.
pub struct CsvTable {
    pub suffix: Option<&'static str>,
    pub header: &'static str,
    pub rows: Vec<String>,
}

fn with_suffix(path: &Path, suffix: Option<&str>) -> PathBuf {
    match suffix {
        None => path.to_path_buf(),
        Some(s) => {
            let stem = path
                .file_stem()
                .map(|v| v.to_string_lossy().into_owned())
                .unwrap_or_default();
            let ext = path
                .extension()
                .map(|v| format!(".{}", v.to_string_lossy()))
                .unwrap_or_default();
            path.with_file_name(format!("{stem}.{s}{ext}"))
        }
    }
}

fn write_file(path: &Path, content: &str) -> Result<()> {
    std::fs::write(path, content)
        .map_err(|e| Error::InvalidParameter(format!("cannot write {}: {e}", path.display())))
}

/// Records end with CRLF per RFC 4180; fields here never need quoting
/// (numbers, identifiers).
fn csv_content(header: &str, rows: &[String]) -> String {
    let mut out = String::with_capacity(16 * rows.len() + header.len() + 2);
    out.push_str(header);
    out.push_str("\r\n");
    for row in rows {
        out.push_str(row);
        out.push_str("\r\n");
    }
    out
}

/// Emits a command report: JSON file and/or stdout JSON when
/// requested, CSV artifacts when a path is given, and the summary
/// line. The JSON envelope carries the fully resolved configuration so
/// a run can be reproduced from its own output.
pub fn emit<P: Serialize, R: Serialize>(
    opts: &OutputOpts,
    command: &str,
    params: &P,
    results: &R,
    summary: &str,
    tables: &[CsvTable],
) -> Result<()> {
    let report = serde_json::json!({
        "command": command,
        "config": params,
        "results": results,
    });
    let pretty = serde_json::to_string_pretty(&report)
        .map_err(|e| Error::InvalidParameter(format!("report serialization failed: {e}")))?;
    if let Some(path) = &opts.out_json {
        write_file(path, &format!("{pretty}\n"))?;
    }
    if let Some(path) = &opts.out_csv {
        if tables.is_empty() {
            return Err(Error::InvalidParameter(format!(
                "{command} exports no CSV tables; drop --out-csv"
            )));
        }
        for t in tables {
            write_file(&with_suffix(path, t.suffix), &csv_content(t.header, &t.rows))?;
        }
    }
    if opts.json {
        println!("{pretty}");
        eprintln!("{summary}");
    } else {
        println!("{summary}");
    }
    Ok(())
}

/// Two-column float row.
pub fn row2(a: f64, b: f64) -> String {
    format!("{a},{b}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suffix_lands_before_extension() {
        let p = with_suffix(Path::new("out/scan.csv"), Some("refinement"));
        assert_eq!(p, Path::new("out/scan.refinement.csv"));
        let p = with_suffix(Path::new("scan"), Some("x"));
        assert_eq!(p, Path::new("scan.x"));
    }

    #[test]
    fn csv_records_end_with_crlf() {
        let s = csv_content("a,b", &["1,2".into(), "3,4".into()]);
        assert_eq!(s, "a,b\r\n1,2\r\n3,4\r\n");
    }
}

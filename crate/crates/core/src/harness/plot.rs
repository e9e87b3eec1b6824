//! Gnuplot-ready columns from an aggregate CSV.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};

/// Rewrites an aggregate CSV as whitespace-separated
/// `x series mean median stderr` rows, one block per series in order of
/// first appearance and sorted by `x` within a block. Blocks are separated
/// by two blank lines so gnuplot addresses them with `index`.
pub fn emit_plot_data<R: BufRead, W: Write>(input: R, mut out: W) -> Result<()> {
    writeln!(out, "# x series mean median stderr")?;
    let mut header: Option<Vec<String>> = None;
    let mut blocks: Vec<(String, Vec<(f64, String)>)> = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        let Some(cols) = &header else {
            header = Some(fields.iter().map(|s| s.to_string()).collect());
            continue;
        };
        let get = |name: &str| -> Result<&str> {
            let i = cols
                .iter()
                .position(|c| c == name)
                .ok_or_else(|| Error::Parse { line: idx + 1, msg: format!("missing column `{name}`") })?;
            fields.get(i).copied().ok_or_else(|| Error::Parse { line: idx + 1, msg: "short row".into() })
        };
        let x: f64 = get("x")?.parse().map_err(|_| Error::Parse { line: idx + 1, msg: "bad x".into() })?;
        let series = get("series")?.to_string();
        let row = format!("{} {} {} {} {}", x, series, get("mean_error")?, get("median_error")?, get("stderr_error")?);
        match blocks.iter_mut().find(|(s, _)| *s == series) {
            Some((_, rows)) => rows.push((x, row)),
            None => blocks.push((series, vec![(x, row)])),
        }
    }
    for (i, (_, rows)) in blocks.iter_mut().enumerate() {
        if i > 0 {
            writeln!(out)?;
            writeln!(out)?;
        }
        rows.sort_by(|a, b| a.0.total_cmp(&b.0));
        for (_, row) in rows.iter() {
            writeln!(out, "{row}")?;
        }
    }
    Ok(())
}

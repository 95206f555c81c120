//! The digraph text format: a `n m` header line followed by `m` arc lines
//! `u v`, one arc per line; `#` starts a comment line. ASCII, LF endings.

use std::fmt::Write as _;

use anyhow::{anyhow, bail, Context, Result};
use wdrd_core::Digraph;

/// Renders `g` in the text format. Arcs come out sorted by (tail, head), so
/// equal digraphs produce identical bytes.
pub fn write_digraph(g: &Digraph) -> String {
    let arcs = g.arcs();
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", g.vertex_count(), arcs.len());
    for (u, v) in arcs {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

/// Parses the text format; comment and blank lines are skipped anywhere.
pub fn parse_digraph(text: &str) -> Result<Digraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, line)| (i + 1, line.trim()))
        .filter(|(_, line)| !line.is_empty() && !line.starts_with('#'));

    let (line_no, header) = lines.next().ok_or_else(|| anyhow!("missing `n m` header"))?;
    let mut fields = header.split_whitespace();
    let parse = |field: Option<&str>, what: &str| -> Result<usize> {
        field
            .ok_or_else(|| anyhow!("line {line_no}: header needs `n m`, got `{header}`"))?
            .parse()
            .with_context(|| format!("line {line_no}: bad {what} in header `{header}`"))
    };
    let n = parse(fields.next(), "vertex count")?;
    let m = parse(fields.next(), "arc count")?;
    if fields.next().is_some() {
        bail!("line {line_no}: header has more than two fields: `{header}`");
    }

    let mut arcs = Vec::with_capacity(m);
    for _ in 0..m {
        let (line_no, line) = lines
            .next()
            .ok_or_else(|| anyhow!("expected {m} arc lines, found {}", arcs.len()))?;
        let mut fields = line.split_whitespace();
        let parse = |field: Option<&str>| -> Result<usize> {
            field
                .ok_or_else(|| anyhow!("line {line_no}: arc line needs `u v`, got `{line}`"))?
                .parse()
                .with_context(|| format!("line {line_no}: bad vertex in `{line}`"))
        };
        let u = parse(fields.next())?;
        let v = parse(fields.next())?;
        if fields.next().is_some() {
            bail!("line {line_no}: arc line has more than two fields: `{line}`");
        }
        arcs.push((u, v));
    }
    if let Some((line_no, line)) = lines.next() {
        bail!("line {line_no}: unexpected content after {m} arcs: `{line}`");
    }
    Digraph::new(n, &arcs).map_err(|e| anyhow!("{e}"))
}

pub fn read_digraph_file(path: &std::path::Path) -> Result<Digraph> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    parse_digraph(&text).with_context(|| format!("malformed digraph file {}", path.display()))
}

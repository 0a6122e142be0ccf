//! Line-oriented text format for hypergraphs.
//!
//! ```text
//! HSBM <n> <k> <M>
//! LABELS <b_0> ... <b_{n-1}>      (optional)
//! <m> <v_1> ... <v_m> [R|B]       (one line per edge, vertices ascending)
//! ```
//!
//! Blank lines and lines starting with `#` are ignored.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::hypergraph::{Color, Hypergraph, HypergraphBuilder, LabelVector};

#[derive(Clone, Debug, PartialEq)]
pub struct HypergraphFile {
    pub hypergraph: Hypergraph,
    pub k: usize,
    /// Largest order the file may contain.
    pub max_order: usize,
    pub labels: Option<LabelVector>,
}

pub fn write_hypergraph(file: &HypergraphFile) -> String {
    let h = &file.hypergraph;
    let mut out = format!("HSBM {} {} {}\n", h.n(), file.k, file.max_order);
    if let Some(labels) = &file.labels {
        out.push_str("LABELS");
        for l in labels.as_slice() {
            write!(out, " {l}").expect("writing to a string");
        }
        out.push('\n');
    }
    for e in h.iter() {
        write!(out, "{}", e.order).expect("writing to a string");
        for v in e.vertices {
            write!(out, " {v}").expect("writing to a string");
        }
        if let Some(c) = e.color {
            write!(out, " {}", c.symbol()).expect("writing to a string");
        }
        out.push('\n');
    }
    out
}

fn parse_error<T>(line: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        line,
        message: message.into(),
    })
}

fn number(token: &str, line: usize, what: &str) -> Result<usize> {
    token
        .parse()
        .or_else(|_| parse_error(line, format!("expected {what}, found `{token}`")))
}

pub fn parse_hypergraph(text: &str) -> Result<HypergraphFile> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .peekable();
    let Some((line, header)) = lines.next() else {
        return parse_error(1, "missing `HSBM <n> <k> <M>` header");
    };
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 4 || fields[0] != "HSBM" {
        return parse_error(line, "expected `HSBM <n> <k> <M>`");
    }
    let n = number(fields[1], line, "vertex count")?;
    let k = number(fields[2], line, "block count")?;
    let max_order = number(fields[3], line, "maximum order")?;
    let mut builder = HypergraphBuilder::new(n).or_else(|e| parse_error(line, e.to_string()))?;

    let mut labels = None;
    if let Some(&(line, text)) = lines.peek() {
        if let Some(rest) = text.strip_prefix("LABELS") {
            lines.next();
            let values = rest
                .split_whitespace()
                .map(|t| number(t, line, "block label"))
                .collect::<Result<Vec<_>>>()?;
            if values.len() != n {
                return parse_error(line, format!("expected {n} labels, found {}", values.len()));
            }
            if let Some(bad) = values.iter().find(|&&b| b >= k) {
                return parse_error(line, format!("label {bad} out of range for k = {k}"));
            }
            labels = Some(LabelVector::new(values));
        }
    }

    for (line, text) in lines {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        let m = number(tokens[0], line, "edge order")?;
        if m < 2 || m > max_order {
            return parse_error(line, format!("edge order {m} outside 2..={max_order}"));
        }
        let (color, rest) = match tokens.len() {
            len if len == m + 1 => (None, &tokens[1..]),
            len if len == m + 2 => {
                let c = Color::from_symbol(tokens[m + 1]).map_or_else(
                    || parse_error(line, format!("unknown color `{}`", tokens[m + 1])),
                    Ok,
                )?;
                (Some(c), &tokens[1..=m])
            }
            _ => return parse_error(line, format!("order-{m} edge needs {m} vertices")),
        };
        let vertices = rest
            .iter()
            .map(|t| number(t, line, "vertex id"))
            .collect::<Result<Vec<_>>>()?;
        if vertices.windows(2).any(|w| w[0] >= w[1]) {
            return parse_error(line, "edge vertices must be strictly ascending");
        }
        builder
            .add_edge(&vertices, color)
            .or_else(|e| parse_error(line, e.to_string()))?;
    }
    Ok(HypergraphFile {
        hypergraph: builder.build(),
        k,
        max_order,
        labels,
    })
}

/// `vertex_id<TAB>block` per line.
pub fn write_labels(labels: &LabelVector) -> String {
    let mut out = String::new();
    for (v, l) in labels.as_slice().iter().enumerate() {
        writeln!(out, "{v}\t{l}").expect("writing to a string");
    }
    out
}

//! Plain-text input formats.
//!
//! All three formats are line based. `#` starts a comment that runs to the
//! end of the line, blank lines are ignored and surrounding whitespace is
//! trimmed. Errors carry the 1-based line and column of the offending token.
//!
//! # Shift file
//!
//! ```text
//! file   := { line }
//! line   := blank | key "=" value | row
//! key    := "d" | "theta" | "A"
//! d      := positive decimal integer
//! theta  := integer "/" integer            (0 < p/q < 1)
//! A      := nothing after "=", followed by exactly d row lines
//! row    := d characters from {0, 1}, spaces between them allowed
//! ```
//!
//! Each key appears once. `d` must come before `A`. Example, the golden
//! mean shift:
//!
//! ```text
//! d = 2
//! theta = 1/2
//! A =
//! 11
//! 10
//! ```
//!
//! # Potential file
//!
//! ```text
//! file   := "k" "=" int, "m" "=" int, { entry }
//! entry  := word ":" number { number }      (exactly m numbers)
//! word   := digits, one per symbol          (alphabets of at most 10 symbols)
//!         | int { "." int }                 (larger alphabets)
//! number := decimal float | ["-"] int "/" int
//! ```
//!
//! Every admissible word of length `k` must appear exactly once. The writer
//! emits words in lexicographic order and values with the shortest decimal
//! that parses back to the same `f64`.
//!
//! # Matrix file
//!
//! `n` rows of `n` whitespace-separated decimals.

use std::fmt;
use std::fmt::Write as _;

use rotset_core::{LcPotential, Limits, Ratio, Sft, Symbol, Word};

/// A malformed input with its position.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    /// The library error when the text parsed but the object was rejected.
    pub cause: Option<rotset_core::Error>,
}

fn err<T>(line: usize, column: usize, message: impl fmt::Display) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        column,
        message: message.to_string(),
        cause: None,
    })
}

fn rejected<T>(line: usize, e: rotset_core::Error) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        column: 1,
        message: e.to_string(),
        cause: Some(e),
    })
}

/// A line with comments stripped, and the column of its first character.
struct Line<'a> {
    no: usize,
    text: &'a str,
    col: usize,
}

fn lines(src: &str) -> impl Iterator<Item = Line<'_>> {
    src.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let text = body.trim();
        if text.is_empty() {
            return None;
        }
        let lead = body.len() - body.trim_start().len();
        Some(Line {
            no: i + 1,
            text,
            col: raw[..lead].chars().count() + 1,
        })
    })
}

/// Whitespace separated tokens with their columns.
fn tokens<'a>(line: &Line<'a>) -> Vec<(usize, &'a str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (ci, (bi, c)) in line.text.char_indices().enumerate() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some((ci, bi)),
            (true, Some((cs, bs))) => {
                out.push((line.col + cs, &line.text[bs..bi]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some((cs, bs)) = start {
        out.push((line.col + cs, &line.text[bs..]));
    }
    out
}

/// Splits `key = value`; `None` when the line has no `=`.
fn key_value<'a>(line: &Line<'a>) -> Option<(&'a str, &'a str, usize)> {
    let eq = line.text.find('=')?;
    let key = line.text[..eq].trim();
    let rest = &line.text[eq + 1..];
    let value = rest.trim();
    let lead = rest.len() - rest.trim_start().len();
    let col = line.col + line.text[..eq + 1 + lead].chars().count();
    Some((key, value, col))
}

fn parse_usize(s: &str, line: usize, col: usize, what: &str) -> Result<usize, ParseError> {
    match s.parse::<usize>() {
        Ok(v) if v > 0 => Ok(v),
        _ => err(line, col, format!("{what} must be a positive integer, found {s:?}")),
    }
}

/// Parses a decimal or a rational `p/q`.
pub fn parse_number(s: &str) -> Option<f64> {
    let v = match s.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.parse().ok()?;
            let q: u64 = q.parse().ok()?;
            if q == 0 {
                return None;
            }
            p as f64 / q as f64
        }
        None => s.parse::<f64>().ok()?,
    };
    v.is_finite().then_some(v)
}

fn parse_ratio(s: &str, line: usize, col: usize) -> Result<Ratio, ParseError> {
    let bad = || format!("theta must be a fraction p/q, found {s:?}");
    let Some((p, q)) = s.split_once('/') else {
        return err(line, col, bad());
    };
    let (Ok(p), Ok(q)) = (p.trim().parse::<u64>(), q.trim().parse::<u64>()) else {
        return err(line, col, bad());
    };
    if q == 0 || p == 0 || p >= q {
        return err(line, col, format!("theta must lie strictly between 0 and 1, found {s}"));
    }
    Ratio::new(p, q).or_else(|e| err(line, col, e))
}

/// Reads a shift file.
pub fn parse_sft(src: &str) -> Result<Sft, ParseError> {
    let mut d: Option<usize> = None;
    let mut theta: Option<Ratio> = None;
    let mut rows: Option<(usize, Vec<Vec<u8>>)> = None;
    let mut in_rows = false;
    let mut last_line = 0;
    for line in lines(src) {
        last_line = line.no;
        if let Some((key, value, vcol)) = key_value(&line) {
            in_rows = false;
            match key {
                "d" if d.is_some() => return err(line.no, line.col, "duplicate key d"),
                "theta" if theta.is_some() => return err(line.no, line.col, "duplicate key theta"),
                "A" if rows.is_some() => return err(line.no, line.col, "duplicate key A"),
                "d" => d = Some(parse_usize(value, line.no, vcol, "d")?),
                "theta" => theta = Some(parse_ratio(value, line.no, vcol)?),
                "A" => {
                    if d.is_none() {
                        return err(line.no, line.col, "d must be declared before A");
                    }
                    if !value.is_empty() {
                        return err(line.no, vcol, "rows of A go on the lines after \"A =\"");
                    }
                    rows = Some((line.no, Vec::new()));
                    in_rows = true;
                }
                _ => return err(line.no, line.col, format!("unknown key {key:?}")),
            }
            continue;
        }
        if !in_rows {
            return err(line.no, line.col, "expected key = value");
        }
        let n = d.unwrap_or(0);
        let (_, acc) = rows.as_mut().expect("rows started");
        if acc.len() == n {
            return err(line.no, line.col, format!("A has more than {n} rows"));
        }
        let mut row = Vec::with_capacity(n);
        for (ci, c) in line.text.chars().enumerate() {
            match c {
                '0' => row.push(0),
                '1' => row.push(1),
                c if c.is_whitespace() => {}
                c => return err(line.no, line.col + ci, format!("expected 0 or 1, found {c:?}")),
            }
        }
        if row.len() != n {
            return err(line.no, line.col, format!("row has {} entries, expected {n}", row.len()));
        }
        acc.push(row);
    }
    let end = last_line + 1;
    let Some(d) = d else { return err(end, 1, "missing key d") };
    let Some(theta) = theta else { return err(end, 1, "missing key theta") };
    let Some((a_line, rows)) = rows else { return err(end, 1, "missing key A") };
    if rows.len() != d {
        return err(end, 1, format!("A has {} rows, expected {d}", rows.len()));
    }
    Sft::new(d, &rows, theta).or_else(|e| rejected(a_line, e))
}

/// Writes a shift file that [`parse_sft`] reads back to an equal shift.
pub fn write_sft(sft: &Sft) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "d = {}", sft.alphabet_size());
    let _ = writeln!(out, "theta = {}", sft.theta());
    out.push_str("A =\n");
    for row in sft.transition_rows() {
        for x in row {
            out.push(if x != 0 { '1' } else { '0' });
        }
        out.push('\n');
    }
    out
}

fn parse_word(s: &str, d: usize, line: usize, col: usize) -> Result<Vec<Symbol>, ParseError> {
    let syms: Option<Vec<Symbol>> = if d > 10 {
        s.split('.').map(|p| p.parse::<Symbol>().ok()).collect()
    } else {
        s.chars().map(|c| c.to_digit(10)).collect()
    };
    match syms {
        Some(w) if !w.is_empty() => {
            if let Some(&bad) = w.iter().find(|&&x| x as usize >= d) {
                return err(line, col, format!("symbol {bad} outside the alphabet of {d} symbols"));
            }
            Ok(w)
        }
        _ => err(line, col, format!("malformed word {s:?}")),
    }
}

/// Reads a potential file over `sft`.
pub fn parse_potential(src: &str, sft: &Sft, limits: &Limits) -> Result<LcPotential, ParseError> {
    let d = sft.alphabet_size();
    let mut k: Option<usize> = None;
    let mut m: Option<usize> = None;
    let mut table: Vec<(Vec<Symbol>, Vec<f64>)> = Vec::new();
    let mut seen = std::collections::HashMap::new();
    let mut last_line = 0;
    for line in lines(src) {
        last_line = line.no;
        if let Some(colon) = line.text.find(':') {
            let (Some(k), Some(m)) = (k, m) else {
                return err(line.no, line.col, "k and m must be declared before the table");
            };
            let word_txt = line.text[..colon].trim();
            let w = parse_word(word_txt, d, line.no, line.col)?;
            if w.len() != k {
                return err(line.no, line.col, format!("word {word_txt} has length {}, expected {k}", w.len()));
            }
            if !sft.is_admissible(&w) {
                return err(line.no, line.col, format!("word {word_txt} is not admissible"));
            }
            if let Some(prev) = seen.insert(w.clone(), line.no) {
                return err(line.no, line.col, format!("word {word_txt} already given on line {prev}"));
            }
            let rest = Line {
                no: line.no,
                text: &line.text[colon + 1..],
                col: line.col + line.text[..colon + 1].chars().count(),
            };
            let toks = tokens(&rest);
            if toks.len() != m {
                return err(line.no, rest.col, format!("expected {m} values, found {}", toks.len()));
            }
            let mut v = Vec::with_capacity(m);
            for (col, t) in toks {
                match parse_number(t) {
                    Some(x) => v.push(x),
                    None => return err(line.no, col, format!("malformed number {t:?}")),
                }
            }
            table.push((w, v));
            continue;
        }
        let Some((key, value, vcol)) = key_value(&line) else {
            return err(line.no, line.col, "expected key = value or word: values");
        };
        match key {
            "k" if k.is_some() => return err(line.no, line.col, "duplicate key k"),
            "m" if m.is_some() => return err(line.no, line.col, "duplicate key m"),
            "k" => k = Some(parse_usize(value, line.no, vcol, "k")?),
            "m" => m = Some(parse_usize(value, line.no, vcol, "m")?),
            _ => return err(line.no, line.col, format!("unknown key {key:?}")),
        }
    }
    let end = last_line + 1;
    let (Some(k), Some(m)) = (k, m) else {
        return err(end, 1, "missing key k or m");
    };
    LcPotential::from_table(sft, k, m, &table, limits).or_else(|e| rejected(end, e))
}

/// Writes a potential file that [`parse_potential`] reads back to an equal
/// potential.
pub fn write_potential(phi: &LcPotential) -> String {
    let d = phi.sft().alphabet_size();
    let mut out = String::new();
    let _ = writeln!(out, "k = {}", phi.level());
    let _ = writeln!(out, "m = {}", phi.dim());
    for (w, v) in phi.entries() {
        out.push_str(&Word::new(w.to_vec()).render(d));
        out.push(':');
        for x in v {
            let _ = write!(out, " {x:?}");
        }
        out.push('\n');
    }
    out
}

/// Reads a square nonnegative matrix.
pub fn parse_matrix(src: &str) -> Result<Vec<Vec<f64>>, ParseError> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut last_line = 0;
    for line in lines(src) {
        last_line = line.no;
        let toks = tokens(&line);
        if let Some(first) = rows.first() {
            if toks.len() != first.len() {
                return err(line.no, line.col, format!("row has {} entries, expected {}", toks.len(), first.len()));
            }
        }
        let mut row = Vec::with_capacity(toks.len());
        for (col, t) in toks {
            match parse_number(t) {
                Some(x) if x >= 0.0 => row.push(x),
                Some(_) => return err(line.no, col, format!("negative entry {t}")),
                None => return err(line.no, col, format!("malformed number {t:?}")),
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return err(last_line + 1, 1, "empty matrix");
    }
    if rows.len() != rows[0].len() {
        return err(last_line + 1, 1, format!("matrix has {} rows and {} columns", rows.len(), rows[0].len()));
    }
    Ok(rows)
}

//! The `fks-1` input format.
//!
//! A document is a sequence of lines. Blank lines and lines starting with
//! `#` are ignored; every other line is `key = value`:
//!
//! ```text
//! format = fks-1
//! name = HYPER2
//! m = 1
//! n = 1
//! A1 = [[-1,0],[0,-1]]
//! A2 = [[1,0],[0,1]]
//! c[1,2] = [1,0]
//! ```
//!
//! * `format` must come first and must be `fks-1`.
//! * `m`, `n` are positive integers; `A1` … `A{2n}` are `2m×2m` integer
//!   matrices written as bracketed lists of rows.
//! * `c[i,j]` (1-based, `i < j`) are integer vectors of length `2m`;
//!   omitted tails are zero.
//! * Optional `J0` (`2m×2m`), `J1` (`2n×2n`), `B` (`2m×2n`) and `seed`
//!   (`(2m+2n)×(2m+2n)`) are rational matrices; entries are integers or
//!   `p/q`.
//! * `name` is free text without `#`.
//!
//! Each key appears at most once. Whitespace around tokens is ignored.
//! [`emit`] writes the canonical form: keys in the order above, only
//! nonzero tails, lists without spaces.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::exactla::{fmt_int_vec, IntMatrix};
use crate::extension::ExtensionData;
use crate::field::Mat;

pub const FORMAT_TAG: &str = "fks-1";
/// Largest accepted `m` and `n`.
pub const MAX_RANK: usize = 32;
const MAX_NESTING: usize = 4;
const MAX_DIGITS: usize = 256;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message} (at {token:?})")]
pub struct ParseError {
    pub line: usize,
    pub token: String,
    pub message: String,
}

fn err(line: usize, token: &str, message: impl Into<String>) -> ParseError {
    let token: String = token.chars().take(40).collect();
    ParseError {
        line,
        token,
        message: message.into(),
    }
}

/// Extension data together with the optional construction choices.
#[derive(Clone, Debug, PartialEq)]
pub struct InputDocument {
    pub name: Option<String>,
    pub data: ExtensionData,
    pub j0: Option<Mat<BigRational>>,
    pub j1: Option<Mat<BigRational>>,
    pub b: Option<Mat<BigRational>>,
    pub seed: Option<Mat<BigRational>>,
}

impl InputDocument {
    pub fn new(data: ExtensionData) -> Self {
        Self {
            name: None,
            data,
            j0: None,
            j1: None,
            b: None,
            seed: None,
        }
    }

    pub fn named(name: &str, data: ExtensionData) -> Self {
        Self {
            name: Some(name.to_string()),
            ..Self::new(data)
        }
    }
}

/// Nested bracketed list of rationals.
#[derive(Clone, Debug, PartialEq)]
enum Value {
    Scalar(BigRational),
    List(Vec<Value>),
}

struct ValueParser<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
}

impl<'a> ValueParser<'a> {
    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(|c: char| c.is_whitespace()) {
            self.pos += self.src[self.pos..].chars().next().unwrap().len_utf8();
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn value(&mut self, depth: usize) -> Result<Value, ParseError> {
        if depth > MAX_NESTING {
            return Err(err(self.line, self.rest(), "lists nested too deeply"));
        }
        self.skip_ws();
        if self.rest().starts_with('[') {
            self.pos += 1;
            let mut items = Vec::new();
            self.skip_ws();
            if self.rest().starts_with(']') {
                self.pos += 1;
                return Ok(Value::List(items));
            }
            loop {
                items.push(self.value(depth + 1)?);
                self.skip_ws();
                if self.rest().starts_with(',') {
                    self.pos += 1;
                } else if self.rest().starts_with(']') {
                    self.pos += 1;
                    return Ok(Value::List(items));
                } else if self.rest().is_empty() {
                    return Err(err(self.line, "", "unterminated list"));
                } else {
                    return Err(err(self.line, self.rest(), "expected ',' or ']'"));
                }
            }
        }
        let end = self
            .rest()
            .find(|c: char| c == ',' || c == ']' || c == '[' || c.is_whitespace())
            .unwrap_or(self.rest().len());
        let token = &self.rest()[..end];
        if token.is_empty() {
            return Err(err(self.line, self.rest(), "expected a number"));
        }
        let value =
            parse_rational(token).ok_or_else(|| err(self.line, token, "not an integer or p/q"))?;
        self.pos += end;
        Ok(Value::Scalar(value))
    }
}

fn parse_integer(s: &str) -> Option<BigInt> {
    let digits = s
        .strip_prefix('-')
        .or_else(|| s.strip_prefix('+'))
        .unwrap_or(s);
    if digits.is_empty() || digits.len() > MAX_DIGITS || !digits.bytes().all(|b| b.is_ascii_digit())
    {
        return None;
    }
    s.parse().ok()
}

fn parse_rational(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        None => parse_integer(s).map(BigRational::from),
        Some((p, q)) => {
            if !q.starts_with(|c: char| c.is_ascii_digit()) {
                return None;
            }
            let (p, q) = (parse_integer(p)?, parse_integer(q)?);
            if q.is_zero() {
                return None;
            }
            Some(BigRational::new(p, q))
        }
    }
}

fn parse_value(src: &str, line: usize) -> Result<Value, ParseError> {
    let mut p = ValueParser { src, pos: 0, line };
    let v = p.value(0)?;
    p.skip_ws();
    if !p.rest().is_empty() {
        return Err(err(line, p.rest(), "unexpected trailing input"));
    }
    Ok(v)
}

fn as_vector(v: &Value, line: usize, token: &str) -> Result<Vec<BigRational>, ParseError> {
    match v {
        Value::List(items) => items
            .iter()
            .map(|x| match x {
                Value::Scalar(s) => Ok(s.clone()),
                Value::List(_) => Err(err(line, token, "expected a flat list of numbers")),
            })
            .collect(),
        Value::Scalar(_) => Err(err(line, token, "expected a bracketed list")),
    }
}

fn as_matrix(v: &Value, line: usize, token: &str) -> Result<Mat<BigRational>, ParseError> {
    let Value::List(rows) = v else {
        return Err(err(line, token, "expected a bracketed list of rows"));
    };
    let rows: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| as_vector(r, line, token))
        .collect::<Result<_, _>>()?;
    let width = rows.first().map_or(0, Vec::len);
    if rows.is_empty() || width == 0 {
        return Err(err(line, token, "matrix is empty"));
    }
    if rows.iter().any(|r| r.len() != width) {
        return Err(err(line, token, "rows have different lengths"));
    }
    let height = rows.len();
    Ok(Mat::from_vec(
        height,
        width,
        rows.into_iter().flatten().collect(),
    ))
}

fn integral(m: &Mat<BigRational>, line: usize, token: &str) -> Result<IntMatrix, ParseError> {
    IntMatrix::try_from_rational(m).ok_or_else(|| err(line, token, "entries must be integers"))
}

fn expect_shape(
    m: &Mat<BigRational>,
    rows: usize,
    cols: usize,
    line: usize,
    token: &str,
) -> Result<(), ParseError> {
    if (m.rows(), m.cols()) != (rows, cols) {
        return Err(err(
            line,
            token,
            format!(
                "expected a {rows}x{cols} matrix, found {}x{}",
                m.rows(),
                m.cols()
            ),
        ));
    }
    Ok(())
}

fn parse_count(value: &str, line: usize, key: &str) -> Result<usize, ParseError> {
    let n: usize = value
        .parse()
        .ok()
        .filter(|&n| (1..=MAX_RANK).contains(&n))
        .ok_or_else(|| {
            err(
                line,
                value,
                format!("{key} must be an integer between 1 and {MAX_RANK}"),
            )
        })?;
    Ok(n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Key {
    Format,
    Name,
    M,
    N,
    Action(usize),
    Tail(usize, usize),
    J0,
    J1,
    B,
    Seed,
}

fn parse_key(key: &str, line: usize) -> Result<Key, ParseError> {
    let index = |s: &str| -> Option<usize> {
        (!s.is_empty() && s.len() <= 6 && s.bytes().all(|b| b.is_ascii_digit()))
            .then(|| s.parse().ok())
            .flatten()
            .filter(|&k: &usize| k >= 1)
    };
    Ok(match key {
        "format" => Key::Format,
        "name" => Key::Name,
        "m" => Key::M,
        "n" => Key::N,
        "J0" => Key::J0,
        "J1" => Key::J1,
        "B" => Key::B,
        "seed" => Key::Seed,
        _ => {
            if let Some(k) = key.strip_prefix('A').and_then(index) {
                Key::Action(k)
            } else if let Some(inner) = key.strip_prefix("c[").and_then(|s| s.strip_suffix(']')) {
                let (i, j) = inner
                    .split_once(',')
                    .and_then(|(i, j)| Some((index(i.trim())?, index(j.trim())?)))
                    .ok_or_else(|| err(line, key, "tails are written c[i,j] with 1-based i < j"))?;
                if i >= j {
                    return Err(err(line, key, "tail indices must satisfy i < j"));
                }
                Key::Tail(i, j)
            } else {
                return Err(err(line, key, "unknown key"));
            }
        }
    })
}

/// Parses an `fks-1` document.
pub fn parse_document(text: &str) -> Result<InputDocument, ParseError> {
    let mut entries: BTreeMap<Key, (usize, String)> = BTreeMap::new();
    let mut first = true;
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (key, value) = trimmed
            .split_once('=')
            .ok_or_else(|| err(line, trimmed, "expected key = value"))?;
        let (key_text, value) = (key.trim(), value.trim());
        let key = parse_key(key_text, line)?;
        if first && key != Key::Format {
            return Err(err(
                line,
                key_text,
                "document must start with format = fks-1",
            ));
        }
        first = false;
        if entries.insert(key, (line, value.to_string())).is_some() {
            return Err(err(line, key_text, "duplicate key"));
        }
    }
    let (fline, tag) = entries
        .get(&Key::Format)
        .ok_or_else(|| err(last_line.max(1), "", "missing format = fks-1"))?;
    if tag != FORMAT_TAG {
        return Err(err(*fline, tag, "unsupported format tag, expected fks-1"));
    }
    let get = |k: Key, what: &str| {
        entries
            .get(&k)
            .ok_or_else(|| err(last_line.max(1), "", format!("missing {what}")))
    };
    let (ml, mv) = get(Key::M, "m")?;
    let m = parse_count(mv, *ml, "m")?;
    let (nl, nv) = get(Key::N, "n")?;
    let n = parse_count(nv, *nl, "n")?;
    let (fiber, base) = (2 * m, 2 * n);

    let name = match entries.get(&Key::Name) {
        Some((l, v)) if v.is_empty() => return Err(err(*l, v, "name must not be empty")),
        Some((_, v)) => Some(v.clone()),
        None => None,
    };

    let mut actions = Vec::with_capacity(base);
    for k in 1..=base {
        let (line, src) = get(Key::Action(k), &format!("A{k}"))?;
        let mat = as_matrix(&parse_value(src, *line)?, *line, src)?;
        expect_shape(&mat, fiber, fiber, *line, src)?;
        actions.push(integral(&mat, *line, src)?);
    }
    let mut tails = Vec::new();
    for (key, (line, src)) in &entries {
        match *key {
            Key::Action(k) if k > base => {
                return Err(err(
                    *line,
                    &format!("A{k}"),
                    format!("only A1..A{base} are expected"),
                ))
            }
            Key::Tail(i, j) => {
                if j > base {
                    return Err(err(
                        *line,
                        &format!("c[{i},{j}]"),
                        format!("tail index exceeds {base}"),
                    ));
                }
                let v = as_vector(&parse_value(src, *line)?, *line, src)?;
                if v.len() != fiber {
                    return Err(err(
                        *line,
                        src,
                        format!("expected {fiber} entries, found {}", v.len()),
                    ));
                }
                let ints: Vec<BigInt> = v
                    .iter()
                    .map(|x| x.is_integer().then(|| x.to_integer()))
                    .collect::<Option<_>>()
                    .ok_or_else(|| err(*line, src, "entries must be integers"))?;
                tails.push(((i - 1, j - 1), ints));
            }
            _ => {}
        }
    }
    let data = ExtensionData::new(m, n, actions, tails).map_err(|e| err(*ml, "", e.to_string()))?;

    let optional =
        |k: Key, rows: usize, cols: usize| -> Result<Option<Mat<BigRational>>, ParseError> {
            let Some((line, src)) = entries.get(&k) else {
                return Ok(None);
            };
            let mat = as_matrix(&parse_value(src, *line)?, *line, src)?;
            expect_shape(&mat, rows, cols, *line, src)?;
            Ok(Some(mat))
        };
    Ok(InputDocument {
        name,
        j0: optional(Key::J0, fiber, fiber)?,
        j1: optional(Key::J1, base, base)?,
        b: optional(Key::B, fiber, base)?,
        seed: optional(Key::Seed, fiber + base, fiber + base)?,
        data,
    })
}

/// A seed metric file: a bare bracketed matrix or a `seed = …` line, with
/// optional `#` comments.
pub fn parse_seed_metric(text: &str) -> Result<Mat<BigRational>, ParseError> {
    let mut body = String::new();
    let mut first_line = None;
    for (idx, raw) in text.lines().enumerate() {
        let t = raw.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        first_line.get_or_insert(idx + 1);
        body.push_str(t);
        body.push(' ');
    }
    let line = first_line.ok_or_else(|| err(1, "", "empty seed metric"))?;
    let body = body.trim();
    let src = match body.split_once('=') {
        Some((k, v)) if k.trim() == "seed" => v.trim(),
        Some((k, _)) => return Err(err(line, k.trim(), "expected seed = [[...]]")),
        None => body,
    };
    let m = as_matrix(&parse_value(src, line)?, line, src)?;
    if m.rows() != m.cols() {
        return Err(err(line, src, "seed metric must be square"));
    }
    Ok(m)
}

/// Canonical text of a document.
pub fn emit(doc: &InputDocument) -> String {
    let d = &doc.data;
    let mut out = format!("format = {FORMAT_TAG}\n");
    if let Some(name) = &doc.name {
        out.push_str(&format!("name = {name}\n"));
    }
    out.push_str(&format!("m = {}\nn = {}\n", d.m(), d.n()));
    for (i, a) in d.actions().iter().enumerate() {
        out.push_str(&format!("A{} = {a}\n", i + 1));
    }
    for ((i, j), c) in d.tails() {
        if c.iter().any(|x| !x.is_zero()) {
            out.push_str(&format!("c[{},{}] = {}\n", i + 1, j + 1, fmt_int_vec(c)));
        }
    }
    for (key, m) in [
        ("J0", &doc.j0),
        ("J1", &doc.j1),
        ("B", &doc.b),
        ("seed", &doc.seed),
    ] {
        if let Some(m) = m {
            out.push_str(&format!("{key} = {}\n", m));
        }
    }
    out
}

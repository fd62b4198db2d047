//! Words over the generators `a₁…a₂ₘ, x₁…x₂ₙ`.
//!
//! A word is a sequence of factors `a<k>` or `x<k>`, each optionally
//! followed by `^<exponent>`, separated by whitespace or `*`. Indices are
//! 1-based. The empty word is the identity.

use super::ExtensionError;

/// Largest accepted `|exponent|` of a single factor.
pub const MAX_EXPONENT: i64 = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    /// `a_{k+1}`.
    Fiber(usize),
    /// `x_{k+1}`.
    Base(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Letter {
    pub generator: Generator,
    pub exponent: i64,
    /// Byte offset of the factor in the input.
    pub position: usize,
    pub token: String,
}

fn malformed(position: usize, token: &str, reason: impl Into<String>) -> ExtensionError {
    ExtensionError::MalformedWord {
        position,
        token: token.to_string(),
        reason: reason.into(),
    }
}

pub fn parse_word(input: &str) -> Result<Vec<Letter>, ExtensionError> {
    let bytes = input.as_bytes();
    let mut letters = Vec::new();
    let mut i = 0;
    let mut expect_factor = false;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c == b'*' {
            if letters.is_empty() || expect_factor {
                return Err(malformed(i, "*", "separator without a preceding factor"));
            }
            expect_factor = true;
            i += 1;
            continue;
        }
        let start = i;
        let end = input[start..]
            .find(|ch: char| ch.is_whitespace() || ch == '*')
            .map_or(input.len(), |k| start + k);
        let token = &input[start..end];
        letters.push(parse_factor(token, start)?);
        expect_factor = false;
        i = end;
    }
    if expect_factor {
        return Err(malformed(input.len(), "", "word ends with a separator"));
    }
    Ok(letters)
}

fn parse_factor(token: &str, position: usize) -> Result<Letter, ExtensionError> {
    let mut chars = token.chars();
    let kind = chars.next().expect("non-empty token");
    let rest = chars.as_str();
    let (index, exponent) = match rest.split_once('^') {
        Some((idx, exp)) => (idx, Some(exp)),
        None => (rest, None),
    };
    if index.is_empty() || !index.bytes().all(|b| b.is_ascii_digit()) {
        return Err(malformed(
            position,
            token,
            "expected a generator such as a1 or x2",
        ));
    }
    let index: usize = index
        .parse()
        .map_err(|_| malformed(position, token, "generator index too large"))?;
    let index = index
        .checked_sub(1)
        .ok_or_else(|| malformed(position, token, "generator indices start at 1"))?;
    let generator = match kind {
        'a' => Generator::Fiber(index),
        'x' => Generator::Base(index),
        _ => return Err(malformed(position, token, "generators are a<k> or x<k>")),
    };
    let exponent = match exponent {
        None => 1,
        Some(e) => {
            let digits = e
                .strip_prefix('-')
                .or_else(|| e.strip_prefix('+'))
                .unwrap_or(e);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(malformed(position, token, "exponent must be an integer"));
            }
            let value: i64 = e
                .parse()
                .map_err(|_| malformed(position, token, "exponent out of range"))?;
            if value.abs() > MAX_EXPONENT {
                return Err(malformed(
                    position,
                    token,
                    format!("exponent exceeds {MAX_EXPONENT} in absolute value"),
                ));
            }
            value
        }
    };
    Ok(Letter {
        generator,
        exponent,
        position,
        token: token.to_string(),
    })
}

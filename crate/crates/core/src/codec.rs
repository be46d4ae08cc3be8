//! Shared helpers for the line-oriented text formats.
//!
//! Every format in this crate is canonical: decimals carry no sign, no
//! leading zeros and no surrounding whitespace, so parsing followed by
//! rendering reproduces the input bytes exactly.

use num_bigint::BigUint;

use crate::error::{Error, Result};

/// Upper bound on decimal digits accepted for a single integer.
pub(crate) const MAX_DIGITS: usize = 640;

/// Upper bound on lines accepted in any document.
pub(crate) const MAX_LINES: usize = 1 << 16;

pub(crate) fn parse_uint(s: &str, line: usize) -> Result<BigUint> {
    if s.is_empty() {
        return Err(Error::parse(line, "empty integer"));
    }
    if s.len() > MAX_DIGITS {
        return Err(Error::parse(line, "integer too long"));
    }
    if !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::parse(line, format!("not a decimal integer: {s:?}")));
    }
    if s.len() > 1 && s.starts_with('0') {
        return Err(Error::parse(line, "leading zeros are not canonical"));
    }
    BigUint::parse_bytes(s.as_bytes(), 10).ok_or_else(|| Error::parse(line, "bad integer"))
}

pub(crate) fn parse_u64(s: &str, line: usize) -> Result<u64> {
    let v = parse_uint(s, line)?;
    u64::try_from(&v).map_err(|_| Error::parse(line, "integer out of range"))
}

/// Numbered lines of a document; rejects carriage returns and oversized input.
pub(crate) fn lines(text: &str) -> Result<Vec<(usize, &str)>> {
    if text.is_empty() {
        return Ok(Vec::new());
    }
    let body = text
        .strip_suffix('\n')
        .ok_or_else(|| Error::parse(text.split('\n').count(), "missing trailing newline"))?;
    let mut out = Vec::new();
    for (i, l) in body.split('\n').enumerate() {
        if i >= MAX_LINES {
            return Err(Error::parse(i + 1, "too many lines"));
        }
        if l.contains('\r') {
            return Err(Error::parse(i + 1, "carriage return"));
        }
        out.push((i + 1, l));
    }
    Ok(out)
}

pub(crate) fn split_kv(line: usize, s: &str) -> Result<(&str, &str)> {
    s.split_once('=')
        .ok_or_else(|| Error::parse(line, format!("expected key=value, got {s:?}")))
}

/// Reads `key=value` lines in a fixed order.
pub(crate) struct KvReader<'a> {
    lines: std::vec::IntoIter<(usize, &'a str)>,
    last: usize,
}

impl<'a> KvReader<'a> {
    pub(crate) fn new(lines: Vec<(usize, &'a str)>) -> Self {
        KvReader {
            lines: lines.into_iter(),
            last: 0,
        }
    }

    pub(crate) fn line(&self) -> usize {
        self.last
    }

    pub(crate) fn next_raw(&mut self) -> Option<(usize, &'a str)> {
        let next = self.lines.next();
        if let Some((n, _)) = next {
            self.last = n;
        }
        next
    }

    pub(crate) fn peek_key(&self) -> Option<&'a str> {
        self.lines
            .as_slice()
            .first()
            .map(|(_, l)| l.split_once('=').map_or(*l, |(k, _)| k))
    }

    pub(crate) fn expect_line(&mut self, want: &str) -> Result<()> {
        match self.next_raw() {
            Some((_, l)) if l == want => Ok(()),
            Some((n, l)) => Err(Error::parse(n, format!("expected {want:?}, got {l:?}"))),
            None => Err(Error::parse(self.last + 1, format!("expected {want:?}"))),
        }
    }

    pub(crate) fn expect(&mut self, key: &str) -> Result<(usize, &'a str)> {
        let (n, l) = self
            .next_raw()
            .ok_or_else(|| Error::parse(self.last + 1, format!("missing {key}")))?;
        let (k, v) = split_kv(n, l)?;
        if k != key {
            return Err(Error::parse(n, format!("expected key {key}, got {k}")));
        }
        Ok((n, v))
    }

    pub(crate) fn finish(mut self) -> Result<()> {
        match self.next_raw() {
            None => Ok(()),
            Some((n, l)) => Err(Error::parse(n, format!("unexpected trailing line {l:?}"))),
        }
    }
}

/// Splits `value` into exactly `n` space-separated fields.
pub(crate) fn fields(line: usize, value: &str, n: usize) -> Result<Vec<&str>> {
    let parts: Vec<&str> = value.split(' ').collect();
    if parts.len() != n {
        return Err(Error::parse(
            line,
            format!("expected {n} fields, got {}", parts.len()),
        ));
    }
    Ok(parts)
}

/// Participant identifiers: 1 to 64 characters from `[A-Za-z0-9._@-]`.
pub fn validate_id(id: &str) -> Result<()> {
    let ok = !id.is_empty()
        && id.len() <= 64
        && id
            .bytes()
            .all(|b| b.is_ascii_alphanumeric() || matches!(b, b'.' | b'_' | b'@' | b'-'));
    if ok {
        Ok(())
    } else {
        Err(Error::Identity(format!("invalid participant id {id:?}")))
    }
}

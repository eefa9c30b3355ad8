//! Minimal tab-separated line reader shared by the file loaders.

use std::io::BufRead;

use crate::{Error, Result};

pub(crate) struct TsvLines<R> {
    inner: R,
    what: &'static str,
    line_no: usize,
    buf: Vec<u8>,
}

impl<R: BufRead> TsvLines<R> {
    pub(crate) fn new(inner: R, what: &'static str) -> Self {
        TsvLines {
            inner,
            what,
            line_no: 0,
            buf: Vec::new(),
        }
    }

    pub(crate) fn what(&self) -> &'static str {
        self.what
    }

    /// Next non-blank line split on tabs, with its 1-based line number.
    pub(crate) fn next_record(&mut self) -> Result<Option<(usize, Vec<String>)>> {
        loop {
            self.buf.clear();
            let read = self.inner.read_until(b'\n', &mut self.buf)?;
            if read == 0 {
                return Ok(None);
            }
            self.line_no += 1;
            let mut bytes = self.buf.as_slice();
            if self.line_no == 1 {
                bytes = bytes.strip_prefix(b"\xef\xbb\xbf").unwrap_or(bytes);
            }
            let text = std::str::from_utf8(bytes)
                .map_err(|_| Error::parse(self.what, self.line_no, "invalid UTF-8"))?;
            let text = text.trim_end_matches(['\n', '\r']);
            if text.trim().is_empty() {
                continue;
            }
            let fields = text.split('\t').map(|f| f.trim().to_string()).collect();
            return Ok(Some((self.line_no, fields)));
        }
    }

    pub(crate) fn error(&self, line: usize, message: impl Into<String>) -> Error {
        Error::parse(self.what, line, message)
    }
}

pub(crate) fn expect_arity(
    what: &'static str,
    line: usize,
    fields: &[String],
    arity: usize,
) -> Result<()> {
    if fields.len() != arity {
        return Err(Error::parse(
            what,
            line,
            format!("expected {arity} fields, found {}", fields.len()),
        ));
    }
    Ok(())
}

pub(crate) fn parse_f64(what: &'static str, line: usize, field: &str) -> Result<f64> {
    let v: f64 = field
        .parse()
        .map_err(|_| Error::parse(what, line, format!("not a number: {field:?}")))?;
    if !v.is_finite() {
        return Err(Error::parse(
            what,
            line,
            format!("non-finite value: {field:?}"),
        ));
    }
    Ok(v)
}

pub(crate) fn parse_u64(what: &'static str, line: usize, field: &str) -> Result<u64> {
    field
        .parse()
        .map_err(|_| Error::parse(what, line, format!("not a non-negative integer: {field:?}")))
}

pub(crate) fn nonempty_id(what: &'static str, line: usize, field: &str) -> Result<String> {
    if field.is_empty() {
        return Err(Error::parse(what, line, "empty identifier"));
    }
    Ok(field.to_string())
}

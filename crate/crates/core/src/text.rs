//! Line cursor shared by the line-oriented file formats.

use crate::error::{Error, Result};

pub(crate) struct Line<'a> {
    pub number: usize,
    pub offset: usize,
    pub text: &'a str,
}

pub(crate) struct LineCursor<'a> {
    input: &'a str,
    pos: usize,
    line: usize,
}

impl<'a> LineCursor<'a> {
    pub fn new(input: &'a str) -> Self {
        LineCursor {
            input,
            pos: 0,
            line: 0,
        }
    }

    /// Byte offset of the next unread line.
    pub fn offset(&self) -> usize {
        self.pos
    }

    /// 1-based number of the next unread line.
    pub fn line_number(&self) -> usize {
        self.line + 1
    }

    /// Next line with its terminator and trailing whitespace removed.
    pub fn next_line(&mut self) -> Option<Line<'a>> {
        if self.pos >= self.input.len() {
            return None;
        }
        let rest = &self.input[self.pos..];
        let (raw, advance) = match rest.find('\n') {
            Some(i) => (&rest[..i], i + 1),
            None => (rest, rest.len()),
        };
        let line = Line {
            number: self.line + 1,
            offset: self.pos,
            text: raw.trim_end(),
        };
        self.pos += advance;
        self.line += 1;
        Some(line)
    }

    pub fn expect_line(&mut self, what: &str) -> Result<Line<'a>> {
        let number = self.line_number();
        self.next_line().ok_or_else(|| {
            Error::parse(number, format!("unexpected end of input, expected {what}"))
        })
    }

    pub fn expect_count(&mut self, what: &str) -> Result<(Line<'a>, usize)> {
        let line = self.expect_line(what)?;
        let n = line.text.trim().parse::<usize>().map_err(|_| {
            Error::parse(
                line.number,
                format!("expected {what}, found {:?}", line.text),
            )
        })?;
        Ok((line, n))
    }

    /// True when only whitespace remains.
    pub fn at_end(&self) -> bool {
        self.input[self.pos..].trim().is_empty()
    }
}

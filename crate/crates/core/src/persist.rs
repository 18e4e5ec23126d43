//! Learning-state files: a `GCCL-STATE 1` line, the context in Burmeister
//! layout, then the concept space in its canonical text form. Batch history
//! is not stored.

use std::fs;
use std::path::Path;

use crate::context::FormalContext;
use crate::error::{Error, Result};
use crate::process::LearningState;
use crate::space::ConceptSpace;
use crate::text::LineCursor;

const MAGIC: &str = "GCCL-STATE 1";

pub fn save_state(state: &LearningState) -> String {
    let mut out = String::new();
    out.push_str(MAGIC);
    out.push('\n');
    state.context().write_to(&mut out);
    state.space().write_to(&mut out);
    out
}

/// Byte offset where 1-based line `line` starts (or the input length).
fn line_offset(text: &str, line: usize) -> usize {
    if line <= 1 {
        return 0;
    }
    text.match_indices('\n')
        .nth(line - 2)
        .map_or(text.len(), |(i, _)| i + 1)
}

pub fn load_state(text: &str) -> Result<LearningState> {
    let corrupt = |offset: usize, message: String| Error::CorruptState { offset, message };
    let mut cursor = LineCursor::new(text);
    match cursor.next_line() {
        Some(line) if line.text == MAGIC => {}
        _ => return Err(corrupt(0, format!("missing `{MAGIC}` header"))),
    }
    let context = FormalContext::parse_from(&mut cursor).map_err(|e| match e {
        Error::Parse { line, message } => corrupt(line_offset(text, line), message),
        other => corrupt(cursor.offset(), other.to_string()),
    })?;
    let space = ConceptSpace::parse_from(&mut cursor, &context)
        .map_err(|(_, offset, msg)| corrupt(offset, msg))?;
    if !cursor.at_end() {
        return Err(corrupt(
            cursor.offset(),
            "trailing content after concept space".to_owned(),
        ));
    }
    LearningState::from_parts(context, space)
}

pub fn save_state_to(state: &LearningState, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, save_state(state))?;
    Ok(())
}

pub fn load_state_from(path: impl AsRef<Path>) -> Result<LearningState> {
    let bytes = fs::read(path)?;
    let text = std::str::from_utf8(&bytes).map_err(|e| Error::CorruptState {
        offset: e.valid_up_to(),
        message: "invalid UTF-8".to_owned(),
    })?;
    load_state(text)
}

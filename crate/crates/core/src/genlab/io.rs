//! JSON files for operators, frames and duals.
//!
//! Operators are plain matrix objects `{"rows","cols","re","im"}`; frames and
//! duals add `{"dim","count","label"}`. Floats are written in shortest
//! round-trip form, so a read after a write reproduces every bit.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::Result;
use crate::frame::{KFrame, OperatorK};

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    Ok(serde_json::from_str(text)?)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = to_json(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    from_json(&fs::read_to_string(path)?)
}

pub fn read_operator(path: &Path) -> Result<OperatorK> {
    read_json(path)
}

/// Frames and duals share the frame schema.
pub fn read_frame(path: &Path) -> Result<KFrame> {
    read_json(path)
}

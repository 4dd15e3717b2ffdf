//! Text formats for point sets and integer sequences.
//!
//! Point sets: one point per line, `d` decimal floats separated by commas,
//! no header. Integer sequences: one non-negative integer per line, strictly
//! increasing. Both formats ignore blank lines and lines starting with `#`.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::generators::IntegerSequence;
use crate::torus::PointSet;

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub fn parse_point_set(text: &str, label: impl Into<String>) -> Result<PointSet> {
    let mut dim = None;
    let mut coords = Vec::new();
    for (line, body) in data_lines(text) {
        let start = coords.len();
        for field in body.split(',') {
            let field = field.trim();
            let v: f64 = field.parse().map_err(|_| Error::Parse {
                line,
                msg: format!("not a number: {field:?}"),
            })?;
            if !(0.0..1.0).contains(&v) {
                return Err(Error::Parse {
                    line,
                    msg: format!("coordinate {v} is outside [0,1)"),
                });
            }
            coords.push(v);
        }
        let d = coords.len() - start;
        match dim {
            None => dim = Some(d),
            Some(expected) if expected != d => {
                return Err(Error::Parse {
                    line,
                    msg: format!("point has {d} coordinates, expected {expected}"),
                })
            }
            Some(_) => {}
        }
    }
    let dim = dim.ok_or(Error::Parse {
        line: 0,
        msg: "no data lines".into(),
    })?;
    PointSet::from_flat(dim, coords, label)
}

pub fn read_point_set(path: &Path) -> Result<PointSet> {
    let text = fs::read_to_string(path)?;
    parse_point_set(&text, path.display().to_string())
}

/// Writes `pts` in the point-set format. Each line of `comment` is emitted as
/// a leading `#` line.
pub fn write_point_set<W: Write>(pts: &PointSet, comment: Option<&str>, mut w: W) -> Result<()> {
    if let Some(c) = comment {
        for l in c.lines() {
            writeln!(w, "# {l}")?;
        }
    }
    let mut line = String::new();
    for p in pts.iter() {
        line.clear();
        for (i, c) in p.iter().enumerate() {
            if i > 0 {
                line.push(',');
            }
            line.push_str(&format_float(*c));
        }
        writeln!(w, "{line}")?;
    }
    Ok(())
}

pub fn parse_integer_sequence(text: &str, label: impl Into<String>) -> Result<IntegerSequence> {
    let mut terms: Vec<u64> = Vec::new();
    for (line, body) in data_lines(text) {
        let v: u64 = body.parse().map_err(|_| Error::Parse {
            line,
            msg: format!("not a non-negative integer: {body:?}"),
        })?;
        if let Some(&prev) = terms.last() {
            if v == prev {
                return Err(Error::Validation {
                    line,
                    msg: format!("duplicate entry {v}"),
                });
            }
            if v < prev {
                return Err(Error::Validation {
                    line,
                    msg: format!("{v} is smaller than the previous entry {prev}"),
                });
            }
        }
        terms.push(v);
    }
    IntegerSequence::new(terms, label)
}

pub fn read_integer_sequence(path: &Path) -> Result<IntegerSequence> {
    let text = fs::read_to_string(path)?;
    parse_integer_sequence(&text, path.display().to_string())
}

pub fn write_integer_sequence<W: Write>(seq: &IntegerSequence, mut w: W) -> Result<()> {
    writeln!(w, "# {}", seq.label())?;
    for t in seq.terms() {
        writeln!(w, "{t}")?;
    }
    Ok(())
}

/// Shortest decimal representation that parses back to the same `f64`.
pub fn format_float(x: f64) -> String {
    format!("{x:?}")
}

//! Text formats.
//!
//! Group file:
//!
//! ```text
//! degree: 7
//! name: C7
//! (1,2,3,4,5,6,7)
//! ```
//!
//! Design file: a `v: N` line, then one block per line as comma-separated
//! sorted 1-based points.

use std::fmt::Write as _;

use crate::design::Design;
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::{parse_cycles, Perm};

#[derive(Debug, Clone)]
pub struct GroupFile {
    pub name: Option<String>,
    pub group: PermGroup,
}

fn header<'a>(line: &'a str, key: &str) -> Option<&'a str> {
    let (k, rest) = line.split_once(':')?;
    (k.trim() == key).then(|| rest.trim())
}

fn parse_count(text: &str) -> Result<usize> {
    text.trim().parse().map_err(|_| Error::Parse {
        token: text.trim().to_string(),
        reason: "expected a non-negative integer".into(),
    })
}

pub fn parse_group_file(text: &str) -> Result<GroupFile> {
    let mut degree = None;
    let mut name = None;
    let mut gens: Vec<Perm> = Vec::new();
    for line in text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
    {
        if let Some(d) = header(line, "degree") {
            degree = Some(parse_count(d)?);
        } else if let Some(n) = header(line, "name") {
            name = Some(n.to_string());
        } else {
            let degree = degree.ok_or_else(|| Error::Parse {
                token: line.chars().take(20).collect(),
                reason: "generator before `degree:` line".into(),
            })?;
            gens.push(parse_cycles(line, degree)?);
        }
    }
    let degree = degree.ok_or_else(|| Error::Parse {
        token: String::new(),
        reason: "missing `degree:` line".into(),
    })?;
    Ok(GroupFile {
        name,
        group: PermGroup::new(degree, gens)?,
    })
}

pub fn write_group_file(group: &PermGroup, name: Option<&str>) -> String {
    let mut out = format!("degree: {}\n", group.degree());
    if let Some(n) = name {
        let _ = writeln!(out, "name: {n}");
    }
    for g in group.generators() {
        let _ = writeln!(out, "{g}");
    }
    out
}

/// Parses 1-based integers separated by commas or whitespace into sorted
/// 0-based points.
pub fn parse_point_list(text: &str, degree: Option<usize>) -> Result<Vec<usize>> {
    let mut points = Vec::new();
    for token in text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
    {
        let x: usize = token.parse().map_err(|_| Error::Parse {
            token: token.to_string(),
            reason: "not an integer".into(),
        })?;
        if x == 0 || degree.is_some_and(|d| x > d) {
            return Err(Error::Parse {
                token: token.to_string(),
                reason: "point out of range".into(),
            });
        }
        points.push(x - 1);
    }
    points.sort_unstable();
    if points.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Parse {
            token: text.chars().take(20).collect(),
            reason: "repeated point".into(),
        });
    }
    Ok(points)
}

pub fn format_point_list(points: &[usize]) -> String {
    points.iter().map(|p| (p + 1).to_string()).collect::<Vec<_>>().join(",")
}

pub fn parse_design_file(text: &str) -> Result<Design> {
    let mut v = None;
    let mut blocks = Vec::new();
    for line in text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
    {
        if let Some(n) = header(line, "v") {
            v = Some(parse_count(n)?);
        } else {
            let v = v.ok_or_else(|| Error::Parse {
                token: line.chars().take(20).collect(),
                reason: "block before `v:` line".into(),
            })?;
            blocks.push(parse_point_list(line, Some(v))?);
        }
    }
    let v = v.ok_or_else(|| Error::Parse {
        token: String::new(),
        reason: "missing `v:` line".into(),
    })?;
    Design::new(v, blocks)
}

pub fn write_design_file(design: &Design) -> String {
    let mut out = format!("v: {}\n", design.v());
    for b in design.blocks() {
        out.push_str(&format_point_list(b));
        out.push('\n');
    }
    out
}

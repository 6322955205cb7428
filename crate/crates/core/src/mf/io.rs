//! Matrix file format.
//!
//! ```text
//! mf rank <r+> <r-> [shifts <q,...>|<q,...>]
//! sharp
//! <r+ lines of r- entries separated by ';'>
//! flat
//! <r- lines of r+ entries>
//! ```
//! `_` is the zero entry and `#` starts a comment. Instead of a `flat`
//! block, `flat adjugate <h>` asks for `adj(sharp) / h`. The layout is shared
//! with seed files, whose entries use a richer cell syntax and which may
//! follow `flat adjugate <h>` with a cell block referring to `adj`.

use std::fmt::Write as _;
use std::sync::Arc;

use super::{flat_from_adjugate, SuperModule};
use crate::error::{MfError, ParseError};
use crate::matrix::PolyMatrix;
use crate::ring::{parse_polynomial, GradedRing, Polynomial};
use crate::scalar::{parse_rational, Rational};

#[derive(Debug, Clone, PartialEq)]
pub enum FlatLayout {
    Rows(Vec<Vec<String>>),
    /// `adj(sharp) / h`, optionally followed by seed cells.
    Adjugate {
        h: String,
        cells: Option<Vec<Vec<String>>>,
    },
}

/// A matrix file before its cells are interpreted.
#[derive(Debug, Clone, PartialEq)]
pub struct Layout {
    pub rank_even: usize,
    pub rank_odd: usize,
    pub shifts: Option<(Vec<Rational>, Vec<Rational>)>,
    pub sharp: Vec<Vec<String>>,
    pub flat: FlatLayout,
}

pub fn parse_layout(text: &str) -> Result<Layout, ParseError> {
    let mut lines =
        text.lines().enumerate().map(|(i, l)| (i + 1, l.split('#').next().unwrap().trim())).filter(|(_, l)| !l.is_empty()).peekable();
    let (n, header) = lines.next().ok_or_else(|| ParseError::line(1, "empty matrix file"))?;
    let words: Vec<&str> = header.split_whitespace().collect();
    if words.len() < 4 || words[0] != "mf" || words[1] != "rank" {
        return Err(ParseError::line(n, "expected `mf rank <r+> <r-> [shifts ...]`"));
    }
    let rank = |s: &str| s.parse::<usize>().map_err(|_| ParseError::line(n, format!("bad rank `{s}`")));
    let (rank_even, rank_odd) = (rank(words[2])?, rank(words[3])?);
    let shifts = match &words[4..] {
        [] => None,
        ["shifts", rest @ ..] => {
            let joined = rest.concat();
            let (e, o) = joined.split_once('|').ok_or_else(|| ParseError::line(n, "shifts need `even|odd`"))?;
            let list = |s: &str, want: usize| -> Result<Vec<Rational>, ParseError> {
                let v = s
                    .split(',')
                    .filter(|t| !t.trim().is_empty())
                    .map(parse_rational)
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| ParseError::line(n, e.to_string()))?;
                if v.len() != want {
                    return Err(ParseError::line(n, format!("expected {want} shifts, got {}", v.len())));
                }
                Ok(v)
            };
            Some((list(e, rank_even)?, list(o, rank_odd)?))
        }
        _ => return Err(ParseError::line(n, "unexpected words after ranks")),
    };

    let expect_word = |got: Option<(usize, &str)>, word: &str| -> Result<(usize, String), ParseError> {
        match got {
            Some((n, l)) if l.split_whitespace().next() == Some(word) => Ok((n, l.to_string())),
            Some((n, l)) => Err(ParseError::line(n, format!("expected `{word}`, found `{l}`"))),
            None => Err(ParseError::line(0, format!("missing `{word}` block"))),
        }
    };

    let next = lines.next();
    let (n, l) = expect_word(next, "sharp")?;
    if l != "sharp" {
        return Err(ParseError::line(n, "`sharp` takes no arguments"));
    }
    let sharp = block(&mut lines, "sharp", rank_even, rank_odd)?;
    let next = lines.next();
    let (n, l) = expect_word(next, "flat")?;
    let flat = match l.strip_prefix("flat").unwrap().trim() {
        "" => FlatLayout::Rows(block(&mut lines, "flat", rank_odd, rank_even)?),
        rest => match rest.strip_prefix("adjugate") {
            Some(h) if !h.trim().is_empty() => {
                let h = h.trim().to_string();
                match lines.peek() {
                    Some(_) => FlatLayout::Adjugate { h, cells: Some(block(&mut lines, "flat", rank_odd, rank_even)?) },
                    None => FlatLayout::Adjugate { h, cells: None },
                }
            }
            _ => return Err(ParseError::line(n, "expected `flat` or `flat adjugate <h>`")),
        },
    };
    if let Some((n, l)) = lines.next() {
        return Err(ParseError::line(n, format!("unexpected trailing line `{l}`")));
    }
    Ok(Layout { rank_even, rank_odd, shifts, sharp, flat })
}

fn block<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    name: &str,
    rows: usize,
    cols: usize,
) -> Result<Vec<Vec<String>>, ParseError> {
    let mut out = Vec::with_capacity(rows);
    for _ in 0..rows {
        let (n, l) = lines.next().ok_or_else(|| ParseError::line(0, format!("{name} block is too short")))?;
        let cells: Vec<String> = l.split(';').map(|c| c.trim().to_string()).collect();
        if cells.len() != cols {
            return Err(ParseError::line(n, format!("{name} row has {} entries, expected {cols}", cells.len())));
        }
        out.push(cells);
    }
    Ok(out)
}

fn cell(src: &str, ring: &Arc<GradedRing>) -> Result<Polynomial, ParseError> {
    if src == "_" {
        return Ok(Polynomial::zero(ring));
    }
    parse_polynomial(src, ring)
}

fn cells(rows: &[Vec<String>], ring: &Arc<GradedRing>) -> Result<PolyMatrix, ParseError> {
    let parsed = rows.iter().map(|r| r.iter().map(|c| cell(c, ring)).collect::<Result<Vec<_>, _>>()).collect::<Result<Vec<_>, _>>()?;
    Ok(PolyMatrix::from_rows(ring, parsed))
}

/// Reads a concrete factorization. Missing shifts default to zero.
pub fn parse_matrix_file(text: &str, ring: &Arc<GradedRing>) -> Result<(SuperModule, PolyMatrix, PolyMatrix), MfError> {
    let layout = parse_layout(text)?;
    let module = match layout.shifts {
        Some((e, o)) => SuperModule::new(e, o),
        None => SuperModule::ungraded(layout.rank_even, layout.rank_odd),
    };
    let sharp = if layout.rank_even == 0 || layout.rank_odd == 0 {
        PolyMatrix::zeros(ring, layout.rank_even, layout.rank_odd)
    } else {
        cells(&layout.sharp, ring)?
    };
    let flat = match &layout.flat {
        FlatLayout::Rows(rows) if !rows.is_empty() && !rows[0].is_empty() => cells(rows, ring)?,
        FlatLayout::Rows(_) => PolyMatrix::zeros(ring, layout.rank_odd, layout.rank_even),
        FlatLayout::Adjugate { h, cells: None } => flat_from_adjugate(&sharp, &parse_polynomial(h, ring)?)?,
        FlatLayout::Adjugate { cells: Some(_), .. } => {
            return Err(ParseError::line(0, "cells after `flat adjugate` are only allowed in seed files").into())
        }
    };
    Ok((module, sharp, flat))
}

pub fn format_matrix_file(module: &SuperModule, sharp: &PolyMatrix, flat: &PolyMatrix) -> String {
    let list = |v: &[Rational]| v.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(",");
    let mut out = String::new();
    writeln!(out, "mf rank {} {} shifts {}|{}", module.even.rank(), module.odd.rank(), list(&module.even.shifts), list(&module.odd.shifts))
        .unwrap();
    for (name, m) in [("sharp", sharp), ("flat", flat)] {
        writeln!(out, "{name}").unwrap();
        for i in 0..m.rows() {
            let row: Vec<String> = (0..m.cols())
                .map(|j| {
                    let p = m.get(i, j);
                    if p.is_zero() {
                        "_".to_string()
                    } else {
                        p.to_string()
                    }
                })
                .collect();
            writeln!(out, "{}", row.join("; ")).unwrap();
        }
    }
    out
}

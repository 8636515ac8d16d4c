//! File formats. Vertex labels in files and printed output are 1-based;
//! everything in memory is 0-based.
//!
//! Sequence files:
//!
//! ```json
//! {"kind": "simple", "degrees": [2, 2, 2]}
//! {"kind": "bipartite", "u": [2, 2, 1], "w": [3, 1, 1]}
//! {"kind": "directed", "out": [1, 1, 1], "in": [1, 1, 1]}
//! {"kind": "split", "u": [2], "w": [1, 1]}
//! {"kind": "splitted", "primary": [1, 1], "secondary": [1, 1], "forbidden": [[1, 1]]}
//! ```
//!
//! `kind` may be omitted when the fields make it unambiguous (`degrees`,
//! `u`/`w`, `out`/`in`, `primary`/`secondary`). Forbidden-pair files are a
//! JSON list of `[u, w]` pairs. Degree spectra files are
//! `{"delta": D, "columns": [[...], ...]}`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::decomposition::{RestrictedSequence, SplitSequence, SplittedBipartiteSequence};
use crate::error::{Error, Result};
use crate::graph::{Layout, Realization};
use crate::sequence::{BipartiteDegreeSequence, DegreeSequence, DirectedDegreeSequence, ForbiddenSet, Sequence};
use crate::spectra::DegreeSpectraMatrix;

/// Version stamped into every JSON report.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawInput {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degrees: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<Vec<usize>>,
    #[serde(default, rename = "in", skip_serializing_if = "Option::is_none")]
    pub inn: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub primary: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub secondary: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forbidden: Option<Vec<[usize; 2]>>,
}

/// Any input a subcommand can take.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Input {
    Sequence(Sequence),
    Split(SplitSequence),
    Splitted(RestrictedSequence),
}

fn field(v: Option<Vec<usize>>, name: &str, kind: &str) -> Result<Vec<usize>> {
    v.ok_or_else(|| Error::InvalidSequence(format!("{kind} input needs field `{name}`")))
}

impl RawInput {
    fn infer_kind(&self) -> Result<String> {
        if let Some(k) = &self.kind {
            return Ok(k.clone());
        }
        let kind = if self.degrees.is_some() {
            "simple"
        } else if self.out.is_some() || self.inn.is_some() {
            "directed"
        } else if self.primary.is_some() || self.secondary.is_some() {
            "splitted"
        } else if self.u.is_some() || self.w.is_some() {
            "bipartite"
        } else {
            return Err(Error::InvalidSequence("cannot tell the sequence kind".into()));
        };
        Ok(kind.into())
    }

    pub fn into_input(self) -> Result<Input> {
        let kind = self.infer_kind()?;
        let forbidden = self.forbidden.as_deref().map(forbidden_from_pairs).transpose()?;
        if forbidden.is_some() && kind != "splitted" {
            return Err(Error::InvalidSequence(format!(
                "`forbidden` inside a {kind} input; pass a forbidden file instead"
            )));
        }
        match kind.as_str() {
            "simple" => Ok(Input::Sequence(Sequence::Simple(DegreeSequence::new(field(self.degrees, "degrees", &kind)?)?))),
            "bipartite" => Ok(Input::Sequence(Sequence::Bipartite(BipartiteDegreeSequence::new(
                field(self.u, "u", &kind)?,
                field(self.w, "w", &kind)?,
            )))),
            "directed" => Ok(Input::Sequence(Sequence::Directed(DirectedDegreeSequence::new(
                field(self.out, "out", &kind)?,
                field(self.inn, "in", &kind)?,
            )?))),
            "split" => Ok(Input::Split(SplitSequence::new(field(self.u, "u", &kind)?, field(self.w, "w", &kind)?)?)),
            "splitted" => Ok(Input::Splitted(RestrictedSequence::new(
                SplittedBipartiteSequence::new(field(self.primary, "primary", &kind)?, field(self.secondary, "secondary", &kind)?),
                forbidden.unwrap_or_default(),
            )?)),
            other => Err(Error::InvalidSequence(format!("unknown kind `{other}`"))),
        }
    }
}

pub fn parse_input(text: &str) -> Result<Input> {
    serde_json::from_str::<RawInput>(text)?.into_input()
}

pub fn read_input(path: &Path) -> Result<Input> {
    parse_input(&std::fs::read_to_string(path)?)
}

/// Parses a sequence file, rejecting split/splitted inputs.
pub fn parse_sequence(text: &str) -> Result<Sequence> {
    match parse_input(text)? {
        Input::Sequence(s) => Ok(s),
        _ => Err(Error::InvalidSequence("expected a simple, bipartite or directed sequence".into())),
    }
}

pub fn read_sequence(path: &Path) -> Result<Sequence> {
    parse_sequence(&std::fs::read_to_string(path)?)
}

fn forbidden_from_pairs(pairs: &[[usize; 2]]) -> Result<ForbiddenSet> {
    pairs
        .iter()
        .map(|&[u, w]| {
            if u == 0 || w == 0 {
                Err(Error::InvalidSequence("forbidden pairs are 1-based".into()))
            } else {
                Ok((u - 1, w - 1))
            }
        })
        .collect()
}

pub fn parse_forbidden(text: &str) -> Result<ForbiddenSet> {
    forbidden_from_pairs(&serde_json::from_str::<Vec<[usize; 2]>>(text)?)
}

pub fn read_forbidden(path: &Path) -> Result<ForbiddenSet> {
    parse_forbidden(&std::fs::read_to_string(path)?)
}

pub fn forbidden_to_pairs(f: &ForbiddenSet) -> Vec<[usize; 2]> {
    f.iter().map(|(u, w)| [u + 1, w + 1]).collect()
}

pub fn read_dsm(path: &Path) -> Result<DegreeSpectraMatrix> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

pub fn sequence_to_raw(seq: &Sequence) -> RawInput {
    match seq {
        Sequence::Simple(d) => RawInput { kind: Some("simple".into()), degrees: Some(d.degrees().to_vec()), ..Default::default() },
        Sequence::Bipartite(bd) => {
            RawInput { kind: Some("bipartite".into()), u: Some(bd.u.clone()), w: Some(bd.w.clone()), ..Default::default() }
        }
        Sequence::Directed(dd) => RawInput {
            kind: Some("directed".into()),
            out: Some(dd.out_degrees().to_vec()),
            inn: Some(dd.in_degrees().to_vec()),
            ..Default::default()
        },
    }
}

/// 1-based edge pairs. Bipartite edges are `(u, w)` with each side numbered
/// within its class; in Gale's representation these are the arcs `u -> w`.
pub fn edge_pairs(r: &Realization) -> Vec<[usize; 2]> {
    r.edges().iter().map(|&(a, b)| [a + 1, b + 1]).collect()
}

/// One `a b` line per edge.
pub fn edges_text(r: &Realization) -> String {
    edge_pairs(r).iter().map(|[a, b]| format!("{a} {b}\n")).collect()
}

pub fn layout_name(layout: Layout) -> &'static str {
    match layout {
        Layout::Simple { .. } => "simple",
        Layout::Bipartite { .. } => "bipartite",
    }
}

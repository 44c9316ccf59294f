//! The `.qm` text format: a ground header, named family sections and an
//! optional rank section.
//!
//! ```text
//! # comment
//! ground q=2 n=2
//! [family I]
//! 0
//! 10
//! [rank]
//! 0 = 0
//! 01 = 0
//! ...
//! ```

use std::fmt::Write as _;
use std::sync::Arc;

use thiserror::Error;

use crate::family::SubspaceFamily;
use crate::gf::FieldOrder;
use crate::lattice::{LatticeError, SubspaceLattice};
use crate::qmatroid::{QMatroid, RankFunction};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocumentErrorKind {
    #[error("missing header 'ground q=<prime> n=<int>'")]
    MissingHeader,
    #[error("malformed header '{0}' (expected 'ground q=<prime> n=<int>')")]
    MalformedHeader(String),
    #[error("header appears twice")]
    DuplicateHeader,
    #[error("malformed section header '{0}'")]
    BadSection(String),
    #[error("invalid family name '{0}'")]
    BadFamilyName(String),
    #[error("section '{0}' appears twice")]
    DuplicateSection(String),
    #[error("entry outside any section")]
    OutsideSection,
    #[error(transparent)]
    Literal(#[from] LatticeError),
    #[error("{0} listed twice")]
    DuplicateEntry(String),
    #[error("malformed rank line '{0}' (expected '<subspace> = <int>')")]
    BadRankLine(String),
    #[error("rank section has no value for {0}")]
    NotTotal(String),
}

/// A parse failure with the 1-based line it refers to.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct DocumentError {
    pub line: usize,
    pub kind: DocumentErrorKind,
}

#[derive(Debug, Clone)]
pub struct Document {
    pub lattice: Arc<SubspaceLattice>,
    /// Families in document order.
    pub families: Vec<(String, SubspaceFamily)>,
    pub rank: Option<RankFunction>,
}

impl PartialEq for Document {
    fn eq(&self, other: &Self) -> bool {
        self.lattice.q() == other.lattice.q()
            && self.lattice.n() == other.lattice.n()
            && self.families == other.families
            && self.rank == other.rank
    }
}

impl Eq for Document {}

fn is_family_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn parse_header(line: &str) -> Option<(u32, usize)> {
    let mut words = line.split_whitespace();
    if words.next()? != "ground" {
        return None;
    }
    let q = words.next()?.strip_prefix("q=")?.parse().ok()?;
    let n = words.next()?.strip_prefix("n=")?.parse().ok()?;
    words.next().is_none().then_some((q, n))
}

enum Section {
    None,
    Family(usize),
    Rank,
}

impl Document {
    pub fn new(lattice: &Arc<SubspaceLattice>) -> Self {
        Document { lattice: Arc::clone(lattice), families: Vec::new(), rank: None }
    }

    /// Independent spaces under `family_name` together with the rank section.
    pub fn from_qmatroid(m: &QMatroid, family_name: &str) -> Self {
        Document {
            lattice: Arc::clone(m.lattice()),
            families: vec![(family_name.to_string(), m.independent_spaces())],
            rank: Some(m.rank_function().clone()),
        }
    }

    pub fn family(&self, name: &str) -> Option<&SubspaceFamily> {
        self.families.iter().find(|(n, _)| n == name).map(|(_, f)| f)
    }

    pub fn family_names(&self) -> impl Iterator<Item = &str> {
        self.families.iter().map(|(n, _)| n.as_str())
    }

    pub fn parse(text: &str) -> Result<Document, DocumentError> {
        let err = |line: usize, kind: DocumentErrorKind| DocumentError { line, kind };
        let mut doc: Option<Document> = None;
        let mut section = Section::None;
        let mut rank_values: Option<Vec<Option<u32>>> = None;
        let mut rank_line = 0;

        for (i, raw) in text.split('\n').enumerate() {
            let no = i + 1;
            let raw = raw.strip_suffix('\r').unwrap_or(raw);
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some(d) = doc.as_mut() else {
                let (q, n) = parse_header(line).ok_or_else(|| {
                    if line.starts_with("ground") {
                        err(no, DocumentErrorKind::MalformedHeader(line.to_string()))
                    } else {
                        err(no, DocumentErrorKind::MissingHeader)
                    }
                })?;
                let field = FieldOrder::new(q).map_err(|e| err(no, LatticeError::from(e).into()))?;
                let lattice = SubspaceLattice::shared(field, n).map_err(|e| err(no, e.into()))?;
                doc = Some(Document::new(&lattice));
                continue;
            };
            if parse_header(line).is_some() || line.starts_with("ground ") {
                return Err(err(no, DocumentErrorKind::DuplicateHeader));
            }
            if line.starts_with('[') {
                let inner = line
                    .strip_prefix('[')
                    .and_then(|s| s.strip_suffix(']'))
                    .ok_or_else(|| err(no, DocumentErrorKind::BadSection(line.to_string())))?;
                let words: Vec<&str> = inner.split_whitespace().collect();
                section = match words.as_slice() {
                    ["rank"] => {
                        if rank_values.is_some() {
                            return Err(err(no, DocumentErrorKind::DuplicateSection("rank".into())));
                        }
                        rank_values = Some(vec![None; d.lattice.len()]);
                        rank_line = no;
                        Section::Rank
                    }
                    ["family", name] => {
                        if !is_family_name(name) {
                            return Err(err(no, DocumentErrorKind::BadFamilyName(name.to_string())));
                        }
                        if d.family(name).is_some() {
                            return Err(err(no, DocumentErrorKind::DuplicateSection(format!("family {name}"))));
                        }
                        d.families.push((name.to_string(), SubspaceFamily::empty(&d.lattice)));
                        Section::Family(d.families.len() - 1)
                    }
                    _ => return Err(err(no, DocumentErrorKind::BadSection(line.to_string()))),
                };
                continue;
            }
            match section {
                Section::None => return Err(err(no, DocumentErrorKind::OutsideSection)),
                Section::Family(k) => {
                    let idx = d.lattice.parse(line).map_err(|e| err(no, e.into()))?;
                    let family = &mut d.families[k].1;
                    if family.contains_index(idx) {
                        let lit = d.lattice.subspace(idx).literal();
                        return Err(err(no, DocumentErrorKind::DuplicateEntry(lit)));
                    }
                    family.insert(idx);
                }
                Section::Rank => {
                    let (lit, value) = line
                        .split_once('=')
                        .ok_or_else(|| err(no, DocumentErrorKind::BadRankLine(line.to_string())))?;
                    let value: u32 = value
                        .trim()
                        .parse()
                        .map_err(|_| err(no, DocumentErrorKind::BadRankLine(line.to_string())))?;
                    let idx = d.lattice.parse(lit.trim()).map_err(|e| err(no, e.into()))?;
                    let slot = &mut rank_values.as_mut().expect("rank section open")[idx];
                    if slot.is_some() {
                        let lit = d.lattice.subspace(idx).literal();
                        return Err(err(no, DocumentErrorKind::DuplicateEntry(lit)));
                    }
                    *slot = Some(value);
                }
            }
        }

        let mut doc = doc.ok_or_else(|| err(1, DocumentErrorKind::MissingHeader))?;
        if let Some(values) = rank_values {
            let mut total = Vec::with_capacity(values.len());
            for (i, v) in values.into_iter().enumerate() {
                match v {
                    Some(v) => total.push(v),
                    None => {
                        let lit = doc.lattice.subspace(i).literal();
                        return Err(err(rank_line, DocumentErrorKind::NotTotal(lit)));
                    }
                }
            }
            doc.rank = Some(RankFunction::new(&doc.lattice, total).expect("length matches lattice"));
        }
        Ok(doc)
    }

    /// Canonical text: literals in lattice order, families in document order.
    pub fn render(&self) -> String {
        let l = &self.lattice;
        let mut out = format!("ground q={} n={}\n", l.q(), l.n());
        for (name, family) in &self.families {
            let _ = write!(out, "\n[family {name}]\n");
            for s in family.subspaces() {
                let _ = writeln!(out, "{}", s.literal());
            }
        }
        if let Some(rank) = &self.rank {
            out.push_str("\n[rank]\n");
            for (i, s) in l.subspaces().iter().enumerate() {
                let _ = writeln!(out, "{} = {}", s.literal(), rank.value_at(i));
            }
        }
        out
    }
}

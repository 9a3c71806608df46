//! Reading and writing the textual formats: programs and hypotheses (`.lp`),
//! labelled examples (`.ex`), mode declarations (`.modes`) and metarules
//! (`.mrules`).

mod lexer;
mod parser;

use std::fmt;
use std::path::Path;

use thiserror::Error;

use crate::logic::{Atom, Clause, ExampleSet, Program};
use crate::mdie::ModeDecl;
use crate::mil::Metarule;

pub use parser::{parse_atom, parse_clause, parse_examples, parse_metarules, parse_modes, parse_program};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{line}:{column}: expected {expected}, found {found}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub expected: String,
    pub found: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, expected: &str, found: &str) -> Self {
        ParseError { line, column, expected: expected.to_string(), found: found.to_string() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum LpError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{line}:{column}: unknown placemarker '{found}' (use +type, -type or #type)")]
    UnknownPlacemarker { line: usize, column: usize, found: String },
    #[error("{line}:{column}: recall must be a positive integer or '*', found {found}")]
    InvalidRecall { line: usize, column: usize, found: String },
    #[error("{line}:{column}: duplicate metarule '{name}'")]
    DuplicateMetarule { line: usize, column: usize, name: String },
    #[error("{line}:{column}: metarule literal has arity {arity}, at most 2 is supported")]
    MetaruleArity { line: usize, column: usize, arity: usize },
    #[error("{line}:{column}: example must be pos(atom) or neg(atom), found {found}")]
    BadExample { line: usize, column: usize, found: String },
    #[error("{line}:{column}: example {found} is not ground")]
    NonGroundExample { line: usize, column: usize, found: String },
}

impl LpError {
    /// Source position the error points at.
    pub fn position(&self) -> (usize, usize) {
        match self {
            LpError::Parse(e) => (e.line, e.column),
            LpError::UnknownPlacemarker { line, column, .. }
            | LpError::InvalidRecall { line, column, .. }
            | LpError::DuplicateMetarule { line, column, .. }
            | LpError::MetaruleArity { line, column, .. }
            | LpError::BadExample { line, column, .. }
            | LpError::NonGroundExample { line, column, .. } => (*line, *column),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FileKind {
    Facts,
    Examples,
    Modes,
    Metarules,
    Hypothesis,
}

impl FileKind {
    /// Kind implied by a file extension. `.lp` is read as facts; callers
    /// that load a learned rule set pick `Hypothesis` explicitly.
    pub fn from_path(path: &Path) -> Option<FileKind> {
        match path.extension()?.to_str()? {
            "lp" | "pl" => Some(FileKind::Facts),
            "ex" => Some(FileKind::Examples),
            "modes" => Some(FileKind::Modes),
            "mrules" => Some(FileKind::Metarules),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Declarations {
    Clauses(Vec<Clause>),
    Examples(ExampleSet),
    Modes(Vec<ModeDecl>),
    Metarules(Vec<Metarule>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceFile {
    pub path: String,
    pub kind: FileKind,
    pub declarations: Declarations,
}

impl SourceFile {
    pub fn parse(path: &str, kind: FileKind, text: &str) -> Result<SourceFile, LpError> {
        let declarations = match kind {
            FileKind::Facts | FileKind::Hypothesis => Declarations::Clauses(parse_program(text)?.clauses().to_vec()),
            FileKind::Examples => Declarations::Examples(parse_examples(text)?),
            FileKind::Modes => Declarations::Modes(parse_modes(text)?),
            FileKind::Metarules => Declarations::Metarules(parse_metarules(text)?),
        };
        Ok(SourceFile { path: path.to_string(), kind, declarations })
    }

    pub fn serialize(&self) -> String {
        match &self.declarations {
            Declarations::Clauses(c) => serialize_clauses(c),
            Declarations::Examples(e) => serialize_examples(e),
            Declarations::Modes(m) => serialize_modes(m),
            Declarations::Metarules(m) => serialize_metarules(m),
        }
    }
}

fn lines<T: fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    let mut out = String::new();
    for item in items {
        out.push_str(&item.to_string());
        out.push('\n');
    }
    out
}

pub fn serialize_clauses(clauses: &[Clause]) -> String {
    lines(clauses)
}

pub fn serialize_program(program: &Program) -> String {
    lines(program.clauses())
}

pub fn serialize_examples(examples: &ExampleSet) -> String {
    let pos = examples.positives.iter().map(|a| format!("pos({a})."));
    let neg = examples.negatives.iter().map(|a| format!("neg({a})."));
    lines(pos.chain(neg))
}

pub fn serialize_modes(modes: &[ModeDecl]) -> String {
    lines(modes)
}

pub fn serialize_metarules(rules: &[Metarule]) -> String {
    lines(rules)
}

pub fn serialize_atoms(atoms: &[Atom]) -> String {
    lines(atoms.iter().map(|a| format!("{a}.")))
}

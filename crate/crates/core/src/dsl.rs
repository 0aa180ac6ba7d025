//! Line-oriented text format for ologs and mappings.
//!
//! ```text
//! olog "parents"
//! # comments run to the end of the line
//! type person = "a person" by {A, B}
//! aspect mother : person -> woman = "has as mother" by {A}
//! fact F : [mother] ~ [parents; w] by {}
//! ```
//!
//! ```text
//! mapping "F"
//! source "man.olog"
//! target "animal.olog"
//! object 1 -> c
//! arrow f -> [cd]
//! component 1 = "is" by {S}
//! square f by {S}
//! ```
//!
//! Identity paths are written `[1]`, or `[1@type]` when neither side of a
//! fact fixes the type. Each item needs its own line, and every identifier
//! is declared before it is used. `by {...}` may be omitted on input, which
//! means nobody endorses the item; output always writes it.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::category::{CatFunctor, CategoryError, Path, PathCategory};
use crate::linguistics::{AuthorSet, NounPhrase, VerbPhrase};
use crate::mapping::OlogMorphism;
use crate::olog::{AspectLabel, LinguisticStructure, Olog, TypeLabel};

/// Identifier reserved for identity paths.
pub const IDENTITY: &str = "1";

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DslError {
    #[error("line {line}, column {col}: expected {}, found {found}", .expected.join(" or "))]
    Syntax {
        line: usize,
        col: usize,
        expected: Vec<String>,
        found: String,
    },
    #[error("line {line}, column {col}: `{id}` is not declared")]
    DanglingReference { line: usize, col: usize, id: String },
    #[error("line {line}, column {col}: `{id}` is already declared")]
    DuplicateId { line: usize, col: usize, id: String },
    #[error("line {line}, column {col}: noun phrase {text:?} must start with \"a\" or \"an\"")]
    BadNounPhrase {
        line: usize,
        col: usize,
        text: String,
    },
    #[error("line {line}: {message}")]
    Invalid { line: usize, message: String },
    /// A mapping entry that does not fit its source or target olog.
    #[error("{0}")]
    Unresolved(String),
}

// ---------------------------------------------------------------------------
// Lexing

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Str(String),
    Arrow,
    Punct(char),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Str(s) => write!(f, "{s:?}"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::Punct(c) => write!(f, "`{c}`"),
        }
    }
}

fn ident_start(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

fn ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars().peekable();
    let Some(first) = chars.next() else {
        return false;
    };
    if !ident_start(first) {
        return false;
    }
    while let Some(c) = chars.next() {
        let ok = ident_char(c) || (c == '-' && chars.peek().is_some_and(|&n| ident_char(n)));
        if !ok {
            return false;
        }
    }
    true
}

fn lex_line(line_no: usize, text: &str) -> Result<Vec<(Tok, usize)>, DslError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c == '#' {
            break;
        } else if c == '"' {
            let mut s = String::new();
            i += 1;
            loop {
                match chars.get(i) {
                    None => {
                        return Err(DslError::Syntax {
                            line: line_no,
                            col: i + 1,
                            expected: vec!["`\"`".into()],
                            found: "end of line".into(),
                        })
                    }
                    Some('"') => {
                        i += 1;
                        break;
                    }
                    Some('\\') => {
                        match chars.get(i + 1) {
                            Some(&e @ ('"' | '\\')) => s.push(e),
                            other => {
                                return Err(DslError::Syntax {
                                    line: line_no,
                                    col: i + 2,
                                    expected: vec!["`\\\"`".into(), "`\\\\`".into()],
                                    found: other
                                        .map_or("end of line".into(), |c| format!("`\\{c}`")),
                                })
                            }
                        }
                        i += 2;
                    }
                    Some(&ch) => {
                        s.push(ch);
                        i += 1;
                    }
                }
            }
            out.push((Tok::Str(s), col));
        } else if c == '-' && chars.get(i + 1) == Some(&'>') {
            out.push((Tok::Arrow, col));
            i += 2;
        } else if ident_start(c) {
            let start = i;
            i += 1;
            while i < chars.len()
                && (ident_char(chars[i])
                    || (chars[i] == '-'
                        && chars.get(i + 1).is_some_and(|&n| n != '>' && ident_char(n))))
            {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
        } else if "=:[];~{},@".contains(c) {
            out.push((Tok::Punct(c), col));
            i += 1;
        } else {
            return Err(DslError::Syntax {
                line: line_no,
                col,
                expected: vec!["a declaration".into()],
                found: format!("`{c}`"),
            });
        }
    }
    Ok(out)
}

struct Line {
    no: usize,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
}

impl Line {
    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |t| t.1)
    }

    fn found(&self) -> String {
        self.toks
            .get(self.pos)
            .map_or("end of line".into(), |t| t.0.to_string())
    }

    fn fail<T>(&self, expected: &[&str]) -> Result<T, DslError> {
        Err(DslError::Syntax {
            line: self.no,
            col: self.col(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.found(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn keyword(&mut self, kw: &str) -> Result<(), DslError> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == kw => {
                self.pos += 1;
                Ok(())
            }
            _ => self.fail(&[&format!("`{kw}`")]),
        }
    }

    fn punct(&mut self, c: char) -> Result<(), DslError> {
        if self.peek() == Some(&Tok::Punct(c)) {
            self.pos += 1;
            Ok(())
        } else {
            self.fail(&[&format!("`{c}`")])
        }
    }

    fn arrow(&mut self) -> Result<(), DslError> {
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            Ok(())
        } else {
            self.fail(&["`->`"])
        }
    }

    /// An identifier and its column.
    fn ident(&mut self, what: &str) -> Result<(String, usize), DslError> {
        let col = self.col();
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok((s, col))
            }
            _ => self.fail(&[what]),
        }
    }

    fn string(&mut self, what: &str) -> Result<(String, usize), DslError> {
        let col = self.col();
        match self.peek() {
            Some(Tok::Str(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok((s, col))
            }
            _ => self.fail(&[what]),
        }
    }

    fn noun(&mut self) -> Result<NounPhrase, DslError> {
        let (text, col) = self.string("a quoted noun phrase")?;
        NounPhrase::new(&text).map_err(|_| DslError::BadNounPhrase {
            line: self.no,
            col,
            text,
        })
    }

    fn verb(&mut self) -> Result<VerbPhrase, DslError> {
        if matches!(self.peek(), Some(Tok::Ident(s)) if s == "unit") {
            self.pos += 1;
            return Ok(VerbPhrase::Unit);
        }
        let col = self.col();
        let (text, _) = match self.peek() {
            Some(Tok::Str(_)) => self.string("")?,
            _ => return self.fail(&["a quoted verb phrase", "`unit`"]),
        };
        VerbPhrase::atomic(&text).map_err(|e| DslError::Invalid {
            line: self.no,
            message: format!("column {col}: {e}"),
        })
    }

    /// `by {a, "b c"}`, or nothing.
    fn authors(&mut self) -> Result<AuthorSet, DslError> {
        if self.peek().is_none() {
            return Ok(AuthorSet::new());
        }
        self.keyword("by")?;
        self.punct('{')?;
        let mut out = AuthorSet::new();
        if self.peek() == Some(&Tok::Punct('}')) {
            self.pos += 1;
            return Ok(out);
        }
        loop {
            match self.peek().cloned() {
                Some(Tok::Ident(s)) | Some(Tok::Str(s)) => {
                    out.insert(s);
                    self.pos += 1;
                }
                _ => return self.fail(&["an author"]),
            }
            match self.peek() {
                Some(Tok::Punct(',')) => self.pos += 1,
                Some(Tok::Punct('}')) => {
                    self.pos += 1;
                    return Ok(out);
                }
                _ => return self.fail(&["`,`", "`}`"]),
            }
        }
    }

    /// `[a; b]`, `[1]` or `[1@t]`; identity entries inside a list are
    /// dropped.
    fn path(&mut self) -> Result<RawPath, DslError> {
        self.punct('[')?;
        let mut raw = RawPath {
            arrows: Vec::new(),
            at: None,
        };
        loop {
            let (id, col) = self.ident("an aspect id or `1`")?;
            if id == IDENTITY {
                if self.peek() == Some(&Tok::Punct('@')) {
                    self.pos += 1;
                    raw.at = Some(self.ident("a type id")?);
                }
            } else {
                raw.arrows.push((id, col));
            }
            match self.peek() {
                Some(Tok::Punct(';')) => self.pos += 1,
                Some(Tok::Punct(']')) => {
                    self.pos += 1;
                    return Ok(raw);
                }
                _ => return self.fail(&["`;`", "`]`"]),
            }
        }
    }

    fn end(&self) -> Result<(), DslError> {
        if self.pos < self.toks.len() {
            self.fail(&["end of line"])
        } else {
            Ok(())
        }
    }
}

struct RawPath {
    arrows: Vec<(String, usize)>,
    at: Option<(String, usize)>,
}

fn lines(text: &str) -> Result<Vec<Line>, DslError> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let toks = lex_line(n + 1, raw)?;
        if !toks.is_empty() {
            out.push(Line {
                no: n + 1,
                toks,
                pos: 0,
                end_col: raw.chars().count() + 1,
            });
        }
    }
    Ok(out)
}

fn header(lines: &mut [Line], kw: &str) -> Result<String, DslError> {
    let Some(first) = lines.first_mut() else {
        return Err(DslError::Syntax {
            line: 1,
            col: 1,
            expected: vec![format!("`{kw}`")],
            found: "end of file".into(),
        });
    };
    first.keyword(kw)?;
    let (name, _) = first.string("a quoted name")?;
    first.end()?;
    Ok(name)
}

// ---------------------------------------------------------------------------
// Writing

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn write_authors(a: &AuthorSet) -> String {
    let names: Vec<String> = a
        .iter()
        .map(|s| {
            if is_identifier(s) {
                s.clone()
            } else {
                quote(s)
            }
        })
        .collect();
    format!("by {{{}}}", names.join(", "))
}

fn write_verb(v: &VerbPhrase) -> String {
    if v.is_unit() {
        "unit".into()
    } else {
        quote(&v.reading())
    }
}

// ---------------------------------------------------------------------------
// Ologs

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Declaration {
    Type {
        id: String,
        noun: NounPhrase,
        authors: AuthorSet,
    },
    Aspect {
        id: String,
        source: String,
        target: String,
        verb: VerbPhrase,
        authors: AuthorSet,
    },
    Fact {
        id: String,
        lhs: Path,
        rhs: Path,
        authors: AuthorSet,
    },
}

impl Declaration {
    pub fn id(&self) -> &str {
        match self {
            Declaration::Type { id, .. }
            | Declaration::Aspect { id, .. }
            | Declaration::Fact { id, .. } => id,
        }
    }

    fn rank(&self) -> u8 {
        match self {
            Declaration::Type { .. } => 0,
            Declaration::Aspect { .. } => 1,
            Declaration::Fact { .. } => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OlogDocument {
    pub name: String,
    pub declarations: Vec<Declaration>,
}

impl OlogDocument {
    /// Declarations sorted by kind, then id.
    pub fn canonical(&self) -> OlogDocument {
        let mut declarations = self.declarations.clone();
        declarations.sort_by(|a, b| (a.rank(), a.id()).cmp(&(b.rank(), b.id())));
        OlogDocument {
            name: self.name.clone(),
            declarations,
        }
    }

    pub fn to_olog(&self) -> Result<Olog, CategoryError> {
        let mut category = PathCategory::new();
        let mut structure = LinguisticStructure::default();
        for d in &self.declarations {
            match d {
                Declaration::Type { id, noun, authors } => {
                    category.add_object(id.clone())?;
                    structure.type_labels.insert(
                        id.clone(),
                        TypeLabel {
                            noun: noun.clone(),
                            authors: authors.clone(),
                        },
                    );
                }
                Declaration::Aspect {
                    id,
                    source,
                    target,
                    verb,
                    authors,
                } => {
                    category.add_generator(id.clone(), source.clone(), target.clone())?;
                    structure.aspect_labels.insert(
                        id.clone(),
                        AspectLabel {
                            verb: verb.clone(),
                            authors: authors.clone(),
                        },
                    );
                }
                Declaration::Fact {
                    id,
                    lhs,
                    rhs,
                    authors,
                } => {
                    category.add_equation(id.clone(), lhs.clone(), rhs.clone())?;
                    structure.fact_authors.insert(id.clone(), authors.clone());
                }
            }
        }
        Ok(Olog::new(self.name.clone(), category, structure))
    }

    /// The document of an olog, in canonical order. Composite verb phrases
    /// are written as their reading.
    pub fn from_olog(o: &Olog) -> OlogDocument {
        let mut declarations = Vec::new();
        for obj in o.category.objects() {
            if let Some(t) = o.structure.type_labels.get(obj) {
                declarations.push(Declaration::Type {
                    id: obj.clone(),
                    noun: t.noun.clone(),
                    authors: t.authors.clone(),
                });
            }
        }
        for g in o.category.generators() {
            if let Some(a) = o.structure.aspect_labels.get(&g.id) {
                let verb = match &a.verb {
                    VerbPhrase::Concat(..) => VerbPhrase::Atomic(a.verb.reading()),
                    v => v.clone(),
                };
                declarations.push(Declaration::Aspect {
                    id: g.id.clone(),
                    source: g.source.clone(),
                    target: g.target.clone(),
                    verb,
                    authors: a.authors.clone(),
                });
            }
        }
        for eq in o.category.equations() {
            declarations.push(Declaration::Fact {
                id: eq.id.clone(),
                lhs: eq.lhs.clone(),
                rhs: eq.rhs.clone(),
                authors: o
                    .structure
                    .fact_authors
                    .get(&eq.id)
                    .cloned()
                    .unwrap_or_default(),
            });
        }
        OlogDocument {
            name: o.name.clone(),
            declarations,
        }
        .canonical()
    }
}

fn write_path(p: &Path, other: &Path) -> String {
    if !p.is_identity() {
        format!("[{}]", p.arrows().join("; "))
    } else if other.is_identity() {
        format!("[{IDENTITY}@{}]", p.source())
    } else {
        format!("[{IDENTITY}]")
    }
}

/// Canonical text of `doc`: declarations sorted by kind then id, LF line
/// endings, a trailing newline.
pub fn serialize_olog(doc: &OlogDocument) -> String {
    let mut out = format!("olog {}\n", quote(&doc.name));
    for d in doc.canonical().declarations {
        let line = match d {
            Declaration::Type { id, noun, authors } => {
                format!(
                    "type {id} = {} {}",
                    quote(noun.as_str()),
                    write_authors(&authors)
                )
            }
            Declaration::Aspect {
                id,
                source,
                target,
                verb,
                authors,
            } => format!(
                "aspect {id} : {source} -> {target} = {} {}",
                write_verb(&verb),
                write_authors(&authors)
            ),
            Declaration::Fact {
                id,
                lhs,
                rhs,
                authors,
            } => format!(
                "fact {id} : {} ~ {} {}",
                write_path(&lhs, &rhs),
                write_path(&rhs, &lhs),
                write_authors(&authors)
            ),
        };
        out.push_str(&line);
        out.push('\n');
    }
    out
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Type,
    Aspect,
    Fact,
}

/// Parses an olog document, resolving every reference as it goes.
pub fn parse_olog(text: &str) -> Result<OlogDocument, DslError> {
    let mut lines = lines(text)?;
    let name = header(&mut lines, "olog")?;
    let mut ids: BTreeMap<String, Kind> = BTreeMap::new();
    let mut category = PathCategory::new();
    let mut declarations = Vec::new();

    for line in lines.iter_mut().skip(1) {
        let (kw, _) = line.ident("`type`, `aspect` or `fact`")?;
        let (id, id_col) = match kw.as_str() {
            "type" => line.ident("a type id")?,
            "aspect" | "fact" => line.ident(if kw == "aspect" {
                "an aspect id"
            } else {
                "a fact id"
            })?,
            _ => {
                line.pos -= 1;
                return line.fail(&["`type`", "`aspect`", "`fact`"]);
            }
        };
        if ids.contains_key(&id) {
            return Err(DslError::DuplicateId {
                line: line.no,
                col: id_col,
                id,
            });
        }
        let invalid = |line: &Line, e: CategoryError| DslError::Invalid {
            line: line.no,
            message: e.to_string(),
        };
        let decl = match kw.as_str() {
            "type" => {
                line.punct('=')?;
                let noun = line.noun()?;
                let authors = line.authors()?;
                line.end()?;
                category
                    .add_object(id.clone())
                    .map_err(|e| invalid(line, e))?;
                ids.insert(id.clone(), Kind::Type);
                Declaration::Type { id, noun, authors }
            }
            "aspect" => {
                if id == IDENTITY {
                    return Err(DslError::Invalid {
                        line: line.no,
                        message: format!(
                            "column {id_col}: `{IDENTITY}` is reserved for identity paths"
                        ),
                    });
                }
                line.punct(':')?;
                let source = declared(line, &ids, Kind::Type, "a type id")?;
                line.arrow()?;
                let target = declared(line, &ids, Kind::Type, "a type id")?;
                line.punct('=')?;
                let verb = line.verb()?;
                let authors = line.authors()?;
                line.end()?;
                category
                    .add_generator(id.clone(), source.clone(), target.clone())
                    .map_err(|e| invalid(line, e))?;
                ids.insert(id.clone(), Kind::Aspect);
                Declaration::Aspect {
                    id,
                    source,
                    target,
                    verb,
                    authors,
                }
            }
            _ => {
                line.punct(':')?;
                let lhs = line.path()?;
                line.punct('~')?;
                let rhs = line.path()?;
                let authors = line.authors()?;
                line.end()?;
                let (lhs, rhs) = resolve_fact(line.no, &ids, &category, lhs, rhs)?;
                category
                    .add_equation(id.clone(), lhs.clone(), rhs.clone())
                    .map_err(|e| invalid(line, e))?;
                ids.insert(id.clone(), Kind::Fact);
                Declaration::Fact {
                    id,
                    lhs,
                    rhs,
                    authors,
                }
            }
        };
        declarations.push(decl);
    }
    Ok(OlogDocument { name, declarations })
}

fn declared(
    line: &mut Line,
    ids: &BTreeMap<String, Kind>,
    kind: Kind,
    what: &str,
) -> Result<String, DslError> {
    let (id, col) = line.ident(what)?;
    if ids.get(&id) != Some(&kind) {
        return Err(DslError::DanglingReference {
            line: line.no,
            col,
            id,
        });
    }
    Ok(id)
}

fn resolve_fact(
    line: usize,
    ids: &BTreeMap<String, Kind>,
    cat: &PathCategory,
    lhs: RawPath,
    rhs: RawPath,
) -> Result<(Path, Path), DslError> {
    for (id, col) in lhs.arrows.iter().chain(&rhs.arrows) {
        if ids.get(id) != Some(&Kind::Aspect) {
            return Err(DslError::DanglingReference {
                line,
                col: *col,
                id: id.clone(),
            });
        }
    }
    for (id, col) in lhs.at.iter().chain(&rhs.at) {
        if ids.get(id) != Some(&Kind::Type) {
            return Err(DslError::DanglingReference {
                line,
                col: *col,
                id: id.clone(),
            });
        }
    }
    let source_of = |raw: &RawPath| -> Option<String> {
        raw.arrows
            .first()
            .map(|(a, _)| cat.generator(a).expect("checked above").source.clone())
            .or_else(|| raw.at.as_ref().map(|(t, _)| t.clone()))
    };
    let Some(source) = source_of(&lhs).or_else(|| source_of(&rhs)) else {
        return Err(DslError::Invalid {
            line,
            message: format!(
                "both sides are identities; write `[{IDENTITY}@type]` to name the type"
            ),
        });
    };
    let build =
        |raw: &RawPath| Path::new(source.clone(), raw.arrows.iter().map(|(a, _)| a.clone()));
    Ok((build(&lhs), build(&rhs)))
}

// ---------------------------------------------------------------------------
// Mappings

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MappingDocument {
    pub name: String,
    /// Olog files, relative to the mapping file.
    pub source: String,
    pub target: String,
    pub objects: BTreeMap<String, String>,
    /// Generator images as aspect ids of the target; empty means identity.
    pub arrows: BTreeMap<String, Vec<String>>,
    pub components: BTreeMap<String, AspectLabel>,
    pub squares: BTreeMap<String, AuthorSet>,
}

pub fn parse_mapping(text: &str) -> Result<MappingDocument, DslError> {
    let mut lines = lines(text)?;
    let name = header(&mut lines, "mapping")?;
    let mut doc = MappingDocument {
        name,
        ..Default::default()
    };
    let mut seen: BTreeSet<(String, String)> = BTreeSet::new();
    let (mut source, mut target) = (None, None);

    for line in lines.iter_mut().skip(1) {
        let expected = [
            "`source`",
            "`target`",
            "`object`",
            "`arrow`",
            "`component`",
            "`square`",
        ];
        let (kw, _) = line.ident(expected[0])?;
        if kw == "source" || kw == "target" {
            let (path, _) = line.string("a quoted file name")?;
            line.end()?;
            let slot = if kw == "source" {
                &mut source
            } else {
                &mut target
            };
            if slot.replace(path).is_some() {
                return Err(DslError::DuplicateId {
                    line: line.no,
                    col: 1,
                    id: kw,
                });
            }
            continue;
        }
        if !["object", "arrow", "component", "square"].contains(&kw.as_str()) {
            line.pos -= 1;
            return line.fail(&expected);
        }
        let (id, col) = line.ident("an id of the source olog")?;
        if !seen.insert((kw.clone(), id.clone())) {
            return Err(DslError::DuplicateId {
                line: line.no,
                col,
                id,
            });
        }
        match kw.as_str() {
            "object" => {
                line.arrow()?;
                let (img, _) = line.ident("a type id of the target olog")?;
                line.end()?;
                doc.objects.insert(id, img);
            }
            "arrow" => {
                line.arrow()?;
                let raw = line.path()?;
                line.end()?;
                if let Some((_, col)) = raw.at {
                    return Err(DslError::Syntax {
                        line: line.no,
                        col,
                        expected: vec!["`]`".into()],
                        found: "`@`".into(),
                    });
                }
                doc.arrows
                    .insert(id, raw.arrows.into_iter().map(|(a, _)| a).collect());
            }
            "component" => {
                line.punct('=')?;
                let verb = line.verb()?;
                let authors = line.authors()?;
                line.end()?;
                doc.components.insert(id, AspectLabel { verb, authors });
            }
            _ => {
                let authors = line.authors()?;
                line.end()?;
                doc.squares.insert(id, authors);
            }
        }
    }
    let missing = |what: &str| DslError::Syntax {
        line: lines.last().map_or(1, |l| l.no),
        col: 1,
        expected: vec![format!("`{what}`")],
        found: "end of file".into(),
    };
    doc.source = source.ok_or_else(|| missing("source"))?;
    doc.target = target.ok_or_else(|| missing("target"))?;
    Ok(doc)
}

pub fn serialize_mapping(doc: &MappingDocument) -> String {
    let mut out = format!(
        "mapping {}\nsource {}\ntarget {}\n",
        quote(&doc.name),
        quote(&doc.source),
        quote(&doc.target)
    );
    for (a, b) in &doc.objects {
        out.push_str(&format!("object {a} -> {b}\n"));
    }
    for (g, p) in &doc.arrows {
        let body = if p.is_empty() {
            IDENTITY.to_string()
        } else {
            p.join("; ")
        };
        out.push_str(&format!("arrow {g} -> [{body}]\n"));
    }
    for (c, label) in &doc.components {
        out.push_str(&format!(
            "component {c} = {} {}\n",
            write_verb(&label.verb),
            write_authors(&label.authors)
        ));
    }
    for (g, a) in &doc.squares {
        out.push_str(&format!("square {g} {}\n", write_authors(a)));
    }
    out
}

impl MappingDocument {
    /// Builds the morphism, checking every id against the two ologs.
    /// Functoriality itself is left to validation.
    pub fn resolve(&self, src: &Olog, dst: &Olog) -> Result<OlogMorphism, DslError> {
        let unresolved = |msg: String| DslError::Unresolved(msg);
        for (a, b) in &self.objects {
            if !src.category.has_object(a) {
                return Err(unresolved(format!(
                    "object {a}: not a type of the source olog"
                )));
            }
            if !dst.category.has_object(b) {
                return Err(unresolved(format!(
                    "object {a}: `{b}` is not a type of the target olog"
                )));
            }
        }
        let mut generator_map = BTreeMap::new();
        for (g, arrows) in &self.arrows {
            let Some(gen) = src.category.generator(g) else {
                return Err(unresolved(format!(
                    "arrow {g}: not an aspect of the source olog"
                )));
            };
            if let Some(bad) = arrows.iter().find(|a| dst.category.generator(a).is_none()) {
                return Err(unresolved(format!(
                    "arrow {g}: `{bad}` is not an aspect of the target olog"
                )));
            }
            let Some(start) = self.objects.get(&gen.source) else {
                return Err(unresolved(format!(
                    "arrow {g}: its source `{}` has no object entry",
                    gen.source
                )));
            };
            generator_map.insert(g.clone(), Path::new(start.clone(), arrows.iter().cloned()));
        }
        if let Some(c) = self.components.keys().find(|c| !src.category.has_object(c)) {
            return Err(unresolved(format!(
                "component {c}: not a type of the source olog"
            )));
        }
        if let Some(g) = self
            .squares
            .keys()
            .find(|g| src.category.generator(g).is_none())
        {
            return Err(unresolved(format!(
                "square {g}: not an aspect of the source olog"
            )));
        }
        Ok(OlogMorphism {
            name: self.name.clone(),
            functor: CatFunctor {
                object_map: self.objects.clone(),
                generator_map,
            },
            components: self.components.clone(),
            square_authors: self.squares.clone(),
        })
    }

    pub fn from_morphism(m: &OlogMorphism, source: &str, target: &str) -> MappingDocument {
        MappingDocument {
            name: m.name.clone(),
            source: source.to_string(),
            target: target.to_string(),
            objects: m.functor.object_map.clone(),
            arrows: m
                .functor
                .generator_map
                .iter()
                .map(|(g, p)| (g.clone(), p.arrows().to_vec()))
                .collect(),
            components: m.components.clone(),
            squares: m.square_authors.clone(),
        }
    }
}

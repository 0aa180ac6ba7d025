//! Token tables and their CSV encoding.
//!
//! A one-column table lists the tokens of a type under the type's noun
//! phrase. A two-column table lists a token function: the first column is
//! headed by the source noun phrase, the second by the verb reading and the
//! target noun phrase followed by ", namely".

use std::collections::BTreeSet;
use std::fs;
use std::io;
use std::path::Path as FsPath;

use thiserror::Error;

use crate::linguistics::{NounPhrase, VerbPhrase};
use crate::olog::{Olog, OlogError};

#[derive(Debug, Error)]
pub enum TableError {
    #[error("table must have one or two columns, got {0}")]
    BadHeaderWidth(usize),
    #[error("row {row} has {found} entries, header has {expected}")]
    BadRowWidth {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("duplicate row {0:?}")]
    DuplicateRow(Vec<String>),
    #[error("duplicate key {0:?} in the first column")]
    DuplicateKey(String),
    #[error("header {0:?} matches no type or aspect")]
    UnboundHeader(Vec<String>),
    #[error("header {header:?} matches several items: {candidates:?}")]
    AmbiguousHeader {
        header: Vec<String>,
        candidates: Vec<String>,
    },
    #[error("header {found:?} does not match {expected:?} expected for `{id}`")]
    HeaderMismatch {
        id: String,
        expected: Vec<String>,
        found: Vec<String>,
    },
    #[error(transparent)]
    Olog(#[from] OlogError),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
}

/// A header plus rows of token strings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceTable {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl InstanceTable {
    pub fn new(header: Vec<String>, rows: Vec<Vec<String>>) -> Result<Self, TableError> {
        if !(1..=2).contains(&header.len()) {
            return Err(TableError::BadHeaderWidth(header.len()));
        }
        let mut seen = BTreeSet::new();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != header.len() {
                return Err(TableError::BadRowWidth {
                    row: i + 1,
                    expected: header.len(),
                    found: row.len(),
                });
            }
            if !seen.insert(row) {
                return Err(TableError::DuplicateRow(row.clone()));
            }
        }
        Ok(InstanceTable { header, rows })
    }

    pub fn header(&self) -> &[String] {
        &self.header
    }

    pub fn rows(&self) -> &[Vec<String>] {
        &self.rows
    }

    pub fn from_csv<R: io::Read>(reader: R) -> Result<Self, TableError> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .flexible(true)
            .from_reader(reader);
        let header = rdr.headers()?.iter().map(str::to_string).collect();
        let rows = rdr
            .records()
            .map(|r| r.map(|rec| rec.iter().map(str::to_string).collect()))
            .collect::<Result<Vec<Vec<String>>, _>>()?;
        InstanceTable::new(header, rows)
    }

    pub fn read_csv(path: &FsPath) -> Result<Self, TableError> {
        let file = fs::File::open(path).map_err(|source| TableError::Io {
            path: path.display().to_string(),
            source,
        })?;
        InstanceTable::from_csv(io::BufReader::new(file))
    }

    pub fn to_csv_string(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("input was UTF-8")
    }

    pub fn write_csv(&self, path: &FsPath) -> Result<(), TableError> {
        fs::write(path, self.to_csv_string()).map_err(|source| TableError::Io {
            path: path.display().to_string(),
            source,
        })
    }
}

/// What a table contributes to an instance, in row order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TableFragment {
    Tokens {
        object: String,
        tokens: Vec<String>,
    },
    Function {
        generator: String,
        pairs: Vec<(String, String)>,
    },
}

/// Second-column header of a correspondence table: "<verb> <noun>, namely".
pub fn correspondence_heading(verb: &VerbPhrase, target: &NounPhrase) -> String {
    format!("{} {}, namely", verb.reading(), target)
}

pub fn token_header(olog: &Olog, object: &str) -> Result<Vec<String>, OlogError> {
    Ok(vec![olog.noun(object)?.to_string()])
}

pub fn function_header(olog: &Olog, generator: &str) -> Result<Vec<String>, OlogError> {
    let g = olog
        .category
        .generator(generator)
        .ok_or_else(|| crate::CategoryError::UnknownGenerator(generator.to_string()))?;
    Ok(vec![
        olog.noun(&g.source)?.to_string(),
        correspondence_heading(&olog.aspect_label(generator)?.verb, olog.noun(&g.target)?),
    ])
}

/// Binds a table to a type or an aspect of `olog` by its header text.
pub fn load_table(table: &InstanceTable, olog: &Olog) -> Result<TableFragment, TableError> {
    let header = table.header();
    let candidates: Vec<String> = if header.len() == 1 {
        olog.category
            .objects()
            .filter(|o| token_header(olog, o).is_ok_and(|h| h == header))
            .cloned()
            .collect()
    } else {
        olog.category
            .generators()
            .filter(|g| function_header(olog, &g.id).is_ok_and(|h| h == header))
            .map(|g| g.id.clone())
            .collect()
    };
    match candidates.as_slice() {
        [] => Err(TableError::UnboundHeader(header.to_vec())),
        [id] => fragment(table, id),
        _ => Err(TableError::AmbiguousHeader {
            header: header.to_vec(),
            candidates,
        }),
    }
}

/// Binds a table to the type or aspect `id`, checking that its header is the
/// one `id` expects.
pub fn bind_table(
    table: &InstanceTable,
    olog: &Olog,
    id: &str,
) -> Result<TableFragment, TableError> {
    let expected = if olog.category.has_object(id) {
        token_header(olog, id)?
    } else {
        function_header(olog, id)?
    };
    if table.header() != expected {
        return Err(TableError::HeaderMismatch {
            id: id.to_string(),
            expected,
            found: table.header().to_vec(),
        });
    }
    fragment(table, id)
}

fn fragment(table: &InstanceTable, id: &str) -> Result<TableFragment, TableError> {
    if table.header.len() == 1 {
        return Ok(TableFragment::Tokens {
            object: id.to_string(),
            tokens: table.rows.iter().map(|r| r[0].clone()).collect(),
        });
    }
    let mut keys = BTreeSet::new();
    let mut pairs = Vec::with_capacity(table.rows.len());
    for row in &table.rows {
        if !keys.insert(&row[0]) {
            return Err(TableError::DuplicateKey(row[0].clone()));
        }
        pairs.push((row[0].clone(), row[1].clone()));
    }
    Ok(TableFragment::Function {
        generator: id.to_string(),
        pairs,
    })
}

impl TableFragment {
    /// The table this fragment was loaded from (or would be written as).
    pub fn to_table(&self, olog: &Olog) -> Result<InstanceTable, TableError> {
        match self {
            TableFragment::Tokens { object, tokens } => InstanceTable::new(
                token_header(olog, object)?,
                tokens.iter().map(|t| vec![t.clone()]).collect(),
            ),
            TableFragment::Function { generator, pairs } => InstanceTable::new(
                function_header(olog, generator)?,
                pairs
                    .iter()
                    .map(|(x, y)| vec![x.clone(), y.clone()])
                    .collect(),
            ),
        }
    }
}

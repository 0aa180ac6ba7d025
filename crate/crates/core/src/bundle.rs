//! Directories of CSV tables, one file per type or aspect named `<id>.csv`.

use std::fs;
use std::io;
use std::path::{Path as FsPath, PathBuf};

use thiserror::Error;

use crate::instance::Instance;
use crate::mapping::{
    correspondence_header, Correspondences, InstanceMorphism, MappingError, OlogMorphism,
    Orientation,
};
use crate::olog::Olog;
use crate::table::{bind_table, InstanceTable, TableError, TableFragment};

#[derive(Debug, Error)]
pub enum BundleError {
    #[error("{path}: {source}")]
    Table {
        path: PathBuf,
        #[source]
        source: TableError,
    },
    #[error("{0}: no type or aspect has this id")]
    UnknownFile(PathBuf),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{0}: some token is paired with more than one value")]
    NotFunctional(PathBuf),
    #[error(transparent)]
    Mapping(#[from] MappingError),
}

fn io_err(path: &FsPath) -> impl FnOnce(io::Error) -> BundleError + '_ {
    move |source| BundleError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// The `.csv` files of `dir` with their ids, sorted by id.
fn csv_files(dir: &FsPath) -> Result<Vec<(String, PathBuf)>, BundleError> {
    let mut out = Vec::new();
    for entry in fs::read_dir(dir).map_err(io_err(dir))? {
        let path = entry.map_err(io_err(dir))?.path();
        if path.extension().is_some_and(|e| e == "csv") {
            if let Some(stem) = path.file_stem().and_then(|s| s.to_str()) {
                out.push((stem.to_string(), path.clone()));
            }
        }
    }
    out.sort();
    Ok(out)
}

fn read(path: &FsPath) -> Result<InstanceTable, BundleError> {
    InstanceTable::read_csv(path).map_err(|source| BundleError::Table {
        path: path.to_path_buf(),
        source,
    })
}

/// Loads an instance of `olog`. Types without a file have no tokens.
pub fn load_instance(dir: &FsPath, olog: &Olog) -> Result<Instance, BundleError> {
    let mut instance = Instance::new();
    for (id, path) in csv_files(dir)? {
        if !olog.category.has_object(&id) && olog.category.generator(&id).is_none() {
            return Err(BundleError::UnknownFile(path));
        }
        let fragment = bind_table(&read(&path)?, olog, &id)
            .map_err(|source| BundleError::Table { path, source })?;
        instance.absorb(fragment);
    }
    for obj in olog.category.objects() {
        instance.tokens.entry(obj.clone()).or_default();
    }
    Ok(instance)
}

fn write(path: PathBuf, table: &InstanceTable) -> Result<(), BundleError> {
    fs::write(&path, table.to_csv_string()).map_err(|source| BundleError::Io { path, source })
}

fn to_table(
    fragment: TableFragment,
    olog: &Olog,
    path: &FsPath,
) -> Result<InstanceTable, BundleError> {
    fragment
        .to_table(olog)
        .map_err(|source| BundleError::Table {
            path: path.to_path_buf(),
            source,
        })
}

/// Writes one table per type and per aspect, rows in token order.
pub fn write_instance(dir: &FsPath, olog: &Olog, instance: &Instance) -> Result<(), BundleError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    for obj in olog.category.objects() {
        let path = dir.join(format!("{obj}.csv"));
        let fragment = TableFragment::Tokens {
            object: obj.clone(),
            tokens: instance.tokens_of(obj).iter().cloned().collect(),
        };
        write(path.clone(), &to_table(fragment, olog, &path)?)?;
    }
    for g in olog.category.generators() {
        let path = dir.join(format!("{}.csv", g.id));
        let fragment = TableFragment::Function {
            generator: g.id.clone(),
            pairs: instance
                .functions
                .get(&g.id)
                .map(|f| f.iter().map(|(a, b)| (a.clone(), b.clone())).collect())
                .unwrap_or_default(),
        };
        write(path.clone(), &to_table(fragment, olog, &path)?)?;
    }
    Ok(())
}

/// Loads correspondence tables `<type id>.csv` for the components of `m`.
/// Each header must read the component between the two noun phrases.
pub fn load_correspondences(
    dir: &FsPath,
    m: &OlogMorphism,
    o: Orientation,
    src: &Olog,
    dst: &Olog,
) -> Result<Correspondences, BundleError> {
    let mut out = Correspondences::default();
    for (id, path) in csv_files(dir)? {
        if !src.category.has_object(&id) {
            return Err(BundleError::UnknownFile(path));
        }
        let table = read(&path)?;
        let expected = correspondence_header(m, o, src, dst, &id)?;
        if table.header() != expected {
            return Err(BundleError::Table {
                path,
                source: TableError::HeaderMismatch {
                    id,
                    expected,
                    found: table.header().to_vec(),
                },
            });
        }
        let pairs = out.pairs.entry(id).or_default();
        for row in table.rows() {
            pairs.insert((row[0].clone(), row[1].clone()));
        }
    }
    Ok(out)
}

/// Loads an instance morphism stored like correspondence tables; every
/// token must appear at most once in the first column.
pub fn load_morphism(
    dir: &FsPath,
    m: &OlogMorphism,
    o: Orientation,
    src: &Olog,
    dst: &Olog,
) -> Result<InstanceMorphism, BundleError> {
    load_correspondences(dir, m, o, src, dst)?
        .as_morphism()
        .ok_or_else(|| BundleError::NotFunctional(dir.to_path_buf()))
}

/// The tables of an instance morphism, one per source type, in the same
/// layout as correspondence tables.
pub fn morphism_tables(
    p: &InstanceMorphism,
    m: &OlogMorphism,
    o: Orientation,
    src: &Olog,
    dst: &Olog,
) -> Result<Vec<(String, InstanceTable)>, BundleError> {
    let mut out = Vec::new();
    for (c, table) in &p.components {
        let header = correspondence_header(m, o, src, dst, c)?;
        let rows = table
            .iter()
            .map(|(x, y)| vec![x.clone(), y.clone()])
            .collect();
        let t = InstanceTable::new(header, rows).map_err(|source| BundleError::Table {
            path: PathBuf::from(format!("{c}.csv")),
            source,
        })?;
        out.push((c.clone(), t));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::person_father;

    #[test]
    fn instance_round_trip_through_a_directory() {
        let o = person_father();
        let dir = tempfile::tempdir().unwrap();
        fs::write(
            dir.path().join("person.csv"),
            "a person\nJeb Bush\nEmmy Noether\n",
        )
        .unwrap();
        fs::write(
            dir.path().join("father.csv"),
            "a father\nGeorge H. W. Bush\nMax Noether\n",
        )
        .unwrap();
        fs::write(
            dir.path().join("has.csv"),
            "a person,\"has a father, namely\"\nJeb Bush,George H. W. Bush\nEmmy Noether,Max Noether\n",
        )
        .unwrap();
        let i = load_instance(dir.path(), &o).unwrap();
        assert!(i.validate(&o).is_empty());

        let out = tempfile::tempdir().unwrap();
        write_instance(out.path(), &o, &i).unwrap();
        assert_eq!(load_instance(out.path(), &o).unwrap(), i);
        assert_eq!(
            fs::read_to_string(out.path().join("person.csv")).unwrap(),
            "a person\nEmmy Noether\nJeb Bush\n"
        );
    }

    #[test]
    fn bundle_errors() {
        let o = person_father();
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("dog.csv"), "a dog\nRex\n").unwrap();
        assert!(matches!(
            load_instance(dir.path(), &o),
            Err(BundleError::UnknownFile(_))
        ));

        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("person.csv"), "a father\nRex\n").unwrap();
        assert!(matches!(
            load_instance(dir.path(), &o),
            Err(BundleError::Table {
                source: TableError::HeaderMismatch { .. },
                ..
            })
        ));

        let empty = tempfile::tempdir().unwrap();
        let i = load_instance(empty.path(), &o).unwrap();
        assert!(i.tokens_of("person").is_empty());
        assert!(i.validate(&o).is_empty());
    }
}

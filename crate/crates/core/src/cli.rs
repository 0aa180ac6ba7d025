//! The `olog` command line.
//!
//! Exit codes: 0 success, 1 validation failure or a search space over the
//! limit, 2 usage or input error.

use std::fs;
use std::io::Write;
use std::path::{Path as FsPath, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::bundle::{self, BundleError};
use crate::category::{Path, DEFAULT_BOUND};
use crate::dsl::{self, DslError, MappingDocument, OlogDocument};
use crate::mapping::{self, Correspondences, OlogMorphism, Orientation, DEFAULT_SEARCH_LIMIT};
use crate::olog::Olog;
use crate::report::{Finding, ValidationReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "olog", version, about = "Check, read and map ologs")]
pub struct Cli {
    /// Print a machine-readable JSON report on standard output.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check labels and author sets of an olog.
    Validate {
        olog: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: usize,
    },
    /// Print the English sentences of an olog.
    Read {
        olog: PathBuf,
        /// Also print the reading of every fact.
        #[arg(long)]
        facts: bool,
        /// Also print the correspondences of an instance.
        #[arg(long)]
        data: Option<PathBuf>,
    },
    /// Check that a directory of tables is an instance of an olog.
    CheckInstance {
        olog: PathBuf,
        data: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: usize,
    },
    /// Check a mapping, and with data, its instance morphism.
    CheckMapping {
        mapping: PathBuf,
        #[arg(long, requires = "dst_data")]
        src_data: Option<PathBuf>,
        #[arg(long, requires = "src_data")]
        dst_data: Option<PathBuf>,
        /// Correspondence tables (default: `<mapping>.corr/` next to the file).
        #[arg(long)]
        corr: Option<PathBuf>,
        /// Tables of the instance morphism (default: the correspondences).
        #[arg(long)]
        morphism: Option<PathBuf>,
        /// Components and instance morphism point from target to source.
        #[arg(long)]
        reversed: bool,
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: usize,
    },
    /// Write the target olog's labels pulled back to the source category.
    Pullback {
        mapping: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write the target instance pulled back to the source olog.
    Migrate {
        mapping: PathBuf,
        #[arg(long)]
        dst_data: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// List every instance morphism conforming to the mapping's components.
    SearchConforming {
        mapping: PathBuf,
        #[arg(long)]
        src_data: PathBuf,
        #[arg(long)]
        dst_data: PathBuf,
        #[arg(long)]
        corr: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_SEARCH_LIMIT)]
        limit: u128,
    },
}

/// Something that stops a command before it can report findings.
#[derive(Debug, thiserror::Error)]
enum Failure {
    #[error("{path}: {source}")]
    Dsl { path: PathBuf, source: DslError },
    #[error("{path}: {message}")]
    Input { path: PathBuf, message: String },
    #[error(transparent)]
    Bundle(Box<BundleError>),
    #[error(transparent)]
    Mapping(#[from] mapping::MappingError),
}

impl From<BundleError> for Failure {
    fn from(e: BundleError) -> Self {
        Failure::Bundle(Box::new(e))
    }
}

/// What a command produced: findings and lines for standard output.
#[derive(Default)]
struct Outcome {
    report: ValidationReport,
    lines: Vec<String>,
    extra: serde_json::Map<String, serde_json::Value>,
}

#[derive(Serialize)]
struct JsonOut<'a> {
    ok: bool,
    findings: &'a [Finding],
    #[serde(flatten)]
    extra: &'a serde_json::Map<String, serde_json::Value>,
}

/// Runs the command line with `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli.command) {
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Failure::Mapping(mapping::MappingError::SearchSpaceTooLarge { .. }) => EXIT_INVALID,
                _ => EXIT_USAGE,
            }
        }
        Ok(outcome) => {
            let ok = outcome.report.is_ok();
            if cli.json {
                let json = JsonOut {
                    ok,
                    findings: &outcome.report.findings,
                    extra: &outcome.extra,
                };
                let _ = writeln!(out, "{}", serde_json::to_string(&json).expect("plain data"));
            } else {
                for line in &outcome.lines {
                    let _ = writeln!(out, "{line}");
                }
                let _ = write!(err, "{}", outcome.report);
            }
            if ok {
                EXIT_OK
            } else {
                EXIT_INVALID
            }
        }
    }
}

fn read_file(path: &FsPath) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

fn load_olog(path: &FsPath) -> Result<Olog, Failure> {
    let dsl_err = |source| Failure::Dsl {
        path: path.to_path_buf(),
        source,
    };
    let doc = dsl::parse_olog(&read_file(path)?).map_err(dsl_err)?;
    doc.to_olog().map_err(|e| Failure::Input {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

struct LoadedMapping {
    doc: MappingDocument,
    morphism: OlogMorphism,
    src: Olog,
    dst: Olog,
}

fn load_mapping(path: &FsPath) -> Result<LoadedMapping, Failure> {
    let doc = dsl::parse_mapping(&read_file(path)?).map_err(|source| Failure::Dsl {
        path: path.to_path_buf(),
        source,
    })?;
    let base = path.parent().unwrap_or(FsPath::new("."));
    let src = load_olog(&base.join(&doc.source))?;
    let dst = load_olog(&base.join(&doc.target))?;
    let morphism = doc.resolve(&src, &dst).map_err(|source| Failure::Dsl {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(LoadedMapping {
        doc,
        morphism,
        src,
        dst,
    })
}

fn default_corr(mapping: &FsPath) -> PathBuf {
    mapping.with_extension("corr")
}

fn load_corr(dir: &FsPath, m: &LoadedMapping, o: Orientation) -> Result<Correspondences, Failure> {
    if !dir.is_dir() {
        return Ok(Correspondences::default());
    }
    Ok(bundle::load_correspondences(
        dir,
        &m.morphism,
        o,
        &m.src,
        &m.dst,
    )?)
}

/// Every finding of `report`, each subject prefixed with `scope`.
fn scoped(scope: &str, report: ValidationReport) -> ValidationReport {
    report
        .findings
        .into_iter()
        .map(|mut f| {
            f.subject = format!("{scope}: {}", f.subject);
            f
        })
        .collect()
}

fn execute(command: &Command) -> Result<Outcome, Failure> {
    match command {
        Command::Validate { olog, bound: _ } => {
            let o = load_olog(olog)?;
            let report = o.validate();
            let lines = if report.is_ok() {
                vec![format!("{}: ok", o.name)]
            } else {
                vec![]
            };
            Ok(Outcome {
                report,
                lines,
                ..Default::default()
            })
        }
        Command::Read { olog, facts, data } => read(olog, *facts, data.as_deref()),
        Command::CheckInstance {
            olog,
            data,
            bound: _,
        } => {
            let o = load_olog(olog)?;
            let i = bundle::load_instance(data, &o)?;
            let mut report = scoped("olog", o.validate());
            report.extend(scoped("instance", i.validate(&o)));
            let lines = if report.is_ok() {
                vec![format!("{}: instance conforms", o.name)]
            } else {
                vec![]
            };
            Ok(Outcome {
                report,
                lines,
                ..Default::default()
            })
        }
        Command::CheckMapping {
            mapping,
            src_data,
            dst_data,
            corr,
            morphism,
            reversed,
            bound,
        } => check_mapping(
            mapping,
            src_data.as_deref(),
            dst_data.as_deref(),
            corr.as_deref(),
            morphism.as_deref(),
            *reversed,
            *bound,
        ),
        Command::Pullback { mapping, out } => {
            let m = load_mapping(mapping)?;
            let name = format!("{}*({})", m.morphism.name, m.dst.name);
            let pulled =
                mapping::pullback_olog(&m.morphism.functor, &m.src.category, &m.dst, name)?;
            let text = dsl::serialize_olog(&OlogDocument::from_olog(&pulled));
            fs::write(out, text).map_err(|e| Failure::Input {
                path: out.clone(),
                message: e.to_string(),
            })?;
            Ok(Outcome {
                report: pulled.validate(),
                lines: vec![format!("wrote {}", out.display())],
                ..Default::default()
            })
        }
        Command::Migrate {
            mapping,
            dst_data,
            out,
        } => {
            let m = load_mapping(mapping)?;
            let j = bundle::load_instance(dst_data, &m.dst)?;
            let pulled = mapping::pullback_olog(
                &m.morphism.functor,
                &m.src.category,
                &m.dst,
                m.dst.name.clone(),
            )?;
            let k = mapping::pullback_instance(
                &m.morphism.functor,
                &m.src.category,
                &m.dst.category,
                &j,
            )?;
            bundle::write_instance(out, &pulled, &k)?;
            Ok(Outcome {
                report: scoped("target instance", j.validate(&m.dst)),
                lines: vec![format!("wrote {}", out.display())],
                ..Default::default()
            })
        }
        Command::SearchConforming {
            mapping,
            src_data,
            dst_data,
            corr,
            limit,
        } => search(mapping, src_data, dst_data, corr.as_deref(), *limit),
    }
}

fn read(path: &FsPath, facts: bool, data: Option<&FsPath>) -> Result<Outcome, Failure> {
    let o = load_olog(path)?;
    let report = o.validate();
    let input = |e: crate::olog::OlogError| Failure::Input {
        path: path.to_path_buf(),
        message: e.to_string(),
    };
    let mut lines = Vec::new();
    for g in o.category.generators() {
        lines.push(
            o.sentence(&Path::new(g.source.clone(), [g.id.clone()]))
                .map_err(input)?
                .reading(),
        );
    }
    // Composite paths named by facts read as sentences of their own.
    for eq in o.category.equations() {
        for p in [&eq.lhs, &eq.rhs] {
            if p.len() > 1 {
                let s = o.sentence(p).map_err(input)?.reading();
                if !lines.contains(&s) {
                    lines.push(s);
                }
            }
        }
    }
    if facts {
        for eq in o.category.equations() {
            lines.push(o.read_fact(&eq.id).map_err(input)?);
        }
    }
    if let Some(dir) = data {
        let i = bundle::load_instance(dir, &o)?;
        for g in o.category.generators() {
            let rendered = i
                .render_correspondences(&o, &g.id)
                .map_err(|e| Failure::Input {
                    path: dir.to_path_buf(),
                    message: e.to_string(),
                })?;
            lines.extend(rendered);
        }
    }
    let mut extra = serde_json::Map::new();
    extra.insert("sentences".into(), lines.clone().into());
    Ok(Outcome {
        report,
        lines,
        extra,
    })
}

#[allow(clippy::too_many_arguments)]
fn check_mapping(
    path: &FsPath,
    src_data: Option<&FsPath>,
    dst_data: Option<&FsPath>,
    corr: Option<&FsPath>,
    morphism: Option<&FsPath>,
    reversed: bool,
    bound: usize,
) -> Result<Outcome, Failure> {
    let m = load_mapping(path)?;
    let o = if reversed {
        Orientation::Reversed
    } else {
        Orientation::Forward
    };
    let mut report = scoped("source", m.src.validate());
    report.extend(scoped("target", m.dst.validate()));

    let (Some(src_data), Some(dst_data)) = (src_data, dst_data) else {
        report.extend(scoped(
            "mapping",
            mapping::validate_oriented(&m.morphism, o, &m.src, &m.dst, bound),
        ));
        let lines = if report.is_ok() {
            vec![format!("{}: linguistic functor", m.doc.name)]
        } else {
            vec![]
        };
        return Ok(Outcome {
            report,
            lines,
            ..Default::default()
        });
    };

    let i = bundle::load_instance(src_data, &m.src)?;
    let j = bundle::load_instance(dst_data, &m.dst)?;
    report.extend(scoped("source instance", i.validate(&m.src)));
    report.extend(scoped("target instance", j.validate(&m.dst)));
    let corr_dir = corr
        .map(FsPath::to_path_buf)
        .unwrap_or_else(|| default_corr(path));
    let declared = load_corr(&corr_dir, &m, o)?;
    let p = match morphism {
        Some(dir) => bundle::load_morphism(dir, &m.morphism, o, &m.src, &m.dst)?,
        None => declared.as_morphism().ok_or_else(|| Failure::Input {
            path: corr_dir.clone(),
            message: "correspondences pair a token with several values; pass --morphism".into(),
        })?,
    };
    if reversed {
        report.extend(scoped(
            "mapping",
            mapping::check_co_instantiated(
                &m.morphism,
                &m.src,
                &m.dst,
                &i,
                &j,
                &p,
                &declared,
                bound,
            ),
        ));
    } else {
        report.extend(scoped(
            "mapping",
            mapping::validate_linguistic_functor(&m.morphism, &m.src, &m.dst, bound),
        ));
        if report.is_ok() {
            report.extend(scoped(
                "morphism",
                mapping::check_naturality(
                    &m.morphism,
                    &m.src.category,
                    &m.dst.category,
                    &i,
                    &j,
                    &p,
                ),
            ));
            report.extend(scoped(
                "morphism",
                mapping::check_conformance(&m.src.category, &i, &p, &declared),
            ));
        }
    }
    let lines = if report.is_ok() {
        vec![format!(
            "{}: instance morphism is natural and conforms",
            m.doc.name
        )]
    } else {
        vec![]
    };
    Ok(Outcome {
        report,
        lines,
        ..Default::default()
    })
}

fn search(
    path: &FsPath,
    src_data: &FsPath,
    dst_data: &FsPath,
    corr: Option<&FsPath>,
    limit: u128,
) -> Result<Outcome, Failure> {
    let m = load_mapping(path)?;
    let i = bundle::load_instance(src_data, &m.src)?;
    let j = bundle::load_instance(dst_data, &m.dst)?;
    let corr_dir = corr
        .map(FsPath::to_path_buf)
        .unwrap_or_else(|| default_corr(path));
    let declared = load_corr(&corr_dir, &m, Orientation::Forward)?;
    let mut report = scoped("source instance", i.validate(&m.src));
    report.extend(scoped("target instance", j.validate(&m.dst)));
    let result = mapping::search_conforming(
        &m.morphism,
        &m.src.category,
        &m.dst.category,
        &i,
        &j,
        &declared,
        limit,
    )?;

    let mut lines = vec![
        format!("candidates: {}", result.candidates),
        format!("conforming: {}", result.survivors.len()),
    ];
    let mut tables = Vec::new();
    for (n, p) in result.survivors.iter().enumerate() {
        lines.push(String::new());
        lines.push(format!("# morphism {}", n + 1));
        for (c, table) in
            bundle::morphism_tables(p, &m.morphism, Orientation::Forward, &m.src, &m.dst)?
        {
            lines.push(format!("## {c}"));
            lines.extend(table.to_csv_string().lines().map(str::to_string));
        }
        tables.push(serde_json::to_value(&p.components).expect("plain data"));
    }
    let mut extra = serde_json::Map::new();
    extra.insert(
        "candidates".into(),
        serde_json::Value::String(result.candidates.to_string()),
    );
    extra.insert("conforming".into(), result.survivors.len().into());
    extra.insert("morphisms".into(), tables.into());
    Ok(Outcome {
        report,
        lines,
        extra,
    })
}

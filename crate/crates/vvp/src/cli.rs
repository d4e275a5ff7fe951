//! The `vvp` command line.
//!
//! Exit statuses are shared by every command: 0 on success, 1 on a domain
//! error (validation errors, corrupt logs, too few sessions, bind
//! failures) and 2 on usage or syntax errors.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;
use vvp_core::analytics::compare_groups;
use vvp_core::graph::enumerate_branch_paths;
use vvp_core::session::{session_metrics, SessionLog, SessionMetrics};

use crate::bundle::export_bundle;
use crate::document::{self, check_media_files, parse_project_with, ParsedProject, Strictness};
use crate::logfile::{self, read_log};
use crate::report;
use crate::server::{self, Store};

pub const EXIT_OK: u8 = 0;
pub const EXIT_DOMAIN: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Text,
    /// Pretty-printed JSON.
    Structured,
}

#[derive(Debug, Parser)]
#[command(name = "vvp", version, about = "Interactive vision video tools")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t, env = "VVP_FORMAT")]
    pub format: OutputFormat,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a project document for structural problems.
    Validate {
        file: PathBuf,
        /// Report unknown fields instead of rejecting them.
        #[arg(long, env = "VVP_LENIENT")]
        lenient: bool,
    },
    /// List the branch paths behind every fork.
    Paths { file: PathBuf },
    /// Replay a session log and print its metrics.
    Metrics {
        log: PathBuf,
        #[arg(long, env = "VVP_PROJECT")]
        project: PathBuf,
    },
    /// Compare two groups of sessions, one directory per group.
    Analyze {
        dir_a: PathBuf,
        dir_b: PathBuf,
        #[arg(long, default_value_t = vvp_core::analytics::DEFAULT_ALPHA,
              value_parser = parse_alpha, env = "VVP_ALPHA")]
        alpha: f64,
    },
    /// Bundle a project and all of its session logs.
    Export {
        project_dir: PathBuf,
        #[arg(short = 'o', long = "output", env = "VVP_OUTPUT")]
        output: PathBuf,
    },
    /// Run the HTTP service.
    Serve {
        #[arg(long, default_value_t = 8080, env = "VVP_PORT")]
        port: u16,
        #[arg(long, default_value = "127.0.0.1", env = "VVP_HOST")]
        host: String,
        #[arg(long, default_value = "data", env = "VVP_DATA_DIR")]
        data_dir: PathBuf,
    },
}

fn parse_alpha(s: &str) -> Result<f64, String> {
    let alpha: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if alpha > 0.0 && alpha < 1.0 {
        Ok(alpha)
    } else {
        Err(String::from("alpha must lie strictly between 0 and 1"))
    }
}

/// A failed command: exit status plus a message for stderr.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn domain(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_DOMAIN,
            message: message.into(),
        }
    }

    fn syntax(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

type CmdResult = Result<u8, Failure>;

struct Output<'a> {
    format: OutputFormat,
    out: &'a mut dyn Write,
}

impl Output<'_> {
    fn emit(&mut self, text: impl FnOnce() -> String, value: impl FnOnce() -> Value) {
        let rendered = match self.format {
            OutputFormat::Text => text(),
            OutputFormat::Structured => {
                let mut s = serde_json::to_string_pretty(&value()).expect("Value serializes");
                s.push('\n');
                s
            }
        };
        let _ = self.out.write_all(rendered.as_bytes());
    }
}

/// Runs a parsed command line, writing results to `out` and diagnostics
/// to `err`. Returns the exit status.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let mut output = Output {
        format: cli.format,
        out,
    };
    let result = match cli.command {
        Command::Validate { file, lenient } => validate(&file, lenient, &mut output),
        Command::Paths { file } => paths(&file, &mut output),
        Command::Metrics { log, project } => metrics(&log, &project, &mut output),
        Command::Analyze {
            dir_a,
            dir_b,
            alpha,
        } => analyze(&dir_a, &dir_b, alpha, &mut output),
        Command::Export {
            project_dir,
            output: path,
        } => export(&project_dir, &path, err),
        Command::Serve {
            port,
            host,
            data_dir,
        } => serve(&host, port, &data_dir, output.out),
    };
    match result {
        Ok(code) => code,
        Err(failure) => {
            let _ = writeln!(err, "error: {}", failure.message);
            failure.code
        }
    }
}

fn load_project(path: &Path, strictness: Strictness) -> Result<ParsedProject, Failure> {
    let bytes = std::fs::read(path)
        .map_err(|e| Failure::domain(format!("{}: {e}", path.display())))?;
    parse_project_with(&bytes, strictness)
        .map_err(|e| Failure::syntax(format!("{}: {e}", path.display())))
}

fn validate(file: &Path, lenient: bool, output: &mut Output) -> CmdResult {
    let strictness = if lenient {
        Strictness::Lenient
    } else {
        Strictness::Strict
    };
    let parsed = load_project(file, strictness)?;
    let base = file.parent().unwrap_or(Path::new("."));
    let media = check_media_files(&parsed.project, base);
    output.emit(
        || report::validation_text(&parsed.report, &parsed.unknown_fields, &media),
        || report::validation_value(&parsed.report, &parsed.unknown_fields, &media),
    );
    Ok(if parsed.report.is_playable() {
        EXIT_OK
    } else {
        EXIT_DOMAIN
    })
}

/// Loads a project that must be free of validation errors; otherwise
/// prints the report like `validate` and fails.
fn load_valid_project(file: &Path, output: &mut Output) -> Result<ParsedProject, u8> {
    let parsed = match load_project(file, Strictness::Strict) {
        Ok(p) => p,
        Err(f) => {
            let _ = writeln!(output.out, "error: {}", f.message);
            return Err(f.code);
        }
    };
    if !parsed.report.is_playable() {
        output.emit(
            || report::validation_text(&parsed.report, &[], &[]),
            || report::validation_value(&parsed.report, &[], &[]),
        );
        return Err(EXIT_DOMAIN);
    }
    Ok(parsed)
}

fn paths(file: &Path, output: &mut Output) -> CmdResult {
    let parsed = match load_valid_project(file, output) {
        Ok(p) => p,
        Err(code) => return Ok(code),
    };
    let paths = enumerate_branch_paths(&parsed.project);
    output.emit(|| report::paths_text(&paths), || report::paths_value(&paths));
    Ok(EXIT_OK)
}

fn read_session_log(path: &Path) -> Result<SessionLog, Failure> {
    read_log(path).map_err(|e| Failure::domain(format!("{}: corrupt log: {e}", path.display())))
}

fn metrics_of(log: &SessionLog, path: &Path, parsed: &ParsedProject) -> Result<SessionMetrics, Failure> {
    session_metrics(log, &parsed.project).map_err(|e| {
        Failure::domain(format!(
            "{}: corrupt log at seq {}: {}",
            path.display(),
            e.seq,
            e.reason
        ))
    })
}

fn metrics(log_path: &Path, project: &Path, output: &mut Output) -> CmdResult {
    let parsed = match load_valid_project(project, output) {
        Ok(p) => p,
        Err(code) => return Ok(code),
    };
    let log = read_session_log(log_path)?;
    let m = metrics_of(&log, log_path, &parsed)?;
    output.emit(|| report::metrics_text(&m), || report::metrics_value(&m));
    Ok(EXIT_OK)
}

fn files_with_extension(dir: &Path, ext: &str) -> Result<Vec<PathBuf>, Failure> {
    let entries =
        std::fs::read_dir(dir).map_err(|e| Failure::domain(format!("{}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(Result::ok)
        .map(|e| e.path())
        .filter(|p| p.is_file() && p.extension().is_some_and(|e| e == ext))
        .collect();
    files.sort();
    Ok(files)
}

/// A directory holding exactly one project document and its session logs
/// (directly or under `sessions/`).
struct GroupDir {
    project: ParsedProject,
    logs: Vec<(PathBuf, SessionLog)>,
}

fn load_group_dir(dir: &Path) -> Result<GroupDir, Failure> {
    let projects = files_with_extension(dir, document::EXTENSION)?;
    let project_path = match projects.as_slice() {
        [one] => one,
        [] => {
            return Err(Failure::domain(format!(
                "{}: no .vvp project file",
                dir.display()
            )))
        }
        _ => {
            return Err(Failure::domain(format!(
                "{}: more than one .vvp project file",
                dir.display()
            )))
        }
    };
    let project = load_project(project_path, Strictness::Strict)?;
    if !project.report.is_playable() {
        return Err(Failure::domain(format!(
            "{}: project has {} validation error(s)",
            project_path.display(),
            project.report.errors.len()
        )));
    }
    let mut paths = files_with_extension(dir, logfile::EXTENSION)?;
    let nested = dir.join("sessions");
    if nested.is_dir() {
        paths.extend(files_with_extension(&nested, logfile::EXTENSION)?);
    }
    let logs = paths
        .into_iter()
        .map(|p| read_session_log(&p).map(|log| (p, log)))
        .collect::<Result<_, _>>()?;
    Ok(GroupDir { project, logs })
}

fn group_metrics(dir: &Path) -> Result<Vec<SessionMetrics>, Failure> {
    let group = load_group_dir(dir)?;
    group
        .logs
        .iter()
        .map(|(path, log)| metrics_of(log, path, &group.project))
        .collect()
}

fn analyze(dir_a: &Path, dir_b: &Path, alpha: f64, output: &mut Output) -> CmdResult {
    let a = group_metrics(dir_a)?;
    let b = group_metrics(dir_b)?;
    for (dir, group) in [(dir_a, &a), (dir_b, &b)] {
        if group.len() < 3 {
            return Err(Failure::domain(format!(
                "{}: sample too small: need at least 3 session logs, got {}",
                dir.display(),
                group.len()
            )));
        }
    }
    let comparison = compare_groups(&a, &b, alpha).map_err(|e| Failure::domain(e.to_string()))?;
    let label = |d: &Path| {
        d.file_name()
            .map_or_else(|| d.display().to_string(), |n| n.to_string_lossy().into_owned())
    };
    let (la, lb) = (label(dir_a), label(dir_b));
    let width = la.len().max(lb.len());
    let (la, lb) = (format!("{la:<width$}"), format!("{lb:<width$}"));
    output.emit(
        || report::comparison_text(&comparison, (&la, &lb)),
        || report::comparison_value(&comparison),
    );
    Ok(EXIT_OK)
}

fn export(project_dir: &Path, path: &Path, err: &mut dyn Write) -> CmdResult {
    let group = load_group_dir(project_dir)?;
    for (p, log) in &group.logs {
        if log.project_id() != Some(group.project.project.id.as_str()) {
            return Err(Failure::domain(format!(
                "{}: log does not belong to project {}",
                p.display(),
                group.project.project.id
            )));
        }
    }
    let logs: Vec<SessionLog> = group.logs.iter().map(|(_, l)| l.clone()).collect();
    let bytes = export_bundle(&group.project.project, &logs).map_err(|e| {
        Failure::domain(format!("corrupt log at seq {}: {}", e.seq, e.reason))
    })?;
    std::fs::write(path, bytes)
        .map_err(|e| Failure::domain(format!("{}: {e}", path.display())))?;
    let _ = writeln!(
        err,
        "wrote {} session(s) to {}",
        logs.len(),
        path.display()
    );
    Ok(EXIT_OK)
}

fn serve(host: &str, port: u16, data_dir: &Path, out: &mut dyn Write) -> CmdResult {
    let store = Store::open(data_dir).map_err(|e| Failure::domain(e.to_string()))?;
    let runtime = tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()
        .map_err(|e| Failure::domain(e.to_string()))?;
    runtime.block_on(async {
        let listener = tokio::net::TcpListener::bind((host, port))
            .await
            .map_err(|e| Failure::domain(format!("cannot listen on {host}:{port}: {e}")))?;
        let addr = listener
            .local_addr()
            .map_err(|e| Failure::domain(e.to_string()))?;
        let _ = writeln!(out, "listening on http://{addr}");
        server::serve(listener, Arc::new(store))
            .await
            .map_err(|e| Failure::domain(e.to_string()))?;
        Ok(EXIT_OK)
    })
}

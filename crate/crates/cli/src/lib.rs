//! Scenario runner: reads a JSON scenario, runs the requested verification
//! tasks and writes a JSON report (plus optional DOT exports).

pub mod config;
pub mod report;
pub mod tasks;

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use chaingeom::chains::ChainGeometry;
use chaingeom::projline::{DistantGraph, ProjectiveLine};
use chaingeom::ring::{build_ring, build_subfield};

pub use config::{ScenarioConfig, TaskName};
pub use report::{Report, Status, TaskReport};

use report::{Sheet, TaskTiming, Timing};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error(transparent)]
    Core(#[from] chaingeom::Error),
}

impl CliError {
    /// Process exit status: 2 for configuration problems, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Where DOT files go; no DOT output when absent.
    pub dot_dir: Option<PathBuf>,
    /// Worker threads for task-internal parallelism; one when absent.
    pub parallel: Option<usize>,
}

/// Writes the distant graph in DOT format.
pub fn export_dot(graph: &DistantGraph, line: &ProjectiveLine, path: &Path) -> Result<(), CliError> {
    fs::write(path, graph.to_dot(line)).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn load_config(path: &Path) -> Result<ScenarioConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    ScenarioConfig::from_json(&text)
}

/// Runs every task of the scenario in the listed order. Task failures are
/// recorded in the report; only configuration problems return an error.
pub fn run(config: &ScenarioConfig, opts: &RunOptions) -> Result<Report, CliError> {
    let plan = config.plan()?;
    let ring = build_ring(config.ring).map_err(|e| CliError::Config(e.to_string()))?;
    let field = build_subfield(&ring, config.subfield.clone()).map_err(|e| CliError::Config(e.to_string()))?;
    let threads = opts.parallel.unwrap_or(1);
    if threads == 0 {
        return Err(CliError::Config("--parallel must be positive".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Config(e.to_string()))?;

    let started = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
    let t0 = Instant::now();
    pool.install(|| {
        let geom = ChainGeometry::new(ring, field);
        let mut reports = Vec::new();
        let mut timings = Vec::new();
        for task in &plan {
            let t = Instant::now();
            let mut sheet = Sheet::default();
            let (status, error) = match &geom {
                Err(e) => (Status::Skipped, Some(format!("scenario could not be built: {e}"))),
                Ok(geom) => {
                    let sc = tasks::Scenario {
                        geom,
                        dot_dir: opts.dot_dir.as_deref(),
                    };
                    match tasks::run_task(task.name, &task.options, &sc, &mut sheet) {
                        Ok(true) => (Status::Pass, None),
                        Ok(false) => (Status::Fail, None),
                        Err(e) => (Status::Fail, Some(e.to_string())),
                    }
                }
            };
            reports.push(TaskReport {
                name: task.name.to_string(),
                status,
                counts: sheet.counts,
                witnesses: sheet.witnesses,
                error,
            });
            timings.push(TaskTiming {
                name: task.name.to_string(),
                seconds: t.elapsed().as_secs_f64(),
            });
        }
        let timing = Timing {
            started_unix_seconds: started,
            total_seconds: t0.elapsed().as_secs_f64(),
            tasks: timings,
        };
        Ok(Report::new(config.clone(), reports, timing))
    })
}

/// `run` followed by writing the report into `out_dir`. Returns the exit status.
pub fn run_to_dir(config_path: &Path, out_dir: &Path, dot: bool, parallel: Option<usize>) -> Result<i32, CliError> {
    let config = load_config(config_path)?;
    fs::create_dir_all(out_dir).map_err(|e| CliError::Io(format!("{}: {e}", out_dir.display())))?;
    let opts = RunOptions {
        dot_dir: (dot || config.output.dot).then(|| out_dir.to_path_buf()),
        parallel,
    };
    let report = run(&config, &opts)?;
    let path = out_dir.join(&config.output.report);
    fs::write(&path, report.to_json()).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(report.exit_code())
}

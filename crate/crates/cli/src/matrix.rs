//! Runs a set of scheme / walk-step combinations under shared seeds and
//! writes one trace CSV per combination plus a summary table.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use fairwpt::{metrics, Allocator, EhModel, Scheme, Selector, SimConfig, SimTrace};

/// The eight schemes compared in the reference experiment.
pub const PAPER_SCHEMES: [Scheme; 8] = [
    Scheme::new(Selector::RoundRobin, Allocator::Crpm, EhModel::Log),
    Scheme::new(Selector::RoundRobin, Allocator::Epd, EhModel::Log),
    Scheme::new(Selector::RoundRobin, Allocator::Trpm, EhModel::Log),
    Scheme::new(Selector::Ssep, Allocator::Crpm, EhModel::Log),
    Scheme::new(Selector::Ssep, Allocator::Epd, EhModel::Log),
    Scheme::new(Selector::Ssep, Allocator::Trpm, EhModel::Log),
    Scheme::new(Selector::Ssep, Allocator::Crpm, EhModel::Linear),
    Scheme::new(Selector::Ssep, Allocator::Trpm, EhModel::Linear),
];

pub const SUMMARY_FILE: &str = "summary.csv";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Combination {
    pub scheme: Scheme,
    pub walk_step: f64,
}

impl Combination {
    /// File stem and summary label, e.g. `ssep_log_crpm_walk0.03`.
    pub fn label(&self) -> String {
        format!("{}_walk{}", self.scheme, self.walk_step)
    }
}

/// Combinations sharing one base configuration (and so one seed).
#[derive(Debug, Clone)]
pub struct ExperimentMatrix {
    base: SimConfig,
    combinations: Vec<Combination>,
}

#[derive(Debug, thiserror::Error)]
pub enum MatrixError {
    #[error("experiment matrix is empty")]
    Empty,
    #[error("duplicate combination `{0}`")]
    Duplicate(String),
    #[error("combination `{label}`: {source}")]
    Invalid { label: String, source: fairwpt::Error },
    #[error("output directory {path}: {source}")]
    OutputDir { path: PathBuf, source: io::Error },
    #[error("writing {path}: {source}")]
    Write { path: PathBuf, source: csv::Error },
}

impl ExperimentMatrix {
    pub fn new(base: SimConfig, combinations: Vec<Combination>) -> Result<Self, MatrixError> {
        if combinations.is_empty() {
            return Err(MatrixError::Empty);
        }
        let mut labels: Vec<String> = Vec::with_capacity(combinations.len());
        for c in &combinations {
            let label = c.label();
            if labels.contains(&label) {
                return Err(MatrixError::Duplicate(label));
            }
            base.clone()
                .with_scheme(c.scheme)
                .with_walk_step(c.walk_step)
                .validate()
                .map_err(|source| MatrixError::Invalid {
                    label: label.clone(),
                    source,
                })?;
            labels.push(label);
        }
        Ok(Self { base, combinations })
    }

    /// Just the scheme and walk step already in `base`.
    pub fn single(base: SimConfig) -> Result<Self, MatrixError> {
        let c = Combination {
            scheme: base.scheme,
            walk_step: base.walk_step,
        };
        Self::new(base, vec![c])
    }

    /// Every reference scheme at every listed walk step.
    pub fn paper(base: SimConfig, walk_steps: &[f64]) -> Result<Self, MatrixError> {
        let combos = walk_steps
            .iter()
            .flat_map(|&w| PAPER_SCHEMES.iter().map(move |&scheme| Combination { scheme, walk_step: w }))
            .collect();
        Self::new(base, combos)
    }

    pub fn combinations(&self) -> &[Combination] {
        &self.combinations
    }

    pub fn config_for(&self, c: &Combination) -> SimConfig {
        self.base.clone().with_scheme(c.scheme).with_walk_step(c.walk_step)
    }
}

/// Outcome of one matrix run.
#[derive(Debug, Clone)]
pub struct MatrixReport {
    pub files: Vec<PathBuf>,
    pub traces: Vec<(Combination, SimTrace)>,
}

fn ensure_writable(dir: &Path) -> Result<(), MatrixError> {
    let err = |source| MatrixError::OutputDir {
        path: dir.to_path_buf(),
        source,
    };
    fs::create_dir_all(dir).map_err(err)?;
    let probe = dir.join(".fairwpt-write-probe");
    fs::write(&probe, b"").map_err(err)?;
    fs::remove_file(&probe).map_err(err)
}

fn write_trace(path: &Path, trace: &SimTrace) -> csv::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["batch_index", "min_received_energy_J", "total_received_energy_J"])?;
    for b in &trace.batches {
        w.write_record([b.batch_index.to_string(), b.min_energy.to_string(), b.total_energy.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

fn write_summary(path: &Path, m: usize, rows: &[(Combination, SimTrace)]) -> csv::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    let mut header = vec!["scheme".to_string(), "final_min_J".into(), "final_total_J".into()];
    header.extend((0..m).map(|k| format!("U_{k}")));
    w.write_record(&header)?;
    for (c, trace) in rows {
        let s = metrics(trace).expect("traces cover at least one sensor");
        let mut row = vec![c.label(), s.final_min.to_string(), s.final_total.to_string()];
        row.extend(trace.final_energy.iter().map(|u| u.to_string()));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Runs every combination and writes `<label>.csv` for each plus
/// [`SUMMARY_FILE`]. The output directory is created and probed first.
pub fn run_matrix(matrix: &ExperimentMatrix, out_dir: &Path) -> Result<MatrixReport, MatrixError> {
    ensure_writable(out_dir)?;
    let traces: Vec<(Combination, SimTrace)> = std::thread::scope(|scope| {
        let handles: Vec<_> = matrix
            .combinations
            .iter()
            .map(|c| {
                let cfg = matrix.config_for(c);
                scope.spawn(move || fairwpt::run(cfg).map(|t| (*c, t)))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("simulation thread panicked"))
            .collect::<fairwpt::Result<_>>()
    })
    .map_err(|source| MatrixError::Invalid {
        label: "run".into(),
        source,
    })?;

    let mut files = Vec::with_capacity(traces.len() + 1);
    for (c, trace) in &traces {
        let path = out_dir.join(format!("{}.csv", c.label()));
        write_trace(&path, trace).map_err(|source| MatrixError::Write {
            path: path.clone(),
            source,
        })?;
        files.push(path);
    }
    let path = out_dir.join(SUMMARY_FILE);
    write_summary(&path, matrix.base.m, &traces).map_err(|source| MatrixError::Write {
        path: path.clone(),
        source,
    })?;
    files.push(path);
    Ok(MatrixReport { files, traces })
}

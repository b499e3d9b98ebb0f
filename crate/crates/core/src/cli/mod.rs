//! Command-line front end.
//!
//! Exit codes: 0 success, 1 configuration error, 2 I/O error, 3 enumeration
//! budget exceeded.

mod config;
mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::Parser;
use tempfile::NamedTempFile;

pub use config::{Algorithm, CutPointsArg, MutationModeArg, Overrides, RunConfig};
pub use report::{trace_csv, write_trace, RunReport, TRACE_HEADER};

use crate::clustering::{brute_force_optimum, lloyd, weighted_centroids, Assignment};
use crate::colour_cube::{build_histogram, quantize};
use crate::error::Error;
use crate::genetic::{chromosome_length, run_ga, GenerationRecord};
use crate::image_io::{self, ImageIoError};
use crate::raster::RgbRaster;
use crate::segmentation::{label_pixels, render_and_mask, SegmentationOutput};

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("invalid {field}: {message}")]
    Config { field: String, message: String },
    #[error("{0}")]
    Io(String),
    #[error("{0}; use --algorithm ga or --algorithm lloyd for larger instances")]
    Budget(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl RunError {
    pub(crate) fn config(field: &str, message: impl Into<String>) -> Self {
        Self::Config {
            field: field.to_string(),
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config { .. } | Self::Internal(_) => 1,
            Self::Io(_) => 2,
            Self::Budget(_) => 3,
        }
    }
}

impl From<ImageIoError> for RunError {
    fn from(e: ImageIoError) -> Self {
        Self::Io(e.to_string())
    }
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        match e {
            Error::Config { field, message } => Self::config(field, message),
            Error::BudgetExceeded { .. } => Self::Budget(e.to_string()),
            other => Self::Internal(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "cubeseg",
    version,
    about = "Segment a colour image by genetic k-means clustering of its quantized RGB cube"
)]
pub struct Cli {
    /// Plain-text key=value file; command-line flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub overrides: Overrides,
}

impl Cli {
    pub fn resolve(self) -> Result<RunConfig, RunError> {
        let file = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    RunError::Io(format!("cannot read config {}: {e}", path.display()))
                })?;
                Overrides::parse_config(&text)?
            }
            None => Overrides::default(),
        };
        RunConfig::from_overrides(self.overrides.or(file))
    }
}

/// Parses `args`, runs, reports, and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match cli.resolve().and_then(|cfg| run(&cfg)) {
        Ok(outcome) => {
            println!(
                "final_j={:.6} outputs={}",
                outcome.report.final_j,
                outcome.config_out_dir.display()
            );
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// In-memory result of segmenting one image.
#[derive(Debug, Clone)]
pub struct Segmentation {
    pub report: RunReport,
    pub assignment: Assignment,
    pub output: SegmentationOutput,
    pub trace: Option<Vec<GenerationRecord>>,
}

/// Runs the configured algorithm on an already decoded image.
pub fn execute(config: &RunConfig, image: &RgbRaster) -> Result<Segmentation, RunError> {
    config.validate()?;
    let started = Instant::now();
    let histogram = build_histogram(image).map_err(|e| RunError::Io(e.to_string()))?;
    let q = quantize(&histogram, config.cube_side)?;
    let points = q.points();
    let k = config.k;

    let mut ga = config.ga.clone();
    ga.k = k;
    ga.seed = config.seed;

    let (assignment, final_j, work, trace) = match config.algorithm {
        Algorithm::Ga => {
            let r = run_ga(points, &ga)?;
            (r.best_assignment, r.best_j, r.evaluations, Some(r.trace))
        }
        Algorithm::Lloyd => {
            if k > points.len() {
                return Err(RunError::config(
                    "clusters",
                    format!(
                        "lloyd needs at most as many clusters as occupied subcubes ({})",
                        points.len()
                    ),
                ));
            }
            let r = lloyd(points, k, config.seed, config.lloyd_max_iter)?;
            (r.assignment, r.report.j, r.iterations as u64, None)
        }
        Algorithm::Brute => {
            let r = brute_force_optimum(points, k)?;
            (r.assignment, r.report.j, r.enumerated, None)
        }
    };

    let model = weighted_centroids(points, &assignment)?;
    let labels = label_pixels(image, &q, &assignment)?;
    let output = render_and_mask(image, &labels, &model)?;

    let report = RunReport {
        width: image.width(),
        height: image.height(),
        pixel_count: histogram.source_pixel_count(),
        distinct_colours: histogram.distinct_colours(),
        occupied_subcubes: q.len(),
        chromosome_length: chromosome_length(q.len(), k),
        final_j,
        work,
        elapsed_seconds: started.elapsed().as_secs_f64(),
        config: config.clone(),
        centroids: model.centroids.clone(),
        clusters: output.stats.clone(),
    };
    Ok(Segmentation {
        report,
        assignment,
        output,
        trace,
    })
}

/// Result of [`run`].
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub report: RunReport,
    pub written: Vec<PathBuf>,
    pub config_out_dir: PathBuf,
}

/// Reads the input, segments it and writes the artifacts.
///
/// Files are staged as temporaries inside the output directory and renamed
/// into place only once every artifact has been produced.
pub fn run(config: &RunConfig) -> Result<RunOutcome, RunError> {
    config.validate()?;
    let image = image_io::read_rgb(&config.input)?;
    let seg = execute(config, &image)?;

    let mut staged: Vec<(NamedTempFile, &'static str, Option<usize>)> = Vec::new();
    let dir = &config.out_dir;
    std::fs::create_dir_all(dir)
        .map_err(|e| RunError::Io(format!("cannot create {}: {e}", dir.display())))?;

    staged.push((
        stage(dir, &image_io::encode_png_rgb(&seg.output.rendered)?)?,
        "segmented.png",
        None,
    ));
    if config.emit_masks {
        for (i, mask) in seg.output.masks.iter().enumerate() {
            staged.push((
                stage(dir, &image_io::encode_png_gray(mask)?)?,
                "mask",
                Some(i),
            ));
        }
    }
    if config.emit_trace {
        if let Some(trace) = &seg.trace {
            staged.push((stage(dir, trace_csv(trace).as_bytes())?, "trace.csv", None));
        }
    }
    staged.push((
        stage(dir, seg.report.to_text().as_bytes())?,
        "report.txt",
        None,
    ));

    let mut written = Vec::with_capacity(staged.len());
    for (tmp, name, index) in staged {
        let target = match index {
            Some(i) => dir.join(format!("mask_{i}.png")),
            None => dir.join(name),
        };
        tmp.persist(&target)
            .map_err(|e| RunError::Io(format!("cannot write {}: {e}", target.display())))?;
        written.push(target);
    }
    Ok(RunOutcome {
        report: seg.report,
        written,
        config_out_dir: dir.clone(),
    })
}

fn stage(dir: &Path, bytes: &[u8]) -> Result<NamedTempFile, RunError> {
    let io_err =
        |e: std::io::Error| RunError::Io(format!("cannot stage output in {}: {e}", dir.display()));
    let mut tmp = NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(bytes).map_err(io_err)?;
    Ok(tmp)
}

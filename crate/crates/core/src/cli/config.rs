use std::path::PathBuf;

use clap::{Args, ValueEnum};

use super::RunError;
use crate::colour_cube::CubeSide;
use crate::genetic::{CutPoints, GaConfig, MutationMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Algorithm {
    #[default]
    Ga,
    Lloyd,
    Brute,
}

impl Algorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Ga => "ga",
            Self::Lloyd => "lloyd",
            Self::Brute => "brute",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MutationModeArg {
    Chromosome,
    Bit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CutPointsArg {
    Bit,
    Label,
}

impl From<MutationModeArg> for MutationMode {
    fn from(m: MutationModeArg) -> Self {
        match m {
            MutationModeArg::Chromosome => Self::Chromosome,
            MutationModeArg::Bit => Self::Bit,
        }
    }
}

impl From<CutPointsArg> for CutPoints {
    fn from(c: CutPointsArg) -> Self {
        match c {
            CutPointsArg::Bit => Self::Bit,
            CutPointsArg::Label => Self::Label,
        }
    }
}

pub(crate) fn mutation_mode_name(m: MutationMode) -> &'static str {
    match m {
        MutationMode::Chromosome => "chromosome",
        MutationMode::Bit => "bit",
    }
}

pub(crate) fn cut_points_name(c: CutPoints) -> &'static str {
    match c {
        CutPoints::Bit => "bit",
        CutPoints::Label => "label",
    }
}

/// Optional settings from either the command line or a config file.
#[derive(Debug, Clone, Default, PartialEq, Args)]
pub struct Overrides {
    /// Input image (PNG or binary PPM).
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Directory receiving the outputs.
    #[arg(long = "out-dir")]
    pub out_dir: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub algorithm: Option<Algorithm>,
    /// Number of clusters.
    #[arg(long)]
    pub clusters: Option<usize>,
    /// Subcube edge length, a power of two dividing 256.
    #[arg(long = "cube-side")]
    pub cube_side: Option<u32>,
    #[arg(long)]
    pub population: Option<usize>,
    #[arg(long)]
    pub generations: Option<usize>,
    #[arg(long = "crossover-rate")]
    pub crossover_rate: Option<f64>,
    #[arg(long = "mutation-rate")]
    pub mutation_rate: Option<f64>,
    #[arg(long = "mutation-mode", value_enum)]
    pub mutation_mode: Option<MutationModeArg>,
    /// Restrict crossover cuts to label boundaries.
    #[arg(long = "crossover-points", value_enum)]
    pub crossover_points: Option<CutPointsArg>,
    /// Tournament size.
    #[arg(long)]
    pub tournament: Option<usize>,
    /// Individuals copied unchanged into each generation.
    #[arg(long)]
    pub elite: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Write the per-generation J trace (GA only).
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub trace: Option<bool>,
    /// Write one mask image per cluster.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub masks: Option<bool>,
}

impl Overrides {
    /// Fields of `self` win over those of `lower`.
    pub fn or(self, lower: Self) -> Self {
        Self {
            input: self.input.or(lower.input),
            out_dir: self.out_dir.or(lower.out_dir),
            algorithm: self.algorithm.or(lower.algorithm),
            clusters: self.clusters.or(lower.clusters),
            cube_side: self.cube_side.or(lower.cube_side),
            population: self.population.or(lower.population),
            generations: self.generations.or(lower.generations),
            crossover_rate: self.crossover_rate.or(lower.crossover_rate),
            mutation_rate: self.mutation_rate.or(lower.mutation_rate),
            mutation_mode: self.mutation_mode.or(lower.mutation_mode),
            crossover_points: self.crossover_points.or(lower.crossover_points),
            tournament: self.tournament.or(lower.tournament),
            elite: self.elite.or(lower.elite),
            seed: self.seed.or(lower.seed),
            trace: self.trace.or(lower.trace),
            masks: self.masks.or(lower.masks),
        }
    }

    /// Parses `key=value` lines; blank lines and `#` comments are skipped.
    /// Keys are the long flag names without dashes prefix.
    pub fn parse_config(text: &str) -> Result<Self, RunError> {
        let mut o = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(RunError::config(
                    "config",
                    format!("line {} is not key=value: {line:?}", lineno + 1),
                ));
            };
            o.set(key.trim(), value.trim())?;
        }
        Ok(o)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<(), RunError> {
        fn num<T: std::str::FromStr>(field: &'static str, v: &str) -> Result<Option<T>, RunError> {
            v.parse()
                .map(Some)
                .map_err(|_| RunError::config(field, format!("cannot parse {v:?}")))
        }
        fn choice<T: ValueEnum>(field: &'static str, v: &str) -> Result<Option<T>, RunError> {
            T::from_str(v, true)
                .map(Some)
                .map_err(|_| RunError::config(field, format!("unrecognized value {v:?}")))
        }
        match key {
            "input" => self.input = Some(value.into()),
            "out-dir" => self.out_dir = Some(value.into()),
            "algorithm" => self.algorithm = choice("algorithm", value)?,
            "clusters" => self.clusters = num("clusters", value)?,
            "cube-side" => self.cube_side = num("cube-side", value)?,
            "population" => self.population = num("population", value)?,
            "generations" => self.generations = num("generations", value)?,
            "crossover-rate" => self.crossover_rate = num("crossover-rate", value)?,
            "mutation-rate" => self.mutation_rate = num("mutation-rate", value)?,
            "mutation-mode" => self.mutation_mode = choice("mutation-mode", value)?,
            "crossover-points" => self.crossover_points = choice("crossover-points", value)?,
            "tournament" => self.tournament = num("tournament", value)?,
            "elite" => self.elite = num("elite", value)?,
            "seed" => self.seed = num("seed", value)?,
            "trace" => self.trace = num("trace", value)?,
            "masks" => self.masks = num("masks", value)?,
            _ => return Err(RunError::config("config", format!("unknown key {key:?}"))),
        }
        Ok(())
    }
}

/// Fully resolved settings for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub input: PathBuf,
    pub out_dir: PathBuf,
    pub algorithm: Algorithm,
    pub k: usize,
    pub cube_side: CubeSide,
    /// GA parameters; `ga.k` and `ga.seed` mirror `k` and `seed`.
    pub ga: GaConfig,
    pub seed: u64,
    pub lloyd_max_iter: usize,
    pub emit_trace: bool,
    pub emit_masks: bool,
}

impl RunConfig {
    pub fn new(input: impl Into<PathBuf>, out_dir: impl Into<PathBuf>) -> Self {
        Self {
            input: input.into(),
            out_dir: out_dir.into(),
            algorithm: Algorithm::Ga,
            k: 6,
            cube_side: CubeSide::DEFAULT,
            ga: GaConfig::default(),
            seed: 0,
            lloyd_max_iter: 300,
            emit_trace: false,
            emit_masks: false,
        }
    }

    pub fn from_overrides(o: Overrides) -> Result<Self, RunError> {
        let input = o
            .input
            .ok_or_else(|| RunError::config("input", "an input image is required"))?;
        let out_dir = o
            .out_dir
            .ok_or_else(|| RunError::config("out-dir", "an output directory is required"))?;
        let mut cfg = Self::new(input, out_dir);
        if let Some(a) = o.algorithm {
            cfg.algorithm = a;
        }
        if let Some(k) = o.clusters {
            if k == 0 {
                return Err(RunError::config("clusters", "must be at least 1"));
            }
            cfg.k = k;
        }
        if let Some(s) = o.cube_side {
            cfg.cube_side =
                CubeSide::new(s).map_err(|e| RunError::config("cube-side", e.to_string()))?;
        }
        let ga = &mut cfg.ga;
        if let Some(v) = o.population {
            ga.population_size = v;
        }
        if let Some(v) = o.generations {
            ga.generations = v;
        }
        if let Some(v) = o.crossover_rate {
            ga.crossover_rate = v;
        }
        if let Some(v) = o.mutation_rate {
            ga.mutation_rate = v;
        }
        if let Some(v) = o.mutation_mode {
            ga.mutation_mode = v.into();
        }
        if let Some(v) = o.crossover_points {
            ga.cut_points = v.into();
        }
        if let Some(v) = o.tournament {
            ga.tournament_size = v;
        }
        if let Some(v) = o.elite {
            ga.elite_count = v;
        }
        cfg.seed = o.seed.unwrap_or(0);
        cfg.emit_trace = o.trace.unwrap_or(false);
        cfg.emit_masks = o.masks.unwrap_or(false);
        cfg.sync();
        cfg.validate()?;
        Ok(cfg)
    }

    /// Copies the shared fields into the GA settings.
    pub fn sync(&mut self) {
        self.ga.k = self.k;
        self.ga.seed = self.seed;
    }

    pub fn validate(&self) -> Result<(), RunError> {
        if self.k == 0 {
            return Err(RunError::config("clusters", "must be at least 1"));
        }
        self.ga.validate().map_err(|e| match e {
            crate::Error::Config { field, message } => RunError::config(flag_name(field), message),
            other => RunError::config("config", other.to_string()),
        })
    }
}

fn flag_name(field: &'static str) -> &'static str {
    match field {
        "population_size" => "population",
        "generations" => "generations",
        "crossover_rate" => "crossover-rate",
        "mutation_rate" => "mutation-rate",
        "tournament_size" => "tournament",
        "elite_count" => "elite",
        "k" => "clusters",
        other => other,
    }
}

use std::fmt::Write as _;
use std::io;
use std::path::Path;

use super::config::{cut_points_name, mutation_mode_name, RunConfig};
use crate::genetic::GenerationRecord;
use crate::segmentation::ClusterStats;

pub const TRACE_HEADER: &str = "generation,best_so_far_j,gen_best_j,gen_mean_j";

/// Summary of one run, serialized as `key=value` lines in a fixed order.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub width: usize,
    pub height: usize,
    pub pixel_count: u64,
    pub distinct_colours: usize,
    pub occupied_subcubes: usize,
    pub chromosome_length: usize,
    pub final_j: f64,
    /// Fitness evaluations (GA), assignment steps (Lloyd) or enumerated vectors (brute force).
    pub work: u64,
    pub elapsed_seconds: f64,
    pub config: RunConfig,
    pub centroids: Vec<Option<[f64; 3]>>,
    pub clusters: Vec<ClusterStats>,
}

fn triple(v: Option<[f64; 3]>) -> String {
    v.map_or_else(
        || "none".to_string(),
        |[r, g, b]| format!("{r:.6},{g:.6},{b:.6}"),
    )
}

impl RunReport {
    pub fn to_text(&self) -> String {
        let c = &self.config;
        let mut s = String::new();
        let mut kv = |k: &str, v: &dyn std::fmt::Display| {
            let _ = writeln!(s, "{k}={v}");
        };
        kv("input", &c.input.display());
        kv("width", &self.width);
        kv("height", &self.height);
        kv("pixel_count", &self.pixel_count);
        kv("distinct_colours", &self.distinct_colours);
        kv("cube_side", &c.cube_side);
        kv("occupied_subcubes", &self.occupied_subcubes);
        kv("clusters", &c.k);
        kv("chromosome_length", &self.chromosome_length);
        kv("algorithm", &c.algorithm.as_str());
        kv("seed", &c.seed);
        kv("population", &c.ga.population_size);
        kv("generations", &c.ga.generations);
        kv("crossover_rate", &c.ga.crossover_rate);
        kv("mutation_rate", &c.ga.mutation_rate);
        kv("mutation_mode", &mutation_mode_name(c.ga.mutation_mode));
        kv("crossover_points", &cut_points_name(c.ga.cut_points));
        kv("tournament", &c.ga.tournament_size);
        kv("elite", &c.ga.elite_count);
        kv("lloyd_max_iter", &c.lloyd_max_iter);
        kv("final_j", &format!("{:.6}", self.final_j));
        kv("work", &self.work);
        for (i, (stats, centroid)) in self.clusters.iter().zip(&self.centroids).enumerate() {
            kv(&format!("cluster_{i}_pixels"), &stats.pixels);
            kv(&format!("cluster_{i}_mean"), &triple(stats.mean));
            kv(&format!("cluster_{i}_centroid"), &triple(*centroid));
        }
        kv("elapsed_seconds", &format!("{:.3}", self.elapsed_seconds));
        s
    }
}

/// Comma-separated trace with one row per generation.
pub fn trace_csv(trace: &[GenerationRecord]) -> String {
    let mut s = String::with_capacity(48 * (trace.len() + 1));
    s.push_str(TRACE_HEADER);
    s.push('\n');
    for r in trace {
        let _ = writeln!(
            s,
            "{},{:.6},{:.6},{:.6}",
            r.generation, r.best_so_far_j, r.gen_best_j, r.gen_mean_j
        );
    }
    s
}

pub fn write_trace(trace: &[GenerationRecord], path: &Path) -> io::Result<()> {
    if trace.is_empty() {
        return Err(io::Error::new(io::ErrorKind::InvalidInput, "empty trace"));
    }
    std::fs::write(path, trace_csv(trace))
}

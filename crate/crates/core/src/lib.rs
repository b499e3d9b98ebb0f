//! Colour image segmentation by clustering a quantized RGB colour cube.
//!
//! The pipeline builds the exact colour histogram of an image, agglomerates it
//! into frequency-weighted points on a uniform subcube grid
//! ([`colour_cube`]), partitions those points into `k` clusters by minimizing
//! the weighted k-means objective ([`clustering`], [`genetic`]) and maps the
//! partition back onto the pixels ([`segmentation`]).
//!
//! Data-parallel loops (fitness evaluation, exhaustive enumeration, histogram
//! sorting, row labelling) use rayon when the default `parallel` feature is
//! enabled; results are bit-identical either way.

pub mod cli;
pub mod clustering;
pub mod colour_cube;
pub mod error;
pub mod exec;
pub mod genetic;
pub mod image_io;
pub mod raster;
pub mod segmentation;

pub use clustering::{objective_j, weighted_centroids, Assignment, ClusterModel, ObjectiveReport};
pub use colour_cube::{ColourPoint, CubeSide, QuantizedHistogram};
pub use error::{Error, Result};
pub use exec::Execution;
pub use genetic::{run_ga, GaConfig, GaResult};
pub use raster::{Raster, Rgb8, RgbRaster};

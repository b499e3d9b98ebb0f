//! Exact RGB histograms and the uniform subcube pre-partition of the colour cube.
//!
//! The 256³ cube is tiled by cubes of edge `side` (a power of two). Every
//! colour falls in exactly one subcube; all colours of an occupied subcube are
//! agglomerated into a single [`ColourPoint`] at the subcube centre whose
//! frequency is the summed pixel count. Points are ordered lexicographically
//! by [`SubcubeIndex`], which gives chromosome bit positions a stable meaning.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::raster::{Rgb8, RgbRaster};

/// Edge length of a subcube: a power of two in `1..=256`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CubeSide(u16);

impl CubeSide {
    /// The 32-wide tiling yielding at most 512 subcubes.
    pub const DEFAULT: Self = Self(32);

    pub fn new(side: u32) -> Result<Self> {
        if side == 0 || side > 256 || !side.is_power_of_two() {
            return Err(Error::config(
                "cube_side",
                format!("{side} is not a power of two in 1..=256"),
            ));
        }
        Ok(Self(side as u16))
    }

    pub fn get(self) -> u32 {
        u32::from(self.0)
    }

    /// Subcubes along each axis.
    pub fn per_axis(self) -> u32 {
        256 / self.get()
    }

    /// Upper bound on occupied subcubes, `(256/side)³`.
    pub fn max_points(self) -> usize {
        (self.per_axis() as usize).pow(3)
    }
}

impl Default for CubeSide {
    fn default() -> Self {
        Self::DEFAULT
    }
}

impl fmt::Display for CubeSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Exact per-colour occurrence counts of an image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColourHistogram {
    entries: Vec<(Rgb8, u64)>,
    source_pixel_count: u64,
}

impl ColourHistogram {
    /// Entries sorted by colour, each count ≥ 1.
    pub fn entries(&self) -> &[(Rgb8, u64)] {
        &self.entries
    }

    pub fn distinct_colours(&self) -> usize {
        self.entries.len()
    }

    pub fn source_pixel_count(&self) -> u64 {
        self.source_pixel_count
    }

    pub fn count(&self, colour: Rgb8) -> u64 {
        self.entries
            .binary_search_by_key(&colour.packed(), |(c, _)| c.packed())
            .map_or(0, |i| self.entries[i].1)
    }
}

/// Coordinates of a subcube in the tiling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubcubeIndex {
    pub ir: u8,
    pub ig: u8,
    pub ib: u8,
}

impl SubcubeIndex {
    pub const fn new(ir: u8, ig: u8, ib: u8) -> Self {
        Self { ir, ig, ib }
    }
}

/// A quantized colour: representative coordinate plus frequency weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ColourPoint {
    pub coord: [f64; 3],
    pub freq: u64,
}

impl ColourPoint {
    pub fn new(coord: [f64; 3], freq: u64) -> Self {
        Self { coord, freq }
    }
}

/// Occupied subcubes of a histogram, one weighted point each.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantizedHistogram {
    side: CubeSide,
    points: Vec<ColourPoint>,
    indices: Vec<SubcubeIndex>,
    source_pixel_count: u64,
}

impl QuantizedHistogram {
    pub fn side(&self) -> CubeSide {
        self.side
    }

    pub fn points(&self) -> &[ColourPoint] {
        &self.points
    }

    /// Subcube of each point, parallel to [`points`](Self::points) and strictly increasing.
    pub fn indices(&self) -> &[SubcubeIndex] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn source_pixel_count(&self) -> u64 {
        self.source_pixel_count
    }

    pub fn total_frequency(&self) -> u64 {
        self.points.iter().map(|p| p.freq).sum()
    }

    /// Position of the point for subcube `index`, if occupied.
    pub fn index_of(&self, index: SubcubeIndex) -> Option<usize> {
        self.indices.binary_search(&index).ok()
    }

    /// Position of the point that absorbed `colour`, if its subcube is occupied.
    pub fn locate(&self, colour: Rgb8) -> Option<usize> {
        self.index_of(subcube_index(colour, self.side))
    }
}

/// Counts every distinct colour of `image`.
pub fn build_histogram(image: &RgbRaster) -> Result<ColourHistogram> {
    build_histogram_with(image, Execution::default())
}

pub fn build_histogram_with(image: &RgbRaster, exec: Execution) -> Result<ColourHistogram> {
    if image.is_empty() {
        return Err(Error::invalid("image has no pixels"));
    }
    let mut packed: Vec<u32> = image.pixels().iter().map(|c| c.packed()).collect();
    exec.sort_unstable(&mut packed);

    let mut entries: Vec<(Rgb8, u64)> = Vec::new();
    for &p in &packed {
        match entries.last_mut() {
            Some((c, n)) if c.packed() == p => *n += 1,
            _ => entries.push((unpack(p), 1)),
        }
    }
    Ok(ColourHistogram {
        entries,
        source_pixel_count: packed.len() as u64,
    })
}

fn unpack(p: u32) -> Rgb8 {
    Rgb8::new((p >> 16) as u8, (p >> 8) as u8, p as u8)
}

/// Subcube containing `colour`; `side` must be a power of two in `1..=256`.
pub fn subcube_of(colour: Rgb8, side: u32) -> Result<SubcubeIndex> {
    Ok(subcube_index(colour, CubeSide::new(side)?))
}

pub fn subcube_index(colour: Rgb8, side: CubeSide) -> SubcubeIndex {
    let shift = side.get().trailing_zeros();
    SubcubeIndex {
        ir: (u32::from(colour.r) >> shift) as u8,
        ig: (u32::from(colour.g) >> shift) as u8,
        ib: (u32::from(colour.b) >> shift) as u8,
    }
}

/// Midpoint of the discrete intensity range covered by `index`: `i·side + (side−1)/2`.
pub fn center_of(index: SubcubeIndex, side: CubeSide) -> Result<[f64; 3]> {
    let per_axis = side.per_axis();
    let [ir, ig, ib] = [index.ir, index.ig, index.ib].map(u32::from);
    if ir >= per_axis || ig >= per_axis || ib >= per_axis {
        return Err(Error::invalid(format!(
            "subcube ({ir},{ig},{ib}) out of range for side {side}"
        )));
    }
    let s = f64::from(side.get());
    let half = (s - 1.0) / 2.0;
    Ok([ir, ig, ib].map(|i| f64::from(i) * s + half))
}

/// Agglomerates the histogram into one weighted point per occupied subcube.
pub fn quantize(histogram: &ColourHistogram, side: CubeSide) -> Result<QuantizedHistogram> {
    if histogram.entries.is_empty() {
        return Err(Error::invalid("histogram is empty"));
    }
    let mut cells: BTreeMap<SubcubeIndex, u64> = BTreeMap::new();
    for &(colour, count) in &histogram.entries {
        *cells.entry(subcube_index(colour, side)).or_default() += count;
    }

    let mut points = Vec::with_capacity(cells.len());
    let mut indices = Vec::with_capacity(cells.len());
    for (index, freq) in cells {
        points.push(ColourPoint::new(center_of(index, side)?, freq));
        indices.push(index);
    }
    Ok(QuantizedHistogram {
        side,
        points,
        indices,
        source_pixel_count: histogram.source_pixel_count,
    })
}

//! Maps a colour-cube partition back onto image pixels.

use crate::clustering::{Assignment, ClusterModel};
use crate::colour_cube::QuantizedHistogram;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::raster::{Raster, Rgb8, RgbRaster};

const UNMAPPED: u32 = u32::MAX;

/// Mask value for pixels inside the cluster.
pub const MASK_ON: u8 = 0;
pub const MASK_OFF: u8 = 255;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelImage {
    labels: Raster<u32>,
    k: usize,
}

impl LabelImage {
    pub fn new(labels: Raster<u32>, k: usize) -> Result<Self> {
        if let Some(bad) = labels.pixels().iter().find(|&&l| l as usize >= k) {
            return Err(Error::invalid(format!("label {bad} is not below k = {k}")));
        }
        Ok(Self { labels, k })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn width(&self) -> usize {
        self.labels.width()
    }

    pub fn height(&self) -> usize {
        self.labels.height()
    }

    pub fn labels(&self) -> &[u32] {
        self.labels.pixels()
    }

    pub fn raster(&self) -> &Raster<u32> {
        &self.labels
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterStats {
    pub pixels: u64,
    /// Mean pixel colour, absent for clusters owning no pixels.
    pub mean: Option<[f64; 3]>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SegmentationOutput {
    pub label_image: LabelImage,
    pub rendered: RgbRaster,
    /// Black-on-white: [`MASK_ON`] where the pixel belongs to the cluster.
    pub masks: Vec<Raster<u8>>,
    pub stats: Vec<ClusterStats>,
}

/// Labels each pixel with the cluster of the subcube it falls in.
pub fn label_pixels(
    image: &RgbRaster,
    q: &QuantizedHistogram,
    a: &Assignment,
) -> Result<LabelImage> {
    label_pixels_with(image, q, a, Execution::default())
}

pub fn label_pixels_with(
    image: &RgbRaster,
    q: &QuantizedHistogram,
    a: &Assignment,
    exec: Execution,
) -> Result<LabelImage> {
    if a.len() != q.len() {
        return Err(Error::invalid(format!(
            "assignment has {} labels for {} quantized points",
            a.len(),
            q.len()
        )));
    }
    let width = image.width();
    let mut labels = vec![UNMAPPED; image.len()];
    exec.for_each_chunk_mut(&mut labels, width, |row, out| {
        let src = &image.pixels()[row * width..(row + 1) * width];
        for (l, &c) in out.iter_mut().zip(src) {
            if let Some(i) = q.locate(c) {
                *l = a.labels()[i];
            }
        }
    });
    if let Some(pos) = labels.iter().position(|&l| l == UNMAPPED) {
        let c = image.pixels()[pos];
        return Err(Error::Consistency(format!(
            "pixel ({}, {}) colour {:?} maps to an unoccupied subcube",
            pos % width.max(1),
            pos / width.max(1),
            c.channels()
        )));
    }
    Ok(LabelImage {
        labels: Raster::from_vec(width, image.height(), labels)?,
        k: a.k(),
    })
}

/// Rounds half up and clamps to a channel value.
pub fn round_channel(v: f64) -> u8 {
    (v + 0.5).floor().clamp(0.0, 255.0) as u8
}

pub fn centroid_colour(c: [f64; 3]) -> Rgb8 {
    Rgb8::from(c.map(round_channel))
}

/// Renders every pixel in its cluster's centroid colour and builds one mask
/// and one set of pixel statistics per cluster.
pub fn render_and_mask(
    image: &RgbRaster,
    labels: &LabelImage,
    model: &ClusterModel,
) -> Result<SegmentationOutput> {
    let k = labels.k();
    if model.k() != k {
        return Err(Error::invalid(format!(
            "model has {} clusters but labels use k = {k}",
            model.k()
        )));
    }
    if image.width() != labels.width() || image.height() != labels.height() {
        return Err(Error::invalid(
            "label image and source image differ in size",
        ));
    }

    let palette: Vec<Option<Rgb8>> = model
        .centroids
        .iter()
        .map(|c| c.map(centroid_colour))
        .collect();

    let mut counts = vec![0u64; k];
    let mut sums = vec![[0u64; 3]; k];
    for (&l, c) in labels.labels().iter().zip(image.pixels()) {
        let l = l as usize;
        counts[l] += 1;
        for (s, v) in sums[l].iter_mut().zip(c.channels()) {
            *s += u64::from(v);
        }
    }
    if let Some(i) = (0..k).find(|&i| counts[i] > 0 && palette[i].is_none()) {
        return Err(Error::Consistency(format!(
            "cluster {i} owns {} pixels but has no centroid",
            counts[i]
        )));
    }

    let (w, h) = (labels.width(), labels.height());
    let rendered = Raster::from_vec(
        w,
        h,
        labels
            .labels()
            .iter()
            .map(|&l| palette[l as usize].expect("checked above"))
            .collect(),
    )?;
    let masks = (0..k as u32)
        .map(|i| {
            let px = labels
                .labels()
                .iter()
                .map(|&l| if l == i { MASK_ON } else { MASK_OFF })
                .collect();
            Raster::from_vec(w, h, px)
        })
        .collect::<Result<Vec<_>>>()?;
    let stats = counts
        .iter()
        .zip(&sums)
        .map(|(&n, s)| ClusterStats {
            pixels: n,
            mean: (n > 0).then(|| s.map(|v| v as f64 / n as f64)),
        })
        .collect();

    Ok(SegmentationOutput {
        label_image: labels.clone(),
        rendered,
        masks,
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clustering::weighted_centroids;
    use crate::colour_cube::{build_histogram, quantize, CubeSide};

    fn setup(img: &RgbRaster, labels: Vec<u32>, k: usize) -> (QuantizedHistogram, Assignment) {
        let q = quantize(&build_histogram(img).unwrap(), CubeSide::DEFAULT).unwrap();
        (q, Assignment::new(labels, k).unwrap())
    }

    #[test]
    fn solid_image_shares_one_label() {
        let img = Raster::filled(5, 4, Rgb8::new(90, 10, 200));
        let (q, a) = setup(&img, vec![1], 2);
        let l = label_pixels(&img, &q, &a).unwrap();
        assert!(l.labels().iter().all(|&x| x == 1));
    }

    #[test]
    fn two_colours_follow_indicator() {
        let (c0, c1) = (Rgb8::new(10, 10, 10), Rgb8::new(200, 200, 200));
        let img = Raster::from_fn(6, 3, |x, y| if (x + y) % 3 == 0 { c1 } else { c0 });
        let (q, a) = setup(&img, vec![0, 1], 2);
        let l = label_pixels(&img, &q, &a).unwrap();
        for (&lab, &c) in l.labels().iter().zip(img.pixels()) {
            assert_eq!(lab, u32::from(c == c1));
        }
    }

    #[test]
    fn shared_subcube_shares_label() {
        let img = Raster::from_vec(2, 1, vec![Rgb8::new(1, 2, 3), Rgb8::new(30, 2, 3)]).unwrap();
        for label in 0..3 {
            let (q, a) = setup(&img, vec![label], 3);
            assert_eq!(
                label_pixels(&img, &q, &a).unwrap().labels(),
                &[label, label]
            );
        }
    }

    #[test]
    fn foreign_pixels_are_reported() {
        let img = Raster::filled(2, 2, Rgb8::new(0, 0, 0));
        let (q, a) = setup(&img, vec![0], 1);
        let other = Raster::filled(2, 2, Rgb8::new(255, 0, 0));
        assert!(matches!(
            label_pixels(&other, &q, &a),
            Err(Error::Consistency(_))
        ));
        let wrong = Assignment::new(vec![0, 0], 1).unwrap();
        assert!(matches!(
            label_pixels(&img, &q, &wrong),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn uniform_render() {
        let img = Raster::filled(3, 3, Rgb8::new(98, 101, 100));
        let labels = LabelImage::new(Raster::filled(3, 3, 0), 1).unwrap();
        let model = ClusterModel {
            centroids: vec![Some([100.0; 3])],
            weights: vec![9],
        };
        let out = render_and_mask(&img, &labels, &model).unwrap();
        assert!(out
            .rendered
            .pixels()
            .iter()
            .all(|&c| c == Rgb8::new(100, 100, 100)));
        assert!(out.masks[0].pixels().iter().all(|&m| m == MASK_ON));
        assert_eq!(out.stats[0].pixels, 9);
        assert_eq!(out.stats[0].mean, Some([98.0, 101.0, 100.0]));
    }

    #[test]
    fn checkerboard_masks_are_complementary() {
        let img = Raster::from_fn(4, 4, |x, y| Rgb8::from([((x + y) % 2 * 200) as u8; 3]));
        let labels =
            LabelImage::new(Raster::from_fn(4, 4, |x, y| ((x + y) % 2) as u32), 2).unwrap();
        let model = ClusterModel {
            centroids: vec![Some([0.0; 3]), Some([200.0; 3])],
            weights: vec![8, 8],
        };
        let out = render_and_mask(&img, &labels, &model).unwrap();
        for (a, b) in out.masks[0].pixels().iter().zip(out.masks[1].pixels()) {
            assert_ne!(a, b);
        }
        assert_eq!(out.rendered, img);
    }

    #[test]
    fn rounding_half_up() {
        assert_eq!(round_channel(239.5), 240);
        assert_eq!(round_channel(15.49), 15);
        assert_eq!(round_channel(-3.0), 0);
        assert_eq!(round_channel(255.7), 255);
    }

    #[test]
    fn empty_cluster_mask_is_blank() {
        let img = Raster::filled(2, 2, Rgb8::new(5, 5, 5));
        let labels = LabelImage::new(Raster::filled(2, 2, 0), 2).unwrap();
        let model = ClusterModel {
            centroids: vec![Some([5.0; 3]), None],
            weights: vec![4, 0],
        };
        let out = render_and_mask(&img, &labels, &model).unwrap();
        assert!(out.masks[1].pixels().iter().all(|&m| m == MASK_OFF));
        assert_eq!(
            out.stats[1],
            ClusterStats {
                pixels: 0,
                mean: None
            }
        );

        let orphan = LabelImage::new(Raster::filled(2, 2, 1), 2).unwrap();
        assert!(matches!(
            render_and_mask(&img, &orphan, &model),
            Err(Error::Consistency(_))
        ));
    }

    #[test]
    fn rendering_is_idempotent_for_integral_centroids() {
        let img = Raster::from_fn(8, 8, |x, y| {
            if x < 4 {
                Rgb8::new(10, 20, 30)
            } else if y < 4 {
                Rgb8::new(200, 100, 0)
            } else {
                Rgb8::new(0, 250, 0)
            }
        });
        let (q, a) = setup(&img, vec![0, 1, 2], 3);
        let labels = label_pixels(&img, &q, &a).unwrap();
        let model = weighted_centroids(q.points(), &a).unwrap();
        let once = render_and_mask(&img, &labels, &model).unwrap().rendered;
        let labels2 = label_pixels(
            &once,
            &quantize(&build_histogram(&once).unwrap(), CubeSide::DEFAULT).unwrap(),
            &a,
        )
        .unwrap();
        let twice = render_and_mask(&once, &labels2, &model).unwrap().rendered;
        assert_eq!(once, twice);
    }

    #[test]
    fn row_parallel_labelling_matches() {
        let img = Raster::from_fn(33, 17, |x, y| Rgb8::new((x * 8) as u8, (y * 15) as u8, 77));
        let q = quantize(&build_histogram(&img).unwrap(), CubeSide::DEFAULT).unwrap();
        let a = Assignment::new((0..q.len() as u32).map(|i| i % 4).collect(), 4).unwrap();
        assert_eq!(
            label_pixels_with(&img, &q, &a, Execution::Sequential).unwrap(),
            label_pixels_with(&img, &q, &a, Execution::Parallel).unwrap()
        );
    }
}

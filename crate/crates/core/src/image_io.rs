//! PNG / binary PPM decoding and PNG encoding.

use std::io::Cursor;
use std::path::Path;

use image::{ImageFormat, ImageReader};

use crate::raster::{Raster, Rgb8, RgbRaster};

#[derive(Debug, thiserror::Error)]
pub enum ImageIoError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot decode {path}: {source}")]
    Decode {
        path: String,
        #[source]
        source: image::ImageError,
    },
    #[error("cannot encode PNG: {0}")]
    Encode(#[from] image::ImageError),
}

/// Loads an image as 8-bit RGB. Alpha is dropped and grey is replicated
/// across channels.
pub fn read_rgb(path: &Path) -> Result<RgbRaster, ImageIoError> {
    let display = path.display().to_string();
    let reader = ImageReader::open(path)
        .and_then(|r| r.with_guessed_format())
        .map_err(|source| ImageIoError::Read {
            path: display.clone(),
            source,
        })?;
    let img = reader
        .decode()
        .map_err(|source| ImageIoError::Decode {
            path: display,
            source,
        })?
        .into_rgb8();
    Ok(from_rgb_image(&img))
}

/// Decodes PNG or PPM bytes.
pub fn decode_rgb(bytes: &[u8]) -> Result<RgbRaster, ImageIoError> {
    let img = image::load_from_memory(bytes)
        .map_err(|source| ImageIoError::Decode {
            path: "<memory>".into(),
            source,
        })?
        .into_rgb8();
    Ok(from_rgb_image(&img))
}

fn from_rgb_image(img: &image::RgbImage) -> RgbRaster {
    let (w, h) = (img.width() as usize, img.height() as usize);
    let px = img.pixels().map(|p| Rgb8::from(p.0)).collect();
    Raster::from_vec(w, h, px).expect("decoder yields width·height pixels")
}

pub fn encode_png_rgb(raster: &RgbRaster) -> Result<Vec<u8>, ImageIoError> {
    let raw: Vec<u8> = raster.pixels().iter().flat_map(|c| c.channels()).collect();
    let img = image::RgbImage::from_raw(raster.width() as u32, raster.height() as u32, raw)
        .expect("buffer sized from raster");
    encode(image::DynamicImage::ImageRgb8(img))
}

pub fn encode_png_gray(raster: &Raster<u8>) -> Result<Vec<u8>, ImageIoError> {
    let img = image::GrayImage::from_raw(
        raster.width() as u32,
        raster.height() as u32,
        raster.pixels().to_vec(),
    )
    .expect("buffer sized from raster");
    encode(image::DynamicImage::ImageLuma8(img))
}

fn encode(img: image::DynamicImage) -> Result<Vec<u8>, ImageIoError> {
    let mut out = Cursor::new(Vec::new());
    img.write_to(&mut out, ImageFormat::Png)?;
    Ok(out.into_inner())
}

/// Binary PPM (P6) bytes, mostly useful for fixtures.
pub fn encode_ppm(raster: &RgbRaster) -> Vec<u8> {
    let mut out = format!("P6\n{} {}\n255\n", raster.width(), raster.height()).into_bytes();
    out.extend(raster.pixels().iter().flat_map(|c| c.channels()));
    out
}

//! Raster types: multi-channel 8-bit images and the binary masks produced by
//! thresholding a single channel.

use crate::error::{invalid, Result};

/// Dense `rows × cols × channels` intensity grid, interleaved row-major:
/// the value at `(row, col, ch)` lives at `(row * cols + col) * channels + ch`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GrayImage {
    rows: usize,
    cols: usize,
    channels: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(rows: usize, cols: usize, channels: usize, pixels: Vec<u8>) -> Result<Self> {
        if rows == 0 || cols == 0 || channels == 0 {
            return invalid(format!(
                "image dimensions must be positive, got {rows}x{cols}x{channels}"
            ));
        }
        let expected = rows * cols * channels;
        if pixels.len() != expected {
            return invalid(format!(
                "{rows}x{cols}x{channels} image needs {expected} pixels, got {}",
                pixels.len()
            ));
        }
        Ok(Self {
            rows,
            cols,
            channels,
            pixels,
        })
    }

    /// Builds an image from channel-major planes: all of channel 0 in
    /// row-major order, then channel 1, and so on.
    pub fn from_planar(rows: usize, cols: usize, channels: usize, planes: &[u8]) -> Result<Self> {
        let plane = rows * cols;
        if planes.len() != plane * channels {
            return invalid(format!(
                "{rows}x{cols}x{channels} image needs {} pixels, got {}",
                plane * channels,
                planes.len()
            ));
        }
        let mut pixels = vec![0u8; planes.len()];
        for ch in 0..channels {
            for (p, &v) in planes[ch * plane..(ch + 1) * plane].iter().enumerate() {
                pixels[p * channels + ch] = v;
            }
        }
        Self::new(rows, cols, channels, pixels)
    }

    pub fn zeros(rows: usize, cols: usize, channels: usize) -> Result<Self> {
        Self::new(rows, cols, channels, vec![0; rows * cols * channels])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    /// `(rows, cols, channels)`.
    pub fn shape(&self) -> (usize, usize, usize) {
        (self.rows, self.cols, self.channels)
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn into_pixels(self) -> Vec<u8> {
        self.pixels
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize, channel: usize) -> u8 {
        self.pixels[(row * self.cols + col) * self.channels + channel]
    }
}

/// `rows × cols` grid of booleans, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryMask {
    rows: usize,
    cols: usize,
    bits: Vec<bool>,
}

impl BinaryMask {
    pub fn new(rows: usize, cols: usize, bits: Vec<bool>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return invalid(format!(
                "mask dimensions must be positive, got {rows}x{cols}"
            ));
        }
        if bits.len() != rows * cols {
            return invalid(format!(
                "{rows}x{cols} mask needs {} bits, got {}",
                rows * cols,
                bits.len()
            ));
        }
        Ok(Self { rows, cols, bits })
    }

    /// Parses rows written as strings of `0` and `1`, e.g. `["101", "010"]`.
    pub fn from_rows<S: AsRef<str>>(rows: &[S]) -> Result<Self> {
        let cols = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        let mut bits = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return invalid(format!("row {i} has {} bits, expected {cols}", row.len()));
            }
            for c in row.chars() {
                match c {
                    '0' => bits.push(false),
                    '1' => bits.push(true),
                    other => {
                        return invalid(format!("unexpected character {other:?} in mask row {i}"))
                    }
                }
            }
        }
        Self::new(rows.len(), cols, bits)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        self.bits[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[bool] {
        &self.bits[row * self.cols..(row + 1) * self.cols]
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}

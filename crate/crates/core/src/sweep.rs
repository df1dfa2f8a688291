//! Thresholding, directional run counting, coalescing and feature assembly
//! for a single image. Everything here is a pure function.

use crate::config::{validate_threshold, SweepConfig};
use crate::error::{invalid, Result};
use crate::image::{BinaryMask, GrayImage};
use crate::layout::{Direction, FeatureLayout, FeatureVector};

/// Run counts of every line of a mask, one vector per direction family.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DirectionalCounts {
    /// One entry per row, top row first.
    pub row_counts: Vec<u32>,
    /// One entry per column, leftmost first.
    pub col_counts: Vec<u32>,
    /// Entry `k` counts the diagonal with `col - row = k - (rows - 1)`.
    pub diag_nwse_counts: Vec<u32>,
    /// Entry `k` counts the anti-diagonal with `row + col = k`.
    pub diag_nesw_counts: Vec<u32>,
}

impl DirectionalCounts {
    pub fn get(&self, direction: Direction) -> &[u32] {
        match direction {
            Direction::Rows => &self.row_counts,
            Direction::Cols => &self.col_counts,
            Direction::DiagNwse => &self.diag_nwse_counts,
            Direction::DiagNesw => &self.diag_nesw_counts,
        }
    }
}

/// Marks every pixel of `channel` whose intensity is at least `threshold`.
pub fn binarize(image: &GrayImage, channel: usize, threshold: u32) -> Result<BinaryMask> {
    if channel >= image.channels() {
        return invalid(format!(
            "channel {channel} out of range for a {}-channel image",
            image.channels()
        ));
    }
    let t = validate_threshold(threshold.into())?;
    Ok(binarize_unchecked(image, channel, t))
}

fn binarize_unchecked(image: &GrayImage, channel: usize, threshold: u8) -> BinaryMask {
    let bits = image
        .pixels()
        .iter()
        .skip(channel)
        .step_by(image.channels())
        .map(|&p| p >= threshold)
        .collect();
    BinaryMask::new(image.rows(), image.cols(), bits).expect("shape taken from a valid image")
}

/// Number of maximal blocks of consecutive `true` values.
pub fn count_runs(bits: &[bool]) -> u32 {
    count_runs_iter(bits.iter().copied())
}

pub fn count_runs_iter<I: IntoIterator<Item = bool>>(bits: I) -> u32 {
    let mut prev = false;
    let mut runs = 0;
    for b in bits {
        if b && !prev {
            runs += 1;
        }
        prev = b;
    }
    runs
}

/// Counts runs along every row, column, diagonal and anti-diagonal.
///
/// Single pass over the mask: a set pixel opens a new run in a given
/// direction exactly when its predecessor along that direction is unset or
/// outside the grid.
pub fn sweep(mask: &BinaryMask) -> DirectionalCounts {
    let (r, s) = (mask.rows(), mask.cols());
    let mut out = DirectionalCounts {
        row_counts: vec![0; r],
        col_counts: vec![0; s],
        diag_nwse_counts: vec![0; r + s - 1],
        diag_nesw_counts: vec![0; r + s - 1],
    };
    let bits = mask.bits();
    for i in 0..r {
        let row = &bits[i * s..(i + 1) * s];
        let above = (i > 0).then(|| &bits[(i - 1) * s..i * s]);
        for (j, &b) in row.iter().enumerate() {
            if !b {
                continue;
            }
            if j == 0 || !row[j - 1] {
                out.row_counts[i] += 1;
            }
            let (up, up_left, up_right) = match above {
                None => (false, false, false),
                Some(a) => (a[j], j > 0 && a[j - 1], j + 1 < s && a[j + 1]),
            };
            if !up {
                out.col_counts[j] += 1;
            }
            if !up_left {
                out.diag_nwse_counts[j + r - 1 - i] += 1;
            }
            if !up_right {
                out.diag_nesw_counts[i + j] += 1;
            }
        }
    }
    out
}

/// Sums consecutive groups of `width` counts; the last group may be short.
pub fn coalesce(counts: &[u32], width: usize) -> Result<Vec<u32>> {
    if width == 0 {
        return invalid("interval width must be at least 1");
    }
    let mut out = Vec::with_capacity(counts.len().div_ceil(width));
    coalesce_into(counts, width, &mut out);
    Ok(out)
}

fn coalesce_into(counts: &[u32], width: usize, out: &mut Vec<u32>) {
    out.extend(counts.chunks(width).map(|g| g.iter().sum::<u32>()));
}

/// Full feature vector of one image under `config`.
pub fn extract(image: &GrayImage, config: &SweepConfig) -> Result<FeatureVector> {
    let layout = FeatureLayout::new(image.rows(), image.cols(), image.channels(), config);
    let mut values = Vec::with_capacity(layout.len());
    extract_into(image, config, &mut values);
    debug_assert_eq!(values.len(), layout.len());
    Ok(FeatureVector { values, layout })
}

/// Appends the features of `image` to `out`. The config has already been
/// validated, so this cannot fail.
pub(crate) fn extract_into(image: &GrayImage, config: &SweepConfig, out: &mut Vec<u32>) {
    let w = config.interval_width();
    for &t in config.thresholds() {
        for ch in 0..image.channels() {
            let counts = sweep(&binarize_unchecked(image, ch, t));
            for d in Direction::ALL {
                coalesce_into(counts.get(d), w, out);
            }
        }
    }
}

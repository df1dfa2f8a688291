//! Test instrumentation: geometric transforms, seeded random inputs and the
//! flip-invariance checks behind `tdasweep check-invariants`.
//!
//! The transforms exist to probe the sweep, not to augment datasets.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::image::{BinaryMask, GrayImage};
use crate::sweep::{binarize, DirectionalCounts};

fn remap_mask(
    mask: &BinaryMask,
    rows: usize,
    cols: usize,
    src: impl Fn(usize, usize) -> (usize, usize),
) -> BinaryMask {
    let mut bits = Vec::with_capacity(rows * cols);
    for i in 0..rows {
        for j in 0..cols {
            let (si, sj) = src(i, j);
            bits.push(mask.get(si, sj));
        }
    }
    BinaryMask::new(rows, cols, bits).expect("same pixel count")
}

fn remap_image(
    img: &GrayImage,
    rows: usize,
    cols: usize,
    src: impl Fn(usize, usize) -> (usize, usize),
) -> GrayImage {
    let c = img.channels();
    let mut px = Vec::with_capacity(rows * cols * c);
    for i in 0..rows {
        for j in 0..cols {
            let (si, sj) = src(i, j);
            px.extend((0..c).map(|ch| img.get(si, sj, ch)));
        }
    }
    GrayImage::new(rows, cols, c, px).expect("same pixel count")
}

/// Reverses row order (upside down).
pub fn flip_vertical_mask(m: &BinaryMask) -> BinaryMask {
    let r = m.rows();
    remap_mask(m, r, m.cols(), |i, j| (r - 1 - i, j))
}

/// Reverses column order (mirror).
pub fn flip_horizontal_mask(m: &BinaryMask) -> BinaryMask {
    let s = m.cols();
    remap_mask(m, m.rows(), s, |i, j| (i, s - 1 - j))
}

pub fn transpose_mask(m: &BinaryMask) -> BinaryMask {
    remap_mask(m, m.cols(), m.rows(), |i, j| (j, i))
}

pub fn flip_vertical(img: &GrayImage) -> GrayImage {
    let r = img.rows();
    remap_image(img, r, img.cols(), |i, j| (r - 1 - i, j))
}

pub fn flip_horizontal(img: &GrayImage) -> GrayImage {
    let s = img.cols();
    remap_image(img, img.rows(), s, |i, j| (i, s - 1 - j))
}

pub fn transpose(img: &GrayImage) -> GrayImage {
    remap_image(img, img.cols(), img.rows(), |i, j| (j, i))
}

/// Quarter turn clockwise.
pub fn rotate90(img: &GrayImage) -> GrayImage {
    let r = img.rows();
    remap_image(img, img.cols(), r, |i, j| (r - 1 - j, i))
}

pub fn random_image<R: Rng>(rng: &mut R, rows: usize, cols: usize, channels: usize) -> GrayImage {
    let mut px = vec![0u8; rows * cols * channels];
    rng.fill(px.as_mut_slice());
    GrayImage::new(rows, cols, channels, px).expect("positive dimensions")
}

/// `n` uniformly random images from a fixed seed.
pub fn random_images(
    seed: u64,
    n: usize,
    rows: usize,
    cols: usize,
    channels: usize,
) -> Vec<GrayImage> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| random_image(&mut rng, rows, cols, channels))
        .collect()
}

pub fn random_mask<R: Rng>(rng: &mut R, rows: usize, cols: usize, density: f64) -> BinaryMask {
    let bits = (0..rows * cols).map(|_| rng.random_bool(density)).collect();
    BinaryMask::new(rows, cols, bits).expect("positive dimensions")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FlipProperty {
    VerticalColumnInvariance,
    VerticalRowReversal,
    VerticalDiagonalSwap,
    HorizontalRowInvariance,
    HorizontalColumnReversal,
    HorizontalDiagonalSwap,
}

impl FlipProperty {
    pub const ALL: [FlipProperty; 6] = [
        FlipProperty::VerticalColumnInvariance,
        FlipProperty::VerticalRowReversal,
        FlipProperty::VerticalDiagonalSwap,
        FlipProperty::HorizontalRowInvariance,
        FlipProperty::HorizontalColumnReversal,
        FlipProperty::HorizontalDiagonalSwap,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FlipProperty::VerticalColumnInvariance => "vertical-flip column invariance",
            FlipProperty::VerticalRowReversal => "vertical-flip row reversal",
            FlipProperty::VerticalDiagonalSwap => "vertical-flip diagonal family swap",
            FlipProperty::HorizontalRowInvariance => "horizontal-flip row invariance",
            FlipProperty::HorizontalColumnReversal => "horizontal-flip column reversal",
            FlipProperty::HorizontalDiagonalSwap => "horizontal-flip diagonal family swap",
        }
    }

    fn holds(self, orig: &DirectionalCounts, v: &DirectionalCounts, h: &DirectionalCounts) -> bool {
        match self {
            FlipProperty::VerticalColumnInvariance => v.col_counts == orig.col_counts,
            FlipProperty::VerticalRowReversal => reversed(&orig.row_counts) == v.row_counts,
            FlipProperty::VerticalDiagonalSwap => {
                same_multiset(&v.diag_nwse_counts, &orig.diag_nesw_counts)
                    && same_multiset(&v.diag_nesw_counts, &orig.diag_nwse_counts)
            }
            FlipProperty::HorizontalRowInvariance => h.row_counts == orig.row_counts,
            FlipProperty::HorizontalColumnReversal => reversed(&orig.col_counts) == h.col_counts,
            FlipProperty::HorizontalDiagonalSwap => {
                same_multiset(&h.diag_nwse_counts, &orig.diag_nesw_counts)
                    && same_multiset(&h.diag_nesw_counts, &orig.diag_nwse_counts)
            }
        }
    }
}

impl fmt::Display for FlipProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn reversed(v: &[u32]) -> Vec<u32> {
    v.iter().rev().copied().collect()
}

pub fn same_multiset(a: &[u32], b: &[u32]) -> bool {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_unstable();
    b.sort_unstable();
    a == b
}

/// Properties violated by `sweep_fn` on this mask and its two flips.
pub fn failed_properties<F>(mask: &BinaryMask, sweep_fn: F) -> Vec<FlipProperty>
where
    F: Fn(&BinaryMask) -> DirectionalCounts,
{
    let orig = sweep_fn(mask);
    let v = sweep_fn(&flip_vertical_mask(mask));
    let h = sweep_fn(&flip_horizontal_mask(mask));
    FlipProperty::ALL
        .into_iter()
        .filter(|p| !p.holds(&orig, &v, &h))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub image: usize,
    pub threshold: u8,
    pub channel: usize,
    pub property: FlipProperty,
}

#[derive(Debug, Clone, Default)]
pub struct InvariantReport {
    pub images_checked: usize,
    pub violations: Vec<Violation>,
}

impl InvariantReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// First violation of each property, keyed by property.
    pub fn first_failures(&self) -> BTreeMap<FlipProperty, &Violation> {
        let mut out = BTreeMap::new();
        for v in &self.violations {
            out.entry(v.property).or_insert(v);
        }
        out
    }
}

/// Binarizes every image at every threshold and channel and checks the six
/// flip properties of `sweep_fn` on each mask.
pub fn check_flip_invariants<F>(
    images: &[GrayImage],
    thresholds: &[u8],
    sweep_fn: F,
) -> InvariantReport
where
    F: Fn(&BinaryMask) -> DirectionalCounts,
{
    let mut report = InvariantReport {
        images_checked: images.len(),
        violations: Vec::new(),
    };
    for (idx, img) in images.iter().enumerate() {
        for &t in thresholds {
            for ch in 0..img.channels() {
                let mask = binarize(img, ch, t.into()).expect("threshold and channel are in range");
                for property in failed_properties(&mask, &sweep_fn) {
                    report.violations.push(Violation {
                        image: idx,
                        threshold: t,
                        channel: ch,
                        property,
                    });
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::sweep;

    #[test]
    fn transforms_compose() {
        let img = random_images(1, 1, 3, 5, 2).pop().unwrap();
        assert_eq!(flip_vertical(&flip_vertical(&img)), img);
        assert_eq!(flip_horizontal(&flip_horizontal(&img)), img);
        assert_eq!(transpose(&transpose(&img)), img);
        let r4 = rotate90(&rotate90(&rotate90(&rotate90(&img))));
        assert_eq!(r4, img);
        // 180 degrees = both flips
        assert_eq!(
            rotate90(&rotate90(&img)),
            flip_vertical(&flip_horizontal(&img))
        );
    }

    #[test]
    fn correct_sweep_passes() {
        let images = random_images(5, 10, 7, 4, 3);
        let report = check_flip_invariants(&images, &[64, 128, 200], sweep);
        assert!(report.passed());
        assert_eq!(report.images_checked, 10);
    }

    #[test]
    fn corrupted_sweep_is_caught() {
        // Column counts that depend on which row is on top.
        let broken = |m: &BinaryMask| {
            let mut c = sweep(m);
            if m.get(0, 0) {
                c.col_counts[0] += 1;
            }
            c
        };
        let mut images = random_images(9, 3, 4, 4, 1);
        images[1] = GrayImage::new(4, 4, 1, {
            let mut px = vec![0; 16];
            px[0] = 255;
            px
        })
        .unwrap();
        let report = check_flip_invariants(&images, &[100], broken);
        assert!(!report.passed());
        let first = report.first_failures();
        assert!(first.contains_key(&FlipProperty::VerticalColumnInvariance));
        assert!(report.violations.iter().any(|v| v.image == 1));
    }
}

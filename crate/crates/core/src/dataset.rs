use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Result};
use crate::image::GrayImage;
use crate::layout::FeatureLayout;

/// Ordered images of one shape, optionally labelled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    images: Vec<GrayImage>,
    labels: Option<Vec<u32>>,
}

impl Dataset {
    pub fn new(images: Vec<GrayImage>, labels: Option<Vec<u32>>) -> Result<Self> {
        if let Some(first) = images.first() {
            if let Some((i, img)) = images
                .iter()
                .enumerate()
                .find(|(_, img)| img.shape() != first.shape())
            {
                return invalid(format!(
                    "image {i} has shape {:?}, expected {:?}",
                    img.shape(),
                    first.shape()
                ));
            }
        }
        if let Some(l) = &labels {
            if l.len() != images.len() {
                return invalid(format!("{} labels for {} images", l.len(), images.len()));
            }
        }
        Ok(Self { images, labels })
    }

    pub fn images(&self) -> &[GrayImage] {
        &self.images
    }

    pub fn labels(&self) -> Option<&[u32]> {
        self.labels.as_deref()
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// `(rows, cols, channels)` shared by every image, `None` when empty.
    pub fn shape(&self) -> Option<(usize, usize, usize)> {
        self.images.first().map(GrayImage::shape)
    }

    /// Images (and labels) at `indices`, in that order.
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        if let Some(&bad) = indices.iter().find(|&&i| i >= self.len()) {
            return invalid(format!(
                "index {bad} out of range for {} images",
                self.len()
            ));
        }
        let images = indices.iter().map(|&i| self.images[i].clone()).collect();
        let labels = self
            .labels
            .as_ref()
            .map(|l| indices.iter().map(|&i| l[i]).collect());
        Ok(Self { images, labels })
    }

    /// Disjoint train/test subsets drawn by a seeded shuffle.
    pub fn split_seeded(&self, train: usize, test: usize, seed: u64) -> Result<(Self, Self)> {
        if train + test > self.len() {
            return invalid(format!(
                "cannot draw {train} train + {test} test images from {}",
                self.len()
            ));
        }
        let order = shuffled_indices(self.len(), seed);
        Ok((
            self.select(&order[..train])?,
            self.select(&order[train..train + test])?,
        ))
    }

    /// A seeded random subset of `n` images.
    pub fn sample_seeded(&self, n: usize, seed: u64) -> Result<Self> {
        Ok(self.split_seeded(n, 0, seed)?.0)
    }
}

pub(crate) fn shuffled_indices(n: usize, seed: u64) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    idx
}

/// Dense row-major `n_rows × n_cols` matrix of integer features.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureMatrix {
    n_rows: usize,
    n_cols: usize,
    values: Vec<u32>,
    labels: Option<Vec<u32>>,
    layout: Option<FeatureLayout>,
}

impl FeatureMatrix {
    pub fn new(
        n_rows: usize,
        n_cols: usize,
        values: Vec<u32>,
        labels: Option<Vec<u32>>,
    ) -> Result<Self> {
        if values.len() != n_rows * n_cols {
            return invalid(format!(
                "{n_rows}x{n_cols} matrix needs {} values, got {}",
                n_rows * n_cols,
                values.len()
            ));
        }
        if let Some(l) = &labels {
            if l.len() != n_rows {
                return invalid(format!("{} labels for {n_rows} rows", l.len()));
            }
        }
        Ok(Self {
            n_rows,
            n_cols,
            values,
            labels,
            layout: None,
        })
    }

    /// Attaches sweep layout metadata; its length must match `n_cols`.
    pub fn with_layout(mut self, layout: FeatureLayout) -> Result<Self> {
        if layout.len() != self.n_cols {
            return invalid(format!(
                "layout describes {} features but matrix has {} columns",
                layout.len(),
                self.n_cols
            ));
        }
        self.layout = Some(layout);
        Ok(self)
    }

    /// Raw pixels as features, one row per image, in interleaved order.
    pub fn from_pixels(dataset: &Dataset) -> Result<Self> {
        let Some((r, s, c)) = dataset.shape() else {
            return invalid("dataset is empty");
        };
        let values = dataset
            .images()
            .iter()
            .flat_map(|img| img.pixels().iter().map(|&p| u32::from(p)))
            .collect();
        Self::new(
            dataset.len(),
            r * s * c,
            values,
            dataset.labels().map(<[u32]>::to_vec),
        )
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.values[i * self.n_cols..(i + 1) * self.n_cols]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[u32]> + '_ {
        // chunks_exact on a zero-width matrix would panic
        (0..self.n_rows).map(move |i| self.row(i))
    }

    pub fn labels(&self) -> Option<&[u32]> {
        self.labels.as_deref()
    }

    pub fn layout(&self) -> Option<&FeatureLayout> {
        self.layout.as_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn img(v: u8) -> GrayImage {
        GrayImage::new(1, 2, 1, vec![v, v]).unwrap()
    }

    #[test]
    fn dataset_invariants() {
        let odd = GrayImage::zeros(2, 1, 1).unwrap();
        assert!(Dataset::new(vec![img(0), odd], None).is_err());
        assert!(Dataset::new(vec![img(0)], Some(vec![1, 2])).is_err());
        assert!(Dataset::new(vec![], None).unwrap().is_empty());
    }

    #[test]
    fn split_is_disjoint_and_seeded() {
        let images: Vec<_> = (0..20).map(img).collect();
        let labels = (0..20).collect();
        let ds = Dataset::new(images, Some(labels)).unwrap();
        let (a, b) = ds.split_seeded(12, 8, 7).unwrap();
        let (a2, b2) = ds.split_seeded(12, 8, 7).unwrap();
        assert_eq!((&a, &b), (&a2, &b2));
        let mut all: Vec<u32> = a
            .labels()
            .unwrap()
            .iter()
            .chain(b.labels().unwrap())
            .copied()
            .collect();
        all.sort();
        assert_eq!(all, (0..20).collect::<Vec<_>>());
        // labels stay aligned with their images
        for (im, &l) in a.images().iter().zip(a.labels().unwrap()) {
            assert_eq!(im.pixels()[0] as u32, l);
        }
        assert!(ds.split_seeded(15, 6, 7).is_err());
    }

    #[test]
    fn matrix_shape_checks() {
        assert!(FeatureMatrix::new(2, 2, vec![0; 3], None).is_err());
        assert!(FeatureMatrix::new(2, 2, vec![0; 4], Some(vec![1])).is_err());
        let m = FeatureMatrix::new(2, 2, vec![1, 2, 3, 4], None).unwrap();
        assert_eq!(m.row(1), &[3, 4]);
        assert_eq!(m.rows().count(), 2);
    }
}

//! Exact k-nearest-neighbour classifier on integer features.
//!
//! Used to check that sweep features keep the class signal of the raw
//! pixels. Distances are squared Euclidean with no scaling. Ties between
//! equidistant training rows go to the lower row index; ties in the vote go
//! to whichever tied class owns the nearest neighbour.

use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::config::SweepConfig;
use crate::dataset::{Dataset, FeatureMatrix};
use crate::error::{invalid, Result};
use crate::pipeline::batch_extract;

pub const DEFAULT_K: usize = 5;

#[derive(Debug, Clone)]
pub struct KnnModel {
    train: FeatureMatrix,
    k: usize,
}

pub fn fit(train: FeatureMatrix, k: usize) -> Result<KnnModel> {
    KnnModel::fit(train, k)
}

#[inline]
fn squared_distance(a: &[u32], b: &[u32]) -> u64 {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| {
            let d = i64::from(x) - i64::from(y);
            (d * d) as u64
        })
        .sum()
}

impl KnnModel {
    pub fn fit(train: FeatureMatrix, k: usize) -> Result<Self> {
        if train.labels().is_none() {
            return invalid("training matrix has no labels");
        }
        if train.n_rows() == 0 {
            return invalid("training matrix is empty");
        }
        if k == 0 || k > train.n_rows() {
            return invalid(format!("k must be in 1..={}, got {k}", train.n_rows()));
        }
        Ok(Self { train, k })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n_cols(&self) -> usize {
        self.train.n_cols()
    }

    /// The `k` nearest training rows as `(squared distance, row index)`,
    /// nearest first.
    pub fn neighbours(&self, query: &[u32]) -> Result<Vec<(u64, usize)>> {
        if query.len() != self.n_cols() {
            return invalid(format!(
                "query has {} features, model expects {}",
                query.len(),
                self.n_cols()
            ));
        }
        let mut dists: Vec<(u64, usize)> = self
            .train
            .rows()
            .enumerate()
            .map(|(i, row)| (squared_distance(row, query), i))
            .collect();
        if self.k < dists.len() {
            dists.select_nth_unstable(self.k - 1);
            dists.truncate(self.k);
        }
        dists.sort_unstable();
        Ok(dists)
    }

    pub fn predict(&self, query: &[u32]) -> Result<u32> {
        let neighbours = self.neighbours(query)?;
        let labels = self.train.labels().expect("checked in fit");
        let mut votes: Vec<(u32, usize)> = Vec::new();
        for &(_, i) in &neighbours {
            let label = labels[i];
            match votes.iter_mut().find(|(l, _)| *l == label) {
                Some((_, n)) => *n += 1,
                None => votes.push((label, 1)),
            }
        }
        // `votes` is in order of first appearance, i.e. by nearest member,
        // so the first class reaching the top count wins ties.
        let top = votes.iter().map(|&(_, n)| n).max().unwrap_or(0);
        Ok(votes
            .iter()
            .find(|&&(_, n)| n == top)
            .map(|&(l, _)| l)
            .expect("k >= 1"))
    }

    /// Fraction of `test` rows whose prediction matches their label.
    pub fn evaluate(&self, test: &FeatureMatrix) -> Result<f64> {
        let Some(truth) = test.labels() else {
            return invalid("test matrix has no labels");
        };
        if test.n_cols() != self.n_cols() {
            return invalid(format!(
                "test matrix has {} features, model expects {}",
                test.n_cols(),
                self.n_cols()
            ));
        }
        if test.n_rows() == 0 {
            return invalid("test matrix is empty");
        }
        let correct = (0..test.n_rows())
            .into_par_iter()
            .map(|i| {
                self.predict(test.row(i))
                    .map(|p| usize::from(p == truth[i]))
            })
            .sum::<Result<usize>>()?;
        Ok(correct as f64 / test.n_rows() as f64)
    }
}

/// Raw-pixel versus sweep-feature kNN on the same split.
#[derive(Debug, Clone, PartialEq)]
pub struct RetentionReport {
    pub raw_dims: usize,
    pub sweep_dims: usize,
    pub raw_accuracy: f64,
    pub sweep_accuracy: f64,
    pub raw_eval_time: Duration,
    pub sweep_eval_time: Duration,
    /// Sweep extraction of train and test together.
    pub extract_time: Duration,
}

pub fn compare_raw_and_sweep(
    train: &Dataset,
    test: &Dataset,
    config: &SweepConfig,
    k: usize,
) -> Result<RetentionReport> {
    if train.shape() != test.shape() {
        return invalid(format!(
            "train images are {:?} but test images are {:?}",
            train.shape(),
            test.shape()
        ));
    }
    let raw_train = FeatureMatrix::from_pixels(train)?;
    let raw_test = FeatureMatrix::from_pixels(test)?;
    let raw_model = KnnModel::fit(raw_train, k)?;
    let start = Instant::now();
    let raw_accuracy = raw_model.evaluate(&raw_test)?;
    let raw_eval_time = start.elapsed();

    let (sweep_train, a) = batch_extract(train, config)?;
    let (sweep_test, b) = batch_extract(test, config)?;
    let sweep_dims = sweep_train.n_cols();
    let sweep_model = KnnModel::fit(sweep_train, k)?;
    let start = Instant::now();
    let sweep_accuracy = sweep_model.evaluate(&sweep_test)?;
    let sweep_eval_time = start.elapsed();

    Ok(RetentionReport {
        raw_dims: raw_model.n_cols(),
        sweep_dims,
        raw_accuracy,
        sweep_accuracy,
        raw_eval_time,
        sweep_eval_time,
        extract_time: a.wall_time + b.wall_time,
    })
}

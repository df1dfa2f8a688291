//! Batch feature extraction over a dataset, sequential or on a fixed-size
//! worker pool.
//!
//! Each image is one task. Workers write into disjoint, pre-assigned row
//! slots of the output buffer, so the result is identical for every worker
//! count and scheduling order.

use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::config::SweepConfig;
use crate::dataset::{Dataset, FeatureMatrix};
use crate::error::{invalid, Error, Result};
use crate::image::GrayImage;
use crate::layout::FeatureLayout;
use crate::sweep::extract_into;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BatchReport {
    pub n_images: usize,
    pub n_features: usize,
    /// Wall-clock time of the extraction phase alone.
    pub wall_time: Duration,
    pub workers_used: usize,
}

impl BatchReport {
    pub fn images_per_second(&self) -> f64 {
        self.n_images as f64 / self.wall_time.as_secs_f64().max(f64::MIN_POSITIVE)
    }
}

pub fn batch_extract(
    dataset: &Dataset,
    config: &SweepConfig,
) -> Result<(FeatureMatrix, BatchReport)> {
    let (values, layout, report) = extract_images(dataset.images(), config)?;
    let matrix = FeatureMatrix::new(
        report.n_images,
        report.n_features,
        values,
        dataset.labels().map(<[u32]>::to_vec),
    )?
    .with_layout(layout)?;
    Ok((matrix, report))
}

/// Extracts every image into one row-major buffer of `n · layout.len()`
/// values.
pub fn extract_images(
    images: &[GrayImage],
    config: &SweepConfig,
) -> Result<(Vec<u32>, FeatureLayout, BatchReport)> {
    let Some(first) = images.first() else {
        return invalid("dataset is empty");
    };
    let (r, s, c) = first.shape();
    if let Some(i) = images.iter().position(|img| img.shape() != (r, s, c)) {
        return invalid(format!(
            "image {i} has shape {:?}, expected {:?}",
            images[i].shape(),
            (r, s, c)
        ));
    }
    let layout = FeatureLayout::new(r, s, c, config);
    let width = layout.len();
    let mut values = vec![0u32; images.len() * width];
    let workers = config.workers().unwrap_or(1).min(images.len());

    let wall_time = if workers <= 1 {
        let start = Instant::now();
        let mut scratch = Vec::with_capacity(width);
        for (img, slot) in images.iter().zip(values.chunks_exact_mut(width)) {
            scratch.clear();
            extract_into(img, config, &mut scratch);
            slot.copy_from_slice(&scratch);
        }
        start.elapsed()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .thread_name(|i| format!("tdasweep-{i}"))
            .build()
            .map_err(|e| Error::InvalidArgument(format!("cannot start {workers} workers: {e}")))?;
        let start = Instant::now();
        pool.install(|| {
            values
                .par_chunks_exact_mut(width)
                .zip(images.par_iter())
                .for_each_init(
                    || Vec::with_capacity(width),
                    |scratch, (slot, img)| {
                        scratch.clear();
                        extract_into(img, config, scratch);
                        slot.copy_from_slice(scratch);
                    },
                )
        });
        start.elapsed()
    };

    let report = BatchReport {
        n_images: images.len(),
        n_features: width,
        wall_time,
        workers_used: workers.max(1),
    };
    Ok((values, layout, report))
}

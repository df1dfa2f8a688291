//! Threshold-sweep feature extraction for images.
//!
//! An image is binarized at one or more intensity thresholds. For each
//! binary mask the number of runs of set pixels is counted along every row,
//! column, diagonal and anti-diagonal; neighbouring counts are summed in
//! groups of `interval_width`, and the blocks are concatenated into a short
//! integer feature vector. A 28×28 digit at one threshold with width 2
//! becomes 84 features instead of 784 pixels.
//!
//! ```
//! use tdasweep::{extract, GrayImage, SweepConfig};
//!
//! let image = GrayImage::zeros(28, 28, 1)?;
//! let config = SweepConfig::new([100u8], 2)?;
//! assert_eq!(extract(&image, &config)?.len(), 84);
//! # Ok::<(), tdasweep::Error>(())
//! ```

pub mod config;
pub mod dataset;
pub mod error;
pub mod image;
pub mod io;
pub mod knn;
pub mod layout;
pub mod pipeline;
pub mod sweep;
pub mod testkit;

pub use config::SweepConfig;
pub use dataset::{Dataset, FeatureMatrix};
pub use error::{Error, Result};
pub use image::{BinaryMask, GrayImage};
pub use knn::KnnModel;
pub use layout::{Direction, FeatureLayout, FeatureVector};
pub use pipeline::{batch_extract, BatchReport};
pub use sweep::{binarize, coalesce, count_runs, extract, sweep, DirectionalCounts};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

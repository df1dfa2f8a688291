use std::num::NonZeroUsize;

use crate::error::{invalid, Result};

/// Hyperparameters of a sweep: which thresholds to binarize at, how many
/// neighbouring line counts to sum together, and how many worker threads a
/// batch run may use (`None` runs sequentially).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepConfig {
    thresholds: Vec<u8>,
    interval_width: usize,
    workers: Option<NonZeroUsize>,
}

impl SweepConfig {
    /// Thresholds must be non-empty, strictly increasing and in `1..=255`;
    /// `interval_width` must be at least 1.
    pub fn new<I>(thresholds: I, interval_width: usize) -> Result<Self>
    where
        I: IntoIterator,
        I::Item: Into<i64>,
    {
        let raw: Vec<i64> = thresholds.into_iter().map(Into::into).collect();
        if raw.is_empty() {
            return invalid("at least one threshold is required");
        }
        let mut parsed = Vec::with_capacity(raw.len());
        for &t in &raw {
            parsed.push(validate_threshold(t)?);
        }
        if let Some(w) = parsed.windows(2).find(|w| w[0] >= w[1]) {
            return invalid(format!(
                "thresholds must be strictly increasing, got {} before {}",
                w[0], w[1]
            ));
        }
        if interval_width == 0 {
            return invalid("interval width must be at least 1");
        }
        Ok(Self {
            thresholds: parsed,
            interval_width,
            workers: None,
        })
    }

    /// `None` (or `Some(0)` rejected) selects the sequential path.
    pub fn with_workers(mut self, workers: Option<usize>) -> Result<Self> {
        self.workers =
            match workers {
                None => None,
                Some(n) => Some(NonZeroUsize::new(n).ok_or_else(|| {
                    crate::Error::InvalidArgument("workers must be positive".into())
                })?),
            };
        Ok(self)
    }

    pub fn thresholds(&self) -> &[u8] {
        &self.thresholds
    }

    pub fn interval_width(&self) -> usize {
        self.interval_width
    }

    pub fn workers(&self) -> Option<usize> {
        self.workers.map(NonZeroUsize::get)
    }
}

pub(crate) fn validate_threshold(t: i64) -> Result<u8> {
    if !(1..=255).contains(&t) {
        return invalid(format!("threshold {t} outside 1..=255"));
    }
    Ok(t as u8)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(SweepConfig::new([100u8], 2).is_ok());
        assert!(SweepConfig::new([100u8, 175], 2).is_ok());
        assert!(SweepConfig::new(Vec::<u8>::new(), 1).is_err());
        assert!(SweepConfig::new([175u8, 100], 2).is_err());
        assert!(SweepConfig::new([100u8, 100], 2).is_err());
        assert!(SweepConfig::new([0u8], 2).is_err());
        assert!(SweepConfig::new([256u16], 2).is_err());
        assert!(SweepConfig::new([-3i32], 2).is_err());
        assert!(SweepConfig::new([100u8], 0).is_err());
    }

    #[test]
    fn workers() {
        let cfg = SweepConfig::new([100u8], 1).unwrap();
        assert_eq!(cfg.workers(), None);
        assert_eq!(
            cfg.clone().with_workers(Some(4)).unwrap().workers(),
            Some(4)
        );
        assert!(cfg.with_workers(Some(0)).is_err());
    }
}

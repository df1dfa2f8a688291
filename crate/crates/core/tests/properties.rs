//! Property tests for the sweep core and batch pipeline.

mod common;

use proptest::prelude::*;
use tdasweep::testkit::{flip_horizontal_mask, flip_vertical_mask, same_multiset, transpose_mask};
use tdasweep::{batch_extract, coalesce, count_runs, extract, sweep, Dataset};

use common::strategies::{batch, config, image, mask};
use common::{expected_len, label_components, sweep_oracle};

fn reversed(v: &[u32]) -> Vec<u32> {
    v.iter().rev().copied().collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn run_count_matches_labelling(v in prop::collection::vec(any::<bool>(), 0..=64)) {
        prop_assert_eq!(count_runs(&v), label_components(&v));
    }

    #[test]
    fn run_count_upper_bound(v in prop::collection::vec(any::<bool>(), 0..=64)) {
        prop_assert!(count_runs(&v) as usize <= v.len().div_ceil(2));
    }

    #[test]
    fn sweep_matches_line_oracle(m in mask(24)) {
        prop_assert_eq!(sweep(&m), sweep_oracle(&m));
    }

    #[test]
    fn sweep_counts_bounded_by_line_length(m in mask(24)) {
        let c = sweep(&m);
        let (r, s) = (m.rows(), m.cols());
        prop_assert!(c.row_counts.iter().all(|&x| x as usize <= s.div_ceil(2)));
        prop_assert!(c.col_counts.iter().all(|&x| x as usize <= r.div_ceil(2)));
        for (k, &x) in c.diag_nwse_counts.iter().enumerate() {
            // diagonal col-row = k-(r-1)
            let d = k as isize - (r as isize - 1);
            let len = (0..r as isize).filter(|&i| (0..s as isize).contains(&(i + d))).count();
            prop_assert!(x as usize <= len.div_ceil(2));
        }
        for (k, &x) in c.diag_nesw_counts.iter().enumerate() {
            let len = (0..r).filter(|&i| k >= i && k - i < s).count();
            prop_assert!(x as usize <= len.div_ceil(2));
        }
    }

    #[test]
    fn coalesce_conserves_sum(v in prop::collection::vec(0u32..200, 0..100), w in 1usize..12) {
        let out = coalesce(&v, w).unwrap();
        prop_assert_eq!(out.len(), v.len().div_ceil(w));
        prop_assert_eq!(out.iter().sum::<u32>(), v.iter().sum::<u32>());
    }

    #[test]
    fn coalesce_width_one_is_identity(v in prop::collection::vec(0u32..200, 0..100)) {
        prop_assert_eq!(coalesce(&v, 1).unwrap(), v);
    }

    #[test]
    fn length_law(img in image(20, 3), cfg in config()) {
        let (r, s, c) = img.shape();
        let fv = extract(&img, &cfg).unwrap();
        prop_assert_eq!(fv.len(), expected_len(r, s, c, cfg.thresholds().len(), cfg.interval_width()));
        prop_assert_eq!(fv.len(), fv.layout.len());
    }

    #[test]
    fn transpose_symmetry(m in mask(20)) {
        let a = sweep(&m);
        let b = sweep(&transpose_mask(&m));
        prop_assert_eq!(&b.row_counts, &a.col_counts);
        prop_assert_eq!(&b.col_counts, &a.row_counts);
        prop_assert_eq!(b.diag_nwse_counts, reversed(&a.diag_nwse_counts));
        prop_assert_eq!(b.diag_nesw_counts, a.diag_nesw_counts);
    }

    #[test]
    fn vertical_flip(m in mask(20)) {
        let a = sweep(&m);
        let v = sweep(&flip_vertical_mask(&m));
        prop_assert_eq!(&v.col_counts, &a.col_counts);
        prop_assert_eq!(v.row_counts, reversed(&a.row_counts));
        prop_assert!(same_multiset(&v.diag_nwse_counts, &a.diag_nesw_counts));
        // stronger: the index maps line for line
        prop_assert_eq!(&v.diag_nwse_counts, &a.diag_nesw_counts);
        prop_assert_eq!(&v.diag_nesw_counts, &a.diag_nwse_counts);
    }

    #[test]
    fn horizontal_flip(m in mask(20)) {
        let a = sweep(&m);
        let h = sweep(&flip_horizontal_mask(&m));
        prop_assert_eq!(&h.row_counts, &a.row_counts);
        prop_assert_eq!(h.col_counts, reversed(&a.col_counts));
        prop_assert!(same_multiset(&h.diag_nwse_counts, &a.diag_nesw_counts));
        prop_assert!(same_multiset(&h.diag_nesw_counts, &a.diag_nwse_counts));
        prop_assert_eq!(h.diag_nwse_counts, reversed(&a.diag_nesw_counts));
    }

    #[test]
    fn extract_is_pure(img in image(16, 3), cfg in config()) {
        prop_assert_eq!(extract(&img, &cfg).unwrap(), extract(&img, &cfg).unwrap());
    }

    #[test]
    fn batch_independent_of_workers(
        imgs in batch(11),
        cfg in config(),
        workers in 2usize..9,
    ) {
        let ds = Dataset::new(imgs, None).unwrap();
        let (seq, _) = batch_extract(&ds, &cfg).unwrap();
        let par_cfg = cfg.clone().with_workers(Some(workers)).unwrap();
        let (par, report) = batch_extract(&ds, &par_cfg).unwrap();
        prop_assert_eq!(report.workers_used, workers.min(ds.len()));
        prop_assert_eq!(&seq, &par);
        for (i, img) in ds.images().iter().enumerate() {
            let fresh = extract(img, &cfg).unwrap();
            prop_assert_eq!(par.row(i), fresh.values.as_slice());
        }
    }
}

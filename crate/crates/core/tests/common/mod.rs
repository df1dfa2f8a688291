//! Independent oracles shared by the integration tests. None of these call
//! into the sweep implementation.

#![allow(dead_code)]

use tdasweep::{BinaryMask, DirectionalCounts};

/// Components of a 1-D binary vector by explicit labelling: every set cell
/// takes its left neighbour's label or opens a new one.
pub fn label_components(bits: &[bool]) -> u32 {
    let mut labels = vec![0u32; bits.len()];
    let mut next = 0;
    for i in 0..bits.len() {
        if !bits[i] {
            continue;
        }
        if i > 0 && bits[i - 1] {
            labels[i] = labels[i - 1];
        } else {
            next += 1;
            labels[i] = next;
        }
    }
    let mut seen: Vec<u32> = labels.into_iter().filter(|&l| l > 0).collect();
    seen.dedup();
    seen.len() as u32
}

/// Collects each line of the mask as a vector and labels it.
pub fn sweep_oracle(mask: &BinaryMask) -> DirectionalCounts {
    let (r, s) = (mask.rows() as isize, mask.cols() as isize);
    let line = |cells: &mut dyn Iterator<Item = (isize, isize)>| {
        let v: Vec<bool> = cells
            .filter(|&(i, j)| (0..r).contains(&i) && (0..s).contains(&j))
            .map(|(i, j)| mask.get(i as usize, j as usize))
            .collect();
        label_components(&v)
    };
    DirectionalCounts {
        row_counts: (0..r)
            .map(|i| line(&mut (0..s).map(move |j| (i, j))))
            .collect(),
        col_counts: (0..s)
            .map(|j| line(&mut (0..r).map(move |i| (i, j))))
            .collect(),
        diag_nwse_counts: (-(r - 1)..s)
            .map(|d| line(&mut (0..r).map(move |i| (i, i + d))))
            .collect(),
        diag_nesw_counts: (0..r + s - 1)
            .map(|d| line(&mut (0..r).map(move |i| (i, d - i))))
            .collect(),
    }
}

/// `|T| · c · (⌈r/w⌉ + ⌈s/w⌉ + 2⌈(r+s−1)/w⌉)` written out longhand.
pub fn expected_len(r: usize, s: usize, c: usize, n_thresholds: usize, w: usize) -> usize {
    let ceil = |a: usize| a.div_ceil(w);
    n_thresholds * c * (ceil(r) + ceil(s) + 2 * ceil(r + s - 1))
}

/// Brute-force kNN: sort every training row by (distance, index), take the
/// first k, count votes, break vote ties by nearest member.
pub fn knn_oracle(train: &[Vec<u32>], labels: &[u32], k: usize, query: &[u32]) -> u32 {
    let mut all: Vec<(u64, usize)> = train
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let d: u64 = row
                .iter()
                .zip(query)
                .map(|(&a, &b)| (a as i64 - b as i64).pow(2) as u64)
                .sum();
            (d, i)
        })
        .collect();
    all.sort();
    let nearest = &all[..k];
    let mut best: Option<(usize, usize, u32)> = None; // (votes, first position, label)
    for (pos, &(_, i)) in nearest.iter().enumerate() {
        let label = labels[i];
        let votes = nearest.iter().filter(|&&(_, j)| labels[j] == label).count();
        let first = nearest
            .iter()
            .position(|&(_, j)| labels[j] == label)
            .unwrap();
        debug_assert!(first <= pos);
        let better = match best {
            None => true,
            Some((bv, bf, _)) => votes > bv || (votes == bv && first < bf),
        };
        if better {
            best = Some((votes, first, label));
        }
    }
    best.unwrap().2
}

pub mod strategies {
    use proptest::prelude::*;
    use tdasweep::{BinaryMask, GrayImage, SweepConfig};

    pub fn mask(max_side: usize) -> impl Strategy<Value = BinaryMask> {
        (1..=max_side, 1..=max_side)
            .prop_flat_map(|(r, s)| {
                (
                    Just(r),
                    Just(s),
                    prop::collection::vec(any::<bool>(), r * s),
                )
            })
            .prop_map(|(r, s, bits)| BinaryMask::new(r, s, bits).unwrap())
    }

    pub fn image(max_side: usize, max_channels: usize) -> impl Strategy<Value = GrayImage> {
        (1..=max_side, 1..=max_side, 1..=max_channels)
            .prop_flat_map(|(r, s, c)| {
                (
                    Just((r, s, c)),
                    prop::collection::vec(any::<u8>(), r * s * c),
                )
            })
            .prop_map(|((r, s, c), px)| GrayImage::new(r, s, c, px).unwrap())
    }

    /// Same-shape single-channel batches of 1..20 images.
    pub fn batch(max_side: usize) -> impl Strategy<Value = Vec<GrayImage>> {
        (1..=max_side, 1..=max_side).prop_flat_map(|(r, s)| {
            prop::collection::vec(prop::collection::vec(any::<u8>(), r * s), 1..20).prop_map(
                move |px| {
                    px.into_iter()
                        .map(|p| GrayImage::new(r, s, 1, p).unwrap())
                        .collect::<Vec<_>>()
                },
            )
        })
    }

    pub fn config() -> impl Strategy<Value = SweepConfig> {
        (prop::collection::btree_set(1u8..=255, 1..4), 1usize..6)
            .prop_map(|(t, w)| SweepConfig::new(t, w).unwrap())
    }
}

//! Block structure of a feature vector.
//!
//! Features are laid out threshold-major, then channel, then the four
//! direction blocks in [`Direction::ALL`] order. Each block holds the
//! coalesced run counts of one direction family.

use std::fmt;

use crate::config::SweepConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Horizontal lines, top row first.
    Rows,
    /// Vertical lines, leftmost column first.
    Cols,
    /// NW→SE diagonals, indexed by `col - row` ascending.
    DiagNwse,
    /// NE→SW anti-diagonals, indexed by `row + col` ascending.
    DiagNesw,
}

impl Direction {
    pub const ALL: [Direction; 4] = [
        Direction::Rows,
        Direction::Cols,
        Direction::DiagNwse,
        Direction::DiagNesw,
    ];

    /// Number of lines of this family in a `rows × cols` grid.
    pub fn line_count(self, rows: usize, cols: usize) -> usize {
        match self {
            Direction::Rows => rows,
            Direction::Cols => cols,
            Direction::DiagNwse | Direction::DiagNesw => rows + cols - 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Direction::Rows => "rows",
            Direction::Cols => "cols",
            Direction::DiagNwse => "diag_nwse",
            Direction::DiagNesw => "diag_nesw",
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One contiguous block of the feature vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Block {
    pub threshold: u8,
    pub channel: usize,
    pub direction: Direction,
    pub offset: usize,
    pub len: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureLayout {
    rows: usize,
    cols: usize,
    channels: usize,
    thresholds: Vec<u8>,
    interval_width: usize,
}

impl FeatureLayout {
    pub fn new(rows: usize, cols: usize, channels: usize, config: &SweepConfig) -> Self {
        Self {
            rows,
            cols,
            channels,
            thresholds: config.thresholds().to_vec(),
            interval_width: config.interval_width(),
        }
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (self.rows, self.cols, self.channels)
    }

    pub fn thresholds(&self) -> &[u8] {
        &self.thresholds
    }

    pub fn interval_width(&self) -> usize {
        self.interval_width
    }

    /// Coalesced length of one direction block.
    pub fn block_len(&self, direction: Direction) -> usize {
        direction
            .line_count(self.rows, self.cols)
            .div_ceil(self.interval_width)
    }

    /// Length of the four blocks produced for one (threshold, channel) pair.
    pub fn group_len(&self) -> usize {
        Direction::ALL.iter().map(|&d| self.block_len(d)).sum()
    }

    /// `|T| · c · (⌈r/w⌉ + ⌈s/w⌉ + 2⌈(r+s−1)/w⌉)`.
    pub fn len(&self) -> usize {
        self.thresholds.len() * self.channels * self.group_len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn blocks(&self) -> impl Iterator<Item = Block> + '_ {
        let mut offset = 0;
        self.thresholds
            .iter()
            .flat_map(move |&threshold| {
                (0..self.channels).flat_map(move |channel| {
                    Direction::ALL
                        .into_iter()
                        .map(move |direction| (threshold, channel, direction))
                })
            })
            .map(move |(threshold, channel, direction)| {
                let len = self.block_len(direction);
                let block = Block {
                    threshold,
                    channel,
                    direction,
                    offset,
                    len,
                };
                offset += len;
                block
            })
    }
}

/// Feature values of a single image together with their layout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureVector {
    pub values: Vec<u32>,
    pub layout: FeatureLayout,
}

impl FeatureVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn block(&self, block: &Block) -> &[u32] {
        &self.values[block.offset..block.offset + block.len]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn layout(r: usize, s: usize, c: usize, t: &[u8], w: usize) -> FeatureLayout {
        FeatureLayout::new(r, s, c, &SweepConfig::new(t.iter().copied(), w).unwrap())
    }

    #[test]
    fn table_dimensions() {
        assert_eq!(layout(28, 28, 1, &[100], 2).len(), 84);
        assert_eq!(layout(28, 28, 1, &[100, 175], 2).len(), 168);
        assert_eq!(layout(32, 32, 3, &[25, 100], 1).len(), 1140);
    }

    #[test]
    fn blocks_tile_the_vector() {
        let l = layout(5, 3, 2, &[10, 20], 2);
        let blocks: Vec<_> = l.blocks().collect();
        assert_eq!(blocks.len(), 2 * 2 * 4);
        let mut expect = 0;
        for b in &blocks {
            assert_eq!(b.offset, expect);
            expect += b.len;
        }
        assert_eq!(expect, l.len());
        assert_eq!(blocks[0].direction, Direction::Rows);
        assert_eq!(blocks[4].channel, 1);
        assert_eq!(blocks[8].threshold, 20);
        // ceil(5/2), ceil(3/2), ceil(7/2), ceil(7/2)
        assert_eq!(
            blocks[..4].iter().map(|b| b.len).collect::<Vec<_>>(),
            [3, 2, 4, 4]
        );
    }
}

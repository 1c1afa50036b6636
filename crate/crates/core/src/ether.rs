//! The ether: Rule 110's spatially periodic background.
//!
//! [`derive_ether`] finds it by exhaustive search over small periodic rings;
//! the result is embedded as [`ETHER_CELLS`] and a unit test keeps the two in
//! agreement. The tile's minimal temporal period turns out to be one step: the
//! whole pattern slides four cells to the left every step.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::lattice::{step, Row};

/// Spatial period of the ether.
pub const ETHER_PERIOD: usize = 14;

/// Canonical ether tile (lexicographically smallest rotation), cell 0 first.
pub const ETHER_CELLS: &str = "00010011011111";

pub const ETHER_TEMPORAL_PERIOD: usize = 1;

/// Cells the pattern moves per temporal period, in `(-7, 7]`.
pub const ETHER_DRIFT: isize = -4;

const SEARCH_MAX_PERIOD: usize = 14;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtherTile {
    cells: [bool; ETHER_PERIOD],
    temporal_period: usize,
    drift: isize,
}

impl EtherTile {
    pub fn cells(&self) -> &[bool; ETHER_PERIOD] {
        &self.cells
    }

    pub fn temporal_period(&self) -> usize {
        self.temporal_period
    }

    pub fn drift(&self) -> isize {
        self.drift
    }

    /// Tile value at index `j` (taken mod 14).
    #[inline]
    pub fn cell(&self, j: usize) -> bool {
        self.cells[j % ETHER_PERIOD]
    }

    pub fn to_bit_string(&self) -> String {
        self.cells.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }

    /// The 14-cell tile after `t` steps of evolution.
    pub fn tile_at(&self, t: usize) -> Row {
        let mut row = Row::from_bits(self.cells);
        for _ in 0..t % self.temporal_period {
            row = step(&row);
        }
        row
    }

    /// Window of 14 cells starting at tile index `j`, packed with cell `k` at bit `k`.
    pub fn window_word(&self, j: usize) -> u16 {
        (0..ETHER_PERIOD).fold(0u16, |acc, k| acc | (u16::from(self.cell(j + k)) << k))
    }
}

/// Alignment of the ether against lattice coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct EtherPhase {
    spatial_offset: u8,
    temporal_offset: u8,
}

impl EtherPhase {
    /// Reduces both offsets into their canonical ranges.
    pub fn new(spatial_offset: isize, temporal_offset: isize) -> Self {
        let tau = ether().temporal_period() as isize;
        Self {
            spatial_offset: spatial_offset.rem_euclid(ETHER_PERIOD as isize) as u8,
            temporal_offset: temporal_offset.rem_euclid(tau) as u8,
        }
    }

    pub fn spatial_offset(&self) -> usize {
        self.spatial_offset as usize
    }

    pub fn temporal_offset(&self) -> usize {
        self.temporal_offset as usize
    }
}

/// The embedded ether tile.
pub fn ether() -> &'static EtherTile {
    static TILE: OnceLock<EtherTile> = OnceLock::new();
    TILE.get_or_init(|| {
        let mut cells = [false; ETHER_PERIOD];
        for (c, ch) in cells.iter_mut().zip(ETHER_CELLS.chars()) {
            *c = ch == '1';
        }
        EtherTile {
            cells,
            temporal_period: ETHER_TEMPORAL_PERIOD,
            drift: ETHER_DRIFT,
        }
    })
}

/// A periodic orbit found by the search: pattern of minimal spatial period
/// `width` that returns to a rotation of itself after `period` steps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicPattern {
    pub cells: Vec<bool>,
    pub period: usize,
    pub shift: isize,
}

fn minimal_spatial_period(row: &Row) -> usize {
    let n = row.width();
    (1..=n)
        .find(|&s| n % s == 0 && row.shifted(s as isize) == *row)
        .unwrap_or(n)
}

/// All nonuniform patterns on a ring of `width` cells (minimal spatial period
/// exactly `width`) that recur up to a rotation within `max_period` steps.
pub fn periodic_patterns(width: usize, max_period: usize) -> Vec<PeriodicPattern> {
    let mut found = Vec::new();
    for bits in 0u32..(1 << width) {
        let row = Row::from_bits((0..width).map(|i| (bits >> i) & 1 == 1));
        if minimal_spatial_period(&row) != width || row.is_zero() || row.count_ones() == width {
            continue;
        }
        let mut cur = row.clone();
        for t in 1..=max_period {
            cur = step(&cur);
            if let Some(k) = (0..width as isize).find(|&k| row.shifted(k) == cur) {
                found.push(PeriodicPattern {
                    cells: row.iter().collect(),
                    period: t,
                    shift: k,
                });
                break;
            }
        }
    }
    found
}

fn canonical_shift(k: isize, n: usize) -> isize {
    let n = n as isize;
    let k = k.rem_euclid(n);
    if k > n / 2 {
        k - n
    } else {
        k
    }
}

/// Brute-force search for the ether.
///
/// Recurrent patterns of every spatial period up to 14 are available from
/// [`periodic_patterns`]; the ether is the period-14 class with the smallest
/// temporal period. That class must form a single rotation orbit, and its
/// lexicographically smallest rotation is returned.
pub fn derive_ether() -> Result<EtherTile> {
    let found = periodic_patterns(ETHER_PERIOD, SEARCH_MAX_PERIOD);
    let tau = found
        .iter()
        .map(|p| p.period)
        .min()
        .ok_or(Error::EtherSearchFailed)?;
    let candidates: Vec<PeriodicPattern> =
        found.into_iter().filter(|p| p.period == tau).collect();
    let smallest = candidates
        .iter()
        .map(|p| p.cells.clone())
        .min()
        .ok_or(Error::EtherSearchFailed)?;
    let orbit: Vec<Vec<bool>> = (0..ETHER_PERIOD as isize)
        .map(|k| Row::from_bits(smallest.iter().copied()).shifted(k).iter().collect())
        .collect();
    if candidates.len() != ETHER_PERIOD || candidates.iter().any(|p| !orbit.contains(&p.cells)) {
        return Err(Error::EtherSearchFailed);
    }
    let lead = candidates
        .iter()
        .find(|p| p.cells == smallest)
        .expect("smallest rotation is a candidate");
    let mut cells = [false; ETHER_PERIOD];
    cells.copy_from_slice(&smallest);
    Ok(EtherTile {
        cells,
        temporal_period: lead.period,
        drift: canonical_shift(lead.shift, ETHER_PERIOD),
    })
}

/// A full row of ether. The width must be a multiple of 14.
pub fn ether_row(width: usize, phase: EtherPhase) -> Result<Row> {
    if width == 0 || width % ETHER_PERIOD != 0 {
        return Err(Error::WidthNotEtherMultiple(width));
    }
    let tile = ether().tile_at(phase.temporal_offset());
    let off = phase.spatial_offset();
    Ok(Row::from_bits((0..width).map(|x| {
        tile.get((x + ETHER_PERIOD - off) % ETHER_PERIOD)
    })))
}

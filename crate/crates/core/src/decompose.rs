//! Domain/particle decomposition of rows.
//!
//! Each cell is read against the ether through 14-cell windows: a window that
//! matches the ether tile starting at tile index `j` assigns tile indices
//! `j, j+1, ..` to its cells. A cell is *ether* when the windows covering it
//! agree on one tile index. Neighbouring ether cells belong to the same domain
//! when their tile indices are consecutive mod 14; everything between two
//! domains is a residual block, possibly empty when two domains abut.
//!
//! Residuals are labelled by looking their [`Signature`] up in a [`Catalog`];
//! unmatched ones get an `U:<fingerprint>` label.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::ether::{ether, EtherPhase, ETHER_PERIOD};
use crate::glider::{Catalog, GliderId, Signature};
use crate::lattice::{Row, SpacetimeDiagram};

const UNSET: u8 = u8::MAX;
const AMBIGUOUS: u8 = u8::MAX - 1;

/// Rows with less than this fraction of ether cells are not decomposed.
pub const TURBULENCE_THRESHOLD: f64 = 0.5;

fn window_table() -> &'static [u8] {
    static TABLE: OnceLock<Vec<u8>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = vec![UNSET; 1 << ETHER_PERIOD];
        for j in 0..ETHER_PERIOD {
            table[ether().window_word(j) as usize] = j as u8;
        }
        table
    })
}

/// Per-cell ether tile index, or `None` for defect cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtherMap {
    tiles: Vec<u8>,
}

impl EtherMap {
    pub fn new(row: &Row) -> Self {
        let n = row.width();
        let table = window_table();
        let mut tiles = vec![UNSET; n];
        let mut word: u16 = 0;
        for k in 0..ETHER_PERIOD {
            word |= u16::from(row.get(k % n)) << k;
        }
        for i in 0..n {
            let j = table[word as usize];
            if j != UNSET {
                for k in 0..ETHER_PERIOD {
                    let cell = &mut tiles[(i + k) % n];
                    let t = ((j as usize + k) % ETHER_PERIOD) as u8;
                    if *cell == UNSET {
                        *cell = t;
                    } else if *cell != t {
                        *cell = AMBIGUOUS;
                    }
                }
            }
            word = (word >> 1) | (u16::from(row.get((i + ETHER_PERIOD) % n)) << (ETHER_PERIOD - 1));
        }
        Self { tiles }
    }

    pub fn width(&self) -> usize {
        self.tiles.len()
    }

    pub fn tile(&self, x: usize) -> Option<usize> {
        let t = self.tiles[x];
        (t < ETHER_PERIOD as u8).then_some(t as usize)
    }

    pub fn ether_cells(&self) -> usize {
        (0..self.width()).filter(|&x| self.tile(x).is_some()).count()
    }

    pub fn coverage(&self) -> f64 {
        self.ether_cells() as f64 / self.width() as f64
    }

    /// Cells `x` and `x+1` lie in one ether domain.
    fn continuous(&self, x: usize) -> bool {
        let n = self.width();
        match (self.tile(x), self.tile((x + 1) % n)) {
            (Some(a), Some(b)) => b == (a + 1) % ETHER_PERIOD,
            _ => false,
        }
    }
}

/// A maximal run of ether cells belonging to one domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EtherRun {
    pub start: usize,
    pub len: usize,
}

/// A residual block between two ether domains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub start: usize,
    pub signature: Signature,
}

impl Segment {
    pub fn width(&self) -> usize {
        self.signature.width()
    }
}

/// Ether runs and the residual segments separating them, in cyclic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scan {
    pub runs: Vec<EtherRun>,
    pub segments: Vec<Segment>,
    pub ether_cells: usize,
}

/// Splits a row into ether runs and residual segments.
pub fn scan(row: &Row) -> Scan {
    let map = EtherMap::new(row);
    let n = row.width();
    let ether_cells = map.ether_cells();
    if ether_cells == 0 {
        return Scan {
            runs: Vec::new(),
            segments: Vec::new(),
            ether_cells,
        };
    }
    let Some(first) = (0..n).find(|&x| map.tile(x).is_some() && !map.continuous((x + n - 1) % n))
    else {
        // one domain closes on itself around the ring
        return Scan {
            runs: vec![EtherRun { start: 0, len: n }],
            segments: Vec::new(),
            ether_cells,
        };
    };

    let mut runs = Vec::new();
    let mut segments = Vec::new();
    let mut offset = 0;
    while offset < n {
        let start = (first + offset) % n;
        let mut len = 1;
        while offset + len < n && map.continuous((start + len - 1) % n) {
            len += 1;
        }
        runs.push(EtherRun { start, len });
        offset += len;
        let last = (start + len - 1) % n;
        let seg_start = (last + 1) % n;
        let mut bits = String::new();
        while offset < n && map.tile((first + offset) % n).is_none() {
            bits.push(if row.get((first + offset) % n) { '1' } else { '0' });
            offset += 1;
        }
        let next = (first + offset) % n;
        let lead = map.tile(last).expect("run ends on an ether cell") + 1;
        let trail = map.tile(next).expect("residual ends on an ether cell");
        segments.push(Segment {
            start: seg_start,
            signature: Signature::new(lead, bits, trail),
        });
    }
    Scan {
        runs,
        segments,
        ether_cells,
    }
}

/// Short stable hash of a residual signature.
pub fn fingerprint(sig: &Signature) -> String {
    let digest = Sha256::digest(sig.to_string().as_bytes());
    digest[..6].iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Label {
    Glider { id: GliderId, phase: usize },
    Unknown(String),
}

impl Label {
    pub fn glider_id(&self) -> Option<&GliderId> {
        match self {
            Label::Glider { id, .. } => Some(id),
            Label::Unknown(_) => None,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Glider { id, .. } => write!(f, "{id}"),
            Label::Unknown(fp) => write!(f, "U:{fp}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Particle {
    pub label: Label,
    pub start: usize,
    pub signature: Signature,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Decomposition {
    Resolved {
        phase: EtherPhase,
        coverage: f64,
        particles: Vec<Particle>,
    },
    Turbulent {
        coverage: f64,
    },
}

impl Decomposition {
    pub fn particles(&self) -> &[Particle] {
        match self {
            Decomposition::Resolved { particles, .. } => particles,
            Decomposition::Turbulent { .. } => &[],
        }
    }

    pub fn coverage(&self) -> f64 {
        match self {
            Decomposition::Resolved { coverage, .. } | Decomposition::Turbulent { coverage } => {
                *coverage
            }
        }
    }

    pub fn is_turbulent(&self) -> bool {
        matches!(self, Decomposition::Turbulent { .. })
    }

    /// Glider ids in order, or `None` if turbulent or any particle is unknown.
    pub fn glider_ids(&self) -> Option<Vec<GliderId>> {
        match self {
            Decomposition::Resolved { particles, .. } => particles
                .iter()
                .map(|p| p.label.glider_id().cloned())
                .collect(),
            Decomposition::Turbulent { .. } => None,
        }
    }
}

/// Ether alignment with the most cells matching the tiling; ties go to the
/// smallest spatial then temporal offset.
pub fn dominant_phase(row: &Row) -> EtherPhase {
    let n = row.width();
    let tau = ether().temporal_period();
    let mut best = (0usize, EtherPhase::default());
    for t in 0..tau {
        let tile = ether().tile_at(t);
        for o in 0..ETHER_PERIOD {
            let matches = (0..n)
                .filter(|&x| row.get(x) == tile.get((x + ETHER_PERIOD - o % ETHER_PERIOD) % ETHER_PERIOD))
                .count();
            if matches > best.0 {
                best = (matches, EtherPhase::new(o as isize, t as isize));
            }
        }
    }
    best.1
}

fn label(catalog: &Catalog, sig: &Signature) -> Label {
    match catalog.lookup(sig) {
        Some((g, phase)) => Label::Glider {
            id: g.id().clone(),
            phase,
        },
        None => Label::Unknown(fingerprint(sig)),
    }
}

/// Start of the longest ether run (ties: smallest start index).
fn longest_run(runs: &[EtherRun]) -> Option<EtherRun> {
    runs.iter()
        .copied()
        .min_by_key(|r| (std::cmp::Reverse(r.len), r.start))
}

/// Reference point for left-to-right order: the middle of the row's longest
/// ether run.
pub fn reading_cut(row: &Row) -> usize {
    let s = scan(row);
    longest_run(&s.runs).map_or(0, |r| (r.start + r.len / 2) % row.width())
}

fn resolve(row: &Row, catalog: &Catalog, s: Scan, cut: usize) -> Decomposition {
    let n = row.width();
    let coverage = s.ether_cells as f64 / n as f64;
    if s.runs.is_empty() || coverage < TURBULENCE_THRESHOLD {
        return Decomposition::Turbulent { coverage };
    }
    let mut particles: Vec<Particle> = s
        .segments
        .into_iter()
        .map(|seg| Particle {
            label: label(catalog, &seg.signature),
            start: seg.start,
            signature: seg.signature,
        })
        .collect();
    particles.sort_by_key(|p| (p.start + n - cut % n) % n);
    Decomposition::Resolved {
        phase: dominant_phase(row),
        coverage,
        particles,
    }
}

/// Decomposes a row; particles are listed left to right starting after the
/// longest ether run.
pub fn decompose(row: &Row, catalog: &Catalog) -> Decomposition {
    let s = scan(row);
    let cut = longest_run(&s.runs).map_or(0, |r| r.start + r.len);
    resolve(row, catalog, s, cut)
}

/// Decomposes with left-to-right order measured from lattice index `cut`.
pub fn decompose_from(row: &Row, catalog: &Catalog, cut: usize) -> Decomposition {
    resolve(row, catalog, scan(row), cut)
}

/// Ordered glider content of a settled configuration.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct AsymptoticState {
    particles: Vec<GliderId>,
}

impl AsymptoticState {
    pub fn new(particles: Vec<GliderId>) -> Self {
        Self { particles }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn particles(&self) -> &[GliderId] {
        &self.particles
    }

    pub fn len(&self) -> usize {
        self.particles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.particles.is_empty()
    }
}

/// Text used for the empty state in fingerprints.
pub const EMPTY_STATE: &str = "EMPTY";
/// Text used for unsettled outcomes in fingerprints.
pub const UNSETTLED: &str = "UNSETTLED";

impl fmt::Display for AsymptoticState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.particles.is_empty() {
            return f.write_str(EMPTY_STATE);
        }
        let ids: Vec<&str> = self.particles.iter().map(GliderId::as_str).collect();
        f.write_str(&ids.join("+"))
    }
}

impl FromStr for AsymptoticState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == EMPTY_STATE {
            return Ok(Self::empty());
        }
        let ids = s
            .split('+')
            .map(|id| {
                let id = id.trim();
                if id.is_empty() || id.contains(char::is_whitespace) || id == UNSETTLED {
                    Err(Error::StateFormat(s.to_string()))
                } else {
                    Ok(GliderId::new(id))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(ids))
    }
}

/// Result of classifying an evolution.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Outcome {
    Settled(AsymptoticState),
    Unsettled,
}

impl Outcome {
    pub fn settled(&self) -> Option<&AsymptoticState> {
        match self {
            Outcome::Settled(s) => Some(s),
            Outcome::Unsettled => None,
        }
    }

    pub fn is_settled(&self) -> bool {
        matches!(self, Outcome::Settled(_))
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Settled(s) => s.fmt(f),
            Outcome::Unsettled => f.write_str(UNSETTLED),
        }
    }
}

impl FromStr for Outcome {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim() == UNSETTLED {
            Ok(Outcome::Unsettled)
        } else {
            s.parse().map(Outcome::Settled)
        }
    }
}

fn check_settle_window(catalog: &Catalog, window: usize) -> Result<()> {
    let required = 2 * catalog.max_period();
    if window < required {
        return Err(Error::SettleWindowTooShort { window, required });
    }
    Ok(())
}

/// Late-time glider content of a diagram.
///
/// The last `window` rows must all decompose into the same ordered list of
/// catalogued gliders, otherwise the outcome is [`Outcome::Unsettled`]. Order
/// is measured from [`reading_cut`] of the first row and held fixed in lattice
/// coordinates, so gliders keep their order as they travel.
pub fn asymptotic_state(d: &SpacetimeDiagram, catalog: &Catalog, window: usize) -> Result<Outcome> {
    asymptotic_state_from(d, catalog, window, reading_cut(d.row(0)))
}

/// [`asymptotic_state`] with an explicit ordering cut.
pub fn asymptotic_state_from(
    d: &SpacetimeDiagram,
    catalog: &Catalog,
    window: usize,
    cut: usize,
) -> Result<Outcome> {
    check_settle_window(catalog, window)?;
    let rows = d.rows();
    if rows.len() < window {
        return Ok(Outcome::Unsettled);
    }
    let mut settled: Option<Vec<GliderId>> = None;
    for row in rows.iter().rev().take(window) {
        let Some(ids) = decompose_from(row, catalog, cut).glider_ids() else {
            return Ok(Outcome::Unsettled);
        };
        match &settled {
            None => settled = Some(ids),
            Some(prev) if *prev != ids => return Ok(Outcome::Unsettled),
            Some(_) => {}
        }
    }
    Ok(Outcome::Settled(AsymptoticState::new(
        settled.expect("window is nonzero"),
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ether::ether_row;
    use crate::lattice::flip;

    fn empty_catalog() -> Catalog {
        Catalog::new(Vec::new()).unwrap()
    }

    #[test]
    fn pure_ether_has_no_particles() {
        for o in 0..14 {
            let row = ether_row(70, EtherPhase::new(o, 0)).unwrap();
            let d = decompose(&row, &empty_catalog());
            match d {
                Decomposition::Resolved {
                    phase,
                    coverage,
                    particles,
                } => {
                    assert_eq!(coverage, 1.0);
                    assert!(particles.is_empty());
                    assert_eq!(phase.spatial_offset(), o as usize);
                }
                Decomposition::Turbulent { .. } => panic!("ether read as turbulent"),
            }
        }
    }

    #[test]
    fn ether_tile_indices_follow_alignment() {
        let row = ether_row(28, EtherPhase::new(5, 0)).unwrap();
        let map = EtherMap::new(&row);
        for x in 0..28 {
            assert_eq!(map.tile(x), Some((x + 14 - 5) % 14));
        }
    }

    #[test]
    fn uniform_rows_are_turbulent() {
        assert!(decompose(&Row::zeros(56), &empty_catalog()).is_turbulent());
        assert!(decompose(&Row::ones(56), &empty_catalog()).is_turbulent());
    }

    #[test]
    fn single_flip_makes_one_unknown_segment() {
        let row = flip(&ether_row(56, EtherPhase::default()).unwrap(), 30).unwrap();
        let d = decompose(&row, &empty_catalog());
        let ps = d.particles();
        assert_eq!(ps.len(), 1);
        assert!(matches!(ps[0].label, Label::Unknown(_)));
        assert!(ps[0].start <= 30 && 30 < ps[0].start + ps[0].signature.width());
        // a flip inside one domain leaves no dislocation
        assert_eq!(ps[0].signature.dislocation(), 0);
    }

    #[test]
    fn fingerprint_is_stable() {
        let sig = Signature::new(3, "0110", 9);
        assert_eq!(fingerprint(&sig), fingerprint(&sig.clone()));
        assert_eq!(fingerprint(&sig).len(), 12);
        assert_ne!(fingerprint(&sig), fingerprint(&Signature::new(3, "0111", 9)));
    }

    #[test]
    fn state_text_round_trip() {
        let s: AsymptoticState = "G01+G07".parse().unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.to_string(), "G01+G07");
        assert_eq!("EMPTY".parse::<AsymptoticState>().unwrap(), AsymptoticState::empty());
        assert_eq!("UNSETTLED".parse::<Outcome>().unwrap(), Outcome::Unsettled);
        assert!("G01++G02".parse::<AsymptoticState>().is_err());
    }

    #[test]
    fn settle_window_precondition() {
        let d = crate::lattice::evolve(&ether_row(28, EtherPhase::default()).unwrap(), 4);
        assert_eq!(
            asymptotic_state(&d, &empty_catalog(), 6).unwrap(),
            Outcome::Unsettled
        );
        assert_eq!(
            asymptotic_state(&d, &empty_catalog(), 5).unwrap(),
            Outcome::Settled(AsymptoticState::empty())
        );
    }
}

//! Building rows from glider placements.
//!
//! A residual block joins the ether on its left at tile index `lead` and on
//! its right at tile index `trail`, so each glider moves the ether alignment
//! by its dislocation. A ring closes seamlessly only if the dislocations add
//! up to the ring width mod 14.

use std::fmt;

use crate::error::{Error, Result};
use crate::ether::{ether, ether_row, EtherPhase, ETHER_PERIOD};
use crate::glider::{Catalog, GliderId, Signature};
use crate::lattice::{LatticeConfig, Row};

/// Fewest ether cells allowed between two residual blocks. Two tile lengths
/// keep every 14-cell window near one block clear of the next.
pub const MIN_GAP: usize = 2 * ETHER_PERIOD;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Placement {
    pub id: GliderId,
    /// Lattice index of the residual block's first cell.
    pub position: usize,
    /// Index into the glider's phase cycle.
    pub phase: usize,
}

impl Placement {
    pub fn new(id: impl Into<GliderId>, position: usize, phase: usize) -> Self {
        Self {
            id: id.into(),
            position,
            phase,
        }
    }
}

impl From<String> for GliderId {
    fn from(s: String) -> Self {
        GliderId::new(s)
    }
}

impl fmt::Display for Placement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}/{}", self.id, self.position, self.phase)
    }
}

/// Places residual blocks left to right into ether.
///
/// The first block sits exactly at its requested position; each later one is
/// moved right by 0..13 cells to the nearest position where its `lead` meets
/// the ether coming from the left. Returns the row and the realized positions.
pub fn splice_signatures(width: usize, blocks: &[(Signature, usize)]) -> Result<(Row, Vec<usize>)> {
    if width == 0 {
        return Err(Error::ZeroWidth);
    }
    if blocks.is_empty() {
        return Ok((ether_row(width, EtherPhase::default())?, Vec::new()));
    }
    let total: usize = blocks.iter().map(|(s, _)| s.dislocation()).sum::<usize>() % ETHER_PERIOD;
    if total != width % ETHER_PERIOD {
        return Err(Error::WindingMismatch {
            width,
            dislocation: total,
            residue: width % ETHER_PERIOD,
        });
    }
    for pair in blocks.windows(2) {
        if pair[1].1 <= pair[0].1 {
            return Err(Error::PlacementOrder);
        }
    }
    if let Some(&(_, p)) = blocks.iter().find(|(_, p)| *p >= width) {
        return Err(Error::SiteOutOfRange {
            index: p as i64,
            width,
        });
    }

    let tile = ether();
    let label = |i: usize| format!("#{i}");
    // Cell x (unwrapped) of the current domain has tile index (x - offset) mod 14.
    let first = blocks[0].1;
    let mut offset = first + ETHER_PERIOD * width - blocks[0].0.lead as usize;
    let origin = offset;
    let mut cells = vec![false; width];
    let mut realized = Vec::with_capacity(blocks.len());
    let mut cursor = first;
    for (i, (sig, pos)) in blocks.iter().enumerate() {
        let mut start = (*pos).max(cursor);
        if i > 0 {
            while (start + ETHER_PERIOD * width - offset) % ETHER_PERIOD != sig.lead as usize {
                start += 1;
            }
            if start - cursor < MIN_GAP {
                return Err(Error::Overlap {
                    left: label(i - 1),
                    right: label(i),
                    min_gap: MIN_GAP,
                });
            }
        }
        for x in cursor..start {
            cells[x % width] = tile.cell(x + ETHER_PERIOD * width - offset);
        }
        for (k, b) in sig.cells().enumerate() {
            cells[(start + k) % width] = b;
        }
        realized.push(start % width);
        cursor = start + sig.width();
        offset = cursor + ETHER_PERIOD * width - sig.trail as usize;
    }
    let end = first + width;
    if cursor > end || end - cursor < MIN_GAP {
        return Err(Error::Overlap {
            left: label(blocks.len() - 1),
            right: label(0),
            min_gap: MIN_GAP,
        });
    }
    for x in cursor..end {
        cells[x % width] = tile.cell(x + ETHER_PERIOD * width - offset);
    }
    debug_assert_eq!((origin + width) % ETHER_PERIOD, offset % ETHER_PERIOD);
    Ok((Row::from_bits(cells), realized))
}

fn resolve(catalog: &Catalog, placements: &[Placement]) -> Result<Vec<(Signature, usize)>> {
    placements
        .iter()
        .map(|p| {
            let g = catalog.get(&p.id)?;
            let sig = g.phase(p.phase).ok_or_else(|| Error::PhaseOutOfRange {
                id: p.id.to_string(),
                phase: p.phase,
                period: g.period(),
            })?;
            Ok((sig.clone(), p.position))
        })
        .collect()
}

fn rename(err: Error, placements: &[Placement]) -> Error {
    let name = |s: &str| {
        s.strip_prefix('#')
            .and_then(|i| i.parse::<usize>().ok())
            .and_then(|i| placements.get(i))
            .map_or_else(|| s.to_string(), Placement::to_string)
    };
    match err {
        Error::Overlap {
            left,
            right,
            min_gap,
        } => Error::Overlap {
            left: name(&left),
            right: name(&right),
            min_gap,
        },
        e => e,
    }
}

/// Row of ether carrying the given gliders, plus where each one landed.
pub fn splice_detailed(
    width: usize,
    catalog: &Catalog,
    placements: &[Placement],
) -> Result<(Row, Vec<usize>)> {
    let blocks = resolve(catalog, placements)?;
    splice_signatures(width, &blocks).map_err(|e| rename(e, placements))
}

pub fn splice(width: usize, catalog: &Catalog, placements: &[Placement]) -> Result<Row> {
    splice_detailed(width, catalog, placements).map(|(row, _)| row)
}

/// Whether `left` catches up with `right` within the configured window.
///
/// Gliders are treated as points moving at their mean velocity from the
/// edges of their blocks: the gap is the ether between them.
pub fn will_collide(
    catalog: &Catalog,
    left: &Placement,
    right: &Placement,
    config: &LatticeConfig,
) -> Result<bool> {
    let gl = catalog.get(&left.id)?;
    let gr = catalog.get(&right.id)?;
    let wl = gl
        .phase(left.phase)
        .ok_or_else(|| Error::PhaseOutOfRange {
            id: left.id.to_string(),
            phase: left.phase,
            period: gl.period(),
        })?
        .width();
    let closing = gl.velocity() - gr.velocity();
    if closing <= 0.0 {
        return Ok(false);
    }
    let gap = right.position as f64 - (left.position + wl) as f64;
    Ok(gap / closing < config.window() as f64)
}

/// Collision flag for a two-glider ring read left to right from lattice index
/// `cut`: the glider met first after the cut is the left one.
pub fn pair_collides(
    catalog: &Catalog,
    placements: &[Placement],
    width: usize,
    cut: usize,
    config: &LatticeConfig,
) -> Result<bool> {
    let [a, b] = placements else {
        return Err(Error::UnsupportedInitialState(placements.len()));
    };
    let rel = |p: &Placement| Placement {
        position: (p.position + width - cut % width) % width,
        ..p.clone()
    };
    let (a, b) = (rel(a), rel(b));
    if a.position <= b.position {
        will_collide(catalog, &a, &b, config)
    } else {
        will_collide(catalog, &b, &a, config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decompose::{scan, EtherMap};
    use crate::glider::GliderSpec;

    fn toy_catalog() -> Catalog {
        // a fake one-phase glider whose block is 3 cells; dislocation 0
        let a = GliderSpec::new("A".into(), 1, 0, vec![Signature::new(2, "111", 5)]).unwrap();
        let b = GliderSpec::new("B".into(), 1, 1, vec![Signature::new(0, "000", 0)]).unwrap();
        Catalog::new(vec![a, b]).unwrap()
    }

    #[test]
    fn no_placements_gives_ether() {
        let row = splice(56, &toy_catalog(), &[]).unwrap();
        assert_eq!(row, ether_row(56, EtherPhase::default()).unwrap());
    }

    #[test]
    fn block_is_framed_by_matching_ether() {
        let sig = Signature::new(2, "111", 5);
        let (row, pos) = splice_signatures(70, &[(sig.clone(), 20)]).unwrap();
        assert_eq!(pos, vec![20]);
        let map = EtherMap::new(&row);
        // well away from the block the ether indices continue with the
        // declared lead and trail
        assert_eq!(map.tile(10), Some(6));
        assert_eq!(map.tile(40), Some((5 + 40 - 23) % 14));
        assert_eq!(&row.to_bit_string()[20..23], "111");
    }

    #[test]
    fn later_blocks_snap_right() {
        let sig = Signature::new(2, "111", 5);
        let (_, pos) = splice_signatures(140, &[(sig.clone(), 10), (sig, 60)]).unwrap();
        assert_eq!(pos[0], 10);
        assert!((60..74).contains(&pos[1]));
    }

    #[test]
    fn winding_is_checked() {
        let sig = Signature::new(12, "0", 11); // dislocation 2
        assert!(matches!(
            splice_signatures(70, &[(sig.clone(), 5)]),
            Err(Error::WindingMismatch { dislocation: 2, residue: 0, .. })
        ));
        assert!(splice_signatures(72, &[(sig, 5)]).is_ok());
    }

    #[test]
    fn crowded_placements_overlap() {
        let c = toy_catalog();
        let err = splice(140, &c, &[Placement::new("A", 10, 0), Placement::new("A", 20, 0)])
            .unwrap_err();
        assert!(matches!(err, Error::Overlap { ref left, .. } if left == "A@10/0"));
        // the gap across the seam counts as well
        assert!(matches!(
            splice(56, &c, &[Placement::new("A", 0, 0), Placement::new("A", 28, 0)]),
            Err(Error::Overlap { .. })
        ));
    }

    #[test]
    fn placement_errors() {
        let c = toy_catalog();
        assert!(matches!(
            splice(140, &c, &[Placement::new("Z", 10, 0)]),
            Err(Error::UnknownGlider(_))
        ));
        assert!(matches!(
            splice(140, &c, &[Placement::new("A", 10, 1)]),
            Err(Error::PhaseOutOfRange { .. })
        ));
        assert!(matches!(
            splice(140, &c, &[Placement::new("A", 80, 0), Placement::new("A", 10, 0)]),
            Err(Error::PlacementOrder)
        ));
    }

    #[test]
    fn decomposition_sees_one_segment_per_block() {
        let sig = Signature::new(2, "111", 5);
        let (row, pos) = splice_signatures(140, &[(sig.clone(), 10), (sig, 70)]).unwrap();
        let s = scan(&row);
        assert_eq!(s.segments.len(), 2);
        let starts: Vec<usize> = s.segments.iter().map(|g| g.start).collect();
        for p in pos {
            assert!(starts.contains(&p));
        }
    }

    #[test]
    fn collision_kinematics() {
        let c = toy_catalog();
        let cfg = LatticeConfig::new(280, 100).unwrap();
        // B moves right at 1, A stands still: 40 cells of gap close in 40 steps
        let b = Placement::new("B", 10, 0);
        let a = Placement::new("A", 53, 0);
        assert!(will_collide(&c, &b, &a, &cfg).unwrap());
        let far = Placement::new("A", 213, 0);
        assert!(!will_collide(&c, &b, &far, &cfg).unwrap());
        assert!(!will_collide(&c, &a, &Placement::new("A", 200, 0), &cfg).unwrap());
        assert!(!will_collide(&c, &a, &Placement::new("B", 200, 0), &cfg).unwrap());
    }

    #[test]
    fn pair_order_follows_the_cut() {
        let c = toy_catalog();
        let cfg = LatticeConfig::new(280, 100).unwrap();
        let pair = [Placement::new("B", 10, 0), Placement::new("A", 53, 0)];
        assert!(pair_collides(&c, &pair, 280, 0, &cfg).unwrap());
        // cutting between them makes A the left glider, and A does not move
        assert!(!pair_collides(&c, &pair, 280, 30, &cfg).unwrap());
        assert!(pair_collides(&c, &pair[..1], 280, 0, &cfg).is_err());
    }
}

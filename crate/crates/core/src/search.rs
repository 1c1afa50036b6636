//! Glider discovery.
//!
//! Small binary blocks are written into ether at every alignment and the ring
//! is run forward. Whatever residual blocks are left at a few late snapshots
//! become candidates. A candidate is then put alone on a ring just wide enough
//! to close around it and is kept if the ring returns to a translate of itself
//! within the period bound while reading as a single block at every step.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::decompose::scan;
use crate::error::Result;
use crate::ether::{ether_row, EtherPhase, ETHER_PERIOD};
use crate::glider::{Catalog, GliderId, GliderSpec, Signature};
use crate::lattice::{step_packed, Row};
use crate::splice::splice_signatures;

/// Seed blocks are at most this wide; wider gliders show up as products.
pub const SEED_MAX_WIDTH: usize = 10;
/// Ring used for seeding, in ether tiles.
const SEED_RING_TILES: usize = 24;
const SEED_POSITION: usize = 7 * ETHER_PERIOD;
const SNAPSHOTS: [usize; 3] = [60, 120, 180];

/// Default search bounds for the shipped catalog.
pub const DEFAULT_MAX_WIDTH: usize = 30;
pub const DEFAULT_MAX_PERIOD: usize = 30;

/// Smallest seamless ring holding `sig` with enough ether on both sides that
/// it cannot feel itself across the wrap within `max_period` steps.
pub fn isolation_width(sig: &Signature, max_period: usize) -> usize {
    let needed = sig.width() + 2 * max_period + 4 * ETHER_PERIOD;
    let mut n = needed;
    while n % ETHER_PERIOD != sig.dislocation() {
        n += 1;
    }
    n
}

fn isolated(sig: &Signature, max_period: usize) -> (Row, usize) {
    let n = isolation_width(sig, max_period);
    let (row, _) = splice_signatures(n, &[(sig.clone(), 0)]).expect("seamless by construction");
    (row, n)
}

fn signed(k: usize, n: usize) -> isize {
    let k = k as isize;
    let n = n as isize;
    if k > n / 2 {
        k - n
    } else {
        k
    }
}

/// Period, per-period shift and phase cycle of a single isolated block.
fn cycle_of(sig: &Signature, max_period: usize) -> Option<(usize, isize, Vec<Signature>)> {
    let (row0, n) = isolated(sig, max_period);
    let ones = row0.count_ones();
    let mut phases = vec![sig.clone()];
    let mut starts = vec![0usize];
    let mut row = row0.clone();
    for t in 1..=max_period {
        row = step_packed(&row);
        let s = scan(&row);
        if s.segments.len() != 1 || s.ether_cells * 2 < n {
            return None;
        }
        let seg = &s.segments[0];
        if seg.signature == *sig && row.count_ones() == ones {
            let d = signed(seg.start, n);
            if d.unsigned_abs() <= t && row == row0.shifted(d) {
                return Some((t, d, phases));
            }
        }
        phases.push(seg.signature.clone());
        starts.push(seg.start);
    }
    None
}

/// Starts the phase list at its smallest signature.
fn canonical(period: usize, shift: isize, phases: Vec<Signature>) -> (usize, isize, Vec<Signature>) {
    let k = (0..phases.len())
        .min_by(|&a, &b| phases[a].cmp(&phases[b]))
        .unwrap_or(0);
    let mut phases = phases;
    phases.rotate_left(k);
    (period, shift, phases)
}

fn seed_rows(max_width: usize) -> Vec<Row> {
    let width = SEED_RING_TILES * ETHER_PERIOD;
    let seed_max = SEED_MAX_WIDTH.min(max_width);
    let mut rows = Vec::new();
    for w in 1..=seed_max {
        for bits in 0u32..(1 << w) {
            for o in 0..ETHER_PERIOD {
                let mut row = ether_row(width, EtherPhase::new(o as isize, 0)).expect("multiple of 14");
                for k in 0..w {
                    row.set(SEED_POSITION + k, (bits >> k) & 1 == 1);
                }
                rows.push(row);
            }
        }
    }
    rows
}

fn residuals(row: Row, max_width: usize) -> BTreeSet<Signature> {
    let mut out = BTreeSet::new();
    let mut row = row;
    let mut t = 0;
    for &snap in &SNAPSHOTS {
        while t < snap {
            row = step_packed(&row);
            t += 1;
        }
        let s = scan(&row);
        if s.ether_cells * 2 < row.width() {
            break;
        }
        for seg in s.segments {
            if seg.width() <= max_width {
                out.insert(seg.signature);
            }
        }
    }
    out
}

/// Every residual block seen in the seeded runs, deduplicated.
pub fn candidate_signatures(max_width: usize) -> BTreeSet<Signature> {
    seed_rows(max_width)
        .into_par_iter()
        .map(|row| residuals(row, max_width))
        .reduce(BTreeSet::new, |mut a, b| {
            a.extend(b);
            a
        })
}

/// Glider catalog from a bounded search.
///
/// Every glider found has all phases at most `max_width` wide and period at
/// most `max_period`. Ids `G00`, `G01`, .. follow the order velocity, period,
/// width.
pub fn derive_catalog(max_width: usize, max_period: usize) -> Result<Catalog> {
    let candidates: Vec<Signature> = candidate_signatures(max_width).into_iter().collect();
    let cycles: Vec<Option<(usize, isize, Vec<Signature>)>> = candidates
        .par_iter()
        .map(|sig| {
            cycle_of(sig, max_period)
                .filter(|(_, _, phases)| phases.iter().all(|p| p.width() <= max_width))
                .map(|(p, d, phases)| canonical(p, d, phases))
        })
        .collect();
    let mut unique: BTreeMap<Vec<Signature>, (usize, isize)> = BTreeMap::new();
    for (p, d, phases) in cycles.into_iter().flatten() {
        unique.entry(phases).or_insert((p, d));
    }
    let mut specs: Vec<GliderSpec> = unique
        .into_iter()
        .map(|(phases, (p, d))| GliderSpec::new(GliderId::new("?"), p, d, phases))
        .collect::<Result<_>>()?;
    specs.sort_by(|a, b| a.order_key(b));
    let width = (specs.len().max(1) - 1).to_string().len().max(2);
    let specs = specs
        .into_iter()
        .enumerate()
        .map(|(i, g)| {
            GliderSpec::new(
                GliderId::new(format!("G{i:0width$}")),
                g.period(),
                g.shift(),
                g.phases().to_vec(),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Catalog::new(specs)
}

/// Re-runs each glider alone for `periods` full periods and checks that it
/// comes back shifted by its displacement every time. Returns the ids that
/// fail.
pub fn verify_catalog(catalog: &Catalog, periods: usize) -> Vec<GliderId> {
    catalog
        .gliders()
        .iter()
        .filter(|g| {
            let sig = &g.phases()[0];
            let bound = catalog.max_period().max(g.period());
            let (row0, _) = isolated(sig, bound);
            let mut row = row0.clone();
            for k in 1..=periods {
                for _ in 0..g.period() {
                    row = step_packed(&row);
                }
                if row != row0.shifted(k as isize * g.shift()) {
                    return true;
                }
            }
            false
        })
        .map(|g| g.id().clone())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isolation_ring_is_seamless() {
        for sig in [Signature::new(12, "0", 11), Signature::new(3, "0110", 3)] {
            let n = isolation_width(&sig, 30);
            assert_eq!(n % 14, sig.dislocation());
            assert!(n >= sig.width() + 60);
        }
    }

    #[test]
    fn canonical_rotation_starts_at_smallest() {
        let a = Signature::new(1, "11", 1);
        let b = Signature::new(0, "1", 13);
        let (_, _, phases) = canonical(2, 0, vec![a.clone(), b.clone()]);
        assert_eq!(phases, vec![b, a]);
    }

    #[test]
    fn small_search_finds_moving_gliders() {
        let c = derive_catalog(12, 12).unwrap();
        assert!(c.len() >= 2);
        assert!(c.gliders().iter().any(|g| g.shift() > 0));
        assert!(c.gliders().iter().any(|g| g.shift() < 0));
        assert!(verify_catalog(&c, 10).is_empty());
    }

    #[test]
    fn pure_ether_is_not_a_glider() {
        let c = derive_catalog(8, 8).unwrap();
        assert!(c.gliders().iter().all(|g| g.width() > 0 || g.dislocation() != 0));
    }
}

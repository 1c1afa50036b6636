//! Glider specifications and the catalog.
//!
//! A glider is identified structurally. Each phase is recorded as the residual
//! block that [`decompose`](crate::decompose) cuts out of the surrounding ether,
//! together with the ether tile index just left of the block (`lead`) and the
//! tile index of the first ether cell to its right (`trail`). The pair fixes
//! how the block joins the ether on both sides, so a signature determines the
//! local configuration completely.
//!
//! # Catalog text format
//!
//! ```text
//! # comment lines start with '#'
//! <id> <period> <shift> <phase> <phase> ...
//! ```
//!
//! with one record per line and each phase written `lead:bits:trail`, e.g.
//! `9:0110:4`. `bits` may be empty. Phases are listed in time order starting
//! from the canonical (smallest) one. Export is byte-stable.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::ether::ETHER_PERIOD;

/// Name of a catalogued glider.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GliderId(String);

impl GliderId {
    pub fn new(id: impl Into<String>) -> Self {
        Self(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for GliderId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for GliderId {
    fn from(s: &str) -> Self {
        Self::new(s)
    }
}

/// A residual block and the ether alignment on either side of it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Signature {
    pub lead: u8,
    pub bits: String,
    pub trail: u8,
}

impl Signature {
    pub fn new(lead: usize, bits: impl Into<String>, trail: usize) -> Self {
        Self {
            lead: (lead % ETHER_PERIOD) as u8,
            bits: bits.into(),
            trail: (trail % ETHER_PERIOD) as u8,
        }
    }

    pub fn width(&self) -> usize {
        self.bits.len()
    }

    /// Offset between the right and left ether, mod 14. A ring of width `N`
    /// holds a set of particles seamlessly iff their dislocations sum to `N`
    /// mod 14.
    pub fn dislocation(&self) -> usize {
        (self.width() + self.lead as usize + ETHER_PERIOD - self.trail as usize) % ETHER_PERIOD
    }

    pub fn cells(&self) -> impl Iterator<Item = bool> + '_ {
        self.bits.chars().map(|c| c == '1')
    }

    fn parse(s: &str) -> Option<Self> {
        let mut parts = s.split(':');
        let lead: usize = parts.next()?.parse().ok()?;
        let bits = parts.next()?;
        let trail: usize = parts.next()?.parse().ok()?;
        if parts.next().is_some()
            || lead >= ETHER_PERIOD
            || trail >= ETHER_PERIOD
            || !bits.chars().all(|c| c == '0' || c == '1')
        {
            return None;
        }
        Some(Self::new(lead, bits, trail))
    }
}

impl Ord for Signature {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.width(), &self.bits, self.lead, self.trail).cmp(&(
            other.width(),
            &other.bits,
            other.lead,
            other.trail,
        ))
    }
}

impl PartialOrd for Signature {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.lead, self.bits, self.trail)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GliderSpec {
    id: GliderId,
    period: usize,
    shift: isize,
    phases: Vec<Signature>,
}

impl GliderSpec {
    /// `phases[k]` is the residual `k` steps after `phases[0]`; there must be
    /// exactly `period` of them.
    pub fn new(id: GliderId, period: usize, shift: isize, phases: Vec<Signature>) -> Result<Self> {
        if period == 0 || phases.len() != period || shift.unsigned_abs() > period {
            return Err(Error::CatalogEntryInvalid(id.to_string()));
        }
        let d = phases[0].dislocation();
        if phases.iter().any(|p| p.dislocation() != d) {
            return Err(Error::CatalogEntryInvalid(id.to_string()));
        }
        Ok(Self {
            id,
            period,
            shift,
            phases,
        })
    }

    pub fn id(&self) -> &GliderId {
        &self.id
    }

    pub fn period(&self) -> usize {
        self.period
    }

    /// Cells moved per period (positive = rightwards).
    pub fn shift(&self) -> isize {
        self.shift
    }

    pub fn velocity(&self) -> f64 {
        self.shift as f64 / self.period as f64
    }

    pub fn phases(&self) -> &[Signature] {
        &self.phases
    }

    pub fn phase(&self, k: usize) -> Option<&Signature> {
        self.phases.get(k)
    }

    /// Widest residual over the cycle.
    pub fn width(&self) -> usize {
        self.phases.iter().map(Signature::width).max().unwrap_or(0)
    }

    pub fn dislocation(&self) -> usize {
        self.phases[0].dislocation()
    }

    /// Catalog ordering: velocity, then period, then width.
    pub fn order_key(&self, other: &Self) -> Ordering {
        let lhs = self.shift as i64 * other.period as i64;
        let rhs = other.shift as i64 * self.period as i64;
        lhs.cmp(&rhs)
            .then(self.period.cmp(&other.period))
            .then(self.width().cmp(&other.width()))
            .then(self.dislocation().cmp(&other.dislocation()))
            .then_with(|| self.phases.cmp(&other.phases))
    }

    fn to_record(&self) -> String {
        let mut line = format!("{} {} {}", self.id, self.period, self.shift);
        for p in &self.phases {
            line.push(' ');
            line.push_str(&p.to_string());
        }
        line
    }
}

/// Immutable set of gliders with a signature index for decomposition.
#[derive(Debug, Clone)]
pub struct Catalog {
    gliders: Vec<GliderSpec>,
    by_id: HashMap<GliderId, usize>,
    by_signature: HashMap<Signature, (usize, usize)>,
}

impl PartialEq for Catalog {
    fn eq(&self, other: &Self) -> bool {
        self.gliders == other.gliders
    }
}

impl Catalog {
    pub fn new(gliders: Vec<GliderSpec>) -> Result<Self> {
        let mut by_id = HashMap::new();
        let mut by_signature = HashMap::new();
        for (i, g) in gliders.iter().enumerate() {
            if by_id.insert(g.id.clone(), i).is_some() {
                return Err(Error::DuplicateGlider(g.id.to_string()));
            }
            for (k, sig) in g.phases.iter().enumerate() {
                if by_signature.insert(sig.clone(), (i, k)).is_some() {
                    return Err(Error::CatalogEntryInvalid(g.id.to_string()));
                }
            }
        }
        Ok(Self {
            gliders,
            by_id,
            by_signature,
        })
    }

    /// The catalog shipped with the crate, produced by
    /// [`derive_catalog`](crate::search::derive_catalog) with the default bounds.
    pub fn builtin() -> &'static Catalog {
        static CATALOG: std::sync::OnceLock<Catalog> = std::sync::OnceLock::new();
        CATALOG.get_or_init(|| {
            Catalog::parse(BUILTIN_CATALOG).expect("embedded catalog parses")
        })
    }

    pub fn gliders(&self) -> &[GliderSpec] {
        &self.gliders
    }

    pub fn len(&self) -> usize {
        self.gliders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gliders.is_empty()
    }

    pub fn get(&self, id: &GliderId) -> Result<&GliderSpec> {
        self.by_id
            .get(id)
            .map(|&i| &self.gliders[i])
            .ok_or_else(|| Error::UnknownGlider(id.to_string()))
    }

    /// Glider and phase index owning `sig`, if any.
    pub fn lookup(&self, sig: &Signature) -> Option<(&GliderSpec, usize)> {
        self.by_signature
            .get(sig)
            .map(|&(i, k)| (&self.gliders[i], k))
    }

    /// Largest |velocity| over the catalog.
    pub fn v_max(&self) -> f64 {
        self.gliders
            .iter()
            .map(|g| g.velocity().abs())
            .fold(0.0, f64::max)
    }

    pub fn max_period(&self) -> usize {
        self.gliders.iter().map(GliderSpec::period).max().unwrap_or(0)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from(CATALOG_HEADER);
        for g in &self.gliders {
            out.push_str(&g.to_record());
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut gliders = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: &str| Error::CatalogFormat {
                line: n + 1,
                message: message.to_string(),
            };
            let mut fields = line.split_whitespace();
            let id = fields.next().ok_or_else(|| err("missing id"))?;
            let period: usize = fields
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| err("bad period"))?;
            let shift: isize = fields
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| err("bad shift"))?;
            let phases = fields
                .map(|f| Signature::parse(f).ok_or_else(|| err("bad phase")))
                .collect::<Result<Vec<_>>>()?;
            gliders.push(GliderSpec::new(GliderId::new(id), period, shift, phases)?);
        }
        Self::new(gliders)
    }
}

const CATALOG_HEADER: &str = "\
# rule110 glider catalog
# <id> <period> <shift> <lead:bits:trail per phase>
";

const BUILTIN_CATALOG: &str = include_str!("../data/catalog.txt");

//! Single-flip errors at time zero and the exhaustive sweep over them.
//!
//! Error sites are given in centred coordinates `-M..=M`; site `x` is lattice
//! index `(N/2 + x) mod N`. In reports sites are numbered `1..=2M+1` from the
//! left, and the no-error event is `NONE`.

use std::collections::BTreeMap;
use std::fmt;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::decompose::{asymptotic_state_from, decompose, reading_cut, AsymptoticState, Outcome};
use crate::error::{Error, Result};
use crate::glider::Catalog;
use crate::lattice::{evolve, flip, LatticeConfig, Row};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorModel {
    p: f64,
    m: u32,
}

impl ErrorModel {
    pub fn new(p: f64, m: u32) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidProbability(p));
        }
        Ok(Self { p, m })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Number of sites that can flip.
    pub fn sites(&self) -> u64 {
        2 * u64::from(self.m) + 1
    }

    pub fn check_width(&self, width: usize) -> Result<()> {
        if self.sites() > width as u64 {
            return Err(Error::ErrorRegionTooWide {
                span: self.sites(),
                width,
            });
        }
        Ok(())
    }

    pub fn with_p(&self, p: f64) -> Result<Self> {
        Self::new(p, self.m)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ErrorEvent {
    NoError,
    FlipAt(i64),
}

impl ErrorEvent {
    /// Report label: `NONE`, or the 1-based site number counted from `-M`.
    pub fn site_label(&self, model: &ErrorModel) -> String {
        match self {
            ErrorEvent::NoError => "NONE".to_string(),
            ErrorEvent::FlipAt(x) => (x + i64::from(model.m) + 1).to_string(),
        }
    }

    pub fn in_range(&self, model: &ErrorModel) -> bool {
        match *self {
            ErrorEvent::NoError => true,
            ErrorEvent::FlipAt(x) => x.unsigned_abs() <= u64::from(model.m),
        }
    }
}

impl fmt::Display for ErrorEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ErrorEvent::NoError => f.write_str("NONE"),
            ErrorEvent::FlipAt(x) => write!(f, "flip({x})"),
        }
    }
}

/// Lattice index of centred site `x`.
pub fn lattice_index(x: i64, width: usize) -> usize {
    (width as i64 / 2 + x).rem_euclid(width as i64) as usize
}

/// `NONE` then flips at `-M..=M`.
pub fn enumerate_events(model: &ErrorModel) -> Vec<ErrorEvent> {
    let m = i64::from(model.m);
    std::iter::once(ErrorEvent::NoError)
        .chain((-m..=m).map(ErrorEvent::FlipAt))
        .collect()
}

pub fn base_prob(model: &ErrorModel, event: &ErrorEvent) -> Result<f64> {
    if !event.in_range(model) {
        return Err(Error::EventOutOfRange(event.to_string()));
    }
    Ok(match event {
        ErrorEvent::NoError => 1.0 - model.p,
        ErrorEvent::FlipAt(_) => model.p / model.sites() as f64,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeEntry {
    pub event: ErrorEvent,
    pub base_prob: f64,
    pub outcome: Outcome,
}

/// Every error event with its base probability and where it leads.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeTable {
    model: ErrorModel,
    initial_state: AsymptoticState,
    entries: Vec<OutcomeEntry>,
}

pub const CSV_HEADER: &str = "site,base_prob,state_fingerprint,changed,settled";

/// Fixed 17-significant-digit rendering used in every CSV.
pub fn format_prob(x: f64) -> String {
    format!("{x:.16e}")
}

impl OutcomeTable {
    /// Table from outcomes listed in [`enumerate_events`] order.
    pub fn new(
        model: ErrorModel,
        initial_state: AsymptoticState,
        outcomes: Vec<Outcome>,
    ) -> Result<Self> {
        let events = enumerate_events(&model);
        if outcomes.len() != events.len() {
            return Err(Error::EventMismatch);
        }
        let entries = events
            .into_iter()
            .zip(outcomes)
            .map(|(event, outcome)| {
                Ok(OutcomeEntry {
                    base_prob: base_prob(&model, &event)?,
                    event,
                    outcome,
                })
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            model,
            initial_state,
            entries,
        })
    }

    pub fn model(&self) -> &ErrorModel {
        &self.model
    }

    pub fn initial_state(&self) -> &AsymptoticState {
        &self.initial_state
    }

    pub fn entries(&self) -> &[OutcomeEntry] {
        &self.entries
    }

    pub fn events(&self) -> impl Iterator<Item = ErrorEvent> + '_ {
        self.entries.iter().map(|e| e.event)
    }

    /// Outcome of the run without an error.
    pub fn baseline(&self) -> &Outcome {
        &self.entries[0].outcome
    }

    /// Same dynamics under a different error probability.
    pub fn with_p(&self, p: f64) -> Result<Self> {
        Self::new(
            self.model.with_p(p)?,
            self.initial_state.clone(),
            self.entries.iter().map(|e| e.outcome.clone()).collect(),
        )
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        let baseline = self.baseline();
        for e in &self.entries {
            writeln!(
                out,
                "{},{},{},{},{}",
                e.event.site_label(&self.model),
                format_prob(e.base_prob),
                e.outcome,
                u8::from(e.outcome != *baseline),
                u8::from(e.outcome.is_settled()),
            )
            .expect("write to string");
        }
        out
    }
}

/// Probability of each outcome, UNSETTLED included.
pub fn outcome_distribution(table: &OutcomeTable) -> BTreeMap<Outcome, f64> {
    let mut dist = BTreeMap::new();
    for e in table.entries() {
        *dist.entry(e.outcome.clone()).or_insert(0.0) += e.base_prob;
    }
    dist
}

/// Run parameters shared by every event of a sweep.
#[derive(Debug, Clone, Copy)]
pub struct SweepSettings<'a> {
    pub config: LatticeConfig,
    pub catalog: &'a Catalog,
    /// Settle window for [`asymptotic_state_from`].
    pub settle: usize,
    /// Worker threads; 0 lets rayon decide.
    pub jobs: usize,
}

/// Glider content of a row that must decompose cleanly.
pub fn initial_state(initial: &Row, catalog: &Catalog) -> Result<AsymptoticState> {
    let d = decompose(initial, catalog);
    if d.is_turbulent() {
        return Err(Error::TurbulentInitial {
            coverage: d.coverage(),
        });
    }
    if let Some(p) = d.particles().iter().find(|p| p.label.glider_id().is_none()) {
        return Err(Error::UnclassifiedInitial(p.label.to_string()));
    }
    let ordered = crate::decompose::decompose_from(initial, catalog, reading_cut(initial));
    Ok(AsymptoticState::new(
        ordered.glider_ids().expect("all particles catalogued"),
    ))
}

/// Outcome of one event.
pub fn run_event(
    initial: &Row,
    model: &ErrorModel,
    event: &ErrorEvent,
    settings: &SweepSettings<'_>,
    cut: usize,
) -> Result<Outcome> {
    let row = match *event {
        ErrorEvent::NoError => initial.clone(),
        ErrorEvent::FlipAt(x) => {
            if !event.in_range(model) {
                return Err(Error::EventOutOfRange(event.to_string()));
            }
            flip(initial, lattice_index(x, initial.width()))?
        }
    };
    let d = evolve(&row, settings.config.window());
    asymptotic_state_from(&d, settings.catalog, settings.settle, cut)
}

/// Runs every error event and classifies where it ends up.
///
/// Results are assembled in event order, so the table does not depend on
/// `jobs`.
pub fn sweep(initial: &Row, model: &ErrorModel, settings: &SweepSettings<'_>) -> Result<OutcomeTable> {
    let width = settings.config.width();
    if initial.width() != width {
        return Err(Error::DimensionMismatch {
            left: (initial.width(), 1),
            right: (width, 1),
        });
    }
    model.check_width(width)?;
    settings.config.check_window(settings.catalog.v_max())?;
    let state = initial_state(initial, settings.catalog)?;
    let cut = reading_cut(initial);
    let events = enumerate_events(model);
    let run = |e: &ErrorEvent| run_event(initial, model, e, settings, cut);
    let outcomes: Vec<Outcome> = if settings.jobs == 1 {
        events.iter().map(run).collect::<Result<_>>()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(settings.jobs)
            .build()
            .map_err(|e| Error::ThreadPool(e.to_string()))?;
        pool.install(|| events.par_iter().map(run).collect::<Result<_>>())?
    };
    OutcomeTable::new(*model, state, outcomes)
}

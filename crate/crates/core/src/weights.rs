//! Weight rules on final glider states and the reweighted error law.
//!
//! A rule assigns each outcome a factor in {0, 1}. Multiplying base event
//! probabilities by the factor of the event's outcome and renormalizing gives
//! the modified law; the dynamics stay untouched, only the time-zero error
//! probabilities move.

use std::collections::BTreeMap;
use std::fmt;
use std::fmt::Write as _;

use crate::decompose::{AsymptoticState, Outcome};
use crate::error::{Error, Result};
use crate::error_model::{format_prob, ErrorEvent, ErrorModel, OutcomeTable};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeightRule {
    /// Keep the initial gliders (swapped if the pair collides).
    Stability,
    /// Land on exactly this state.
    Forcing(AsymptoticState),
}

impl WeightRule {
    pub fn forcing(target: AsymptoticState) -> Result<Self> {
        if target.particles().iter().any(|id| id.as_str().starts_with("U:")) {
            return Err(Error::InvalidForcingTarget(target.to_string()));
        }
        Ok(Self::Forcing(target))
    }
}

impl fmt::Display for WeightRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightRule::Stability => f.write_str("stability"),
            WeightRule::Forcing(t) => write!(f, "forcing:{t}"),
        }
    }
}

/// The final state a stability rule asks for.
pub fn stable_target(initial: &AsymptoticState, colliding: bool) -> Result<AsymptoticState> {
    match initial.particles() {
        [_] => Ok(initial.clone()),
        [a, b] if colliding => Ok(AsymptoticState::new(vec![b.clone(), a.clone()])),
        [_, _] => Ok(initial.clone()),
        other => Err(Error::UnsupportedInitialState(other.len())),
    }
}

/// 0 or 1; UNSETTLED outcomes always weigh 0.
pub fn weight(
    rule: &WeightRule,
    outcome: &Outcome,
    initial: &AsymptoticState,
    colliding: bool,
) -> Result<f64> {
    let target = match rule {
        WeightRule::Stability => stable_target(initial, colliding)?,
        WeightRule::Forcing(t) => {
            if !(1..=2).contains(&initial.len()) {
                return Err(Error::UnsupportedInitialState(initial.len()));
            }
            t.clone()
        }
    };
    Ok(match outcome {
        Outcome::Settled(s) if *s == target => 1.0,
        _ => 0.0,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModifiedDistribution {
    rule: WeightRule,
    model: ErrorModel,
    events: Vec<ErrorEvent>,
    base: Vec<f64>,
    weights: Vec<f64>,
    per_event: Vec<f64>,
    normalization: f64,
    per_state: BTreeMap<Outcome, f64>,
}

impl ModifiedDistribution {
    pub fn rule(&self) -> &WeightRule {
        &self.rule
    }

    pub fn events(&self) -> &[ErrorEvent] {
        &self.events
    }

    pub fn base(&self) -> &[f64] {
        &self.base
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn per_event(&self) -> &[f64] {
        &self.per_event
    }

    pub fn probability(&self, event: &ErrorEvent) -> Option<f64> {
        self.events
            .iter()
            .position(|e| e == event)
            .map(|i| self.per_event[i])
    }

    /// Reciprocal of the surviving base mass.
    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    pub fn per_state(&self) -> &BTreeMap<Outcome, f64> {
        &self.per_state
    }

    /// Header line plus `event,base_prob,weight,modified_prob` rows.
    pub fn to_csv(&self, config_hash: &str) -> String {
        let mut out = format!(
            "# rule={} normalization={} config={}\nevent,base_prob,weight,modified_prob\n",
            self.rule,
            format_prob(self.normalization),
            config_hash
        );
        for i in 0..self.events.len() {
            writeln!(
                out,
                "{},{},{},{}",
                self.events[i].site_label(&self.model),
                format_prob(self.base[i]),
                self.weights[i],
                format_prob(self.per_event[i]),
            )
            .expect("write to string");
        }
        out
    }
}

/// Reweights a sweep's events by `rule`.
pub fn modify(table: &OutcomeTable, rule: &WeightRule, colliding: bool) -> Result<ModifiedDistribution> {
    let initial = table.initial_state();
    let entries = table.entries();
    let weights = entries
        .iter()
        .map(|e| weight(rule, &e.outcome, initial, colliding))
        .collect::<Result<Vec<f64>>>()?;
    let masses: Vec<f64> = entries
        .iter()
        .zip(&weights)
        .map(|(e, w)| w * e.base_prob)
        .collect();
    let total: f64 = masses.iter().sum();
    if total <= 0.0 {
        return Err(Error::NormalizationImpossible {
            rule: rule.to_string(),
        });
    }
    let mut state_mass: BTreeMap<Outcome, f64> = BTreeMap::new();
    for (e, m) in entries.iter().zip(&masses) {
        *state_mass.entry(e.outcome.clone()).or_insert(0.0) += m;
    }
    Ok(ModifiedDistribution {
        rule: rule.clone(),
        model: *table.model(),
        events: table.events().collect(),
        base: entries.iter().map(|e| e.base_prob).collect(),
        weights,
        per_event: masses.iter().map(|m| m / total).collect(),
        normalization: 1.0 / total,
        per_state: state_mass.into_iter().map(|(s, m)| (s, m / total)).collect(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct KlRow {
    pub event: ErrorEvent,
    pub base: f64,
    pub modified: f64,
}

/// Base versus modified probability of every event and the relative
/// entropy of the modified law with respect to the base one.
#[derive(Debug, Clone, PartialEq)]
pub struct KlReport {
    pub rows: Vec<KlRow>,
    pub divergence: f64,
}

pub fn kl_report(d: &ModifiedDistribution, table: &OutcomeTable) -> Result<KlReport> {
    let events: Vec<ErrorEvent> = table.events().collect();
    if events != d.events {
        return Err(Error::EventMismatch);
    }
    let rows: Vec<KlRow> = table
        .entries()
        .iter()
        .zip(&d.per_event)
        .map(|(e, &q)| KlRow {
            event: e.event,
            base: e.base_prob,
            modified: q,
        })
        .collect();
    let divergence = rows
        .iter()
        .filter(|r| r.modified > 0.0)
        .map(|r| r.modified * (r.modified / r.base).ln())
        .sum();
    Ok(KlReport { rows, divergence })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::glider::GliderId;

    fn state(ids: &[&str]) -> AsymptoticState {
        AsymptoticState::new(ids.iter().map(|&s| GliderId::new(s)).collect())
    }

    fn settled(ids: &[&str]) -> Outcome {
        Outcome::Settled(state(ids))
    }

    fn table(p: f64, initial: &[&str], outcomes: Vec<Outcome>) -> OutcomeTable {
        let m = (outcomes.len() as u32 - 2) / 2;
        OutcomeTable::new(ErrorModel::new(p, m).unwrap(), state(initial), outcomes).unwrap()
    }

    /// 21 flips: the first `k` keep [A], the rest give [B].
    fn preserving(k: usize) -> OutcomeTable {
        let mut o = vec![settled(&["A"])];
        o.extend((0..21).map(|i| if i < k { settled(&["A"]) } else { settled(&["B"]) }));
        table(0.1, &["A"], o)
    }

    #[test]
    fn stability_single() {
        let a = state(&["A"]);
        assert_eq!(weight(&WeightRule::Stability, &settled(&["A"]), &a, false).unwrap(), 1.0);
        assert_eq!(weight(&WeightRule::Stability, &settled(&["B"]), &a, false).unwrap(), 0.0);
        assert_eq!(weight(&WeightRule::Stability, &settled(&["A", "A"]), &a, false).unwrap(), 0.0);
        assert_eq!(weight(&WeightRule::Stability, &Outcome::Unsettled, &a, false).unwrap(), 0.0);
    }

    #[test]
    fn stability_pairs() {
        let ab = state(&["A", "B"]);
        let r = WeightRule::Stability;
        assert_eq!(weight(&r, &settled(&["B", "A"]), &ab, true).unwrap(), 1.0);
        assert_eq!(weight(&r, &settled(&["A", "B"]), &ab, true).unwrap(), 0.0);
        assert_eq!(weight(&r, &settled(&["A", "B"]), &ab, false).unwrap(), 1.0);
        assert_eq!(weight(&r, &settled(&["B", "A"]), &ab, false).unwrap(), 0.0);
        assert_eq!(weight(&r, &settled(&["A"]), &ab, false).unwrap(), 0.0);
    }

    #[test]
    fn unsupported_initial_states() {
        for ids in [&[][..], &["A", "B", "C"][..]] {
            assert_eq!(
                weight(&WeightRule::Stability, &settled(&["A"]), &state(ids), false),
                Err(Error::UnsupportedInitialState(ids.len()))
            );
        }
    }

    #[test]
    fn forcing_target_must_be_catalogued() {
        assert!(WeightRule::forcing(state(&["A"])).is_ok());
        assert!(matches!(
            WeightRule::forcing(state(&["U:0123456789ab"])),
            Err(Error::InvalidForcingTarget(_))
        ));
    }

    #[test]
    fn all_weights_one_leaves_base() {
        let t = preserving(21);
        let d = modify(&t, &WeightRule::Stability, false).unwrap();
        assert!((d.normalization() - 1.0).abs() < 1e-12);
        for (q, e) in d.per_event().iter().zip(t.entries()) {
            assert!((q - e.base_prob).abs() < 1e-15);
        }
        assert!(kl_report(&d, &t).unwrap().divergence.abs() < 1e-15);
    }

    #[test]
    fn stability_normalization_oracle() {
        let t = preserving(15);
        let d = modify(&t, &WeightRule::Stability, false).unwrap();
        // surviving mass 0.9 + 0.1 * 15 / 21
        let kept = 0.9 + 0.1 * 15.0 / 21.0;
        assert!((d.normalization() - 1.0 / kept).abs() < 1e-12);
        assert!((d.normalization() - 1.0294117647).abs() < 1e-10);
        assert_eq!(d.per_state()[&settled(&["A"])], 1.0);
        assert!((d.per_event().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let ratio = d.per_event()[1] / d.per_event()[0];
        assert!((ratio - t.entries()[1].base_prob / t.entries()[0].base_prob).abs() < 1e-12);
        for (q, e) in d.per_event().iter().zip(t.entries()) {
            if e.outcome == settled(&["B"]) {
                assert_eq!(*q, 0.0);
            }
        }
        let kl = kl_report(&d, &t).unwrap();
        assert!((kl.divergence - d.normalization().ln()).abs() < 1e-12);
        assert!((kl.divergence - 0.028987).abs() < 1e-6);
    }

    #[test]
    fn forcing_single_event() {
        let t = preserving(20);
        let target = state(&["B"]);
        let d = modify(&t, &WeightRule::forcing(target.clone()).unwrap(), false).unwrap();
        assert_eq!(d.per_state()[&Outcome::Settled(target)], 1.0);
        let q: f64 = 0.1 / 21.0;
        let kl = kl_report(&d, &t).unwrap();
        assert!((kl.divergence + q.ln()).abs() < 1e-12);
    }

    #[test]
    fn unreachable_forcing_fails() {
        let t = preserving(21);
        let r = WeightRule::forcing(state(&["C"])).unwrap();
        assert_eq!(
            modify(&t, &r, false),
            Err(Error::NormalizationImpossible {
                rule: "forcing:C".into()
            })
        );
    }

    #[test]
    fn csv_header_and_rows() {
        let t = preserving(15);
        let d = modify(&t, &WeightRule::Stability, false).unwrap();
        let csv = d.to_csv("abc123");
        let mut lines = csv.lines();
        assert_eq!(
            lines.next(),
            Some("# rule=stability normalization=1.0294117647058827e0 config=abc123")
        );
        assert_eq!(lines.next(), Some("event,base_prob,weight,modified_prob"));
        assert_eq!(lines.next(), Some("NONE,9.0000000000000002e-1,1,9.2647058823529438e-1"));
        assert_eq!(csv.lines().count(), 24);
    }

    #[test]
    fn mismatched_events_rejected() {
        let d = modify(&preserving(15), &WeightRule::Stability, false).unwrap();
        let other = table(0.1, &["A"], vec![settled(&["A"]); 4]);
        assert_eq!(kl_report(&d, &other), Err(Error::EventMismatch));
    }
}

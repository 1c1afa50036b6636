use std::fmt::Write as _;

use rule110_core::decompose::reading_cut;
use rule110_core::error_model::lattice_index;
use rule110_core::search::isolation_width;
use rule110_core::{
    derive_catalog, ether_row, evolve, flip, kl_report, modify, pair_collides, sample,
    splice_detailed, sweep, Catalog, ErrorEvent, ErrorModel, EtherPhase, GliderId, LatticeConfig,
    ModifiedDistribution, OutcomeTable, Placement, Row, SweepSettings, WeightRule,
};

use crate::config::LoadedConfig;
use crate::render::{render, Format, RenderSpec};
use crate::CliError;

pub fn cmd_ether(width: usize, steps: usize, format: Format) -> Result<String, CliError> {
    let row = ether_row(width, EtherPhase::default())?;
    render(&evolve(&row, steps), &RenderSpec { format, highlight: None })
}

pub fn cmd_gliders_list(catalog: &Catalog) -> String {
    let mut out = String::from("id\tperiod\tshift\tvelocity\twidth\tdislocation\n");
    for g in catalog.gliders() {
        writeln!(
            out,
            "{}\t{}\t{}\t{:.6}\t{}\t{}",
            g.id(),
            g.period(),
            g.shift(),
            g.velocity(),
            g.width(),
            g.dislocation()
        )
        .expect("write to string");
    }
    out
}

/// The glider alone on a ring, evolved `steps` steps.
pub fn cmd_gliders_show(
    catalog: &Catalog,
    id: &str,
    steps: usize,
    format: Format,
) -> Result<String, CliError> {
    let g = catalog.get(&GliderId::new(id))?;
    let width = isolation_width(&g.phases()[0], catalog.max_period()).max(2 * steps + g.width());
    let width = width + (g.dislocation() + 14 - width % 14) % 14;
    let (row, _) = splice_detailed(width, catalog, &[Placement::new(id, width / 2, 0)])?;
    render(&evolve(&row, steps), &RenderSpec { format, highlight: None })
}

pub fn cmd_gliders_export(catalog: &Catalog) -> String {
    catalog.to_text()
}

pub fn cmd_gliders_derive(max_width: usize, max_period: usize) -> Result<String, CliError> {
    Ok(derive_catalog(max_width, max_period)?.to_text())
}

/// Everything a config pins down, validated.
pub struct Experiment {
    pub catalog: std::borrow::Cow<'static, Catalog>,
    pub lattice: LatticeConfig,
    pub model: ErrorModel,
    pub rule: WeightRule,
    pub initial: Row,
    /// Placements with the positions splicing actually used.
    pub placements: Vec<Placement>,
    pub settle: usize,
    pub seed: u64,
    pub samples: usize,
    pub hash: String,
}

impl Experiment {
    pub fn prepare(loaded: &LoadedConfig) -> Result<Self, CliError> {
        let cfg = &loaded.config;
        let catalog = loaded.catalog()?;
        let lattice = cfg.lattice_config(&catalog)?;
        let model = cfg.error_model()?;
        let rule = cfg.weight_rule()?;
        let requested = cfg.placements();
        let (initial, positions) = splice_detailed(lattice.width(), &catalog, &requested)?;
        let placements = requested
            .into_iter()
            .zip(positions)
            .map(|(p, position)| Placement { position, ..p })
            .collect();
        let settle = cfg.run.settle;
        Ok(Self {
            catalog,
            lattice,
            model,
            rule,
            initial,
            placements,
            settle,
            seed: cfg.run.seed,
            samples: cfg.run.samples,
            hash: loaded.hash.clone(),
        })
    }

    pub fn settings(&self, jobs: usize) -> SweepSettings<'_> {
        SweepSettings {
            config: self.lattice,
            catalog: &self.catalog,
            settle: self.settle,
            jobs,
        }
    }

    pub fn sweep(&self, jobs: usize) -> Result<OutcomeTable, CliError> {
        if self.settle > self.lattice.window() + 1 {
            return Err(CliError::Config(format!(
                "settle window {} is longer than the {} rows of the run",
                self.settle,
                self.lattice.window() + 1
            )));
        }
        Ok(sweep(&self.initial, &self.model, &self.settings(jobs))?)
    }

    /// Whether the two initial gliders meet within the window; false for a
    /// single glider.
    pub fn colliding(&self) -> Result<bool, CliError> {
        if self.placements.len() != 2 {
            return Ok(false);
        }
        Ok(pair_collides(
            &self.catalog,
            &self.placements,
            self.lattice.width(),
            reading_cut(&self.initial),
            &self.lattice,
        )?)
    }

    pub fn modified(&self, jobs: usize) -> Result<(OutcomeTable, ModifiedDistribution), CliError> {
        let table = self.sweep(jobs)?;
        let d = modify(&table, &self.rule, self.colliding()?)?;
        Ok((table, d))
    }

    /// Row at time zero after `event`.
    pub fn perturbed(&self, event: &ErrorEvent) -> Result<Row, CliError> {
        Ok(match *event {
            ErrorEvent::NoError => self.initial.clone(),
            ErrorEvent::FlipAt(x) => flip(&self.initial, lattice_index(x, self.lattice.width()))?,
        })
    }

    /// Event for a 1-based report site number, or no error for `None`.
    pub fn event_for_site(&self, site: Option<u64>) -> Result<ErrorEvent, CliError> {
        match site {
            None => Ok(ErrorEvent::NoError),
            Some(s) if s >= 1 && s <= self.model.sites() => {
                Ok(ErrorEvent::FlipAt(s as i64 - i64::from(self.model.m()) - 1))
            }
            Some(s) => Err(CliError::Config(format!(
                "site {s} is outside 1..={}",
                self.model.sites()
            ))),
        }
    }
}

pub fn cmd_render(
    exp: &Experiment,
    site: Option<u64>,
    highlight: bool,
    format: Format,
) -> Result<String, CliError> {
    let event = exp.event_for_site(site)?;
    let steps = exp.lattice.window();
    let run = evolve(&exp.perturbed(&event)?, steps);
    let reference = highlight.then(|| evolve(&exp.initial, steps));
    render(
        &run,
        &RenderSpec {
            format,
            highlight: reference.as_ref(),
        },
    )
}

pub fn cmd_sweep(exp: &Experiment, jobs: usize) -> Result<(OutcomeTable, String), CliError> {
    let table = exp.sweep(jobs)?;
    let csv = table.to_csv();
    Ok((table, csv))
}

/// One highlighted diagram per flip event, named `site-NN.<ext>`.
pub fn sweep_diagrams(
    exp: &Experiment,
    table: &OutcomeTable,
    format: Format,
) -> Result<Vec<(String, String)>, CliError> {
    let steps = exp.lattice.window();
    let reference = evolve(&exp.initial, steps);
    let digits = exp.model.sites().to_string().len();
    table
        .events()
        .filter(|e| *e != ErrorEvent::NoError)
        .map(|e| {
            let run = evolve(&exp.perturbed(&e)?, steps);
            let text = render(
                &run,
                &RenderSpec {
                    format,
                    highlight: Some(&reference),
                },
            )?;
            let name = format!(
                "site-{:0>digits$}.{}",
                e.site_label(&exp.model),
                format.extension()
            );
            Ok((name, text))
        })
        .collect()
}

/// Modified-distribution CSV and the relative entropy against the base law.
pub fn cmd_reweight(exp: &Experiment, jobs: usize) -> Result<(String, f64), CliError> {
    let (table, d) = exp.modified(jobs)?;
    let kl = kl_report(&d, &table)?;
    Ok((d.to_csv(&exp.hash), kl.divergence))
}

pub fn cmd_sample(exp: &Experiment, n: usize, seed: u64, jobs: usize) -> Result<String, CliError> {
    let (_, d) = exp.modified(jobs)?;
    let draws = sample(&d, seed, n);
    let mut out = String::from("event\n");
    for e in draws {
        out.push_str(&e.site_label(&exp.model));
        out.push('\n');
    }
    Ok(out)
}

//! Space-time diagram output.
//!
//! PBM is plain `P1`: a `P1` line, then `<width> <rows>`, then one line of
//! `0`/`1` digits per time step, top row first, `1` = black. ASCII draws `█`
//! for 1 and `·` for 0.
//!
//! With a highlight reference, PBM output is the cellwise XOR against the
//! reference, and ASCII marks differing cells `▓` (1) or `░` (0).

use std::fmt;
use std::str::FromStr;

use rule110_core::{diff, SpacetimeDiagram};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Pbm,
    Ascii,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "pbm" => Ok(Format::Pbm),
            "ascii" => Ok(Format::Ascii),
            other => Err(format!("unknown format `{other}` (pbm or ascii)")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Pbm => "pbm",
            Format::Ascii => "ascii",
        })
    }
}

impl Format {
    pub fn extension(&self) -> &'static str {
        match self {
            Format::Pbm => "pbm",
            Format::Ascii => "txt",
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RenderSpec<'a> {
    pub format: Format,
    pub highlight: Option<&'a SpacetimeDiagram>,
}

pub fn render(d: &SpacetimeDiagram, spec: &RenderSpec<'_>) -> Result<String, CliError> {
    let overlay = spec.highlight.map(|r| diff(d, r)).transpose()?;
    let mut out = String::new();
    match spec.format {
        Format::Pbm => {
            let shown = overlay.as_ref().unwrap_or(d);
            out.push_str(&format!("P1\n{} {}\n", shown.width(), shown.rows().len()));
            for row in shown.rows() {
                out.push_str(&row.to_bit_string());
                out.push('\n');
            }
        }
        Format::Ascii => {
            for (t, row) in d.rows().iter().enumerate() {
                for (x, b) in row.iter().enumerate() {
                    let marked = overlay.as_ref().is_some_and(|o| o.row(t).get(x));
                    out.push(match (marked, b) {
                        (false, true) => '█',
                        (false, false) => '·',
                        (true, true) => '▓',
                        (true, false) => '░',
                    });
                }
                out.push('\n');
            }
        }
    }
    Ok(out)
}

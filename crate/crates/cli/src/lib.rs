//! Library side of the `rule110` command-line tool. Each command returns its
//! output as text so it can be tested without touching the filesystem.

pub mod commands;
pub mod config;
pub mod render;

use std::path::{Path, PathBuf};

use rule110_core::Error;
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NORMALIZATION: i32 = 3;
pub const EXIT_INITIAL: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Io { .. } => EXIT_FAILURE,
            CliError::Core(e) => match e {
                Error::NormalizationImpossible { .. } => EXIT_NORMALIZATION,
                Error::TurbulentInitial { .. } | Error::UnclassifiedInitial(_) => EXIT_INITIAL,
                Error::ZeroWidth
                | Error::ZeroWindow
                | Error::WindowTooLong { .. }
                | Error::WidthNotEtherMultiple(_)
                | Error::SiteOutOfRange { .. }
                | Error::UnknownGlider(_)
                | Error::PhaseOutOfRange { .. }
                | Error::PlacementOrder
                | Error::Overlap { .. }
                | Error::WindingMismatch { .. }
                | Error::SettleWindowTooShort { .. }
                | Error::InvalidProbability(_)
                | Error::ErrorRegionTooWide { .. }
                | Error::EventOutOfRange(_)
                | Error::UnsupportedInitialState(_)
                | Error::InvalidForcingTarget(_)
                | Error::CatalogFormat { .. }
                | Error::CatalogEntryInvalid(_)
                | Error::DuplicateGlider(_)
                | Error::StateFormat(_) => EXIT_CONFIG,
                _ => EXIT_FAILURE,
            },
        }
    }
}

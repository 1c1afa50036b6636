use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("lattice width must be positive")]
    ZeroWidth,

    #[error("time window must be positive")]
    ZeroWindow,

    #[error("window of {window} steps exceeds the bound {bound} for width {width} (v_max = {v_max})")]
    WindowTooLong {
        window: usize,
        bound: usize,
        width: usize,
        v_max: f64,
    },

    #[error("width {0} is not a multiple of the ether period 14")]
    WidthNotEtherMultiple(usize),

    #[error("site {index} is outside a lattice of width {width}")]
    SiteOutOfRange { index: i64, width: usize },

    #[error("diagram dimensions differ: {left:?} vs {right:?}")]
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("no ether background found by the brute-force search")]
    EtherSearchFailed,

    #[error("unknown glider id `{0}`")]
    UnknownGlider(String),

    #[error("glider `{id}` has no phase {phase} (period {period})")]
    PhaseOutOfRange {
        id: String,
        phase: usize,
        period: usize,
    },

    #[error("placements must be listed left to right with increasing positions")]
    PlacementOrder,

    #[error("placements `{left}` and `{right}` overlap or leave fewer than {min_gap} ether cells between them")]
    Overlap {
        left: String,
        right: String,
        min_gap: usize,
    },

    #[error("gliders carry total dislocation {dislocation} (mod 14) but width {width} is {residue} (mod 14)")]
    WindingMismatch {
        width: usize,
        dislocation: usize,
        residue: usize,
    },

    #[error("settle window {window} is shorter than twice the longest catalog period ({required})")]
    SettleWindowTooShort { window: usize, required: usize },

    #[error("error probability {0} is not in (0, 1)")]
    InvalidProbability(f64),

    #[error("error region 2M+1 = {span} exceeds the lattice width {width}")]
    ErrorRegionTooWide { span: u64, width: usize },

    #[error("event {0} is outside the error region")]
    EventOutOfRange(String),

    #[error("initial row is turbulent (ether coverage {coverage:.3})")]
    TurbulentInitial { coverage: f64 },

    #[error("initial row contains an unclassified particle `{0}`")]
    UnclassifiedInitial(String),

    #[error("weight rules are defined for one or two initial gliders, not {0}")]
    UnsupportedInitialState(usize),

    #[error("forcing target must be a settled catalogued state, got `{0}`")]
    InvalidForcingTarget(String),

    #[error("normalization impossible: every event with nonzero base probability has weight 0 under rule `{rule}`")]
    NormalizationImpossible { rule: String },

    #[error("distribution and table range over different events")]
    EventMismatch,

    #[error("catalog parse error on line {line}: {message}")]
    CatalogFormat { line: usize, message: String },

    #[error("catalog entry `{0}` does not reproduce itself after one period")]
    CatalogEntryInvalid(String),

    #[error("duplicate glider id `{0}`")]
    DuplicateGlider(String),

    #[error("cannot parse state fingerprint `{0}`")]
    StateFormat(String),

    #[error("could not start worker threads: {0}")]
    ThreadPool(String),
}

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("xml error at byte {position}: {message}")]
    Xml { position: u64, message: String },

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("class map line {line}: {message}")]
    ClassMap { line: usize, message: String },

    #[error("no active users: all profiles have zero activity")]
    NoActiveUsers,

    #[error("need at least {needed} profiles with activity, got {got}")]
    TooFewProfiles { needed: usize, got: usize },

    #[error("need at least {needed} distinct point values, got {got}")]
    TooFewDistinctPoints { needed: usize, got: usize },

    #[error("degenerate clustering: only {distinct} distinct centroids for k={k}")]
    DegenerateCentroids { distinct: usize, k: usize },

    #[error("degenerate group: one-way anova needs >= 2 observations per group")]
    DegenerateGroup,

    #[error("one-way anova needs >= 2 groups, got {0}")]
    TooFewGroups(usize),

    #[error("gold badge precedes silver for user {0} (data anomaly)")]
    GoldBeforeSilver(crate::types::UserId),

    #[error("degenerate labels: training requires examples of both classes")]
    DegenerateLabels,

    #[error("feature width mismatch: model expects {expected}, got {got}")]
    FeatureWidthMismatch { expected: usize, got: usize },

    #[error("invalid model config: {0}")]
    InvalidConfig(String),

    #[error("cross-validation impossible: class with {count} examples cannot fill {folds} folds")]
    UnstratifiableFolds { count: usize, folds: usize },

    #[error("unknown feature block {0:?}")]
    UnknownBlock(String),

    #[error("infeasible horizon: cohort {cohort:?} expects threshold crossing around day {expected_day}, horizon is {horizon} days")]
    InfeasibleHorizon {
        cohort: String,
        expected_day: i64,
        horizon: i64,
    },

    #[error("invalid cohort spec {cohort:?}: {message}")]
    InvalidCohort { cohort: String, message: String },

    #[error("model parse error at line {line}: {message}")]
    ModelParse { line: usize, message: String },

    #[error("{0}")]
    InvalidInput(String),
}

use thiserror::Error;

pub type Result<T, E = IaError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum IaError {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("index error: {0}")]
    Index(String),

    #[error("eigensolver did not converge: {0}")]
    Convergence(String),

    #[error("matrix is rank deficient: {0}")]
    RankDeficient(String),

    #[error("step size fell below the floor {gamma_min:e}")]
    StepFloorReached { gamma_min: f64 },

    #[error("receiver {k} sees {count} interferer(s); alignment angles need at least 2")]
    InsufficientInterferers { k: usize, count: usize },

    #[error("singular matrix: {0}")]
    SingularMatrix(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl IaError {
    /// Input problems (bad config, bad dimensions) as opposed to numerical
    /// failures during a run.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            IaError::Dimension(_) | IaError::Index(_) | IaError::Config(_) | IaError::Io(_)
        )
    }
}

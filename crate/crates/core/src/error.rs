use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("invalid rational literal {0:?}")]
    Rational(String),
    #[error("invalid Virasoro expression {input:?}: {reason}")]
    VirElement { input: String, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModeError {
    /// The L(1)/L(2) constraint system does not pin down the operator.
    #[error("SINGULAR_GRAM: constraint system for weight {k} at level {level} has a {nullity}-dimensional kernel")]
    SingularGram { k: u32, level: u32, nullity: usize },
    /// The constraints are inconsistent: the top projection itself must vanish.
    #[error("INCONSISTENT: constraints for weight {k} at level {level} force the top projection to vanish")]
    Inconsistent { k: u32, level: u32 },
    #[error("out of range: {0}")]
    OutOfRange(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("lattice degree mismatch: ({0},{1}) vs ({2},{3})")]
    DegreeMismatch(i64, i64, i64, i64),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CharacterError {
    #[error("INCONSISTENT_CHARACTER: negative primary multiplicity {value} at weight {weight}")]
    InconsistentCharacter { weight: usize, value: String },
    #[error("modular constructions disagree at q^{exponent}")]
    DualConstructionMismatch { exponent: i64 },
    #[error("precision {0} out of range")]
    Precision(usize),
}

use alloc::string::String;

/// Failures of the algebraic operations themselves.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    /// An operand does not belong to the model it was combined in.
    #[error("value {value} does not belong to model {model}")]
    Foreign { model: String, value: String },
    /// Integer arithmetic left the representable range.
    #[error("integer overflow in model {model}")]
    Overflow { model: String },
    /// Two rows with the same key disagree on an attribute.
    #[error("rows for key #{key} disagree on attribute `{attribute}`")]
    Conflict { key: usize, attribute: String },
    /// No granular in the carrier witnesses the named property.
    #[error("no granular witnesses {property} in model {model}")]
    NoWitness {
        property: &'static str,
        model: String,
    },
    /// The carrier is too large to scan.
    #[error("carrier of model {model} is not enumerable")]
    NotEnumerable { model: String },
}

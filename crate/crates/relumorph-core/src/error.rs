//! Error types, one enum per subsystem.

use alloc::string::String;
use core::fmt;

/// Errors from network validation, evaluation, and comparison.
#[derive(Debug, Clone, PartialEq)]
pub enum NetError {
    /// Adjacent layer dimensions do not chain at the given layer index.
    DimensionMismatch {
        layer: usize,
        expected: usize,
        found: usize,
    },
    /// A weight or bias is NaN or infinite.
    NonFiniteParameter {
        layer: usize,
        row: usize,
        col: usize,
        bias: bool,
    },
    /// The final layer must be identity-activated.
    InvalidFinalActivation,
    /// Input vector length does not match the network's input dimension.
    InputLength { expected: usize, found: usize },
    /// Two networks being compared have different input or output dimensions.
    ShapeMismatch,
    /// The evaluation box has a non-positive half-width or zero dimension.
    InvalidBox,
}

impl fmt::Display for NetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NetError::DimensionMismatch {
                layer,
                expected,
                found,
            } => write!(
                f,
                "dimension mismatch at layer {layer}: expected fan-in {expected}, found {found}"
            ),
            NetError::NonFiniteParameter {
                layer,
                row,
                col,
                bias,
            } => {
                let kind = if *bias { "bias" } else { "weight" };
                write!(
                    f,
                    "non-finite {kind} at layer {layer}, position ({row}, {col})"
                )
            }
            NetError::InvalidFinalActivation => {
                write!(f, "final layer must use the identity activation")
            }
            NetError::InputLength { expected, found } => {
                write!(
                    f,
                    "input length {found} does not match input_dim {expected}"
                )
            }
            NetError::ShapeMismatch => write!(f, "networks have different input/output dims"),
            NetError::InvalidBox => write!(f, "box half-width must be positive and finite"),
        }
    }
}

impl core::error::Error for NetError {}

/// Errors from the activation registry and classification.
#[derive(Debug, Clone, PartialEq)]
pub enum ActError {
    /// No registered activation under this name.
    UnknownActivation { name: String },
    /// A parameter is outside its admissible domain.
    InvalidParam {
        activation: String,
        param: String,
        value: f64,
        reason: &'static str,
    },
    /// A parameter key is not accepted by this activation.
    UnknownParam { activation: String, param: String },
    /// Derivative requested at a kink beyond the activation's smoothness.
    AtKink { x: f64, order: u32 },
    /// Numeric probing found no class witness for a user-defined activation.
    NotInA { name: String },
    /// Numeric tails of the normalized decomposition disagree with the
    /// registered limits.
    LimitMismatch {
        side: &'static str,
        expected: f64,
        found: f64,
    },
    /// The requested operation needs an S-shape decomposition the
    /// classification does not carry.
    NoDecomposition,
}

impl fmt::Display for ActError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ActError::UnknownActivation { name } => write!(f, "unknown activation '{name}'"),
            ActError::InvalidParam {
                activation,
                param,
                value,
                reason,
            } => {
                write!(
                    f,
                    "invalid parameter {param}={value} for {activation}: {reason}"
                )
            }
            ActError::UnknownParam { activation, param } => {
                write!(
                    f,
                    "activation {activation} does not accept parameter '{param}'"
                )
            }
            ActError::AtKink { x, order } => {
                write!(
                    f,
                    "derivative of order {order} does not exist at kink x={x}"
                )
            }
            ActError::NotInA { name } => {
                write!(
                    f,
                    "numeric probing found no admissible class witness for '{name}'"
                )
            }
            ActError::LimitMismatch {
                side,
                expected,
                found,
            } => {
                write!(
                    f,
                    "normalized tail at {side} is {found}, expected {expected}"
                )
            }
            ActError::NoDecomposition => {
                write!(f, "classification carries no S-shape decomposition")
            }
        }
    }
}

impl core::error::Error for ActError {}

/// Errors from gadget construction and calibration.
#[derive(Debug, Clone, PartialEq)]
pub enum GadgetError {
    /// Integer arguments too large for exact 64-bit evaluation.
    Overflow {
        n: u32,
    },
    /// Arguments violate an operation precondition (e.g. `i > n`).
    InvalidInput {
        reason: &'static str,
    },
    /// Difference step below the cancellation floor for this order.
    EtaTooSmall {
        eta: f64,
        floor: f64,
    },
    /// Product-gadget scale below the cancellation floor.
    EpsTooSmall {
        eps: f64,
        floor: f64,
    },
    /// No point with non-zero first derivative is available.
    NoSlopePoint,
    /// No point with non-zero second derivative is available.
    NoCurvaturePoint,
    /// The scale search hit the floating-point floor before reaching the
    /// requested tolerance; carries the best error achieved.
    CalibrationFailed {
        best_error: f64,
    },
    /// The gap function still grows at the grid boundary and no analytic tail
    /// is registered.
    Unbounded,
    /// The classification offers no class this constructor can use.
    NoUsableClass,
    /// Gap constants require an A2-tilde style decomposition.
    NotA2Tilde,
    Act(ActError),
}

impl fmt::Display for GadgetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GadgetError::Overflow { n } => write!(f, "n={n} exceeds exact 64-bit range (n <= 20)"),
            GadgetError::InvalidInput { reason } => write!(f, "invalid input: {reason}"),
            GadgetError::EtaTooSmall { eta, floor } => {
                write!(f, "step {eta} is below the cancellation floor {floor}")
            }
            GadgetError::EpsTooSmall { eps, floor } => {
                write!(f, "scale {eps} is below the cancellation floor {floor}")
            }
            GadgetError::NoSlopePoint => write!(f, "no usable point with non-zero slope"),
            GadgetError::NoCurvaturePoint => write!(f, "no usable point with non-zero curvature"),
            GadgetError::CalibrationFailed { best_error } => {
                write!(
                    f,
                    "calibration hit the float floor; best error {best_error:e}"
                )
            }
            GadgetError::Unbounded => write!(f, "gap function grows at the grid boundary"),
            GadgetError::NoUsableClass => write!(f, "no gadget construction applies to this class"),
            GadgetError::NotA2Tilde => write!(f, "gap constants need an S-shape decomposition"),
            GadgetError::Act(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for GadgetError {}

impl From<ActError> for GadgetError {
    fn from(e: ActError) -> Self {
        GadgetError::Act(e)
    }
}

/// Errors from the transpiler.
#[derive(Debug, Clone, PartialEq)]
pub enum TranspileError {
    /// A hidden layer of the host uses an activation other than ReLU.
    NotReLUHost {
        layer: usize,
    },
    /// The target activation is not in the admissible set.
    NotInA {
        name: String,
    },
    /// A gadget in `substitute` cannot be fused (wrong arity or mixed depths).
    UnfusableGadget {
        reason: &'static str,
    },
    Net(NetError),
    Gadget(GadgetError),
}

impl fmt::Display for TranspileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TranspileError::NotReLUHost { layer } => {
                write!(f, "host layer {layer} is not ReLU-activated")
            }
            TranspileError::NotInA { name } => {
                write!(f, "target activation '{name}' is not in the admissible set")
            }
            TranspileError::UnfusableGadget { reason } => write!(f, "unfusable gadget: {reason}"),
            TranspileError::Net(e) => write!(f, "{e}"),
            TranspileError::Gadget(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for TranspileError {}

impl From<NetError> for TranspileError {
    fn from(e: NetError) -> Self {
        TranspileError::Net(e)
    }
}

impl From<GadgetError> for TranspileError {
    fn from(e: GadgetError) -> Self {
        TranspileError::Gadget(e)
    }
}

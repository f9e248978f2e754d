//! File formats and reference tables for the relumorph CLI.
//!
//! The JSON network format is the interchange contract:
//!
//! ```json
//! {
//!   "input_dim": 1,
//!   "layers": [
//!     {"weights": [[1.0], [-1.0]], "bias": [0.0, 0.0], "activation": "relu"},
//!     {"weights": [[1.0, 1.0]], "bias": [0.0], "activation": "identity"}
//!   ]
//! }
//! ```
//!
//! Weights are row-major with rows = fan-out; an activation is `"relu"`,
//! `"identity"`, or `{"name": ..., "params": {...}}`. Numbers round-trip
//! bit-exactly (shortest round-trip decimal on output).

pub mod json;
pub mod reference;

pub use json::{
    classification_to_json, gadget_to_json, network_from_json, network_to_json, parse_network,
    read_network, report_to_json, serialize_network, write_gadget, write_network, write_report,
    JsonError,
};
pub use reference::{default_constant_rows, paper_reference};

//! Rewrites ReLU-activated feed-forward networks into networks using other
//! activation functions, with numerically verified sup-norm error.
//!
//! The crate is organized around four pieces:
//!
//! - [`net`]: a dense layer-based network IR with deterministic forward
//!   evaluation and a sampled sup-norm comparison between networks.
//! - [`act`]: a registry of activation functions (closed-form evaluation,
//!   analytic derivatives, class metadata) and the classification machinery
//!   that decides which emulation strategy applies to each activation.
//! - [`gadget`]: tiny scalar sub-networks that approximate ReLU, derivatives,
//!   the identity map, and two-input products, plus the calibration search
//!   that picks their scale parameters, and the single-neuron gap constants.
//! - [`mod@transpile`]: the rewriting pass that replaces every ReLU neuron
//!   of a host network by a calibrated gadget via affine fusion and verifies
//!   the result end to end.
//!
//! The crate is `no_std` + `alloc`; IO, file formats, and the CLI live in the
//! companion crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod act;
pub mod error;
pub(crate) mod fmath;
pub mod gadget;
pub mod net;
pub mod sample;
pub mod transpile;
pub(crate) mod util;

pub use act::{
    builtin, builtin_names, classify, s_shape_normalize, ActivationSpec, Classification,
    Membership, NormalizedDecomposition, SmoothnessHint,
};
pub use error::{ActError, GadgetError, NetError, TranspileError};
pub use gadget::{
    binom_alternating_sum, derivative_gadget, estimate_gap_constants, identity_gadget,
    product_gadget, relu_gadget, relu_gadget_with_scale, Gadget, GadgetClass, GadgetTarget,
    GapConstants, ProductForm,
};
pub use net::{
    eval_network, validate_network, ActivationTag, InputBox, Layer, Network, ShapeReport,
};
pub use sample::{sup_distance, BoxSampler};
pub use transpile::{
    estimate_layer_ranges, substitute, transpile, transpile_with, LayerRanges, TranspileOptions,
    TranspileReport,
};

// Networks, specs, classifications, and gadgets are immutable after
// construction; concurrent evaluation over sample batches relies on this.
#[cfg(test)]
mod thread_safety {
    fn assert_send_sync<T: Send + Sync>() {}

    #[test]
    fn shared_types_are_send_and_sync() {
        assert_send_sync::<crate::Network>();
        assert_send_sync::<crate::ActivationSpec>();
        assert_send_sync::<crate::Classification>();
        assert_send_sync::<crate::Gadget>();
        assert_send_sync::<crate::TranspileReport>();
    }
}

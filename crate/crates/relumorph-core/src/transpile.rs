//! The rewriting pass: estimate per-layer pre-activation ranges, calibrate
//! one ReLU gadget per layer, fuse it into every neuron, and verify the
//! rewritten network against the host with the sampled sup distance.

use crate::act::{classify, ActKind, ActivationSpec, Classification};
use crate::error::{GadgetError, TranspileError};
use crate::gadget::{relu_gadget, relu_gadget_forced, Gadget, GadgetClass};
use crate::net::InputBox;
use crate::net::{eval_tracking_preacts, validate_network, ActivationTag, Layer, Network};
use crate::sample::{sup_distance, BoxSampler};
use alloc::borrow::ToOwned;
use alloc::vec;
use alloc::vec::Vec;

/// Per-hidden-layer bound `M_l` such that sampled pre-activations satisfy
/// `|h_l(x)| <= M_l` with slack for gadget-induced drift.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerRanges {
    pub m: Vec<f64>,
}

/// Options for [`transpile_with`].
#[derive(Debug, Clone)]
pub struct TranspileOptions {
    /// Force a specific gadget class instead of the priority dispatch.
    pub force_class: Option<GadgetClass>,
    /// Base sample count; range estimation uses it directly and the final
    /// verification uses five times it (so at least 10x samples in total).
    pub n_samples: usize,
    /// Budget-loop rounds; the per-neuron tolerance halves each round.
    pub max_rounds: u32,
}

impl Default for TranspileOptions {
    fn default() -> Self {
        TranspileOptions {
            force_class: None,
            n_samples: 10_000,
            max_rounds: 8,
        }
    }
}

/// Per-layer entry of the transpile report.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerReport {
    pub m: f64,
    pub gadget_scale: f64,
    pub gadget_error: f64,
}

/// Outcome of a transpilation run.
#[derive(Debug, Clone, PartialEq)]
pub struct TranspileReport {
    pub eps_requested: f64,
    /// Sampled sup distance between host and output (a lower estimate of the
    /// true sup distance).
    pub sup_error_sampled: f64,
    /// (width_out / width_in, depth_out / depth_in).
    pub factors: [f64; 2],
    pub rounds: u32,
    pub per_layer: Vec<LayerReport>,
    pub seed: u64,
    pub width_in: usize,
    pub width_out: usize,
    pub depth_in: usize,
    pub depth_out: usize,
}

/// Sample the box and bound each hidden layer's pre-activations:
/// `M_l = max(1, 1.5 * sampled max |h_l|) + 1`.
pub fn estimate_layer_ranges(
    net: &Network,
    boxed: &InputBox,
    n_samples: usize,
    seed: u64,
) -> Result<LayerRanges, TranspileError> {
    validate_network(net)?;
    if boxed.dim != net.input_dim {
        return Err(TranspileError::Net(crate::error::NetError::ShapeMismatch));
    }
    let mut max_abs = vec![0.0f64; net.depth()];
    let sampler = BoxSampler::new(*boxed, n_samples, seed);
    sampler.for_each(|x| {
        eval_tracking_preacts(net, x, &mut max_abs);
    });
    let m = max_abs.iter().map(|&a| (1.5 * a).max(1.0) + 1.0).collect();
    Ok(LayerRanges { m })
}

/// Replace every neuron of hidden layer `layer` with its gadget by affine
/// fusion: the gadget's inner affine folds into the host layer's rows and its
/// output combination folds into the next layer's columns. Depth-1 gadgets
/// preserve host depth; depth-2 gadgets insert one hidden layer.
pub fn substitute(
    net: &Network,
    layer: usize,
    gadgets: &[Gadget],
    target: &ActivationSpec,
) -> Result<Network, TranspileError> {
    let depth = net.depth();
    if layer >= depth {
        return Err(TranspileError::UnfusableGadget {
            reason: "layer index is not hidden",
        });
    }
    let host = &net.layers[layer];
    if host.activation != ActivationTag::Relu {
        return Err(TranspileError::NotReLUHost { layer });
    }
    if gadgets.len() != host.rows() {
        return Err(TranspileError::UnfusableGadget {
            reason: "need one gadget per neuron",
        });
    }
    let gdepth = gadgets[0].net.depth();
    let expected_tag = expected_hidden_tag(target);
    for g in gadgets {
        if g.net.input_dim != 1 || g.net.output_dim() != 1 {
            return Err(TranspileError::UnfusableGadget {
                reason: "gadget must be scalar",
            });
        }
        if g.net.depth() != gdepth || !(1..=2).contains(&gdepth) {
            return Err(TranspileError::UnfusableGadget {
                reason: "mixed or invalid gadget depth",
            });
        }
        for l in &g.net.layers[..gdepth] {
            if l.activation != expected_tag {
                return Err(TranspileError::UnfusableGadget {
                    reason: "gadget activation does not match the target",
                });
            }
        }
    }

    let next = &net.layers[layer + 1];
    let mut out_layers: Vec<Layer> = net.layers[..layer].to_vec();

    // First fused layer: gadget input affine applied to host pre-activations.
    let mut w_a: Vec<Vec<f64>> = Vec::new();
    let mut b_a: Vec<f64> = Vec::new();
    for (j, g) in gadgets.iter().enumerate() {
        let g0 = &g.net.layers[0];
        for i in 0..g0.rows() {
            let a = g0.weights[i][0];
            let row: Vec<f64> = host.weights[j].iter().map(|w| a * w).collect();
            w_a.push(row);
            b_a.push(a * host.bias[j] + g0.bias[i]);
        }
    }
    out_layers.push(Layer::new(w_a, b_a, expected_tag.clone()));

    // Optional second fused layer: block-diagonal gadget mid affine.
    if gdepth == 2 {
        let total_in: usize = gadgets.iter().map(|g| g.net.layers[0].rows()).sum();
        let total_out: usize = gadgets.iter().map(|g| g.net.layers[1].rows()).sum();
        let mut w_b = vec![vec![0.0; total_in]; total_out];
        let mut b_b = Vec::with_capacity(total_out);
        let mut col0 = 0usize;
        let mut row0 = 0usize;
        for g in gadgets {
            let g1 = &g.net.layers[1];
            for r in 0..g1.rows() {
                for c in 0..g1.cols() {
                    w_b[row0 + r][col0 + c] = g1.weights[r][c];
                }
                b_b.push(g1.bias[r]);
            }
            col0 += g1.cols();
            row0 += g1.rows();
        }
        out_layers.push(Layer::new(w_b, b_b, expected_tag.clone()));
    }

    // Next host layer: gadget output combinations fold into its columns.
    let g_out_width: Vec<usize> = gadgets
        .iter()
        .map(|g| g.net.layers[gdepth].cols())
        .collect();
    let fused_cols: usize = g_out_width.iter().sum();
    let mut w_n = vec![vec![0.0; fused_cols]; next.rows()];
    let mut b_n = next.bias.clone();
    for (r, row) in w_n.iter_mut().enumerate() {
        let mut col0 = 0usize;
        for (j, g) in gadgets.iter().enumerate() {
            let go = &g.net.layers[gdepth];
            let host_w = next.weights[r][j];
            for (i, slot) in row[col0..col0 + g_out_width[j]].iter_mut().enumerate() {
                *slot = host_w * go.weights[0][i];
            }
            b_n[r] += host_w * go.bias[0];
            col0 += g_out_width[j];
        }
    }
    out_layers.push(Layer::new(w_n, b_n, next.activation.clone()));
    out_layers.extend_from_slice(&net.layers[layer + 2..]);

    Ok(Network {
        input_dim: net.input_dim,
        layers: out_layers,
    })
}

fn expected_hidden_tag(target: &ActivationSpec) -> ActivationTag {
    if matches!(target.kind(), ActKind::Relu) {
        ActivationTag::Relu
    } else {
        ActivationTag::Spec(target.clone())
    }
}

/// Rewrite a ReLU host into an epsilon-equivalent network over the target
/// activation, with default options.
pub fn transpile(
    net: &Network,
    target: &ActivationSpec,
    boxed: &InputBox,
    eps: f64,
    seed: u64,
) -> Result<(Network, TranspileReport), TranspileError> {
    transpile_with(net, target, boxed, eps, seed, &TranspileOptions::default())
}

/// Rewrite a ReLU host into an epsilon-equivalent network over the target
/// activation.
///
/// Budget loop: per-neuron tolerance starts at `eps / (2 * neuron count)`,
/// one gadget is calibrated per layer on that layer's range bound and shared
/// across its neurons, and the assembled network is verified end to end; on
/// failure the tolerance halves, up to `max_rounds` rounds. Returns the best
/// network found with the full report even if the target `eps` was not met
/// (the report's `sup_error_sampled` tells).
pub fn transpile_with(
    net: &Network,
    target: &ActivationSpec,
    boxed: &InputBox,
    eps: f64,
    seed: u64,
    opts: &TranspileOptions,
) -> Result<(Network, TranspileReport), TranspileError> {
    let shape_in = validate_network(net)?;
    if eps <= 0.0 || eps.is_nan() {
        return Err(TranspileError::Gadget(GadgetError::InvalidInput {
            reason: "eps must be positive",
        }));
    }
    for (li, layer) in net.layers[..net.depth()].iter().enumerate() {
        if layer.activation != ActivationTag::Relu {
            return Err(TranspileError::NotReLUHost { layer: li });
        }
    }
    let cls: Classification = classify(target).map_err(|_| TranspileError::NotInA {
        name: target.name().to_owned(),
    })?;
    if cls.memberships.is_empty() {
        return Err(TranspileError::NotInA {
            name: target.name().to_owned(),
        });
    }

    let total_neurons: usize = net.layers[..net.depth()].iter().map(Layer::rows).sum();
    if total_neurons == 0 {
        let report = TranspileReport {
            eps_requested: eps,
            sup_error_sampled: 0.0,
            factors: [1.0, 1.0],
            rounds: 0,
            per_layer: Vec::new(),
            seed,
            width_in: shape_in.width,
            width_out: shape_in.width,
            depth_in: shape_in.depth,
            depth_out: shape_in.depth,
        };
        return Ok((net.clone(), report));
    }

    let ranges = estimate_layer_ranges(net, boxed, opts.n_samples, seed)?;
    let mut tau = eps / (2.0 * total_neurons as f64);
    let mut best: Option<(Network, f64, Vec<LayerReport>, u32)> = None;

    for round in 1..=opts.max_rounds.max(1) {
        let mut per_layer = Vec::with_capacity(net.depth());
        let mut gadget_per_layer: Vec<Gadget> = Vec::with_capacity(net.depth());
        let mut calibration_failed = None;
        for &m_l in &ranges.m {
            let built = match opts.force_class {
                Some(class) => relu_gadget_forced(&cls, m_l, tau, class),
                None => relu_gadget(&cls, m_l, tau),
            };
            match built {
                Ok(g) => {
                    per_layer.push(LayerReport {
                        m: m_l,
                        gadget_scale: g.scale_param,
                        gadget_error: g.reported_error,
                    });
                    gadget_per_layer.push(g);
                }
                Err(e) => {
                    calibration_failed = Some(e);
                    break;
                }
            }
        }
        if let Some(e) = calibration_failed {
            if best.is_some() {
                break; // keep the best verified candidate
            }
            return Err(e.into());
        }

        let mut out = net.clone();
        let mut offset = 0usize;
        for (l, g) in gadget_per_layer.iter().enumerate() {
            let rows = net.layers[l].rows();
            let gadgets = vec![g.clone(); rows];
            out = substitute(&out, l + offset, &gadgets, target)?;
            if g.net.depth() == 2 {
                offset += 1;
            }
        }
        let err = sup_distance(net, &out, boxed, 5 * opts.n_samples, seed)?;
        let better = best.as_ref().is_none_or(|(_, e, _, _)| err < *e);
        if better {
            best = Some((out, err, per_layer, round));
        }
        if err < eps {
            break;
        }
        tau *= 0.5;
    }

    let (out, err, per_layer, rounds) = best.expect("at least one round ran");
    let shape_out = validate_network(&out)?;
    let report = TranspileReport {
        eps_requested: eps,
        sup_error_sampled: err,
        factors: [
            shape_out.width as f64 / shape_in.width as f64,
            shape_out.depth as f64 / shape_in.depth as f64,
        ],
        rounds,
        per_layer,
        seed,
        width_in: shape_in.width,
        width_out: shape_out.width,
        depth_in: shape_in.depth,
        depth_out: shape_out.depth,
    };
    Ok((out, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::act::builtin;
    use crate::net::eval_network;

    fn abs_net() -> Network {
        Network {
            input_dim: 1,
            layers: vec![
                Layer::new(
                    vec![vec![1.0], vec![-1.0]],
                    vec![0.0, 0.0],
                    ActivationTag::Relu,
                ),
                Layer::new(vec![vec![1.0, 1.0]], vec![0.0], ActivationTag::Identity),
            ],
        }
    }

    fn single_relu_net() -> Network {
        Network {
            input_dim: 1,
            layers: vec![
                Layer::new(vec![vec![1.0]], vec![0.0], ActivationTag::Relu),
                Layer::new(vec![vec![1.0]], vec![0.0], ActivationTag::Identity),
            ],
        }
    }

    #[test]
    fn two_input_gadgets_cannot_be_fused() {
        let relu = builtin("relu", &[]).unwrap();
        let sigmoid_cls = crate::act::classify(&builtin("sigmoid", &[]).unwrap()).unwrap();
        let product = crate::gadget::product_gadget(&sigmoid_cls, 1e-2).unwrap();
        let host = single_relu_net();
        assert!(matches!(
            substitute(&host, 0, &[product], &relu),
            Err(TranspileError::UnfusableGadget { .. })
        ));
        // Wrong gadget count is rejected too.
        let g = crate::gadget::relu_gadget(&crate::act::classify(&relu).unwrap(), 1.0, 1e-6)
            .unwrap();
        assert!(matches!(
            substitute(&host, 0, &[g.clone(), g], &relu),
            Err(TranspileError::UnfusableGadget { .. })
        ));
    }

    #[test]
    fn single_neuron_range_matches_the_slack_formula() {
        let net = single_relu_net();
        let b = InputBox::new(1.0, 1).unwrap();
        let r = estimate_layer_ranges(&net, &b, 512, 1).unwrap();
        // exact max |x| = 1 on the box (hit at a corner) -> 1.5 * 1 + 1
        assert_eq!(r.m, vec![2.5]);
    }

    #[test]
    fn zero_weight_layer_range_comes_from_the_bias() {
        let net = Network {
            input_dim: 1,
            layers: vec![
                Layer::new(vec![vec![0.0]], vec![3.0], ActivationTag::Relu),
                Layer::new(vec![vec![1.0]], vec![0.0], ActivationTag::Identity),
            ],
        };
        let b = InputBox::new(1.0, 1).unwrap();
        let r = estimate_layer_ranges(&net, &b, 128, 1).unwrap();
        assert_eq!(r.m, vec![1.5 * 3.0 + 1.0]);
    }

    #[test]
    fn ranges_are_monotone_under_weight_scaling() {
        let host = abs_net();
        let mut scaled = host.clone();
        for row in scaled.layers[0].weights.iter_mut() {
            for w in row.iter_mut() {
                *w *= 3.0;
            }
        }
        let b = InputBox::new(1.0, 1).unwrap();
        let r1 = estimate_layer_ranges(&host, &b, 512, 9).unwrap();
        let r2 = estimate_layer_ranges(&scaled, &b, 512, 9).unwrap();
        assert!(r2.m[0] >= r1.m[0]);
    }

    #[test]
    fn exact_gadget_substitution_reproduces_the_host() {
        // A pass-through ReLU gadget: substitution must be the identity
        // rewrite up to fused-affine rounding.
        let relu = builtin("relu", &[]).unwrap();
        let host = abs_net();
        let g =
            crate::gadget::relu_gadget(&crate::act::classify(&relu).unwrap(), 2.0, 1e-9).unwrap();
        let out = substitute(&host, 0, &[g.clone(), g], &relu).unwrap();
        assert_eq!(validate_network(&out).unwrap().width, 2);
        let mut rng = crate::util::SplitMix64::new(5);
        for _ in 0..200 {
            let x = [rng.next_in_box(1.0)];
            let a = eval_network(&host, &x).unwrap()[0];
            let b = eval_network(&out, &x).unwrap()[0];
            assert_eq!(a, b);
        }
    }

    #[test]
    fn relu_target_returns_the_identical_network() {
        let relu = builtin("relu", &[]).unwrap();
        let host = abs_net();
        let b = InputBox::new(1.0, 1).unwrap();
        let (out, report) = transpile(&host, &relu, &b, 1e-2, 7).unwrap();
        assert_eq!(report.sup_error_sampled, 0.0);
        assert_eq!(report.factors, [1.0, 1.0]);
        let mut rng = crate::util::SplitMix64::new(13);
        for _ in 0..100 {
            let x = [rng.next_in_box(1.0)];
            assert_eq!(
                eval_network(&host, &x).unwrap()[0],
                eval_network(&out, &x).unwrap()[0]
            );
        }
    }

    #[test]
    fn abs_net_to_gelu_keeps_width_and_meets_eps() {
        let gelu = builtin("gelu", &[]).unwrap();
        let host = abs_net();
        let b = InputBox::new(1.0, 1).unwrap();
        let (out, report) = transpile(&host, &gelu, &b, 1e-2, 3).unwrap();
        assert!(
            report.sup_error_sampled < 1e-2,
            "err = {}",
            report.sup_error_sampled
        );
        assert_eq!(report.factors, [1.0, 1.0]);
        assert_eq!(validate_network(&out).unwrap().width, 2);
    }

    #[test]
    fn abs_net_to_sigmoid_is_within_the_three_two_factors() {
        let sigmoid = builtin("sigmoid", &[]).unwrap();
        let host = abs_net();
        let b = InputBox::new(1.0, 1).unwrap();
        let (out, report) = transpile(&host, &sigmoid, &b, 1e-2, 3).unwrap();
        assert!(
            report.sup_error_sampled < 1e-2,
            "err = {}",
            report.sup_error_sampled
        );
        let shape = validate_network(&out).unwrap();
        assert!(shape.width <= 6);
        assert_eq!(shape.depth, 2);
        assert!(report.factors[0] <= 3.0 && report.factors[1] <= 2.0);
    }

    #[test]
    fn non_relu_hosts_are_rejected() {
        let mut host = abs_net();
        host.layers[0].activation = ActivationTag::Spec(builtin("tanh", &[]).unwrap());
        let gelu = builtin("gelu", &[]).unwrap();
        let b = InputBox::new(1.0, 1).unwrap();
        assert!(matches!(
            transpile(&host, &gelu, &b, 1e-2, 0),
            Err(TranspileError::NotReLUHost { layer: 0 })
        ));
    }

    #[test]
    fn affine_only_hosts_pass_through() {
        let host = Network {
            input_dim: 2,
            layers: vec![Layer::new(
                vec![vec![1.0, -1.0]],
                vec![0.25],
                ActivationTag::Identity,
            )],
        };
        let gelu = builtin("gelu", &[]).unwrap();
        let b = InputBox::new(1.0, 2).unwrap();
        let (out, report) = transpile(&host, &gelu, &b, 1e-3, 0).unwrap();
        assert_eq!(out, host);
        assert_eq!(report.sup_error_sampled, 0.0);
    }

    #[test]
    fn report_factors_agree_with_validate_ratios() {
        let silu = builtin("silu", &[]).unwrap();
        let host = abs_net();
        let b = InputBox::new(1.0, 1).unwrap();
        let (out, report) = transpile(&host, &silu, &b, 1e-2, 21).unwrap();
        let si = validate_network(&host).unwrap();
        let so = validate_network(&out).unwrap();
        assert_eq!(report.factors[0], so.width as f64 / si.width as f64);
        assert_eq!(report.factors[1], so.depth as f64 / si.depth as f64);
        assert_eq!((report.width_out, report.depth_out), (so.width, so.depth));
    }
}

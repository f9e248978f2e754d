//! JSON schemas for networks, gadgets, reports, and classifications, plus
//! conversion to and from the core types.

use relumorph_core::act::{builtin, ActivationSpec, Classification, Membership};
use relumorph_core::gadget::{Gadget, GadgetTarget};
use relumorph_core::net::{ActivationTag, Layer, Network};
use relumorph_core::transpile::TranspileReport;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

/// Errors from reading or writing the JSON formats.
#[derive(Debug)]
pub enum JsonError {
    /// Malformed JSON text.
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    /// Well-formed JSON that does not match the schema or the registry.
    Schema {
        message: String,
    },
    /// The value cannot be represented in the format (custom activations).
    Unsupported {
        message: String,
    },
    Io(std::io::Error),
}

impl fmt::Display for JsonError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JsonError::Parse {
                line,
                column,
                message,
            } => {
                write!(f, "parse error at line {line}, column {column}: {message}")
            }
            JsonError::Schema { message } => write!(f, "schema error: {message}"),
            JsonError::Unsupported { message } => write!(f, "unsupported: {message}"),
            JsonError::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl std::error::Error for JsonError {}

impl From<std::io::Error> for JsonError {
    fn from(e: std::io::Error) -> Self {
        JsonError::Io(e)
    }
}

fn from_serde(e: serde_json::Error) -> JsonError {
    match e.classify() {
        serde_json::error::Category::Data => JsonError::Schema {
            message: e.to_string(),
        },
        _ => JsonError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        },
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ActivationJson {
    Literal(String),
    Reference {
        name: String,
        #[serde(default)]
        params: BTreeMap<String, f64>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LayerJson {
    pub weights: Vec<Vec<f64>>,
    pub bias: Vec<f64>,
    pub activation: ActivationJson,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NetworkJson {
    pub input_dim: usize,
    pub layers: Vec<LayerJson>,
}

fn tag_to_json(tag: &ActivationTag) -> Result<ActivationJson, JsonError> {
    match tag {
        ActivationTag::Relu => Ok(ActivationJson::Literal("relu".into())),
        ActivationTag::Identity => Ok(ActivationJson::Literal("identity".into())),
        ActivationTag::Spec(spec) => {
            if matches!(spec.kind(), relumorph_core::act::ActKind::Custom(_)) {
                return Err(JsonError::Unsupported {
                    message: format!("custom activation '{}' has no JSON form", spec.name()),
                });
            }
            Ok(ActivationJson::Reference {
                name: spec.name().to_string(),
                params: spec.params().into_iter().collect(),
            })
        }
    }
}

fn tag_from_json(a: &ActivationJson) -> Result<ActivationTag, JsonError> {
    match a {
        ActivationJson::Literal(s) if s == "relu" => Ok(ActivationTag::Relu),
        ActivationJson::Literal(s) if s == "identity" => Ok(ActivationTag::Identity),
        ActivationJson::Literal(s) => Err(JsonError::Schema {
            message: format!("bare activation '{s}' must be \"relu\" or \"identity\""),
        }),
        ActivationJson::Reference { name, params } => {
            let params: Vec<(String, f64)> = params.iter().map(|(k, v)| (k.clone(), *v)).collect();
            let spec = builtin(name, &params).map_err(|e| JsonError::Schema {
                message: e.to_string(),
            })?;
            Ok(ActivationTag::Spec(spec))
        }
    }
}

pub fn network_to_json(net: &Network) -> Result<NetworkJson, JsonError> {
    let mut layers = Vec::with_capacity(net.layers.len());
    for l in &net.layers {
        layers.push(LayerJson {
            weights: l.weights.clone(),
            bias: l.bias.clone(),
            activation: tag_to_json(&l.activation)?,
        });
    }
    Ok(NetworkJson {
        input_dim: net.input_dim,
        layers,
    })
}

pub fn network_from_json(doc: &NetworkJson) -> Result<Network, JsonError> {
    let mut layers = Vec::with_capacity(doc.layers.len());
    for l in &doc.layers {
        layers.push(Layer::new(
            l.weights.clone(),
            l.bias.clone(),
            tag_from_json(&l.activation)?,
        ));
    }
    Ok(Network {
        input_dim: doc.input_dim,
        layers,
    })
}

/// Serialize a network to JSON text (numbers in shortest round-trip form).
pub fn serialize_network(net: &Network) -> Result<String, JsonError> {
    let doc = network_to_json(net)?;
    serde_json::to_string_pretty(&doc).map_err(from_serde)
}

/// Parse JSON text into a network. Round-trips [`serialize_network`]
/// bit-exactly.
pub fn parse_network(text: &str) -> Result<Network, JsonError> {
    let doc: NetworkJson = serde_json::from_str(text).map_err(from_serde)?;
    network_from_json(&doc)
}

pub fn read_network(path: &Path) -> Result<Network, JsonError> {
    parse_network(&std::fs::read_to_string(path)?)
}

pub fn write_network(path: &Path, net: &Network) -> Result<(), JsonError> {
    let mut text = serialize_network(net)?;
    text.push('\n');
    Ok(std::fs::write(path, text)?)
}

// ---------------------------------------------------------------------------
// Gadgets
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GadgetMetadataJson {
    pub target: String,
    pub scale_param: f64,
    pub domain_half_width: f64,
    pub reported_error: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GadgetJson {
    #[serde(flatten)]
    pub net: NetworkJson,
    pub metadata: GadgetMetadataJson,
}

pub fn gadget_to_json(gadget: &Gadget) -> Result<GadgetJson, JsonError> {
    let target = match gadget.target {
        GadgetTarget::Relu => "relu".to_string(),
        GadgetTarget::Identity => "identity".to_string(),
        GadgetTarget::Product => "product".to_string(),
        GadgetTarget::Derivative(k) => format!("derivative({k})"),
    };
    Ok(GadgetJson {
        net: network_to_json(&gadget.net)?,
        metadata: GadgetMetadataJson {
            target,
            scale_param: gadget.scale_param,
            domain_half_width: gadget.domain_half_width,
            reported_error: gadget.reported_error,
        },
    })
}

pub fn write_gadget(path: &Path, gadget: &Gadget) -> Result<(), JsonError> {
    let doc = gadget_to_json(gadget)?;
    let mut text = serde_json::to_string_pretty(&doc).map_err(from_serde)?;
    text.push('\n');
    Ok(std::fs::write(path, text)?)
}

// ---------------------------------------------------------------------------
// Transpile reports
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LayerReportJson {
    #[serde(rename = "M")]
    pub m: f64,
    pub gadget_scale: f64,
    pub gadget_error: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportJson {
    pub eps_requested: f64,
    pub sup_error_sampled: f64,
    pub factors: [f64; 2],
    pub rounds: u32,
    pub per_layer: Vec<LayerReportJson>,
    pub seed: u64,
    pub width_in: usize,
    pub width_out: usize,
    pub depth_in: usize,
    pub depth_out: usize,
}

pub fn report_to_json(r: &TranspileReport) -> ReportJson {
    ReportJson {
        eps_requested: r.eps_requested,
        sup_error_sampled: r.sup_error_sampled,
        factors: r.factors,
        rounds: r.rounds,
        per_layer: r
            .per_layer
            .iter()
            .map(|l| LayerReportJson {
                m: l.m,
                gadget_scale: l.gadget_scale,
                gadget_error: l.gadget_error,
            })
            .collect(),
        seed: r.seed,
        width_in: r.width_in,
        width_out: r.width_out,
        depth_in: r.depth_in,
        depth_out: r.depth_out,
    }
}

pub fn write_report(path: &Path, r: &TranspileReport) -> Result<(), JsonError> {
    let mut text = serde_json::to_string_pretty(&report_to_json(r)).map_err(from_serde)?;
    text.push('\n');
    Ok(std::fs::write(path, text)?)
}

// ---------------------------------------------------------------------------
// Classifications
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct MembershipJson {
    pub class: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<u32>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PointJson {
    pub x: f64,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassificationJson {
    pub activation: String,
    pub params: BTreeMap<String, f64>,
    pub memberships: Vec<MembershipJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kink: Option<KinkJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_decomp: Option<SDecompJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub asymptotes: Option<AsymptotesJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curvature_point: Option<PointJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slope_point: Option<PointJson>,
    pub probed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct KinkJson {
    pub x0: f64,
    pub order: u32,
    pub l1: f64,
    pub l2: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SDecompJson {
    pub b0: f64,
    pub b1: f64,
    pub l1: f64,
    pub l2: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AsymptotesJson {
    pub l1: f64,
    pub l2: f64,
}

pub fn classification_to_json(spec: &ActivationSpec, cls: &Classification) -> ClassificationJson {
    ClassificationJson {
        activation: spec.name().to_string(),
        params: spec.params().into_iter().collect(),
        memberships: cls
            .memberships
            .iter()
            .map(|m| match m {
                Membership::A1k(k) => MembershipJson {
                    class: "a1k".into(),
                    order: Some(*k),
                },
                Membership::A2 => MembershipJson {
                    class: "a2".into(),
                    order: None,
                },
                Membership::A2Tilde => MembershipJson {
                    class: "a2tilde".into(),
                    order: None,
                },
                Membership::A3 => MembershipJson {
                    class: "a3".into(),
                    order: None,
                },
            })
            .collect(),
        kink: cls.kink.map(|k| KinkJson {
            x0: k.x0,
            order: k.order,
            l1: k.l1,
            l2: k.l2,
        }),
        s_decomp: cls.s_decomp.as_ref().map(|d| SDecompJson {
            b0: d.b0,
            b1: d.b1,
            l1: d.l1,
            l2: d.l2,
        }),
        asymptotes: cls
            .asymptotes
            .map(|a| AsymptotesJson { l1: a.l1, l2: a.l2 }),
        curvature_point: cls.curvature_point.map(|p| PointJson {
            x: p.x,
            value: p.value,
        }),
        slope_point: cls.slope_point.map(|p| PointJson {
            x: p.x,
            value: p.value,
        }),
        probed: cls.probed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn missing_bias_is_a_schema_error() {
        let text = r#"{"input_dim": 1, "layers": [{"weights": [[1.0]], "activation": "relu"}]}"#;
        match parse_network(text) {
            Err(JsonError::Schema { message }) => assert!(message.contains("bias")),
            other => panic!("expected schema error, got {other:?}"),
        }
    }

    #[test]
    fn malformed_text_is_a_parse_error_with_location() {
        match parse_network("{\"input_dim\": 1,\n  \"layers\": [") {
            Err(JsonError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_bare_activation_is_rejected() {
        let text = r#"{"input_dim": 1, "layers": [{"weights": [[1.0]], "bias": [0.0], "activation": "gelu"}]}"#;
        assert!(matches!(parse_network(text), Err(JsonError::Schema { .. })));
    }

    #[test]
    fn custom_activations_have_no_json_form() {
        use relumorph_core::act::{ActivationSpec, CustomActivation, SmoothnessHint};
        use std::sync::Arc;
        let net = Network {
            input_dim: 1,
            layers: vec![
                Layer::new(
                    vec![vec![1.0]],
                    vec![0.0],
                    ActivationTag::Spec(ActivationSpec::custom(CustomActivation {
                        name: "mine".into(),
                        f: Arc::new(|x| x),
                        d1: None,
                        d2: None,
                        smoothness: SmoothnessHint::Smooth,
                    })),
                ),
                Layer::new(vec![vec![1.0]], vec![0.0], ActivationTag::Identity),
            ],
        };
        assert!(matches!(
            serialize_network(&net),
            Err(JsonError::Unsupported { .. })
        ));
    }

    #[test]
    fn tenth_survives_a_round_trip_bit_exactly() {
        let net = Network {
            input_dim: 1,
            layers: vec![Layer::new(
                vec![vec![0.1]],
                vec![-0.3],
                ActivationTag::Identity,
            )],
        };
        let text = serialize_network(&net).unwrap();
        let back = parse_network(&text).unwrap();
        assert_eq!(back.layers[0].weights[0][0].to_bits(), 0.1f64.to_bits());
        assert_eq!(back.layers[0].bias[0].to_bits(), (-0.3f64).to_bits());
    }
}

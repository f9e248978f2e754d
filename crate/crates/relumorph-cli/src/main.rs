//! Command-line interface: classify activations, estimate gap constants,
//! build gadgets and curve data, transpile networks, and compare networks.
//!
//! Exit codes: 0 success, 1 tolerance/constant failure, 2 usage or contract
//! error.

use clap::{Parser, Subcommand, ValueEnum};
use relumorph_cli::{
    classification_to_json, default_constant_rows, gadget_to_json, paper_reference, read_network,
    write_gadget, write_network, write_report, JsonError,
};
use relumorph_core::act::{builtin, classify, ActivationSpec};
use relumorph_core::error::{ActError, GadgetError, TranspileError};
use relumorph_core::gadget::{
    derivative_gadget, estimate_gap_constants, identity_gadget, product_gadget, relu_gadget,
    relu_gadget_forced, relu_gadget_with_scale, Gadget, GadgetClass,
};
use relumorph_core::net::InputBox;
use relumorph_core::sample::{sup_distance, BoxSampler};
use relumorph_core::transpile::{transpile_with, TranspileOptions};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "relumorph",
    version,
    about = "Rewrite ReLU networks over other activations with sampled sup-norm verification"
)]
struct Cli {
    /// Machine-readable JSON output (errors go to stderr as JSON too).
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TargetArg {
    Relu,
    Identity,
    Product,
    Derivative,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ClassArg {
    A2tilde,
    A2,
    A1k,
    A3,
}

impl From<ClassArg> for GadgetClass {
    fn from(c: ClassArg) -> Self {
        match c {
            ClassArg::A2tilde => GadgetClass::A2Tilde,
            ClassArg::A2 => GadgetClass::A2,
            ClassArg::A1k => GadgetClass::A1k,
            ClassArg::A3 => GadgetClass::A3,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Classify an activation and print its class witnesses as JSON.
    Classify {
        /// Activation name from the registry.
        #[arg(long)]
        act: String,
        /// Activation parameter, repeatable: --param alpha=1.5
        #[arg(long = "param", value_parser = parse_kv)]
        params: Vec<(String, f64)>,
    },
    /// Estimate single-neuron gap constants and grade them against the
    /// reference table (gate: absolute deviation 1e-3).
    Constants {
        /// Activation names; defaults to the standard ten rows.
        names: Vec<String>,
    },
    /// Build a single gadget and print or write it as JSON.
    Gadget {
        #[arg(long)]
        act: String,
        #[arg(long = "param", value_parser = parse_kv)]
        params: Vec<(String, f64)>,
        /// What the gadget approximates.
        #[arg(long, value_enum, default_value = "relu")]
        target: TargetArg,
        /// Domain half-width M.
        #[arg(short = 'M', long, default_value_t = 5.0)]
        half_width: f64,
        /// Calibrate a ReLU gadget to this tolerance.
        #[arg(long, conflicts_with = "scale")]
        tol: Option<f64>,
        /// Fixed scale parameter (1/K for single-neuron gadgets, step size
        /// for the others).
        #[arg(long)]
        scale: Option<f64>,
        /// Derivative order for --target derivative.
        #[arg(long, default_value_t = 1)]
        order: u32,
        /// Force a ReLU-gadget class instead of the priority dispatch.
        #[arg(long, value_enum)]
        class: Option<ClassArg>,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit CSV columns x,phi,relu for a single-neuron ReLU gadget on a
    /// 2001-point grid over [-M, M].
    Curve {
        #[arg(long)]
        act: String,
        #[arg(long = "param", value_parser = parse_kv)]
        params: Vec<(String, f64)>,
        /// Gain K of the gadget (scale parameter 1/K).
        #[arg(short = 'K', long, default_value_t = 10.0)]
        gain: f64,
        #[arg(short = 'M', long, default_value_t = 5.0)]
        half_width: f64,
        #[arg(long, value_enum)]
        class: Option<ClassArg>,
        /// Output CSV file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Rewrite a ReLU network over the target activation and verify it.
    Transpile {
        /// Host network (JSON).
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        act: String,
        #[arg(long = "param", value_parser = parse_kv)]
        params: Vec<(String, f64)>,
        /// Box half-width A; the rewrite is verified on [-A, A]^d.
        #[arg(short = 'A', long)]
        half_width: f64,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        report: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum)]
        class: Option<ClassArg>,
    },
    /// Sampled sup distance between two networks on [-A, A]^d.
    Verify {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(short = 'A', long)]
        half_width: f64,
        #[arg(long, default_value_t = 4096)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn parse_kv(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| format!("expected key=value, got '{s}'"))?;
    let v: f64 = v.parse().map_err(|e| format!("bad value in '{s}': {e}"))?;
    Ok((k.to_string(), v))
}

enum CmdError {
    /// Usage or contract violations -> exit 2.
    Contract(String),
    /// Tolerance or constant-reproduction failures -> exit 1.
    Tolerance(String),
}

impl CmdError {
    fn exit_code(&self) -> u8 {
        match self {
            CmdError::Contract(_) => 2,
            CmdError::Tolerance(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CmdError::Contract(m) | CmdError::Tolerance(m) => m,
        }
    }
}

impl From<ActError> for CmdError {
    fn from(e: ActError) -> Self {
        CmdError::Contract(e.to_string())
    }
}

impl From<JsonError> for CmdError {
    fn from(e: JsonError) -> Self {
        CmdError::Contract(e.to_string())
    }
}

impl From<GadgetError> for CmdError {
    fn from(e: GadgetError) -> Self {
        match e {
            GadgetError::CalibrationFailed { .. } => CmdError::Tolerance(e.to_string()),
            _ => CmdError::Contract(e.to_string()),
        }
    }
}

impl From<TranspileError> for CmdError {
    fn from(e: TranspileError) -> Self {
        match e {
            TranspileError::Gadget(GadgetError::CalibrationFailed { .. }) => {
                CmdError::Tolerance(e.to_string())
            }
            _ => CmdError::Contract(e.to_string()),
        }
    }
}

impl From<relumorph_core::error::NetError> for CmdError {
    fn from(e: relumorph_core::error::NetError) -> Self {
        CmdError::Contract(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            if json {
                let kind = match e {
                    CmdError::Contract(_) => "contract",
                    CmdError::Tolerance(_) => "tolerance",
                };
                eprintln!(
                    "{}",
                    serde_json::json!({ "error": e.message(), "kind": kind })
                );
            } else {
                eprintln!("error: {}", e.message());
            }
            ExitCode::from(e.exit_code())
        }
    }
}

fn spec_from(name: &str, params: &[(String, f64)]) -> Result<ActivationSpec, CmdError> {
    Ok(builtin(name, params)?)
}

fn run(cli: Cli) -> Result<u8, CmdError> {
    match cli.command {
        Command::Classify { act, params } => {
            let spec = spec_from(&act, &params)?;
            match classify(&spec) {
                Ok(cls) => {
                    let doc = classification_to_json(&spec, &cls);
                    println!("{}", serde_json::to_string_pretty(&doc).unwrap());
                    Ok(0)
                }
                Err(ActError::NotInA { name }) => Err(CmdError::Tolerance(format!(
                    "'{name}' is not in the admissible set"
                ))),
                Err(e) => Err(e.into()),
            }
        }
        Command::Constants { names } => {
            let names: Vec<String> = if names.is_empty() {
                default_constant_rows()
                    .iter()
                    .map(|s| s.to_string())
                    .collect()
            } else {
                names
            };
            let mut rows = Vec::new();
            let mut worst: f64 = 0.0;
            for name in &names {
                let spec = spec_from(name, &[])?;
                let cls = classify(&spec)?;
                let gap = estimate_gap_constants(&cls)?;
                let reference = paper_reference(&spec);
                let deviation = reference
                    .map(|(m_ref, sup_ref)| (gap.m - m_ref).abs().max((gap.m_sup - sup_ref).abs()))
                    .unwrap_or(0.0);
                worst = worst.max(deviation);
                rows.push((name.clone(), gap, reference, deviation));
            }
            if cli.json {
                let doc: Vec<_> = rows
                    .iter()
                    .map(|(name, gap, reference, deviation)| {
                        serde_json::json!({
                            "activation": name,
                            "m": gap.m,
                            "m_sup": gap.m_sup,
                            "tail_verified": gap.tail_verified,
                            "m_ref": reference.map(|r| r.0),
                            "m_sup_ref": reference.map(|r| r.1),
                            "deviation": deviation,
                            "pass": *deviation <= 1e-3,
                        })
                    })
                    .collect();
                println!("{}", serde_json::to_string_pretty(&doc).unwrap());
            } else {
                println!(
                    "{:<18} {:>12} {:>12} {:>10} {:>10} {:>10}  status",
                    "activation", "m", "M_sup", "m_ref", "M_ref", "deviation"
                );
                for (name, gap, reference, deviation) in &rows {
                    let (m_ref, sup_ref) = match reference {
                        Some((a, b)) => (format!("{a:.4}"), format!("{b:.4}")),
                        None => ("n/a".into(), "n/a".into()),
                    };
                    println!(
                        "{:<18} {:>12.8} {:>12.8} {:>10} {:>10} {:>10.2e}  {}",
                        name,
                        gap.m,
                        gap.m_sup,
                        m_ref,
                        sup_ref,
                        deviation,
                        if *deviation <= 1e-3 { "ok" } else { "FAIL" }
                    );
                }
            }
            if worst > 1e-3 {
                return Err(CmdError::Tolerance(format!(
                    "constant deviation {worst:e} exceeds 1e-3"
                )));
            }
            Ok(0)
        }
        Command::Gadget {
            act,
            params,
            target,
            half_width,
            tol,
            scale,
            order,
            class,
            out,
        } => {
            let spec = spec_from(&act, &params)?;
            let cls = classify(&spec)?;
            let gadget: Gadget = match target {
                TargetArg::Relu => match (tol, scale) {
                    (Some(tol), None) => match class {
                        Some(c) => relu_gadget_forced(&cls, half_width, tol, c.into())?,
                        None => relu_gadget(&cls, half_width, tol)?,
                    },
                    (None, Some(s)) => {
                        relu_gadget_with_scale(&cls, half_width, s, class.map(Into::into))?
                    }
                    _ => {
                        return Err(CmdError::Contract(
                            "relu target needs exactly one of --tol or --scale".into(),
                        ))
                    }
                },
                TargetArg::Identity => {
                    let s = scale.ok_or_else(|| {
                        CmdError::Contract("identity target needs --scale".into())
                    })?;
                    identity_gadget(&cls, s)?
                }
                TargetArg::Product => {
                    let s = scale
                        .ok_or_else(|| CmdError::Contract("product target needs --scale".into()))?;
                    product_gadget(&cls, s)?
                }
                TargetArg::Derivative => {
                    let s = scale.ok_or_else(|| {
                        CmdError::Contract("derivative target needs --scale".into())
                    })?;
                    derivative_gadget(&spec, order, s)?
                }
            };
            let doc = gadget_to_json(&gadget)?;
            match out {
                Some(path) => {
                    write_gadget(&path, &gadget)?;
                    if cli.json {
                        println!(
                            "{}",
                            serde_json::json!({ "written": path, "scale_param": gadget.scale_param, "reported_error": gadget.reported_error })
                        );
                    } else {
                        println!(
                            "wrote {} (scale {}, sampled error {:e})",
                            path.display(),
                            gadget.scale_param,
                            gadget.reported_error
                        );
                    }
                }
                None => println!("{}", serde_json::to_string_pretty(&doc).unwrap()),
            }
            Ok(0)
        }
        Command::Curve {
            act,
            params,
            gain,
            half_width,
            class,
            out,
        } => {
            if gain <= 0.0 || gain.is_nan() {
                return Err(CmdError::Contract("gain K must be positive".into()));
            }
            let spec = spec_from(&act, &params)?;
            let cls = classify(&spec)?;
            let gadget =
                relu_gadget_with_scale(&cls, half_width, 1.0 / gain, class.map(Into::into))?;
            let mut csv = String::from("x,phi,relu\n");
            let mut max_gap = 0.0f64;
            for i in 0..=2000 {
                let x = -half_width + 2.0 * half_width * i as f64 / 2000.0;
                let phi = gadget.eval(x);
                let relu = if x > 0.0 { x } else { 0.0 };
                max_gap = max_gap.max((phi - relu).abs());
                csv.push_str(&format!("{x},{phi},{relu}\n"));
            }
            std::fs::write(&out, csv).map_err(JsonError::Io)?;
            if cli.json {
                println!(
                    "{}",
                    serde_json::json!({ "written": out, "points": 2001, "max_abs_gap": max_gap })
                );
            } else {
                println!(
                    "wrote {} (2001 points, max |phi - relu| = {max_gap:e})",
                    out.display()
                );
            }
            Ok(0)
        }
        Command::Transpile {
            input,
            act,
            params,
            half_width,
            eps,
            out,
            report,
            seed,
            class,
        } => {
            let spec = spec_from(&act, &params)?;
            let host = read_network(&input)?;
            let boxed = InputBox::new(half_width, host.input_dim)?;
            let opts = TranspileOptions {
                force_class: class.map(Into::into),
                ..Default::default()
            };
            let (rewritten, rep) = transpile_with(&host, &spec, &boxed, eps, seed, &opts)?;
            write_network(&out, &rewritten)?;
            write_report(&report, &rep)?;
            let ok = rep.sup_error_sampled < eps;
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&relumorph_cli::report_to_json(&rep)).unwrap()
                );
            } else {
                println!(
                    "sampled sup error {:e} (requested {eps:e}), factors ({}, {}), rounds {}",
                    rep.sup_error_sampled, rep.factors[0], rep.factors[1], rep.rounds
                );
                println!("wrote {} and {}", out.display(), report.display());
            }
            if ok {
                Ok(0)
            } else {
                Err(CmdError::Tolerance(format!(
                    "sampled sup error {:e} did not reach eps {:e}",
                    rep.sup_error_sampled, eps
                )))
            }
        }
        Command::Verify {
            a,
            b,
            half_width,
            samples,
            seed,
        } => {
            let na = read_network(&a)?;
            let nb = read_network(&b)?;
            let boxed = InputBox::new(half_width, na.input_dim)?;
            let d = sup_distance(&na, &nb, &boxed, samples, seed)?;
            let points = BoxSampler::new(boxed, samples, seed).len();
            if cli.json {
                println!(
                    "{}",
                    serde_json::json!({
                        "sup_distance_sampled": d,
                        "points": points,
                        "n_samples": samples,
                        "seed": seed,
                    })
                );
            } else {
                println!("sampled sup distance: {d:e} over {points} points (seed {seed})");
            }
            Ok(0)
        }
    }
}

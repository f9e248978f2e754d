//! Acceptance suite. Each criterion prints one PASS/FAIL line (visible with
//! `cargo test --test acceptance -- --nocapture`) and fails the test on any
//! violation. Tolerances are pinned in the assertions.

use relumorph_cli::{paper_reference, parse_network, serialize_network};
use relumorph_core::act::{builtin, classify, ActivationSpec, DerivMethod, Membership};
use relumorph_core::gadget::{
    binom_alternating_sum, derivative_gadget, estimate_gap_constants, relu_gadget_with_scale,
    GadgetClass, ProductForm,
};
use relumorph_core::net::{ActivationTag, InputBox, Layer, Network};
use relumorph_core::sample::sup_distance;
use relumorph_core::transpile::{transpile_with, TranspileOptions};
use relumorph_core::validate_network;
use std::time::Instant;

fn criterion(n: u32, name: &str, body: impl FnOnce() -> Result<(), String>) {
    match body() {
        Ok(()) => println!("[acceptance] criterion {n} ({name}): PASS"),
        Err(why) => {
            println!("[acceptance] criterion {n} ({name}): FAIL - {why}");
            panic!("criterion {n} ({name}) failed: {why}");
        }
    }
}

fn ensure(cond: bool, why: impl Fn() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(why())
    }
}

struct SplitMix64(u64);
impl SplitMix64 {
    fn next_f64(&mut self) -> f64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        ((z ^ (z >> 31)) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
    fn uniform(&mut self) -> f64 {
        2.0 * self.next_f64() - 1.0
    }
}

fn random_host(d: usize, width: usize, hidden: usize, seed: u64) -> Network {
    let mut rng = SplitMix64(seed);
    let mut layers = Vec::new();
    let mut fan_in = d;
    for _ in 0..hidden {
        let w = (0..width)
            .map(|_| (0..fan_in).map(|_| rng.uniform()).collect())
            .collect();
        let b = (0..width).map(|_| rng.uniform()).collect();
        layers.push(Layer::new(w, b, ActivationTag::Relu));
        fan_in = width;
    }
    let w = vec![(0..fan_in).map(|_| rng.uniform()).collect()];
    layers.push(Layer::new(w, vec![rng.uniform()], ActivationTag::Identity));
    Network {
        input_dim: d,
        layers,
    }
}

#[test]
fn criterion_1_table_constants() {
    criterion(1, "single-neuron gap constants", || {
        let started = Instant::now();
        let rows: [(&str, Vec<(String, f64)>); 10] = [
            ("elu", vec![("alpha".into(), 1.0)]),
            ("celu", vec![("alpha".into(), 1.0)]),
            ("softplus", vec![]),
            ("gelu", vec![("mu".into(), 0.0), ("sigma".into(), 1.0)]),
            ("silu", vec![]),
            ("swish", vec![("beta".into(), 1.0)]),
            ("mish", vec![]),
            ("x_dsilu", vec![]),
            ("x_softsign_shift", vec![]),
            ("x_arctan_shift", vec![]),
        ];
        for (name, params) in rows {
            let spec = builtin(name, &params).map_err(|e| e.to_string())?;
            let cls = classify(&spec).map_err(|e| e.to_string())?;
            let got = estimate_gap_constants(&cls).map_err(|e| e.to_string())?;
            let (m_ref, sup_ref) =
                paper_reference(&spec).ok_or_else(|| format!("no reference for {name}"))?;
            ensure((got.m - m_ref).abs() <= 1e-3, || {
                format!("{name}: m {} vs reference {m_ref}", got.m)
            })?;
            ensure((got.m_sup - sup_ref).abs() <= 1e-3, || {
                format!("{name}: M_sup {} vs reference {sup_ref}", got.m_sup)
            })?;
        }
        let elapsed = started.elapsed();
        ensure(elapsed.as_secs_f64() < 10.0, || {
            format!("constants took {:.2}s (budget 10s)", elapsed.as_secs_f64())
        })
    });
}

#[test]
fn criterion_2_binomial_identities() {
    criterion(2, "alternating binomial sums", || {
        for n in 0..=12u32 {
            for i in 0..n {
                let v = binom_alternating_sum(n, i).map_err(|e| e.to_string())?;
                ensure(v == 0, || format!("sum(n={n}, i={i}) = {v}, want 0"))?;
            }
            let mut fact: i64 = 1;
            for j in 1..=n as i64 {
                fact *= j;
            }
            let want = if n % 2 == 0 { fact } else { -fact };
            let v = binom_alternating_sum(n, n).map_err(|e| e.to_string())?;
            ensure(v == want, || {
                format!("sum(n={n}, i={n}) = {v}, want {want}")
            })?;
        }
        Ok(())
    });
}

#[test]
fn criterion_3_single_neuron_bound() {
    criterion(3, "one-sided single-neuron ReLU bound", || {
        for name in ["softplus", "silu", "gelu", "mish", "elu"] {
            let cls = classify(&builtin(name, &[]).unwrap()).map_err(|e| e.to_string())?;
            let m_sup = estimate_gap_constants(&cls)
                .map_err(|e| e.to_string())?
                .m_sup;
            for k in [10.0, 100.0, 1000.0] {
                let g = relu_gadget_with_scale(&cls, 20.0, 1.0 / k, Some(GadgetClass::A2Tilde))
                    .map_err(|e| e.to_string())?;
                let mut lo = f64::INFINITY;
                let mut hi = f64::NEG_INFINITY;
                for i in 0..4096 {
                    let x = -20.0 + 40.0 * i as f64 / 4095.0;
                    let d = x.max(0.0) - g.eval(x);
                    lo = lo.min(d);
                    hi = hi.max(d);
                }
                ensure(lo >= -1e-9, || format!("{name} K={k}: min {lo} < -1e-9"))?;
                ensure(hi >= 0.0 && hi <= m_sup / k + 1e-9, || {
                    format!("{name} K={k}: max {hi} outside [0, {}]", m_sup / k)
                })?;
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_4_derivative_gadget_convergence() {
    criterion(4, "difference gadget converges to softplus'", || {
        let softplus = builtin("softplus", &[]).unwrap();
        let sigmoid = builtin("sigmoid", &[]).unwrap();
        let mut prev = f64::INFINITY;
        let mut last = f64::NAN;
        for eta in [1e-1, 1e-2, 1e-3] {
            let g = derivative_gadget(&softplus, 1, eta).map_err(|e| e.to_string())?;
            let mut sup = 0.0f64;
            for i in 0..=2000 {
                let x = -3.0 + 6.0 * i as f64 / 2000.0;
                sup = sup.max((g.eval(x) - sigmoid.eval(x)).abs());
            }
            ensure(sup < prev, || {
                format!("eta={eta}: sup {sup} did not shrink from {prev}")
            })?;
            prev = sup;
            last = sup;
        }
        ensure(last < 1e-3, || {
            format!("sup {last} at eta=1e-3, want < 1e-3")
        })
    });
}

#[test]
fn criterion_5_product_gadget_convergence() {
    criterion(5, "product gadget converges to xy", || {
        let cls = classify(&builtin("sigmoid", &[]).unwrap()).unwrap();
        let mut prev = f64::INFINITY;
        let mut last = f64::NAN;
        for eps in [1e-1, 1e-2] {
            let form = ProductForm::new(&cls, eps).map_err(|e| e.to_string())?;
            let mut sup = 0.0f64;
            for i in 0..=200 {
                for j in 0..=200 {
                    let x = -2.0 + i as f64 * 0.02;
                    let y = -2.0 + j as f64 * 0.02;
                    sup = sup.max((form.eval(x, y) - x * y).abs());
                }
            }
            ensure(sup < prev, || {
                format!("eps={eps}: sup {sup} did not shrink from {prev}")
            })?;
            prev = sup;
            last = sup;
        }
        ensure(last < 0.2, || format!("sup {last} at eps=1e-2, want < 0.2"))?;
        let form = ProductForm::new(&cls, 1e-2).unwrap();
        let mut rng = SplitMix64(11);
        for _ in 0..200 {
            let x = 2.0 * rng.uniform();
            ensure(form.eval(x, 0.0) == 0.0, || {
                format!("Gamma({x}, 0) != 0 exactly")
            })?;
        }
        Ok(())
    });
}

#[test]
fn criterion_6_end_to_end_transpilation() {
    criterion(6, "end-to-end transpilation of 20 random hosts", || {
        let started = Instant::now();
        let targets: [(ActivationSpec, Option<GadgetClass>, f64, f64, bool); 4] = [
            (builtin("gelu", &[]).unwrap(), None, 1.0, 1.0, true),
            (builtin("relu2", &[]).unwrap(), None, 3.0, 1.0, true),
            (
                builtin("x_softsign_shift", &[]).unwrap(),
                Some(GadgetClass::A2),
                2.0,
                1.0,
                true,
            ),
            (builtin("sigmoid", &[]).unwrap(), None, 3.0, 2.0, false),
        ];
        let boxed = InputBox::new(1.0, 2).unwrap();
        for host_idx in 0u64..20 {
            let host = random_host(2, 8, 3, 100 + host_idx);
            let shape_in = validate_network(&host).unwrap();
            for (spec, force, fw, fd, exact) in &targets {
                let opts = TranspileOptions {
                    force_class: *force,
                    ..TranspileOptions::default()
                };
                let (out, report) =
                    transpile_with(&host, spec, &boxed, 1e-2, 7000 + host_idx, &opts)
                        .map_err(|e| format!("host {host_idx} -> {}: {e}", spec.name()))?;
                let shape_out = validate_network(&out).unwrap();
                ensure(report.sup_error_sampled < 1e-2, || {
                    format!(
                        "host {host_idx} -> {}: sampled error {}",
                        spec.name(),
                        report.sup_error_sampled
                    )
                })?;
                let got_w = shape_out.width as f64 / shape_in.width as f64;
                let got_d = shape_out.depth as f64 / shape_in.depth as f64;
                let ok = if *exact {
                    got_w == *fw && got_d == *fd
                } else {
                    got_w <= *fw && got_d <= *fd
                };
                ensure(ok, || {
                    format!(
                        "host {host_idx} -> {}: factors ({got_w}, {got_d}) vs ({fw}, {fd})",
                        spec.name()
                    )
                })?;
            }
        }
        let elapsed = started.elapsed();
        ensure(elapsed.as_secs_f64() < 300.0, || {
            format!(
                "end-to-end suite took {:.1}s (budget 300s)",
                elapsed.as_secs_f64()
            )
        })
    });
}

#[test]
fn criterion_7_property_suites() {
    criterion(7, "property suites", || {
        decomposition_identities()?;
        asymptotes_and_boundedness()?;
        derivative_agreement()?;
        serialization_round_trip()?;
        sup_metric_properties()
    });
}

fn decomposition_identities() -> Result<(), String> {
    for name in [
        "elu",
        "celu",
        "selu",
        "softplus",
        "gelu",
        "silu",
        "swish",
        "mish",
        "x_dsilu",
        "x_softsign_shift",
        "x_arctan_shift",
    ] {
        let spec = builtin(name, &[]).unwrap();
        let cls = classify(&spec).unwrap();
        ensure(cls.is_member(Membership::A2Tilde), || {
            format!("{name} not A2~")
        })?;
        let d = cls.s_decomp.as_ref().unwrap();
        for i in 0..=800 {
            let x = -20.0 + i as f64 * 0.05;
            let r = spec.eval(x) - (x + d.b0) * (d.h)(x) - d.b1;
            ensure(r.abs() <= 1e-12, || format!("{name}({x}): residual {r}"))?;
        }
    }
    Ok(())
}

fn asymptotes_and_boundedness() -> Result<(), String> {
    for name in ["sigmoid", "tanh", "arctan", "softsign", "dsilu", "srs"] {
        let spec = builtin(name, &[]).unwrap();
        let cls = classify(&spec).unwrap();
        let a = cls.asymptotes.unwrap();
        let probe = match name {
            "arctan" | "softsign" => 1e8, // 1/x tails need a farther probe
            _ => 1e4,
        };
        ensure((spec.eval(-probe) - a.l1).abs() < 1e-6, || {
            format!("{name}: lower tail")
        })?;
        ensure((spec.eval(probe) - a.l2).abs() < 1e-6, || {
            format!("{name}: upper tail")
        })?;
        let bound = a.l1.abs().max(a.l2.abs()) + 1.0;
        for i in 0..=2000 {
            let x = -1e6 + i as f64 * 1000.0;
            let v = spec.eval(x);
            ensure(v.is_finite() && v.abs() <= bound, || {
                format!("{name}({x}) = {v}")
            })?;
        }
    }
    Ok(())
}

fn derivative_agreement() -> Result<(), String> {
    let eps = f64::EPSILON;
    for name in relumorph_core::builtin_names() {
        let spec = builtin(name, &[]).unwrap();
        let f = |x: f64| spec.eval(x);
        let mut rng = SplitMix64(0x5eed + name.len() as u64);
        let mut checked = 0;
        while checked < 1000 {
            let x = 30.0 * rng.uniform();
            if x.abs() < 1e-3 {
                continue;
            }
            checked += 1;
            let d1 = spec.derivative(1, x).map_err(|e| format!("{name}: {e}"))?;
            ensure(d1.method == DerivMethod::Analytic, || {
                format!("{name}: not analytic")
            })?;
            let h1 = eps.powf(1.0 / 3.0) * x.abs().max(1.0);
            let fd1 = (f(x + h1) - f(x - h1)) / (2.0 * h1);
            ensure(
                (d1.value - fd1).abs() <= 1e-6 * d1.value.abs().max(1.0),
                || format!("{name}'({x}): {} vs fd {}", d1.value, fd1),
            )?;
            let d2 = spec.derivative(2, x).map_err(|e| format!("{name}: {e}"))?;
            let h2 = eps.powf(1.0 / 4.0) * x.abs().max(1.0);
            let fd2 = (f(x + h2) - 2.0 * f(x) + f(x - h2)) / (h2 * h2);
            ensure(
                (d2.value - fd2).abs() <= 1e-4 * d2.value.abs().max(1.0),
                || format!("{name}''({x}): {} vs fd {}", d2.value, fd2),
            )?;
        }
    }
    Ok(())
}

fn serialization_round_trip() -> Result<(), String> {
    for seed in 0u64..100 {
        let host = random_host(1 + (seed % 3) as usize, 1 + (seed % 5) as usize, 2, seed);
        let text = serialize_network(&host).map_err(|e| e.to_string())?;
        let back = parse_network(&text).map_err(|e| e.to_string())?;
        ensure(back == host, || format!("seed {seed}: structural mismatch"))?;
        for (la, lb) in host.layers.iter().zip(back.layers.iter()) {
            for (ra, rb) in la.weights.iter().zip(lb.weights.iter()) {
                for (a, b) in ra.iter().zip(rb.iter()) {
                    ensure(a.to_bits() == b.to_bits(), || {
                        format!("seed {seed}: weight {a} not bit-exact")
                    })?;
                }
            }
        }
    }
    Ok(())
}

fn sup_metric_properties() -> Result<(), String> {
    let boxed = InputBox::new(1.0, 2).unwrap();
    for seed in 0u64..50 {
        let a = random_host(2, 3, 1, 3 * seed);
        let b = random_host(2, 3, 1, 3 * seed + 1);
        let c = random_host(2, 3, 1, 3 * seed + 2);
        let dab = sup_distance(&a, &b, &boxed, 128, seed).unwrap();
        let dba = sup_distance(&b, &a, &boxed, 128, seed).unwrap();
        ensure(dab.to_bits() == dba.to_bits(), || {
            format!("seed {seed}: not symmetric")
        })?;
        let dac = sup_distance(&a, &c, &boxed, 128, seed).unwrap();
        let dbc = sup_distance(&b, &c, &boxed, 128, seed).unwrap();
        ensure(dac <= dab + dbc + 1e-15, || {
            format!("seed {seed}: triangle violated: {dac} > {dab} + {dbc}")
        })?;
        ensure(
            sup_distance(&a, &a, &boxed, 128, seed).unwrap() == 0.0,
            || format!("seed {seed}: self-distance not zero"),
        )?;
    }
    Ok(())
}

//! Acceptance checks, one line per criterion. Runs without the libtest
//! harness so the report prints in order; exits non-zero if any check fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{binary_entropy, geometric_indices, golden_cases, golden_paths, resnet, yolo, XorShift};
use lwfc_core::clip::{aciq_cmax, clipping_error, optimize_cmax, optimize_range, total_error};
use lwfc_core::codec::{decode_indices, encode_indices};
use lwfc_core::pipeline::{decode_tensor, encode_tensor, msre, rate_report};
use lwfc_core::quant::{design, design_ecq, design_ecq_conventional, DesignOptions, Pinning};
use lwfc_core::{ActivationModel, ClipRange, CodecConfig, CodewordLengths};

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(name: &str, got: f64, want: f64, tol: f64) -> Result<(), String> {
    ensure((got - want).abs() <= tol, || format!("{name} = {got:.6}, want {want} ± {tol}"))
}

fn c1_fit() -> Check {
    let m = ActivationModel::fit(1.1235656, 4.9280124, 0.5, 0.1).map_err(|e| e.to_string())?;
    within("lambda", m.lambda(), 0.7716595, 1e-4)?;
    within("mu", m.mu(), -1.4350621, 1e-4)?;
    Ok(format!("lambda={:.7} mu={:.7}", m.lambda(), m.mu()))
}

fn c2_coefficients() -> Check {
    let m = ActivationModel::fit(0.4484323, 0.5742644, 0.5, 0.1).map_err(|e| e.to_string())?;
    within("5 lambda", 5.0 * m.lambda(), 11.950, 0.01)?;
    within("0.4 lambda", 0.4 * m.lambda(), 0.956, 0.001)?;
    within("0.1 mu", 0.1 * m.mu(), -0.031, 0.001)?;
    Ok(format!(
        "5λ={:.4} 0.4λ={:.4} 0.1μ={:.4}",
        5.0 * m.lambda(),
        0.4 * m.lambda(),
        0.1 * m.mu()
    ))
}

const RESNET_CMAX: [f64; 7] = [5.184, 7.511, 9.036, 10.175, 11.084, 11.842, 12.492];
const RESNET_FREE: [(f64, f64); 7] = [
    (0.361, 5.544),
    (0.147, 7.658),
    (0.053, 9.089),
    (0.001, 10.176),
    (-0.030, 11.054),
    (-0.051, 11.792),
    (-0.065, 12.427),
];
const YOLO_CMAX: [f64; 7] = [1.674, 2.425, 2.918, 3.285, 3.579, 3.824, 4.033];
const YOLO_FREE: [(f64, f64); 7] = [
    (0.171, 1.844),
    (0.087, 2.512),
    (0.047, 2.965),
    (0.026, 3.311),
    (0.012, 3.591),
    (0.003, 3.826),
    (-0.004, 4.030),
];

fn c3_table() -> Check {
    let mut worst: f64 = 0.0;
    for (name, m, cmax, free) in [
        ("resnet", resnet(), RESNET_CMAX, RESNET_FREE),
        ("yolo", yolo(), YOLO_CMAX, YOLO_FREE),
    ] {
        for n in 2..=8 {
            let i = n - 2;
            let c = optimize_cmax(&m, n, 0.0).map_err(|e| e.to_string())?;
            within(&format!("{name} N={n} c_max"), c, cmax[i], 0.02)?;
            let r = optimize_range(&m, n).map_err(|e| e.to_string())?;
            within(&format!("{name} N={n} free c_min"), r.c_min(), free[i].0, 0.02)?;
            within(&format!("{name} N={n} free c_max"), r.c_max(), free[i].1, 0.02)?;
            worst = worst
                .max((c - cmax[i]).abs())
                .max((r.c_min() - free[i].0).abs())
                .max((r.c_max() - free[i].1).abs());
        }
    }
    Ok(format!("28 values, max deviation {worst:.4}"))
}

fn c4_closed_form() -> Check {
    let m = resnet();
    let mut worst: f64 = 0.0;
    for c in [2.0, 6.0, 10.0] {
        let e = total_error(&m, &ClipRange::new(0.0, c).unwrap(), 4).map_err(|e| e.to_string())?;
        let k = -0.3858 / 6.0 * c;
        let printed = 6.190 - 0.795 * c * (k.exp() + (3.0 * k).exp() + (5.0 * k).exp());
        within(&format!("e_tot({c})"), e.e_tot, printed, 0.01)?;
        worst = worst.max((e.e_tot - printed).abs());
    }
    let degenerate = clipping_error(&m, &ClipRange::new(0.0, 1e-12).unwrap());
    within("e_clip at [0, 0+]", degenerate, 6.190, 0.005)?;
    Ok(format!("max |Δ|={worst:.4}, E[Y²]={degenerate:.4}"))
}

fn c5_aciq() -> Check {
    let mut last = 0.0;
    for b in [0.1, 0.5, 1.0, 2.5, 17.0] {
        let r = aciq_cmax(b, 4).map_err(|e| e.to_string())? / aciq_cmax(b, 2).map_err(|e| e.to_string())?;
        within(&format!("ratio (b={b})"), r, 1.377, 0.002)?;
        last = r;
    }
    Ok(format!("W(192)/W(48)={last:.5}"))
}

fn c6_monte_carlo() -> Check {
    let m = resnet();
    let t = m.sample_stratified(1_000_000, 6).map_err(|e| e.to_string())?;
    let mut rng = XorShift(0x5eed);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let n = 2 + rng.below(7);
        let opt = optimize_cmax(&m, n, 0.0).map_err(|e| e.to_string())?;
        let c = opt * (0.9 + 0.2 * rng.unit());
        let cfg = CodecConfig::uniform(ClipRange::new(0.0, c).unwrap(), n).map_err(|e| e.to_string())?;
        let decoded = decode_tensor(&encode_tensor(&t, &cfg).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let got = msre(&t, &decoded).map_err(|e| e.to_string())?;
        let want = total_error(&m, &cfg.range(), n).map_err(|e| e.to_string())?.e_tot;
        let rel = (got / want - 1.0).abs();
        ensure(rel <= 0.015, || format!("N={n} c_max={c:.3}: empirical {got:.5} vs analytic {want:.5}"))?;
        worst = worst.max(rel);
    }
    Ok(format!("10 configs, max relative deviation {:.3}%", 100.0 * worst))
}

fn c7_design() -> Check {
    let samples: Vec<f32> = (0..10).map(|v| v as f32).collect();
    let range = ClipRange::new(0.0, 9.0).unwrap();
    let lengths = CodewordLengths::truncated_unary(3).unwrap();
    let opts = DesignOptions::default();
    let q = design_ecq(&samples, 3, &lengths, 0.0, range, opts).map_err(|e| e.to_string())?;
    ensure(q.recon_levels() == [0.0, 4.5, 9.0], || format!("recon {:?}", q.recon_levels()))?;
    ensure(q.thresholds() == [2.25, 6.75], || format!("thresholds {:?}", q.thresholds()))?;
    let c = design_ecq_conventional(&samples, 3, &lengths, 0.0, range, opts).map_err(|e| e.to_string())?;
    let r = c.recon_levels();
    ensure(r[0] == 1.0 && r[2] == 8.0, || format!("conventional recon {r:?}"))?;

    let t = resnet().sample(200_000, 7).map_err(|e| e.to_string())?;
    let range = ClipRange::new(0.0, 9.036).unwrap();
    let mut iterations = 0;
    for (n, lambda) in [(3, 0.0), (4, 0.5), (6, 2.0), (8, 0.1)] {
        let lengths = CodewordLengths::truncated_unary(n).unwrap();
        let out = design(t.data(), n, &lengths, lambda, range, opts, Pinning::Pinned).map_err(|e| e.to_string())?;
        for (i, it) in out.history.iter().enumerate() {
            ensure(it.recon[0] == range.c_min() && it.recon[n - 1] == range.c_max(), || {
                format!("N={n}: pinning broken at iteration {i}")
            })?;
        }
        for w in out.history.windows(2) {
            ensure(w[1].assignment_cost <= w[0].assignment_cost * (1.0 + 1e-12), || {
                format!("N={n}: cost rose {} -> {}", w[0].assignment_cost, w[1].assignment_cost)
            })?;
        }
        iterations += out.history.len();
    }
    Ok(format!("hand traces exact, {iterations} iterations pinned and monotone"))
}

fn c8_codec() -> Check {
    let mut rng = XorShift(0xc0dec);
    for case in 0..10_000 {
        let n = 2 + rng.below(254);
        let len = rng.below(300);
        let idx: Vec<u8> = if case % 2 == 0 {
            (0..len).map(|_| rng.below(n) as u8).collect()
        } else {
            let r = 0.05 + 0.9 * rng.unit();
            geometric_indices(&mut rng, len, n, r)
        };
        let bytes = encode_indices(&idx, n).map_err(|e| e.to_string())?;
        let back = decode_indices(&bytes, idx.len(), n).map_err(|e| format!("case {case}: {e}"))?;
        ensure(back == idx, || format!("case {case} (N={n}, len={len}) mismatch"))?;
    }

    let bits: Vec<u8> = (0..1_000_000).map(|_| (rng.unit() < 0.1) as u8).collect();
    let coded = encode_indices(&bits, 2).map_err(|e| e.to_string())?;
    let rate = coded.len() as f64 * 8.0 / bits.len() as f64;
    let h = binary_entropy(0.1);
    ensure(rate <= 1.05 * h, || format!("P(1)=0.1 rate {rate:.4} > 1.05 × {h:.4}"))?;

    let t = resnet().sample(1_000_000, 2024).map_err(|e| e.to_string())?;
    let cfg = CodecConfig::uniform(ClipRange::new(0.0, 5.184).unwrap(), 2).map_err(|e| e.to_string())?;
    let stream = encode_tensor(&t, &cfg).map_err(|e| e.to_string())?;
    let bpe = rate_report(&stream).map_err(|e| e.to_string())?.bits_per_element;
    within("ResNet N=2 bits/element", bpe, 0.66, 0.03)?;

    let empty = encode_indices(&[], 4).map_err(|e| e.to_string())?;
    ensure(empty == [0u8; 5], || format!("empty flush {empty:?}"))?;
    Ok(format!(
        "10^4 round trips, P(1)=0.1 at {rate:.4} (H={h:.4}), N=2 stream {bpe:.4} b/elem"
    ))
}

fn c9_bit_exact() -> Check {
    let t = yolo().sample(100_000, 9).map_err(|e| e.to_string())?;
    let cfg = CodecConfig::uniform(ClipRange::new(-0.004, 4.030).unwrap(), 8).map_err(|e| e.to_string())?;
    let first = encode_tensor(&t, &cfg).map_err(|e| e.to_string())?;
    for _ in 0..4 {
        ensure(encode_tensor(&t, &cfg).map_err(|e| e.to_string())? == first, || "encodes differ".into())?;
    }
    let cases = golden_cases();
    for case in &cases {
        let (idx_path, bin_path) = golden_paths(case.name);
        let idx = std::fs::read(&idx_path).map_err(|e| format!("{}: {e}", idx_path.display()))?;
        let frozen = std::fs::read(&bin_path).map_err(|e| format!("{}: {e}", bin_path.display()))?;
        let n = idx[0] as usize;
        let coded = encode_indices(&idx[1..], n).map_err(|e| e.to_string())?;
        ensure(coded == frozen, || format!("{}: encoder differs from frozen vector", case.name))?;
        let back = decode_indices(&frozen, idx.len() - 1, n).map_err(|e| e.to_string())?;
        ensure(back == idx[1..], || format!("{}: decoder differs", case.name))?;
    }
    Ok(format!("5 identical encodes, {} golden vectors", cases.len()))
}

struct Criterion {
    id: u8,
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Check,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, name: "model fit reproduction", limit: Some(Duration::from_secs(1)), run: c1_fit },
        Criterion { id: 2, name: "second-network coefficients", limit: None, run: c2_coefficients },
        Criterion { id: 3, name: "optimal clipping table", limit: Some(Duration::from_secs(30)), run: c3_table },
        Criterion { id: 4, name: "four-level closed form", limit: None, run: c4_closed_form },
        Criterion { id: 5, name: "ACIQ ratio", limit: None, run: c5_aciq },
        Criterion { id: 6, name: "Monte-Carlo vs analytic MSRE", limit: Some(Duration::from_secs(60)), run: c6_monte_carlo },
        Criterion { id: 7, name: "quantizer design properties", limit: None, run: c7_design },
        Criterion { id: 8, name: "codec correctness and rate", limit: None, run: c8_codec },
        Criterion { id: 9, name: "bit-exactness and golden vectors", limit: None, run: c9_bit_exact },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let mut outcome = (c.run)();
        let elapsed = start.elapsed();
        if let (Ok(_), Some(limit)) = (&outcome, c.limit) {
            if elapsed > limit {
                outcome = Err(format!("took {elapsed:.2?}, limit {limit:?}"));
            }
        }
        match outcome {
            Ok(detail) => println!("PASS [{}] {}: {detail} ({elapsed:.2?})", c.id, c.name),
            Err(why) => {
                failed += 1;
                println!("FAIL [{}] {}: {why} ({elapsed:.2?})", c.id, c.name);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

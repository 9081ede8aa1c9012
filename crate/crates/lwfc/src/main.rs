use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lwfc_core::clip::{aciq_cmax, error_curve, optimize_cmax, optimize_range, total_error};
use lwfc_core::codec::MAX_LEVELS;
use lwfc_core::pipeline::{decode_tensor, encode_tensor, msre, rate_report};
use lwfc_core::quant::{design, DesignOptions, Pinning};
use lwfc_core::{ActivationModel, ClipRange, CodecConfig, CodewordLengths, RunningStats};
use lwfc::params::{self, fmt_f64, QuantFile, RangeSummary, StatsSummary};
use lwfc::{curve, load_tensor, save_tensor, Error};

#[derive(Parser)]
#[command(name = "lwfc", version, about = "Lightweight codec for neural-network feature tensors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mean and variance over one or more tensors
    Stats {
        #[arg(long = "in", required = true, num_args = 1..)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Fit the activation model to a mean and variance
    Fit {
        #[arg(long, allow_hyphen_values = true)]
        mean: f64,
        #[arg(long)]
        var: f64,
        #[arg(long, default_value_t = 0.5)]
        kappa: f64,
        #[arg(long, default_value_t = 0.1)]
        leak: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// MSRE-optimal clipping range for a model
    ClipOpt {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        levels: usize,
        /// Fixed lower limit (default 0)
        #[arg(long, allow_hyphen_values = true, conflicts_with = "free_cmin")]
        cmin: Option<f64>,
        /// Optimize the lower limit too
        #[arg(long)]
        free_cmin: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Clipping and quantization error over a range of c_max, as CSV
    Curve {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        levels: usize,
        #[arg(long, allow_hyphen_values = true)]
        cmin: f64,
        #[arg(long, allow_hyphen_values = true)]
        cmax_from: f64,
        #[arg(long, allow_hyphen_values = true)]
        cmax_to: f64,
        #[arg(long)]
        step: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// ACIQ clipping limit for a Laplace scale b
    Aciq {
        #[arg(long)]
        b: f64,
        #[arg(long)]
        levels: usize,
    },
    /// Design an entropy-constrained quantizer from training data
    DesignEcq {
        #[arg(long)]
        train: PathBuf,
        #[arg(long)]
        levels: usize,
        #[arg(long)]
        rate_lambda: f64,
        #[arg(long, allow_hyphen_values = true)]
        cmin: f64,
        #[arg(long, allow_hyphen_values = true)]
        cmax: f64,
        /// Let the outer levels move (not usable for encoding)
        #[arg(long)]
        no_pin: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compress a tensor
    Encode {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        levels: usize,
        #[arg(long, allow_hyphen_values = true)]
        cmin: f64,
        #[arg(long, allow_hyphen_values = true)]
        cmax: f64,
        /// Designed quantizer file; uniform levels otherwise
        #[arg(long)]
        quant: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Decompress a stream
    Decode {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Mean squared difference of two tensors
    Msre {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Stream size in bits per element
    Rate {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Draw activations from a model
    Synth {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

enum Failure {
    Usage(String),
    Data(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Data(e)
    }
}

impl From<lwfc_core::Error> for Failure {
    fn from(e: lwfc_core::Error) -> Self {
        Failure::Data(e.into())
    }
}

fn usage(ok: bool, msg: &str) -> Result<(), Failure> {
    if ok {
        Ok(())
    } else {
        Err(Failure::Usage(msg.to_string()))
    }
}

fn check_levels(n: usize) -> Result<(), Failure> {
    usage((2..=MAX_LEVELS).contains(&n), "--levels must be between 2 and 255")
}

fn check_range(cmin: f64, cmax: f64) -> Result<ClipRange, Failure> {
    ClipRange::new(cmin, cmax).map_err(|_| Failure::Usage("need finite --cmin < --cmax".into()))
}

fn load_model(path: &Path) -> Result<ActivationModel, Failure> {
    Ok(params::load(path, params::model_from_str)?)
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Stats { inputs, out } => {
            let mut stats = RunningStats::new();
            for path in &inputs {
                let t = load_tensor(path)?;
                stats.update(&t).map_err(|e| Error::Format {
                    path: path.clone(),
                    source: e,
                })?;
            }
            let (mean, variance) = stats.finalize()?;
            let summary = StatsSummary {
                count: stats.count(),
                mean,
                variance,
            };
            params::save(&out, &params::stats_to_string(&summary))?;
        }
        Command::Fit {
            mean,
            var,
            kappa,
            leak,
            out,
        } => {
            let m = ActivationModel::fit(mean, var, kappa, leak)?;
            params::save(&out, &params::model_to_string(&m))?;
        }
        Command::ClipOpt {
            model,
            levels,
            cmin,
            free_cmin,
            out,
        } => {
            check_levels(levels)?;
            let m = load_model(&model)?;
            let range = if free_cmin {
                optimize_range(&m, levels)?
            } else {
                let lo = cmin.unwrap_or(0.0);
                ClipRange::new(lo, optimize_cmax(&m, levels, lo)?)?
            };
            let summary = RangeSummary {
                n_levels: levels,
                range,
                errors: total_error(&m, &range, levels)?,
            };
            params::save(&out, &params::range_to_string(&summary))?;
        }
        Command::Curve {
            model,
            levels,
            cmin,
            cmax_from,
            cmax_to,
            step,
            out,
        } => {
            check_levels(levels)?;
            usage(step > 0.0 && step.is_finite(), "--step must be positive")?;
            usage(cmax_from > cmin && cmax_to >= cmax_from, "need --cmin < --cmax-from <= --cmax-to")?;
            let m = load_model(&model)?;
            let rows = error_curve(&m, levels, cmin, &curve::grid(cmax_from, cmax_to, step))?;
            params::save(&out, &curve::to_csv(&rows))?;
        }
        Command::Aciq { b, levels } => {
            check_levels(levels)?;
            usage(b > 0.0 && b.is_finite(), "--b must be positive")?;
            println!("c_max={}", fmt_f64(aciq_cmax(b, levels)?));
        }
        Command::DesignEcq {
            train,
            levels,
            rate_lambda,
            cmin,
            cmax,
            no_pin,
            out,
        } => {
            check_levels(levels)?;
            let range = check_range(cmin, cmax)?;
            usage(rate_lambda >= 0.0 && rate_lambda.is_finite(), "--rate-lambda must be >= 0")?;
            let t = load_tensor(&train)?;
            let pinning = if no_pin { Pinning::Conventional } else { Pinning::Pinned };
            let lengths = CodewordLengths::truncated_unary(levels)?;
            let outcome = design(t.data(), levels, &lengths, rate_lambda, range, DesignOptions::default(), pinning)?;
            let file = QuantFile {
                quantizer: outcome.quantizer,
                rate_lambda,
            };
            params::save(&out, &params::quant_to_string(&file))?;
        }
        Command::Encode {
            input,
            levels,
            cmin,
            cmax,
            quant,
            out,
        } => {
            check_levels(levels)?;
            let range = check_range(cmin, cmax)?;
            let cfg = match quant {
                None => CodecConfig::uniform(range, levels)?,
                Some(path) => {
                    let q = params::load(&path, params::quant_from_str)?.quantizer;
                    let r = q.range();
                    if q.n_levels() != levels || r.c_min() != cmin || r.c_max() != cmax {
                        return Err(Failure::Usage(format!(
                            "{} was designed for {} levels on [{}, {}]",
                            path.display(),
                            q.n_levels(),
                            r.c_min(),
                            r.c_max()
                        )));
                    }
                    CodecConfig::designed(&q).map_err(|e| Error::Format { path, source: e })?
                }
            };
            let t = load_tensor(&input)?;
            let bytes = encode_tensor(&t, &cfg).map_err(|e| Error::Format {
                path: input.clone(),
                source: e,
            })?;
            std::fs::write(&out, bytes).map_err(|e| Error::Io { path: out, source: e })?;
        }
        Command::Decode { input, out } => {
            let bytes = std::fs::read(&input).map_err(|e| Error::Io {
                path: input.clone(),
                source: e,
            })?;
            let t = decode_tensor(&bytes).map_err(|e| Error::Format { path: input, source: e })?;
            save_tensor(&out, &t)?;
        }
        Command::Msre { a, b } => {
            let (ta, tb) = (load_tensor(&a)?, load_tensor(&b)?);
            println!("msre={}", fmt_f64(msre(&ta, &tb)?));
        }
        Command::Rate { input } => {
            let bytes = std::fs::read(&input).map_err(|e| Error::Io {
                path: input.clone(),
                source: e,
            })?;
            let r = rate_report(&bytes).map_err(|e| Error::Format { path: input, source: e })?;
            println!("total_bytes={}", r.total_bytes);
            println!("element_count={}", r.element_count);
            println!("bits_per_element={}", fmt_f64(r.bits_per_element));
        }
        Command::Synth { model, n, seed, out } => {
            usage(n >= 1 && n <= u32::MAX as usize, "--n must be between 1 and 2^32 - 1")?;
            let m = load_model(&model)?;
            save_tensor(&out, &m.sample(n, seed)?)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Data(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

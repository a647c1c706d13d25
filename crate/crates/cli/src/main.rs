use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rsadp::channel::Observation;
use rsadp::decoder::{DecoderConfig, DecoderRegistry, Frame};
use rsadp::sim::{gnuplot_script, run_fer, trace_convergence, write_trace, ChannelKind, SimConfig, TraceConfig};
use rsadp::siso::{potential_of_llr, CheckRule, SpaConfig};
use rsadp::{GaloisField, RsCode};

#[derive(Parser)]
#[command(name = "rsadp", version, about = "Adaptive parity-check-matrix decoding of Reed-Solomon codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Monte Carlo FER/BER sweep, one CSV row per point.
    Simulate(SimulateArgs),
    /// Potential J per iteration for ADP and for SPA on the fixed matrix.
    Trace(TraceArgs),
    /// Decode one LLR vector read from a file (one value per line).
    Decode(DecodeArgs),
    /// List the registered decoder variants.
    Variants,
}

#[derive(Args)]
struct CodeArgs {
    /// Parent code length, dimension and optional shortening: N,K[,s].
    #[arg(long, value_name = "N,K[,s]")]
    code: String,
    /// Primitive polynomial as a hex mask (e.g. 11d); defaults per field size.
    #[arg(long, value_name = "HEX")]
    field_poly: Option<String>,
}

impl CodeArgs {
    fn build(&self) -> Result<RsCode> {
        let parts: Vec<usize> = self
            .code
            .split(',')
            .map(|p| p.trim().parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .with_context(|| format!("bad --code '{}'", self.code))?;
        let (n, k, s) = match parts[..] {
            [n, k] => (n, k, 0),
            [n, k, s] => (n, k, s),
            _ => bail!("--code takes N,K or N,K,s"),
        };
        let field = match &self.field_poly {
            Some(hex) => {
                let poly = u32::from_str_radix(hex.trim_start_matches("0x"), 16)
                    .with_context(|| format!("bad --field-poly '{hex}'"))?;
                ensure!(poly > 1, "--field-poly must have degree at least 2");
                GaloisField::with_poly(31 - poly.leading_zeros(), poly)?
            }
            None => {
                let m = usize::BITS - n.leading_zeros();
                GaloisField::new(m)?
            }
        };
        Ok(RsCode::new(field, n, k, s)?)
    }
}

#[derive(Args)]
struct DecoderArgs {
    /// Decoder variant (see `rsadp variants`).
    #[arg(long, default_value = "adp-hdd")]
    variant: String,
    /// Damping coefficient in (0, 1].
    #[arg(long, default_value_t = 0.12)]
    alpha: f64,
    /// Maximum iterations per grouping round.
    #[arg(long, default_value_t = 20)]
    n1: usize,
    /// Number of grouping rounds.
    #[arg(long, default_value_t = 1)]
    n2: usize,
    /// Bits reshuffled across the reliability boundary per extra round (default m).
    #[arg(long)]
    group_size: Option<usize>,
    /// Min-sum check rule instead of sum-product.
    #[arg(long)]
    minsum: bool,
    /// Update only the unreliable bits plus M reliable ones (M defaults to 2m).
    #[arg(long, value_name = "M", num_args = 0..=1)]
    red: Option<Option<usize>>,
    /// Approximate every reliable-part factor by the least reliable one.
    #[arg(long)]
    dense_approx: bool,
    /// Keep the unit columns instead of chaining them into degree 2.
    #[arg(long)]
    no_deg2: bool,
}

impl DecoderArgs {
    fn config(&self, code: &RsCode) -> DecoderConfig {
        DecoderConfig {
            alpha: self.alpha,
            n1: self.n1,
            n2: self.n2,
            deg2: !self.no_deg2,
            group_size: self.group_size,
            spa: SpaConfig {
                rule: if self.minsum { CheckRule::MinSum } else { CheckRule::SumProduct },
                partial: self.red.map(|m| m.unwrap_or(2 * code.m())),
                dense_tanh_approx: self.dense_approx,
            },
            ..Default::default()
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Channel {
    Awgn,
    Rayleigh,
    Bec,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[command(flatten)]
    decoder: DecoderArgs,
    #[arg(long, value_enum, default_value = "awgn")]
    channel: Channel,
    /// Eb/N0 sweep in dB as lo:step:hi, or a single value; erasure
    /// probabilities for the BEC.
    #[arg(long, value_name = "LO:STEP:HI")]
    snr: String,
    /// Stop iterating once a candidate equals the transmitted codeword.
    #[arg(long)]
    genie: bool,
    #[arg(long, default_value_t = 1_000_000)]
    max_frames: u64,
    #[arg(long, default_value_t = 100)]
    min_errors: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Frames decoded per parallel batch.
    #[arg(long, default_value_t = 1024)]
    batch: usize,
    /// CSV output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write a gnuplot script plotting the CSV.
    #[arg(long, value_name = "FILE", requires = "out")]
    gnuplot: Option<PathBuf>,
}

#[derive(Args)]
struct TraceArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[arg(long, default_value_t = 0.12)]
    alpha: f64,
    #[arg(long, default_value_t = 20)]
    n1: usize,
    #[arg(long)]
    minsum: bool,
    #[arg(long)]
    no_deg2: bool,
    /// AWGN Eb/N0 in dB.
    #[arg(long, default_value_t = 3.0)]
    snr: f64,
    #[arg(long, default_value_t = 10)]
    frames: usize,
    /// Keep only frames that hard-decision decoding fails on.
    #[arg(long)]
    hdd_failures: bool,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DecodeArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[command(flatten)]
    decoder: DecoderArgs,
    /// Text file with one LLR per line (positive favors bit 0).
    #[arg(long)]
    llr: PathBuf,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

fn parse_sweep(spec: &str) -> Result<Vec<f64>> {
    let nums: Vec<f64> = spec
        .split(':')
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .with_context(|| format!("bad sweep '{spec}'"))?;
    match nums[..] {
        [x] => Ok(vec![x]),
        [lo, step, hi] => {
            ensure!(step > 0.0 && hi >= lo, "sweep needs step > 0 and hi >= lo");
            let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
            // Rounded so that 0.1 steps print as 3.1, not 3.1000000000000005.
            Ok((0..count).map(|i| ((lo + i as f64 * step) * 1e9).round() / 1e9).collect())
        }
        _ => bail!("sweep must be a value or lo:step:hi"),
    }
}

fn output(path: Option<&PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn simulate(args: SimulateArgs) -> Result<()> {
    let code = args.code.build()?;
    let cfg = DecoderConfig { genie: args.genie, ..args.decoder.config(&code) };
    let decoder = DecoderRegistry::with_builtins().build(&args.decoder.variant, &cfg)?;
    let sim = SimConfig {
        channel: match args.channel {
            Channel::Awgn => ChannelKind::Awgn,
            Channel::Rayleigh => ChannelKind::Rayleigh,
            Channel::Bec => ChannelKind::Bec,
        },
        points: parse_sweep(&args.snr)?,
        max_frames: args.max_frames,
        min_frame_errors: args.min_errors,
        seed: args.seed,
        batch: args.batch,
    };
    let mut out = output(args.out.as_ref())?;
    run_fer(&code, decoder.as_ref(), &sim, Some(&mut out))?;
    out.flush()?;
    if let (Some(script), Some(csv)) = (&args.gnuplot, &args.out) {
        let title =
            format!("RS({},{}) {}", code.n_sym() - code.shorten(), code.k_sym() - code.shorten(), decoder.name());
        std::fs::write(script, gnuplot_script(&csv.display().to_string(), &title))
            .with_context(|| format!("writing {}", script.display()))?;
    }
    Ok(())
}

fn trace(args: TraceArgs) -> Result<()> {
    let code = args.code.build()?;
    let cfg = TraceConfig {
        decoder: DecoderConfig {
            alpha: args.alpha,
            n1: args.n1,
            deg2: !args.no_deg2,
            spa: SpaConfig {
                rule: if args.minsum { CheckRule::MinSum } else { CheckRule::SumProduct },
                ..Default::default()
            },
            ..Default::default()
        },
        ebn0_db: args.snr,
        frames: args.frames,
        seed: args.seed,
        hdd_failures_only: args.hdd_failures,
    };
    let rows = trace_convergence(&code, &cfg)?;
    let mut out = output(args.out.as_ref())?;
    write_trace(&rows, &mut out)?;
    out.flush()?;
    Ok(())
}

fn read_llrs(path: &PathBuf) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| {
            l.trim().parse::<f64>().with_context(|| format!("{}:{}: bad LLR '{}'", path.display(), i + 1, l.trim()))
        })
        .collect()
}

/// Packs bits MSB-first into bytes, zero-padding the last byte.
fn hex_bits(bits: &[u8]) -> String {
    bits.chunks(8)
        .map(|ch| {
            let byte = ch.iter().enumerate().fold(0u8, |acc, (i, &b)| acc | (b & 1) << (7 - i));
            format!("{byte:02x}")
        })
        .collect()
}

fn decode(args: DecodeArgs) -> Result<()> {
    let code = args.code.build()?;
    let mut llr = read_llrs(&args.llr)?;
    let given = llr.len();
    ensure!(
        given == code.n_bits() || given == code.transmitted_bits(),
        "expected {} LLRs ({} with shortened positions), got {given}",
        code.transmitted_bits(),
        code.n_bits()
    );
    llr.resize(code.n_bits(), f64::INFINITY);
    let cfg = DecoderConfig { trace: true, ..args.decoder.config(&code) };
    let decoder = DecoderRegistry::with_builtins().build(&args.decoder.variant, &cfg)?;
    let obs = Observation::from_llr(&llr);
    let frame = Frame { llr: &llr, obs: &obs, transmitted: None, seed: args.seed };
    let res = decoder.decode(&code, &frame)?;
    let mut trace: Vec<f64> = res.trace.iter().flatten().copied().collect();
    if trace.is_empty() {
        trace.push(potential_of_llr(code.parity_check_binary(), &llr));
    }
    let mut out = io::stdout().lock();
    writeln!(out, "status: {:?}", res.status)?;
    writeln!(out, "iterations: {}", res.iterations)?;
    writeln!(out, "bits: {}", hex_bits(&res.bits()[..given]))?;
    let j: Vec<String> = trace.iter().map(|j| format!("{j:.6}")).collect();
    writeln!(out, "J: {}", j.join(" "))?;
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Simulate(a) => simulate(a),
        Command::Trace(a) => trace(a),
        Command::Decode(a) => decode(a),
        Command::Variants => {
            for name in DecoderRegistry::with_builtins().names() {
                println!("{name}");
            }
            Ok(())
        }
    }
}

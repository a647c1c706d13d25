//! Monte Carlo FER/BER estimation and potential-function traces.
//!
//! Every frame draws from its own ChaCha stream keyed by (seed, sweep
//! parameter, frame index), so results do not depend on the worker count and
//! two decoders run at the same point see identical noise.

use std::io::Write;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channel::{transmit, ChannelModel, Observation};
use crate::decoder::{multi_group_decode, Adaptation, DecoderConfig, Frame, FrameDecoder};
use crate::error::{Error, Result};
use crate::galois::GfElem;
use crate::rscode::RsCode;

pub const CSV_HEADER: &str = "ebn0_db,frames,frame_errors,bit_errors,fer,ber,avg_iterations,wall_seconds";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChannelKind {
    Awgn,
    Rayleigh,
    Bec,
}

impl ChannelKind {
    /// `param` is Eb/N0 in dB, or the erasure probability for the BEC.
    pub fn at(self, param: f64) -> ChannelModel {
        match self {
            ChannelKind::Awgn => ChannelModel::Awgn { ebn0_db: param },
            ChannelKind::Rayleigh => ChannelModel::Rayleigh { ebn0_db: param },
            ChannelKind::Bec => ChannelModel::Bec { epsilon: param },
        }
    }
}

#[derive(Clone, Debug)]
pub struct SimConfig {
    pub channel: ChannelKind,
    pub points: Vec<f64>,
    pub max_frames: u64,
    pub min_frame_errors: u64,
    pub seed: u64,
    /// Frames decoded per parallel batch.
    pub batch: usize,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_frames == 0 || self.min_frame_errors == 0 || self.batch == 0 {
            return Err(Error::Config("max_frames, min_frame_errors and batch must be positive".into()));
        }
        if self.channel == ChannelKind::Bec && self.points.iter().any(|e| !(0.0..=1.0).contains(e)) {
            return Err(Error::Config("erasure probability must lie in [0, 1]".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FerPoint {
    /// Eb/N0 in dB (erasure probability for the BEC).
    pub ebn0_db: f64,
    pub frames: u64,
    pub frame_errors: u64,
    pub bit_errors: u64,
    pub fer: f64,
    pub ber: f64,
    pub avg_iterations: f64,
    pub wall_seconds: f64,
}

impl FerPoint {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{:.3}",
            self.ebn0_db,
            self.frames,
            self.frame_errors,
            self.bit_errors,
            self.fer,
            self.ber,
            self.avg_iterations,
            self.wall_seconds
        )
    }
}

/// A transmitted frame, reproducible from its coordinates alone.
pub struct FrameSample {
    pub bits: Vec<u8>,
    pub llr: Vec<f64>,
    pub obs: Observation,
    pub decoder_seed: u64,
}

pub fn frame_rng(seed: u64, param: f64, index: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&param.to_bits().to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(index);
    rng
}

/// Random message, encoded and sent through `model`.
pub fn sample_frame(code: &RsCode, model: ChannelModel, seed: u64, index: u64) -> FrameSample {
    let mut rng = frame_rng(seed, model.parameter(), index);
    let decoder_seed = rng.random();
    let q = code.field().size() as u16;
    let msg: Vec<GfElem> = (0..code.message_len()).map(|_| rng.random_range(0..q)).collect();
    let cw = code.encode(&msg).expect("message length matches");
    let bits = code.symbols_to_bits(&cw);
    let (llr, obs) = transmit(code, &bits, model, &mut rng);
    FrameSample { bits, llr, obs, decoder_seed }
}

struct FrameStats {
    frame_error: bool,
    bit_errors: u64,
    iterations: u64,
}

fn run_frame(
    code: &RsCode,
    decoder: &dyn FrameDecoder,
    model: ChannelModel,
    seed: u64,
    index: u64,
) -> Result<FrameStats> {
    let s = sample_frame(code, model, seed, index);
    let frame = Frame { llr: &s.llr, obs: &s.obs, transmitted: Some(&s.bits), seed: s.decoder_seed };
    let res = decoder.decode(code, &frame)?;
    let sent = code.transmitted_bits();
    let bit_errors = res.bits()[..sent].iter().zip(&s.bits[..sent]).filter(|(a, b)| a != b).count() as u64;
    Ok(FrameStats { frame_error: bit_errors > 0, bit_errors, iterations: res.iterations as u64 })
}

/// Runs one sweep point until `max_frames` frames or `min_frame_errors`
/// frame errors, whichever comes first.
pub fn run_point(code: &RsCode, decoder: &dyn FrameDecoder, cfg: &SimConfig, param: f64) -> Result<FerPoint> {
    let model = cfg.channel.at(param);
    let start = Instant::now();
    let (mut frames, mut frame_errors, mut bit_errors, mut iterations) = (0u64, 0u64, 0u64, 0u64);
    'outer: while frames < cfg.max_frames && frame_errors < cfg.min_frame_errors {
        let count = (cfg.max_frames - frames).min(cfg.batch as u64);
        let stats: Vec<Result<FrameStats>> =
            (frames..frames + count).into_par_iter().map(|i| run_frame(code, decoder, model, cfg.seed, i)).collect();
        for st in stats {
            let st = st?;
            frames += 1;
            frame_errors += st.frame_error as u64;
            bit_errors += st.bit_errors;
            iterations += st.iterations;
            if frame_errors >= cfg.min_frame_errors {
                break 'outer;
            }
        }
    }
    let bits = frames * code.transmitted_bits() as u64;
    Ok(FerPoint {
        ebn0_db: param,
        frames,
        frame_errors,
        bit_errors,
        fer: frame_errors as f64 / frames as f64,
        ber: bit_errors as f64 / bits as f64,
        avg_iterations: iterations as f64 / frames as f64,
        wall_seconds: start.elapsed().as_secs_f64(),
    })
}

/// Sweeps all points, writing the CSV header and one row per finished point
/// to `sink` when given.
pub fn run_fer(
    code: &RsCode,
    decoder: &dyn FrameDecoder,
    cfg: &SimConfig,
    mut sink: Option<&mut dyn Write>,
) -> Result<Vec<FerPoint>> {
    cfg.validate()?;
    if let Some(w) = sink.as_mut() {
        writeln!(w, "{CSV_HEADER}")?;
    }
    let mut out = Vec::with_capacity(cfg.points.len());
    for &p in &cfg.points {
        let point = run_point(code, decoder, cfg, p)?;
        if let Some(w) = sink.as_mut() {
            writeln!(w, "{}", point.csv_row())?;
            w.flush()?;
        }
        out.push(point);
    }
    Ok(out)
}

/// Gnuplot script plotting FER and BER from a CSV written by [`run_fer`].
pub fn gnuplot_script(csv_path: &str, title: &str) -> String {
    format!(
        "set datafile separator ','\n\
         set logscale y\n\
         set grid\n\
         set xlabel 'Eb/N0 (dB)'\n\
         set ylabel 'error rate'\n\
         set title '{title}'\n\
         plot '{csv_path}' using 1:5 every ::1 with linespoints title 'FER', \\\n\
         \x20    '{csv_path}' using 1:6 every ::1 with linespoints title 'BER'\n"
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TraceVariant {
    Adaptive,
    NoAdaptation,
}

impl TraceVariant {
    pub fn label(self) -> &'static str {
        match self {
            TraceVariant::Adaptive => "adp",
            TraceVariant::NoAdaptation => "spa-noadapt",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceRow {
    pub frame: u64,
    pub iteration: usize,
    pub variant: TraceVariant,
    pub j: f64,
}

pub const TRACE_HEADER: &str = "frame,iteration,variant,J";

#[derive(Clone, Debug)]
pub struct TraceConfig {
    /// Base decoder settings (`alpha`, `n1`, degree-2 flags, SPA rule).
    pub decoder: DecoderConfig,
    pub ebn0_db: f64,
    /// Number of frames to trace.
    pub frames: usize,
    pub seed: u64,
    /// Keep only frames that hard-decision decoding fails on.
    pub hdd_failures_only: bool,
}

/// Potential `J(H_b, ν(L))` before and after every iteration for the
/// adaptive decoder and for plain SPA on the fixed matrix, on the same noise.
/// Neither variant stops early, so converged frames keep descending.
pub fn trace_convergence(code: &RsCode, cfg: &TraceConfig) -> Result<Vec<TraceRow>> {
    let base = DecoderConfig {
        n2: 1,
        hdd_in_loop: false,
        genie: false,
        early_stop: false,
        trace: true,
        ..cfg.decoder.clone()
    };
    let adaptive = DecoderConfig { adaptation: Adaptation::Bit, ..base.clone() };
    let fixed = DecoderConfig {
        adaptation: Adaptation::None,
        deg2: false,
        spa: crate::siso::SpaConfig { partial: None, dense_tanh_approx: false, ..base.spa },
        ..base
    };
    adaptive.validate()?;
    let model = ChannelModel::Awgn { ebn0_db: cfg.ebn0_db };
    let mut rows = Vec::new();
    let mut taken = 0usize;
    let mut index = 0u64;
    while taken < cfg.frames {
        let s = sample_frame(code, model, cfg.seed, index);
        index += 1;
        if cfg.hdd_failures_only {
            let hard: Vec<u8> = s.llr.iter().map(|&l| (l < 0.0) as u8).collect();
            let out = crate::algebraic::hdd_decode(code, &code.bits_to_symbols(&hard));
            if out.codeword().map(|c| code.symbols_to_bits(c)) == Some(s.bits.clone()) {
                continue;
            }
        }
        let frame = Frame { llr: &s.llr, obs: &s.obs, transmitted: None, seed: s.decoder_seed };
        for (variant, dcfg) in [(TraceVariant::Adaptive, &adaptive), (TraceVariant::NoAdaptation, &fixed)] {
            let res = multi_group_decode(code, &frame, dcfg)?;
            for (iteration, &j) in res.trace[0].iter().enumerate() {
                rows.push(TraceRow { frame: index - 1, iteration, variant, j });
            }
        }
        taken += 1;
    }
    Ok(rows)
}

pub fn write_trace(rows: &[TraceRow], w: &mut dyn Write) -> Result<()> {
    writeln!(w, "{TRACE_HEADER}")?;
    for r in rows {
        writeln!(w, "{},{},{},{}", r.frame, r.iteration, r.variant.label(), r.j)?;
    }
    Ok(())
}

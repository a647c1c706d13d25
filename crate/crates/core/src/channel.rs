//! BPSK channel models (bit 0 ↦ +1, bit 1 ↦ -1) and their channel LLRs.
//!
//! Shortened (pinned) bits are never sent: they get LLR `+∞`, observation
//! `+1`, and no noise.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::rscode::RsCode;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ChannelModel {
    /// AWGN at the given Eb/N0 in dB.
    Awgn { ebn0_db: f64 },
    /// Symbol-interleaved Rayleigh fading, perfect CSI at the receiver.
    Rayleigh { ebn0_db: f64 },
    /// Binary erasure channel with erasure probability `epsilon`.
    Bec { epsilon: f64 },
}

impl ChannelModel {
    /// Sweep parameter: Eb/N0 in dB, or the erasure probability.
    pub fn parameter(&self) -> f64 {
        match *self {
            ChannelModel::Awgn { ebn0_db } | ChannelModel::Rayleigh { ebn0_db } => ebn0_db,
            ChannelModel::Bec { epsilon } => epsilon,
        }
    }
}

/// `σ² = 1 / (2·R·10^(Eb/N0 / 10))` for unit-energy BPSK.
pub fn noise_sigma(ebn0_db: f64, rate: f64) -> f64 {
    (1.0 / (2.0 * rate * 10f64.powf(ebn0_db / 10.0))).sqrt()
}

/// What the receiver saw, for Euclidean candidate selection.
#[derive(Clone, Debug, PartialEq)]
pub struct Observation {
    pub y: Vec<f64>,
    /// Per-bit fading amplitudes; `None` means all ones.
    pub fades: Option<Vec<f64>>,
}

impl Observation {
    pub fn new(y: Vec<f64>) -> Self {
        Self { y, fades: None }
    }

    /// Uses the LLRs themselves as the observation. Correlation with the LLR
    /// orders candidates exactly as the Euclidean metric does on AWGN and
    /// CSIR fading channels, since `|s_i| = 1`.
    pub fn from_llr(llr: &[f64]) -> Self {
        Self::new(llr.to_vec())
    }

    /// `Σ (y_i - a_i(1 - 2c_i))²`. Infinite observations contribute 0 when
    /// the candidate agrees in sign and `+∞` otherwise.
    pub fn distance(&self, bits: &[u8]) -> f64 {
        assert_eq!(bits.len(), self.y.len());
        let mut d = 0.0;
        for (i, (&y, &b)) in self.y.iter().zip(bits).enumerate() {
            let s = 1.0 - 2.0 * (b & 1) as f64;
            if !y.is_finite() {
                if y * s < 0.0 {
                    return f64::INFINITY;
                }
                continue;
            }
            let a = self.fades.as_ref().map_or(1.0, |f| f[i]);
            let e = y - a * s;
            d += e * e;
        }
        d
    }
}

pub fn awgn_llr(y: &[f64], sigma: f64) -> Vec<f64> {
    assert!(sigma > 0.0);
    let scale = 2.0 / (sigma * sigma);
    y.iter().map(|&v| scale * v).collect()
}

pub fn rayleigh_llr(y: &[f64], fades: &[f64], sigma: f64) -> Vec<f64> {
    assert!(sigma > 0.0);
    let scale = 2.0 / (sigma * sigma);
    y.iter().zip(fades).map(|(&v, &a)| scale * a * v).collect()
}

/// Each bit is erased (LLR 0) with probability `epsilon`, otherwise known
/// exactly (LLR ±∞).
pub fn bec_llr<R: Rng + ?Sized>(bits: &[u8], epsilon: f64, rng: &mut R) -> Vec<f64> {
    assert!((0.0..=1.0).contains(&epsilon));
    bits.iter()
        .map(|&b| {
            if rng.random::<f64>() < epsilon {
                0.0
            } else if b == 0 {
                f64::INFINITY
            } else {
                f64::NEG_INFINITY
            }
        })
        .collect()
}

#[inline]
fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

/// Unit mean-square Rayleigh amplitude.
pub fn rayleigh_fade<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let (a, b) = (gaussian(rng), gaussian(rng));
    ((a * a + b * b) / 2.0).sqrt()
}

/// Sends a full-length codeword bit vector through `model`.
pub fn transmit<R: Rng + ?Sized>(
    code: &RsCode,
    bits: &[u8],
    model: ChannelModel,
    rng: &mut R,
) -> (Vec<f64>, Observation) {
    let n = bits.len();
    let sent = code.transmitted_bits();
    let bpsk = |b: u8| 1.0 - 2.0 * b as f64;
    let (mut llr, mut obs) = match model {
        ChannelModel::Awgn { ebn0_db } => {
            let sigma = noise_sigma(ebn0_db, code.rate());
            let y: Vec<f64> = bits.iter().map(|&b| bpsk(b) + sigma * gaussian(rng)).collect();
            (awgn_llr(&y, sigma), Observation::new(y))
        }
        ChannelModel::Rayleigh { ebn0_db } => {
            let sigma = noise_sigma(ebn0_db, code.rate());
            let m = code.m();
            let mut fades = Vec::with_capacity(n);
            for _ in 0..n / m {
                let a = rayleigh_fade(rng);
                fades.extend(std::iter::repeat_n(a, m));
            }
            let y: Vec<f64> = bits.iter().zip(&fades).map(|(&b, &a)| a * bpsk(b) + sigma * gaussian(rng)).collect();
            (rayleigh_llr(&y, &fades, sigma), Observation { y, fades: Some(fades) })
        }
        ChannelModel::Bec { epsilon } => {
            let llr = bec_llr(&bits[..sent], epsilon, rng);
            let mut full = llr.clone();
            full.resize(n, f64::INFINITY);
            let y = full.iter().map(|&l| if l == 0.0 { 0.0 } else { l.signum() }).collect();
            (full, Observation::new(y))
        }
    };
    for i in sent..n {
        llr[i] = f64::INFINITY;
        obs.y[i] = 1.0;
        if let Some(f) = obs.fades.as_mut() {
            f[i] = 1.0;
        }
    }
    (llr, obs)
}

//! Decoder variants behind one trait, looked up by name.

use std::collections::BTreeMap;

use super::{multi_group_decode, Adaptation, Candidate, DecodeResult, DecodeStatus, DecoderConfig, Frame};
use crate::adapt::symbol_reliabilities;
use crate::algebraic::{gmd_decode, hdd_decode, HardDecodeOutcome};
use crate::error::{Error, Result};
use crate::rscode::RsCode;

pub trait FrameDecoder: Send + Sync {
    fn name(&self) -> &str;
    fn decode(&self, code: &RsCode, frame: &Frame<'_>) -> Result<DecodeResult>;
}

/// The adaptive iterative decoder in any of its configurations.
#[derive(Clone, Debug)]
pub struct IterativeDecoder {
    name: String,
    pub config: DecoderConfig,
}

impl IterativeDecoder {
    pub fn new(name: impl Into<String>, config: DecoderConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self { name: name.into(), config })
    }
}

impl FrameDecoder for IterativeDecoder {
    fn name(&self) -> &str {
        &self.name
    }

    fn decode(&self, code: &RsCode, frame: &Frame<'_>) -> Result<DecodeResult> {
        multi_group_decode(code, frame, &self.config)
    }
}

fn hard_symbols(code: &RsCode, llr: &[f64]) -> (Vec<u8>, Vec<crate::galois::GfElem>) {
    let hard: Vec<u8> = llr.iter().map(|&l| (l < 0.0) as u8).collect();
    let sym = code.bits_to_symbols(&hard);
    (hard, sym)
}

fn algebraic_result(code: &RsCode, frame: &Frame<'_>, hard: Vec<u8>, outcome: HardDecodeOutcome) -> DecodeResult {
    match outcome.codeword() {
        Some(cw) => {
            let bits = code.symbols_to_bits(cw);
            let distance = frame.obs.distance(&bits);
            DecodeResult {
                status: DecodeStatus::HddListSelected,
                codeword: Some(bits.clone()),
                hard_decision: hard,
                iterations: 0,
                candidates: vec![Candidate { bits, distance }],
                trace: Vec::new(),
            }
        }
        None => DecodeResult {
            status: DecodeStatus::Failure,
            codeword: None,
            hard_decision: hard,
            iterations: 0,
            candidates: Vec::new(),
            trace: Vec::new(),
        },
    }
}

/// Bounded-distance Berlekamp-Massey decoding of the sign decisions.
#[derive(Clone, Copy, Debug, Default)]
pub struct HddDecoder;

impl FrameDecoder for HddDecoder {
    fn name(&self) -> &str {
        "hdd"
    }

    fn decode(&self, code: &RsCode, frame: &Frame<'_>) -> Result<DecodeResult> {
        let (hard, sym) = hard_symbols(code, frame.llr);
        let outcome = hdd_decode(code, &sym);
        Ok(algebraic_result(code, frame, hard, outcome))
    }
}

/// Generalized minimum distance decoding with symbol reliabilities taken as
/// the smallest bit magnitude in each symbol.
#[derive(Clone, Copy, Debug, Default)]
pub struct GmdDecoder;

impl FrameDecoder for GmdDecoder {
    fn name(&self) -> &str {
        "gmd"
    }

    fn decode(&self, code: &RsCode, frame: &Frame<'_>) -> Result<DecodeResult> {
        let (hard, sym) = hard_symbols(code, frame.llr);
        let mags: Vec<f64> = frame.llr.iter().map(|l| l.abs()).collect();
        let rel = symbol_reliabilities(code, &mags);
        let outcome = gmd_decode(code, &sym, &rel, |cw| frame.obs.distance(&code.symbols_to_bits(cw)));
        Ok(algebraic_result(code, frame, hard, outcome))
    }
}

pub type DecoderFactory = fn(&DecoderConfig) -> Result<Box<dyn FrameDecoder>>;

/// Named decoder factories. Each factory receives the user's base
/// configuration and fixes the flags that define its variant.
#[derive(Clone)]
pub struct DecoderRegistry {
    factories: BTreeMap<String, DecoderFactory>,
}

impl Default for DecoderRegistry {
    fn default() -> Self {
        Self::with_builtins()
    }
}

macro_rules! iterative {
    ($name:literal, |$c:ident| $body:block) => {
        (|base: &DecoderConfig| -> Result<Box<dyn FrameDecoder>> {
            let mut $c = base.clone();
            $body
            Ok(Box::new(IterativeDecoder::new($name, $c)?))
        }) as DecoderFactory
    };
}

impl DecoderRegistry {
    pub fn empty() -> Self {
        Self { factories: BTreeMap::new() }
    }

    /// `adp`, `adp-hdd`, `adp-undamped`, `sym-adp`, `sym-adp-hdd`, `spa-noadapt`,
    /// `hdd`, `gmd`. `adp-undamped` is plain ADP with α = 1 and no degree-2
    /// chaining.
    pub fn with_builtins() -> Self {
        let mut r = Self::empty();
        r.register(
            "adp",
            iterative!("adp", |c| {
                c.adaptation = Adaptation::Bit;
                c.hdd_in_loop = false;
            }),
        );
        r.register(
            "adp-hdd",
            iterative!("adp-hdd", |c| {
                c.adaptation = Adaptation::Bit;
                c.hdd_in_loop = true;
            }),
        );
        r.register(
            "sym-adp",
            iterative!("sym-adp", |c| {
                c.adaptation = Adaptation::Symbol;
                c.hdd_in_loop = false;
            }),
        );
        r.register(
            "sym-adp-hdd",
            iterative!("sym-adp-hdd", |c| {
                c.adaptation = Adaptation::Symbol;
                c.hdd_in_loop = true;
            }),
        );
        r.register(
            "adp-undamped",
            iterative!("adp-undamped", |c| {
                c.adaptation = Adaptation::Bit;
                c.alpha = 1.0;
                c.deg2 = false;
                c.hdd_in_loop = false;
            }),
        );
        r.register(
            "spa-noadapt",
            iterative!("spa-noadapt", |c| {
                c.adaptation = Adaptation::None;
                c.deg2 = false;
                c.n2 = 1;
            }),
        );
        r.register("hdd", |_| Ok(Box::new(HddDecoder)));
        r.register("gmd", |_| Ok(Box::new(GmdDecoder)));
        r
    }

    pub fn register(&mut self, name: &str, factory: DecoderFactory) {
        self.factories.insert(name.to_string(), factory);
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.factories.keys().map(String::as_str)
    }

    pub fn build(&self, name: &str, base: &DecoderConfig) -> Result<Box<dyn FrameDecoder>> {
        let factory = self.factories.get(name).ok_or_else(|| Error::UnknownVariant(name.to_string()))?;
        factory(base)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{transmit, ChannelModel};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn builtins_resolve() {
        let reg = DecoderRegistry::with_builtins();
        let names: Vec<&str> = reg.names().collect();
        assert_eq!(names, ["adp", "adp-hdd", "adp-undamped", "gmd", "hdd", "spa-noadapt", "sym-adp", "sym-adp-hdd"]);
        for n in names {
            assert_eq!(reg.build(n, &DecoderConfig::default()).unwrap().name(), n);
        }
        assert!(matches!(reg.build("osd", &DecoderConfig::default()), Err(Error::UnknownVariant(_))));
        let bad = DecoderConfig { alpha: 2.0, ..Default::default() };
        assert!(reg.build("adp", &bad).is_err());
    }

    #[test]
    fn custom_registration() {
        let mut reg = DecoderRegistry::empty();
        reg.register("plain", |_| Ok(Box::new(HddDecoder)));
        assert_eq!(reg.build("plain", &DecoderConfig::default()).unwrap().name(), "hdd");
    }

    #[test]
    fn gmd_never_farther_than_hdd() {
        let code = RsCode::with_degree(5, 31, 15, 0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let (mut hdd_ok, mut gmd_ok) = (0, 0);
        for f in 0..300u64 {
            let msg: Vec<u16> = (0..15).map(|_| rng.random_range(0..32)).collect();
            let bits = code.symbols_to_bits(&code.encode(&msg).unwrap());
            let (llr, obs) = transmit(&code, &bits, ChannelModel::Rayleigh { ebn0_db: 6.0 }, &mut rng);
            let frame = Frame { llr: &llr, obs: &obs, transmitted: None, seed: f };
            let h = HddDecoder.decode(&code, &frame).unwrap();
            let g = GmdDecoder.decode(&code, &frame).unwrap();
            if let Some(hc) = &h.codeword {
                assert!(obs.distance(g.codeword.as_ref().unwrap()) <= obs.distance(hc));
            }
            hdd_ok += (h.codeword.as_deref() == Some(&bits[..])) as usize;
            gmd_ok += (g.codeword.as_deref() == Some(&bits[..])) as usize;
        }
        assert!(gmd_ok >= hdd_ok);
    }
}

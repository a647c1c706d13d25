//! Iterative decoding by adapting the parity-check matrix, and the variants
//! built on it: HDD inside the loop, symbol-level adaptation, and several
//! rounds with different groupings of the unreliable bits.
//!
//! One iteration adapts the matrix to the current reliabilities, computes
//! extrinsic LLRs on the adapted matrix, applies the damped update
//! `L ← L + α·L_ext`, and takes hard decisions. The syndrome is checked on
//! the original `H_b` after every update; `iterations` counts completed
//! updates.

mod registry;

pub use registry::{DecoderRegistry, FrameDecoder, GmdDecoder, HddDecoder, IterativeDecoder};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::adapt::{adapt_matrix, deg2_connect, rank_order, symbol_adapt, symbol_reliabilities, AdaptedMatrix};
use crate::algebraic::hdd_decode;
use crate::bitmatrix::{pack_bits, BitMatrix};
use crate::channel::Observation;
use crate::error::{Error, Result};
use crate::rscode::RsCode;
use crate::siso::{check_alpha, damped_update_in_place, extrinsic, potential_of_llr, Partition, SpaConfig};

/// Which parity-check matrix each iteration runs on.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Adaptation {
    /// The fixed original `H_b`.
    None,
    /// Gaussian elimination on the least reliable bits.
    #[default]
    Bit,
    /// Dual-code rows systematic on the least reliable symbols.
    Symbol,
}

/// When the degree-2 chaining permutation is drawn.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Deg2Redraw {
    #[default]
    PerIteration,
    PerFrame,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecoderConfig {
    /// Damping coefficient in (0, 1].
    pub alpha: f64,
    /// Maximum iterations per round.
    pub n1: usize,
    /// Number of grouping rounds.
    pub n2: usize,
    pub adaptation: Adaptation,
    pub deg2: bool,
    pub deg2_redraw: Deg2Redraw,
    pub hdd_in_loop: bool,
    pub spa: SpaConfig,
    /// Boundary positions reshuffled between the unreliable and reliable
    /// sides in rounds after the first; `None` uses `m`.
    pub group_size: Option<usize>,
    /// Stop as soon as a candidate equals the transmitted codeword.
    pub genie: bool,
    /// Stop when all checks are satisfied.
    pub early_stop: bool,
    /// Record `J(H_b, ν(L))` before the first and after every iteration.
    pub trace: bool,
}

impl Default for DecoderConfig {
    fn default() -> Self {
        Self {
            alpha: 0.12,
            n1: 20,
            n2: 1,
            adaptation: Adaptation::Bit,
            deg2: true,
            deg2_redraw: Deg2Redraw::PerIteration,
            hdd_in_loop: false,
            spa: SpaConfig::default(),
            group_size: None,
            genie: false,
            early_stop: true,
            trace: false,
        }
    }
}

impl DecoderConfig {
    pub fn validate(&self) -> Result<()> {
        check_alpha(self.alpha)?;
        if self.n1 == 0 {
            return Err(Error::Config("n1 must be at least 1".into()));
        }
        if self.n2 == 0 {
            return Err(Error::Config("n2 must be at least 1".into()));
        }
        if self.group_size == Some(0) {
            return Err(Error::Config("group size must be at least 1".into()));
        }
        if self.adaptation == Adaptation::None && (self.spa.partial.is_some() || self.spa.dense_tanh_approx) {
            return Err(Error::Config("partial updating and the dense approximation need an adapted matrix".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecodeStatus {
    /// All checks were satisfied by the iterative hard decision.
    Converged,
    /// The answer was picked from candidates produced along the way.
    HddListSelected,
    Failure,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Candidate {
    pub bits: Vec<u8>,
    pub distance: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecodeResult {
    pub status: DecodeStatus,
    /// The selected codeword, if any.
    pub codeword: Option<Vec<u8>>,
    /// Final hard decision of the last round.
    pub hard_decision: Vec<u8>,
    /// Completed iterations summed over all rounds.
    pub iterations: usize,
    pub candidates: Vec<Candidate>,
    /// Potential values, one list per round (empty unless tracing).
    pub trace: Vec<Vec<f64>>,
}

impl DecodeResult {
    /// Decided bits: the codeword if one was selected, else the hard decision.
    pub fn bits(&self) -> &[u8] {
        self.codeword.as_deref().unwrap_or(&self.hard_decision)
    }
}

/// One received frame.
#[derive(Clone, Copy, Debug)]
pub struct Frame<'a> {
    pub llr: &'a [f64],
    pub obs: &'a Observation,
    /// Transmitted bits, used only for genie-aided stopping.
    pub transmitted: Option<&'a [u8]>,
    /// Seeds the decoder's own randomness (degree-2 permutations, groupings).
    pub seed: u64,
}

/// Index of the candidate closest to the observation, first on ties.
pub fn select_candidate(candidates: &[Candidate]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, c) in candidates.iter().enumerate() {
        if best.is_none_or(|b| c.distance < candidates[b].distance) {
            best = Some(i);
        }
    }
    best
}

/// Sign decision; exact zeros decide 0 but count as undecided.
fn hard_decision(llr: &[f64], out: &mut [u8]) -> bool {
    let mut decided = true;
    for (b, &l) in out.iter_mut().zip(llr) {
        *b = (l < 0.0) as u8;
        decided &= l != 0.0;
    }
    decided
}

struct RoundOutcome {
    converged: bool,
    genie_hit: Option<usize>,
    iterations: usize,
    hard: Vec<u8>,
    trace: Vec<f64>,
}

struct Candidates<'a> {
    list: Vec<Candidate>,
    obs: &'a Observation,
    transmitted: Option<&'a [u8]>,
}

impl Candidates<'_> {
    /// Adds a codeword unless already listed; returns its index if it is the
    /// transmitted word.
    fn push(&mut self, bits: &[u8]) -> Option<usize> {
        let idx = match self.list.iter().position(|c| c.bits == bits) {
            Some(i) => i,
            None => {
                let distance = self.obs.distance(bits);
                self.list.push(Candidate { bits: bits.to_vec(), distance });
                self.list.len() - 1
            }
        };
        (self.transmitted == Some(bits)).then_some(idx)
    }
}

fn hdd_candidate(code: &RsCode, hard: &[u8]) -> Option<Vec<u8>> {
    let sym = code.bits_to_symbols(hard);
    hdd_decode(code, &sym).codeword().map(|cw| code.symbols_to_bits(cw))
}

/// Reshuffles the `g` last unreliable and `g` first reliable ranks.
fn regroup(order: &mut [usize], boundary: usize, g: usize, rng: &mut ChaCha8Rng) {
    let lo = boundary.saturating_sub(g);
    let hi = (boundary + g).min(order.len());
    order[lo..hi].shuffle(rng);
}

fn run_round(
    code: &RsCode,
    frame: &Frame<'_>,
    cfg: &DecoderConfig,
    round: usize,
    cands: &mut Candidates<'_>,
) -> Result<RoundOutcome> {
    let n = code.n_bits();
    let h0 = code.parity_check_binary();
    let mut rng = ChaCha8Rng::seed_from_u64(frame.seed);
    rng.set_stream(round as u64);

    let mut llr = frame.llr.to_vec();
    for (i, l) in llr.iter_mut().enumerate() {
        if code.is_pinned_bit(i) {
            *l = f64::INFINITY;
        }
    }
    let mut hard = vec![0u8; n];
    let mut trace = Vec::new();
    if cfg.trace {
        trace.push(potential_of_llr(h0, &llr));
    }
    hard_decision(&llr, &mut hard);
    if cfg.hdd_in_loop {
        if let Some(cw) = hdd_candidate(code, &hard) {
            if let Some(hit) = cands.push(&cw) {
                return Ok(RoundOutcome { converged: false, genie_hit: Some(hit), iterations: 0, hard, trace });
            }
        }
    }

    let g = cfg.group_size.unwrap_or(code.m());
    let frame_perm_seed: u64 = rand::Rng::random(&mut rng);
    let needs_order = cfg.adaptation == Adaptation::Bit || cfg.spa.partial.is_some() || cfg.spa.dense_tanh_approx;
    let mut converged = false;
    let mut iterations = 0;
    for _ in 0..cfg.n1 {
        let mags: Vec<f64> = llr.iter().map(|l| l.abs()).collect();
        let mut order = needs_order.then(|| rank_order(&mags));
        let adapted: Option<AdaptedMatrix> = match cfg.adaptation {
            Adaptation::None => None,
            Adaptation::Bit => {
                let order = order.as_mut().expect("order computed for bit adaptation");
                if round > 0 {
                    regroup(&mut order.0, h0.rows(), g, &mut rng);
                }
                Some(adapt_matrix(h0, order)?)
            }
            Adaptation::Symbol => {
                let mut rel = symbol_reliabilities(code, &mags);
                if round > 0 {
                    // perturb ranks by reshuffling the boundary symbols
                    let mut sym_order = rank_order(&rel).0;
                    regroup(&mut sym_order, code.redundancy(), g.div_ceil(code.m()), &mut rng);
                    for (rank, &s) in sym_order.iter().enumerate() {
                        rel[s] = rank as f64;
                    }
                }
                Some(symbol_adapt(code, &rel))
            }
        };
        let mut adapted = adapted;
        if cfg.deg2 {
            if let Some(a) = adapted.as_mut() {
                match cfg.deg2_redraw {
                    Deg2Redraw::PerIteration => deg2_connect(a, &mut rng),
                    Deg2Redraw::PerFrame => deg2_connect(a, &mut ChaCha8Rng::seed_from_u64(frame_perm_seed)),
                }
            }
        }
        let h: &BitMatrix = adapted.as_ref().map_or(h0, |a| &a.h);
        let mask = adapted.as_ref().map(|a| a.is_unreliable_mask());
        let partition = match (&order, &mask) {
            (Some(o), Some(m)) => Some(Partition { order: &o.0, unreliable: m, redundancy: h0.rows() }),
            _ => None,
        };
        let ext = extrinsic(h, &llr, &cfg.spa, partition);
        damped_update_in_place(&mut llr, &ext, cfg.alpha);
        iterations += 1;
        if cfg.trace {
            trace.push(potential_of_llr(h0, &llr));
        }

        let decided = hard_decision(&llr, &mut hard);
        if cfg.hdd_in_loop {
            if let Some(cw) = hdd_candidate(code, &hard) {
                if let Some(hit) = cands.push(&cw) {
                    return Ok(RoundOutcome { converged: false, genie_hit: Some(hit), iterations, hard, trace });
                }
            }
        }
        if decided && h0.annihilates(&pack_bits(&hard)) {
            let hit = cands.push(&hard);
            if cfg.early_stop || hit.is_some() {
                converged = cfg.early_stop;
                return Ok(RoundOutcome { converged, genie_hit: hit, iterations, hard, trace });
            }
        }
    }
    Ok(RoundOutcome { converged, genie_hit: None, iterations, hard, trace })
}

/// ADP(N1, N2): `cfg.n2` rounds, the first on the natural reliability
/// order, later ones with reshuffled boundary groupings; every round starts
/// again from the channel LLRs. The closest candidate over all rounds wins.
pub fn multi_group_decode(code: &RsCode, frame: &Frame<'_>, cfg: &DecoderConfig) -> Result<DecodeResult> {
    cfg.validate()?;
    if frame.llr.len() != code.n_bits() {
        return Err(Error::Length { got: frame.llr.len(), expected: code.n_bits() });
    }
    let transmitted = if cfg.genie { frame.transmitted } else { None };
    let mut cands = Candidates { list: Vec::new(), obs: frame.obs, transmitted };
    let mut iterations = 0;
    let mut any_converged = false;
    let mut traces = Vec::new();
    let mut hard = Vec::new();
    let mut genie_pick = None;
    for round in 0..cfg.n2 {
        let out = run_round(code, frame, cfg, round, &mut cands)?;
        iterations += out.iterations;
        any_converged |= out.converged;
        hard = out.hard;
        if cfg.trace {
            traces.push(out.trace);
        }
        if out.genie_hit.is_some() {
            genie_pick = out.genie_hit;
            break;
        }
    }
    let pick = genie_pick.or_else(|| select_candidate(&cands.list));
    let status = match pick {
        None => DecodeStatus::Failure,
        Some(_) if any_converged => DecodeStatus::Converged,
        Some(_) => DecodeStatus::HddListSelected,
    };
    Ok(DecodeResult {
        status,
        codeword: pick.map(|i| cands.list[i].bits.clone()),
        hard_decision: hard,
        iterations,
        candidates: cands.list,
        trace: traces,
    })
}

/// A single round of the adaptive decoder (`n2` is ignored).
pub fn adp_decode(code: &RsCode, frame: &Frame<'_>, cfg: &DecoderConfig) -> Result<DecodeResult> {
    let single = DecoderConfig { n2: 1, ..cfg.clone() };
    multi_group_decode(code, frame, &single)
}

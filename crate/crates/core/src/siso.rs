//! Belief-propagation numerics in the LLR and tanh domains, and the
//! potential function `J(H, T) = -Σ_j Π_{p ∈ check j} T_p` with its gradient.
//!
//! Sign convention: a positive LLR favours bit 0.

use crate::bitmatrix::BitMatrix;
use crate::error::{Error, Result};

/// Finite LLR magnitudes are clipped here after every update.
pub const LLR_CAP: f64 = 50.0;
/// Check products are kept this far from ±1 before `atanh`.
pub const PRODUCT_CLAMP: f64 = 1e-12;

#[inline]
pub fn tanh_map(llr: f64) -> f64 {
    (0.5 * llr).tanh()
}

#[inline]
pub fn tanh_unmap(t: f64) -> f64 {
    if t >= 1.0 {
        f64::INFINITY
    } else if t <= -1.0 {
        f64::NEG_INFINITY
    } else {
        2.0 * t.atanh()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CheckRule {
    #[default]
    SumProduct,
    MinSum,
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SpaConfig {
    pub rule: CheckRule,
    /// Update only the unreliable set plus this many reliable bits.
    pub partial: Option<usize>,
    /// Replace every reliable-part factor by the tanh of the smallest
    /// reliable-part magnitude (sign kept).
    pub dense_tanh_approx: bool,
}

/// The reliability split that `partial` and `dense_tanh_approx` need.
#[derive(Clone, Copy, Debug)]
pub struct Partition<'a> {
    /// Bit positions by ascending reliability.
    pub order: &'a [usize],
    /// `true` for bits in the unreliable set.
    pub unreliable: &'a [bool],
    /// Size of the unreliable set, `n - k`.
    pub redundancy: usize,
}

/// Extrinsic LLRs from every check of `h`, flooding schedule.
///
/// `partition` may be `None` only when `cfg` asks for neither partial
/// updating nor the dense approximation.
pub fn extrinsic(h: &BitMatrix, llr: &[f64], cfg: &SpaConfig, partition: Option<Partition<'_>>) -> Vec<f64> {
    let n = h.cols();
    assert_eq!(llr.len(), n, "LLR vector length");
    let active: Option<Vec<bool>> = cfg.partial.map(|extra| {
        let part = partition.expect("partial updating needs the reliability order");
        let mut mask = vec![false; n];
        for &p in part.order.iter().take(part.redundancy + extra) {
            mask[p] = true;
        }
        mask
    });
    let receives = |i: usize| active.as_ref().is_none_or(|m| m[i]);

    let mut out = vec![0.0; n];
    let mut members: Vec<usize> = Vec::with_capacity(n);
    match cfg.rule {
        CheckRule::SumProduct => {
            let mut t: Vec<f64> = llr.iter().map(|&l| tanh_map(l)).collect();
            if cfg.dense_tanh_approx {
                let part = partition.expect("dense approximation needs the unreliable set");
                let min_rel =
                    (0..n).filter(|&i| !part.unreliable[i]).map(|i| llr[i].abs()).fold(f64::INFINITY, f64::min);
                let tmin = tanh_map(min_rel);
                for i in (0..n).filter(|&i| !part.unreliable[i]) {
                    t[i] = if llr[i] < 0.0 { -tmin } else { tmin };
                }
            }
            let mut prefix: Vec<f64> = Vec::with_capacity(n + 1);
            for r in 0..h.rows() {
                members.clear();
                members.extend(h.row_ones(r));
                prefix.clear();
                prefix.push(1.0);
                for &p in &members {
                    let last = *prefix.last().unwrap();
                    prefix.push(last * t[p]);
                }
                let mut suffix = 1.0;
                for (k, &i) in members.iter().enumerate().rev() {
                    if receives(i) {
                        let prod = (prefix[k] * suffix).clamp(-1.0 + PRODUCT_CLAMP, 1.0 - PRODUCT_CLAMP);
                        out[i] += 2.0 * prod.atanh();
                    }
                    suffix *= t[i];
                }
            }
        }
        CheckRule::MinSum => {
            for r in 0..h.rows() {
                members.clear();
                members.extend(h.row_ones(r));
                let (mut min1, mut min2, mut arg) = (f64::INFINITY, f64::INFINITY, usize::MAX);
                let mut negative = false;
                for &p in &members {
                    let a = llr[p].abs();
                    negative ^= llr[p] < 0.0;
                    if a < min1 {
                        min2 = min1;
                        min1 = a;
                        arg = p;
                    } else if a < min2 {
                        min2 = a;
                    }
                }
                for &i in &members {
                    if !receives(i) {
                        continue;
                    }
                    let mag = if i == arg { min2 } else { min1 }.min(LLR_CAP);
                    let neg = negative ^ (llr[i] < 0.0);
                    out[i] += if neg { -mag } else { mag };
                }
            }
        }
    }
    out
}

/// `L + α·L_ext`, validating `α ∈ (0, 1]`.
pub fn damped_update(llr: &[f64], ext: &[f64], alpha: f64) -> Result<Vec<f64>> {
    check_alpha(alpha)?;
    let mut out = llr.to_vec();
    damped_update_in_place(&mut out, ext, alpha);
    Ok(out)
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(Error::Config(format!("damping coefficient {alpha} outside (0, 1]")))
    }
}

/// Infinite entries stay infinite; finite ones are clipped to `±LLR_CAP`.
pub(crate) fn damped_update_in_place(llr: &mut [f64], ext: &[f64], alpha: f64) {
    for (l, &e) in llr.iter_mut().zip(ext) {
        if l.is_finite() {
            *l = (*l + alpha * e).clamp(-LLR_CAP, LLR_CAP);
        }
    }
}

pub fn potential(h: &BitMatrix, t: &[f64]) -> f64 {
    assert_eq!(t.len(), h.cols());
    -(0..h.rows()).map(|r| h.row_ones(r).map(|p| t[p]).product::<f64>()).sum::<f64>()
}

/// `∂J/∂T_i = -Σ_{checks j ∋ i} Π_{p ∈ j, p ≠ i} T_p`.
pub fn gradient(h: &BitMatrix, t: &[f64]) -> Vec<f64> {
    assert_eq!(t.len(), h.cols());
    let mut g = vec![0.0; t.len()];
    let mut members = Vec::new();
    for r in 0..h.rows() {
        members.clear();
        members.extend(h.row_ones(r));
        for (k, &i) in members.iter().enumerate() {
            let prod: f64 = members.iter().enumerate().filter(|&(q, _)| q != k).map(|(_, &p)| t[p]).product();
            g[i] -= prod;
        }
    }
    g
}

pub fn potential_of_llr(h: &BitMatrix, llr: &[f64]) -> f64 {
    let t: Vec<f64> = llr.iter().map(|&l| tanh_map(l)).collect();
    potential(h, &t)
}

//! Algebraic hard-decision decoding: errors-and-erasures Berlekamp-Massey
//! with Chien search and Forney's formula, the GMD baseline, and erasure
//! filling of dual-code rows used by symbol-level adaptation.

use crate::galois::{GaloisField, GfElem};
use crate::rscode::RsCode;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HardDecodeOutcome {
    Corrected { codeword: Vec<GfElem>, error_count: usize },
    Failure,
}

impl HardDecodeOutcome {
    pub fn codeword(&self) -> Option<&[GfElem]> {
        match self {
            HardDecodeOutcome::Corrected { codeword, .. } => Some(codeword),
            HardDecodeOutcome::Failure => None,
        }
    }

    pub fn is_corrected(&self) -> bool {
        matches!(self, HardDecodeOutcome::Corrected { .. })
    }
}

fn poly_eval(f: &GaloisField, p: &[GfElem], x: GfElem) -> GfElem {
    p.iter().rev().fold(0, |acc, &c| f.mul(acc, x) ^ c)
}

fn syndromes(code: &RsCode, r: &[GfElem]) -> Vec<GfElem> {
    let f = code.field();
    (1..=code.redundancy()).map(|i| poly_eval(f, r, f.alpha_pow(i as i64))).collect()
}

/// Bounded-distance decoding up to `t` symbol errors.
pub fn hdd_decode(code: &RsCode, received: &[GfElem]) -> HardDecodeOutcome {
    errors_erasures_decode(code, received, &[])
}

/// Corrects `e` errors and `f` erasures whenever `2e + f < d_min`.
///
/// Returns `Failure` when the errata locator is inconsistent with the
/// received word; a returned codeword always satisfies `2e + f <= N - K`
/// relative to `received`.
pub fn errors_erasures_decode(code: &RsCode, received: &[GfElem], erasures: &[usize]) -> HardDecodeOutcome {
    let gf = code.field();
    let n = code.n_sym();
    let two_t = code.redundancy();
    assert_eq!(received.len(), n, "received word has wrong length");
    let nf = erasures.len();
    if nf > two_t {
        return HardDecodeOutcome::Failure;
    }
    let s = syndromes(code, received);
    if nf == 0 && s.iter().all(|&x| x == 0) {
        return if code.is_codeword(received) {
            HardDecodeOutcome::Corrected { codeword: received.to_vec(), error_count: 0 }
        } else {
            HardDecodeOutcome::Failure
        };
    }

    // erasure locator Γ(x) = Π (1 + X_k x)
    let mut gamma = vec![1 as GfElem];
    for &p in erasures {
        debug_assert!(p < n);
        let xk = gf.alpha_pow(p as i64);
        let mut next = vec![0 as GfElem; gamma.len() + 1];
        for (i, &g) in gamma.iter().enumerate() {
            next[i] ^= g;
            next[i + 1] ^= gf.mul(g, xk);
        }
        gamma = next;
    }

    // Berlekamp-Massey seeded with the erasure locator
    let mut lambda = gamma.clone();
    let mut b = gamma;
    let mut l = nf;
    for r in (nf + 1)..=two_t {
        let mut delta = 0;
        for (j, &lj) in lambda.iter().enumerate() {
            if j < r {
                delta ^= gf.mul(lj, s[r - 1 - j]);
            }
        }
        if delta == 0 {
            b.insert(0, 0);
            continue;
        }
        let mut next = lambda.clone();
        if next.len() < b.len() + 1 {
            next.resize(b.len() + 1, 0);
        }
        for (i, &bi) in b.iter().enumerate() {
            next[i + 1] ^= gf.mul(delta, bi);
        }
        if 2 * l < r + nf {
            let inv = gf.inv(delta).expect("nonzero discrepancy");
            b = lambda.iter().map(|&x| gf.mul(x, inv)).collect();
            l = r + nf - l;
        } else {
            b.insert(0, 0);
        }
        lambda = next;
    }
    while lambda.len() > 1 && *lambda.last().unwrap() == 0 {
        lambda.pop();
    }
    let degree = lambda.len() - 1;
    if degree != l || 2 * (l - nf) + nf > two_t {
        return HardDecodeOutcome::Failure;
    }

    // Chien search over the N valid positions
    let roots: Vec<usize> = (0..n).filter(|&p| poly_eval(gf, &lambda, gf.alpha_pow(-(p as i64))) == 0).collect();
    if roots.len() != degree {
        return HardDecodeOutcome::Failure;
    }

    // Ω(x) = S(x)Λ(x) mod x^(2t); e_k = Ω(X_k^-1) / Λ'(X_k^-1)
    let mut omega = vec![0 as GfElem; two_t];
    for (i, &li) in lambda.iter().enumerate() {
        for (j, &sj) in s.iter().enumerate() {
            if i + j < two_t {
                omega[i + j] ^= gf.mul(li, sj);
            }
        }
    }
    let dlambda: Vec<GfElem> = (1..lambda.len()).map(|i| if i % 2 == 1 { lambda[i] } else { 0 }).collect();

    let mut codeword = received.to_vec();
    let mut error_count = 0;
    for &p in &roots {
        let xinv = gf.alpha_pow(-(p as i64));
        let den = poly_eval(gf, &dlambda, xinv);
        if den == 0 {
            return HardDecodeOutcome::Failure;
        }
        let value = gf.div(poly_eval(gf, &omega, xinv), den);
        if value != 0 {
            codeword[p] ^= value;
            error_count += 1;
        }
    }
    if !code.is_codeword(&codeword) {
        return HardDecodeOutcome::Failure;
    }
    HardDecodeOutcome::Corrected { codeword, error_count }
}

/// Generalized minimum distance decoding: errors-and-erasures trials with
/// 0, 2, 4, ... of the least reliable symbols erased. Among the successful
/// trials the candidate with the smallest `distance` wins (first found on ties).
pub fn gmd_decode(
    code: &RsCode,
    received: &[GfElem],
    reliabilities: &[f64],
    distance: impl Fn(&[GfElem]) -> f64,
) -> HardDecodeOutcome {
    assert_eq!(reliabilities.len(), code.n_sym());
    let mut order: Vec<usize> = (0..code.n_sym()).filter(|&j| !code.is_pinned_symbol(j)).collect();
    order.sort_by(|&a, &b| reliabilities[a].total_cmp(&reliabilities[b]));
    let max_erase = (code.d_min() - 1).min(order.len());
    let mut best: Option<(f64, HardDecodeOutcome)> = None;
    for f in (0..=max_erase).step_by(2) {
        let outcome = errors_erasures_decode(code, received, &order[..f]);
        if let Some(cw) = outcome.codeword() {
            let d = distance(cw);
            if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
                best = Some((d, outcome));
            }
        }
    }
    best.map_or(HardDecodeOutcome::Failure, |(_, o)| o)
}

/// Row `j` of a parity-check matrix that is systematic on `unreliable`: a
/// dual-code codeword equal to 1 at `unreliable[j]` and 0 at the other
/// positions of `unreliable`, with the remaining K positions filled in.
///
/// The dual of the narrow-sense code is the set of evaluations of
/// `x·g(x)`, `deg g < N-K`, at `x = β^p`, so the K erased entries are found
/// by interpolating `g` through the N-K known positions.
pub fn dual_fill_row(code: &RsCode, j: usize, unreliable: &[usize]) -> Vec<GfElem> {
    let gf = code.field();
    assert_eq!(unreliable.len(), code.redundancy(), "need exactly N-K positions");
    let x = |p: usize| gf.alpha_pow(p as i64);
    let pivot = unreliable[j];
    let xs = x(pivot);
    // denominator x_s · Π_{r≠j} (x_s − x_r)
    let mut den = xs;
    for (r, &p) in unreliable.iter().enumerate() {
        if r != j {
            den = gf.mul(den, xs ^ x(p));
        }
    }
    let den_inv = gf.inv(den).expect("distinct positions");
    (0..code.n_sym())
        .map(|p| {
            let xp = x(p);
            let mut num = xp;
            for (r, &q) in unreliable.iter().enumerate() {
                if r != j {
                    num = gf.mul(num, xp ^ x(q));
                }
            }
            gf.mul(num, den_inv)
        })
        .collect()
}

//! Reliability-driven adaptation of the binary parity-check matrix.
//!
//! Every procedure here only applies invertible row operations (or builds
//! rows from the dual code directly), so the row space always stays that of
//! the code's original `H_b`.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::algebraic::dual_fill_row;
use crate::bitmatrix::BitMatrix;
use crate::error::{Error, Result};
use crate::rscode::{binary_expansion, RsCode, SymbolMatrix};

/// Bit positions sorted by ascending reliability, ties by ascending index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReliabilityOrder(pub Vec<usize>);

impl ReliabilityOrder {
    pub fn positions(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

pub fn rank_order(magnitudes: &[f64]) -> ReliabilityOrder {
    let mut perm: Vec<usize> = (0..magnitudes.len()).collect();
    perm.sort_by(|&a, &b| magnitudes[a].total_cmp(&magnitudes[b]));
    ReliabilityOrder(perm)
}

#[derive(Clone, Debug)]
pub struct AdaptedMatrix {
    pub h: BitMatrix,
    /// The unreliable set; `unreliable[r]` is the position whose unit column
    /// has its one in row `r` (before any degree-2 chaining).
    pub unreliable: Vec<usize>,
    /// Positions passed over because their column was dependent on the
    /// columns already reduced when they were reached.
    pub skipped: Vec<usize>,
}

impl AdaptedMatrix {
    pub fn is_unreliable_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.h.cols()];
        for &p in &self.unreliable {
            mask[p] = true;
        }
        mask
    }
}

/// Gaussian elimination that turns the columns of the least reliable
/// independent positions into unit columns, in reliability order.
pub fn adapt_matrix(h0: &BitMatrix, order: &ReliabilityOrder) -> Result<AdaptedMatrix> {
    let rows = h0.rows();
    let mut h = h0.clone();
    let mut unreliable = Vec::with_capacity(rows);
    let mut skipped = Vec::new();
    for &col in order.positions() {
        if unreliable.len() == rows {
            break;
        }
        let r = unreliable.len();
        let Some(pivot) = (r..rows).find(|&p| h.get(p, col)) else {
            skipped.push(col);
            continue;
        };
        h.swap_rows(r, pivot);
        for q in 0..rows {
            if q != r && h.get(q, col) {
                h.xor_row(q, r);
            }
        }
        unreliable.push(col);
    }
    if unreliable.len() < rows {
        return Err(Error::RankDeficient { rank: unreliable.len(), expected: rows });
    }
    Ok(AdaptedMatrix { h, unreliable, skipped })
}

/// Chains the unit columns into a loop-free degree-2 structure: for a random
/// row permutation `p`, row `p[i+1]` is added to row `p[i]`. Afterwards the
/// unreliable column owned by `p[0]` keeps weight 1 and all others weight 2.
pub fn deg2_connect<R: Rng + ?Sized>(a: &mut AdaptedMatrix, rng: &mut R) {
    let rows = a.h.rows();
    if rows < 2 {
        return;
    }
    let mut perm: Vec<usize> = (0..rows).collect();
    perm.shuffle(rng);
    for w in perm.windows(2) {
        a.h.xor_row(w[0], w[1]);
    }
}

/// Symbol reliability = smallest bit magnitude within the symbol.
pub fn symbol_reliabilities(code: &RsCode, magnitudes: &[f64]) -> Vec<f64> {
    magnitudes.chunks(code.m()).map(|ch| ch.iter().copied().fold(f64::INFINITY, f64::min)).collect()
}

/// Builds a parity-check matrix that is the identity on the N-K least
/// reliable symbols, row by row from dual-code codewords, then expands it.
pub fn symbol_adapt(code: &RsCode, symbol_reliabilities: &[f64]) -> AdaptedMatrix {
    assert_eq!(symbol_reliabilities.len(), code.n_sym());
    let order = rank_order(symbol_reliabilities);
    let unreliable_sym = &order.positions()[..code.redundancy()];
    let mut hs = SymbolMatrix::zeros(code.redundancy(), code.n_sym());
    for j in 0..code.redundancy() {
        hs.set_row(j, &dual_fill_row(code, j, unreliable_sym));
    }
    let m = code.m();
    let unreliable = unreliable_sym.iter().flat_map(|&s| (0..m).map(move |b| s * m + b)).collect();
    AdaptedMatrix { h: binary_expansion(code.field(), &hs), unreliable, skipped: Vec::new() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitmatrix::pack_bits;
    use crate::galois::GfElem;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_codewords(code: &RsCode, count: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<u64>> {
        let q = code.field().size() as u16;
        (0..count)
            .map(|_| {
                let msg: Vec<GfElem> = (0..code.message_len()).map(|_| rng.random_range(0..q)).collect();
                pack_bits(&code.symbols_to_bits(&code.encode(&msg).unwrap()))
            })
            .collect()
    }

    #[test]
    fn stable_ordering() {
        assert_eq!(rank_order(&[0.1, 0.2, 0.3]).0, vec![0, 1, 2]);
        assert_eq!(rank_order(&[1.0; 4]).0, vec![0, 1, 2, 3]);
        assert_eq!(rank_order(&[0.3, 0.1, 0.1, 0.5]).0, vec![1, 2, 0, 3]);
        assert_eq!(rank_order(&[f64::INFINITY, 0.0, 2.0]).0, vec![1, 2, 0]);
    }

    #[test]
    fn already_systematic_is_untouched() {
        let h0 = BitMatrix::from_rows(&[[1u8, 0, 0, 1, 1, 0], [0, 1, 0, 0, 1, 1], [0, 0, 1, 1, 0, 1]]);
        let a = adapt_matrix(&h0, &ReliabilityOrder(vec![0, 1, 2, 3, 4, 5])).unwrap();
        assert_eq!(a.h, h0);
        assert_eq!(a.unreliable, vec![0, 1, 2]);
        assert!(a.skipped.is_empty());
    }

    #[test]
    fn dependent_column_is_skipped() {
        // columns 0 and 1 are equal
        let h0 = BitMatrix::from_rows(&[[1u8, 1, 0, 1, 0, 1], [0, 0, 1, 0, 1, 0], [1, 1, 1, 0, 0, 1]]);
        let a = adapt_matrix(&h0, &ReliabilityOrder((0..6).collect())).unwrap();
        assert_eq!(a.unreliable, vec![0, 2, 3]);
        assert_eq!(a.skipped, vec![1]);
        for (r, &c) in a.unreliable.iter().enumerate() {
            let col = a.h.column(c);
            assert!(col.iter().enumerate().all(|(i, &b)| b == (i == r)));
        }
    }

    #[test]
    fn rank_deficient_input_is_rejected() {
        let h0 = BitMatrix::from_rows(&[[1u8, 1, 0], [1, 1, 0]]);
        assert!(matches!(
            adapt_matrix(&h0, &ReliabilityOrder(vec![0, 1, 2])),
            Err(Error::RankDeficient { rank: 1, expected: 2 })
        ));
    }

    #[test]
    fn adapted_rs3125_keeps_row_space() {
        let code = RsCode::with_degree(5, 31, 25, 0).unwrap();
        let h0 = code.parity_check_binary();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let words = random_codewords(&code, 50, &mut rng);
        for _ in 0..100 {
            let mags: Vec<f64> = (0..h0.cols()).map(|_| rng.random::<f64>() * 4.0).collect();
            let order = rank_order(&mags);
            let mut a = adapt_matrix(h0, &order).unwrap();
            assert_eq!(a.unreliable.len(), 30);
            assert_eq!(a.h.rank(), 30);
            for w in &words {
                assert!(a.h.annihilates(w));
            }
            deg2_connect(&mut a, &mut rng);
            let mut hist = [0usize; 3];
            for &c in &a.unreliable {
                let w = a.h.column_weight(c);
                assert!(w <= 2);
                hist[w] += 1;
            }
            assert_eq!(hist, [0, 1, 29]);
            assert_eq!(a.h.rank(), 30);
            for w in &words {
                assert!(a.h.annihilates(w));
            }
        }
    }

    #[test]
    fn deg2_single_row_is_noop() {
        let h0 = BitMatrix::from_rows(&[[1u8, 1, 1]]);
        let mut a = adapt_matrix(&h0, &ReliabilityOrder(vec![0, 1, 2])).unwrap();
        let before = a.h.clone();
        deg2_connect(&mut a, &mut ChaCha8Rng::seed_from_u64(0));
        assert_eq!(a.h, before);
    }

    #[test]
    fn symbol_adaptation() {
        let code = RsCode::with_degree(4, 15, 11, 0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let words = random_codewords(&code, 200, &mut rng);
        let mags: Vec<f64> = (0..60).map(|_| rng.random::<f64>()).collect();
        let rel = symbol_reliabilities(&code, &mags);
        assert_eq!(rel[2], mags[8..12].iter().copied().fold(f64::INFINITY, f64::min));
        let a = symbol_adapt(&code, &rel);
        assert_eq!(a.unreliable.len(), 16);
        let lowest = rank_order(&rel).0[..4].to_vec();
        assert_eq!(a.unreliable[0], lowest[0] * 4);
        for (r, &c) in a.unreliable.iter().enumerate() {
            let col = a.h.column(c);
            assert!(col.iter().enumerate().all(|(i, &b)| b == (i == r)));
        }
        for w in &words {
            assert!(a.h.annihilates(w));
        }
        // ties go to the lowest symbol index
        let a = symbol_adapt(&code, &[1.0; 15]);
        assert_eq!(a.unreliable[..4], [0, 1, 2, 3]);
    }
}

//! Narrow-sense Reed-Solomon codes, their symbol parity-check matrix and its
//! binary image.
//!
//! A codeword is the coefficient vector of `c(x) = Σ c_j x^j`, with the
//! parity symbols at positions `0..N-K` and the message at `N-K..N`. A code
//! shortened by `s` keeps the top `s` message positions at zero; they stay in
//! every vector (so all matrices keep their full size) but are never sent.
//!
//! Bit `i` of the binary image is coefficient `i % m` of symbol `i / m`.

use crate::bitmatrix::BitMatrix;
use crate::error::{Error, Result};
use crate::galois::{GaloisField, GfElem};

/// A dense matrix over GF(2^m).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolMatrix {
    rows: usize,
    cols: usize,
    data: Vec<GfElem>,
}

impl SymbolMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> GfElem {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: GfElem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[GfElem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn set_row(&mut self, r: usize, values: &[GfElem]) {
        self.data[r * self.cols..(r + 1) * self.cols].copy_from_slice(values);
    }

    /// `H · v` over the field.
    pub fn mul_vec(&self, field: &GaloisField, v: &[GfElem]) -> Vec<GfElem> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|r| self.row(r).iter().zip(v).fold(0, |acc, (&h, &x)| acc ^ field.mul(h, x))).collect()
    }

    /// Rank over GF(2^m).
    pub fn rank(&self, field: &GaloisField) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for c in 0..m.cols {
            let Some(p) = (rank..m.rows).find(|&r| m.get(r, c) != 0) else {
                continue;
            };
            for k in 0..m.cols {
                m.data.swap(rank * m.cols + k, p * m.cols + k);
            }
            let inv = field.inv(m.get(rank, c)).expect("nonzero pivot");
            for r in 0..m.rows {
                if r == rank || m.get(r, c) == 0 {
                    continue;
                }
                let f = field.mul(m.get(r, c), inv);
                for k in 0..m.cols {
                    let v = m.get(r, k) ^ field.mul(f, m.get(rank, k));
                    m.set(r, k, v);
                }
            }
            rank += 1;
        }
        rank
    }
}

/// Replaces each field entry by its m×m multiplication block, so that
/// `H_b · bits(c) = bits(H_s · c)` row-block by row-block.
pub fn binary_expansion(field: &GaloisField, hs: &SymbolMatrix) -> BitMatrix {
    let m = field.m() as usize;
    let mut hb = BitMatrix::zeros(hs.rows() * m, hs.cols() * m);
    for i in 0..hs.rows() {
        for j in 0..hs.cols() {
            let a = hs.get(i, j);
            if a == 0 {
                continue;
            }
            for b in 0..m {
                let mut col = field.mul(a, 1 << b);
                while col != 0 {
                    let r = col.trailing_zeros() as usize;
                    col &= col - 1;
                    hb.set(i * m + r, j * m + b, true);
                }
            }
        }
    }
    hb
}

#[derive(Clone, Debug)]
pub struct RsCode {
    field: GaloisField,
    n: usize,
    k: usize,
    shorten: usize,
    hs: SymbolMatrix,
    hb: BitMatrix,
    /// Generator polynomial coefficients, lowest degree first, monic.
    generator: Vec<GfElem>,
}

impl RsCode {
    /// An (N,K) code over `field`, shortened by `shorten` message symbols.
    pub fn new(field: GaloisField, n: usize, k: usize, shorten: usize) -> Result<Self> {
        if k == 0 || k >= n {
            return Err(Error::InvalidCode(format!("need 1 <= K < N, got N={n} K={k}")));
        }
        if n > field.order() {
            return Err(Error::InvalidCode(format!("N={n} exceeds 2^m-1={} for m={}", field.order(), field.m())));
        }
        if shorten >= k {
            return Err(Error::InvalidCode(format!("cannot shorten by {shorten} with K={k}")));
        }
        let hs = parity_check_symbol(&field, n, k);
        let hb = binary_expansion(&field, &hs);
        let mut generator = vec![1 as GfElem];
        for i in 1..=(n - k) {
            let root = field.alpha_pow(i as i64);
            let mut next = vec![0 as GfElem; generator.len() + 1];
            for (d, &g) in generator.iter().enumerate() {
                next[d + 1] ^= g;
                next[d] ^= field.mul(g, root);
            }
            generator = next;
        }
        Ok(Self { field, n, k, shorten, hs, hb, generator })
    }

    /// Convenience constructor using the default primitive polynomial for `m`.
    pub fn with_degree(m: u32, n: usize, k: usize, shorten: usize) -> Result<Self> {
        Self::new(GaloisField::new(m)?, n, k, shorten)
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    pub fn m(&self) -> usize {
        self.field.m() as usize
    }

    /// Symbol length N (including shortened positions).
    pub fn n_sym(&self) -> usize {
        self.n
    }

    pub fn k_sym(&self) -> usize {
        self.k
    }

    pub fn shorten(&self) -> usize {
        self.shorten
    }

    pub fn n_bits(&self) -> usize {
        self.n * self.m()
    }

    pub fn k_bits(&self) -> usize {
        self.k * self.m()
    }

    /// `N - K`, the number of parity symbols.
    pub fn redundancy(&self) -> usize {
        self.n - self.k
    }

    pub fn d_min(&self) -> usize {
        self.n - self.k + 1
    }

    pub fn t(&self) -> usize {
        (self.n - self.k) / 2
    }

    /// Message symbols actually carried per frame.
    pub fn message_len(&self) -> usize {
        self.k - self.shorten
    }

    /// Transmitted code rate of the (possibly shortened) code.
    pub fn rate(&self) -> f64 {
        (self.k - self.shorten) as f64 / (self.n - self.shorten) as f64
    }

    #[inline]
    pub fn is_pinned_symbol(&self, j: usize) -> bool {
        j >= self.n - self.shorten
    }

    #[inline]
    pub fn is_pinned_bit(&self, i: usize) -> bool {
        self.is_pinned_symbol(i / self.m())
    }

    /// Bits actually sent over the channel.
    pub fn transmitted_bits(&self) -> usize {
        (self.n - self.shorten) * self.m()
    }

    pub fn parity_check_symbol(&self) -> &SymbolMatrix {
        &self.hs
    }

    pub fn parity_check_binary(&self) -> &BitMatrix {
        &self.hb
    }

    pub fn generator(&self) -> &[GfElem] {
        &self.generator
    }

    /// Systematic encoding: `c(x) = x^(N-K) m(x) + (x^(N-K) m(x) mod g(x))`.
    pub fn encode(&self, msg: &[GfElem]) -> Result<Vec<GfElem>> {
        if msg.len() != self.message_len() {
            return Err(Error::Length { got: msg.len(), expected: self.message_len() });
        }
        let r = self.redundancy();
        let mut cw = vec![0 as GfElem; self.n];
        cw[r..r + msg.len()].copy_from_slice(msg);
        // long division of x^r m(x) by g(x), highest degree first
        let mut rem = cw.clone();
        for d in (r..self.n).rev() {
            let coef = rem[d];
            if coef == 0 {
                continue;
            }
            for (i, &g) in self.generator.iter().enumerate() {
                rem[d - r + i] ^= self.field.mul(coef, g);
            }
        }
        cw[..r].copy_from_slice(&rem[..r]);
        Ok(cw)
    }

    /// `H_s · c`.
    pub fn syndrome(&self, cw: &[GfElem]) -> Vec<GfElem> {
        self.hs.mul_vec(&self.field, cw)
    }

    pub fn is_codeword(&self, cw: &[GfElem]) -> bool {
        cw.len() == self.n
            && self.syndrome(cw).iter().all(|&s| s == 0)
            && (self.n - self.shorten..self.n).all(|j| cw[j] == 0)
    }

    pub fn symbols_to_bits(&self, sym: &[GfElem]) -> Vec<u8> {
        let m = self.m();
        sym.iter().flat_map(|&s| (0..m).map(move |b| (s >> b & 1) as u8)).collect()
    }

    pub fn bits_to_symbols(&self, bits: &[u8]) -> Vec<GfElem> {
        bits.chunks(self.m())
            .map(|ch| ch.iter().enumerate().fold(0, |acc, (b, &v)| acc | ((v & 1) as GfElem) << b))
            .collect()
    }
}

/// The (N-K)×N matrix with entry `(i, j) = β^((i+1)·j)`.
pub fn parity_check_symbol(field: &GaloisField, n: usize, k: usize) -> SymbolMatrix {
    let mut hs = SymbolMatrix::zeros(n - k, n);
    for i in 0..n - k {
        for j in 0..n {
            hs.set(i, j, field.alpha_pow(((i + 1) * j) as i64));
        }
    }
    hs
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rs73() -> RsCode {
        RsCode::with_degree(3, 7, 3, 0).unwrap()
    }

    #[test]
    fn first_row_is_powers_of_beta() {
        let code = RsCode::with_degree(5, 31, 25, 0).unwrap();
        let f = code.field();
        for j in 0..31 {
            assert_eq!(code.parity_check_symbol().get(0, j), f.alpha_pow(j as i64));
        }
    }

    #[test]
    fn rs75_entry() {
        let f = GaloisField::new(3).unwrap();
        let hs = parity_check_symbol(&f, 7, 5);
        assert_eq!((hs.rows(), hs.cols()), (2, 7));
        // second row, column exponent 3: β^(2·3)
        assert_eq!(hs.get(1, 3), f.alpha_pow(6));
        assert_eq!(parity_check_symbol(&f, 7, 7).rows(), 0);
    }

    #[test]
    fn dims_and_rank() {
        let code = rs73();
        assert_eq!(code.parity_check_binary().rows(), 12);
        assert_eq!(code.parity_check_binary().cols(), 21);
        for (m, n, k) in [(3, 7, 3), (4, 15, 11), (5, 31, 25), (6, 63, 55), (5, 31, 15)] {
            let c = RsCode::with_degree(m, n, k, 0).unwrap();
            assert_eq!(c.parity_check_binary().rank(), (n - k) * m as usize);
        }
    }

    #[test]
    fn identity_block_expands_to_identity() {
        let f = GaloisField::new(4).unwrap();
        let mut hs = SymbolMatrix::zeros(2, 2);
        hs.set(0, 0, 1);
        hs.set(1, 1, 1);
        assert_eq!(binary_expansion(&f, &hs), BitMatrix::identity(8));
    }

    #[test]
    fn binary_and_symbol_syndromes_agree() {
        let code = rs73();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut zero_count = 0;
        for trial in 0..400 {
            let v: Vec<GfElem> = if trial % 2 == 0 {
                (0..7).map(|_| rng.random_range(0..8)).collect()
            } else {
                let msg: Vec<GfElem> = (0..3).map(|_| rng.random_range(0..8)).collect();
                code.encode(&msg).unwrap()
            };
            let sym_zero = code.syndrome(&v).iter().all(|&s| s == 0);
            let bits = code.symbols_to_bits(&v);
            let bin_zero = code.parity_check_binary().mul_vec(&bits).iter().all(|&b| b == 0);
            assert_eq!(sym_zero, bin_zero);
            zero_count += sym_zero as usize;
        }
        assert!(zero_count >= 200);
    }

    #[test]
    fn exhaustive_rs73_codebook() {
        let code = rs73();
        let mut min_weight = usize::MAX;
        for idx in 0..512u32 {
            let msg = [(idx & 7) as GfElem, (idx >> 3 & 7) as GfElem, (idx >> 6) as GfElem];
            let cw = code.encode(&msg).unwrap();
            assert_eq!(&cw[4..], &msg);
            assert!(code.is_codeword(&cw));
            let bits = code.symbols_to_bits(&cw);
            assert!(code.parity_check_binary().mul_vec(&bits).iter().all(|&b| b == 0));
            let w = cw.iter().filter(|&&s| s != 0).count();
            if idx != 0 {
                min_weight = min_weight.min(w);
            }
        }
        assert_eq!(min_weight, 5);
    }

    #[test]
    fn zero_message() {
        let code = rs73();
        assert_eq!(code.encode(&[0, 0, 0]).unwrap(), vec![0; 7]);
        assert!(code.encode(&[0, 0]).is_err());
    }

    #[test]
    fn shortened_dvb_code() {
        let code = RsCode::with_degree(8, 255, 239, 51).unwrap();
        assert_eq!(code.message_len(), 188);
        assert_eq!(code.transmitted_bits(), 204 * 8);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let msg: Vec<GfElem> = (0..188).map(|_| rng.random_range(0..256)).collect();
        let cw = code.encode(&msg).unwrap();
        assert!(cw[204..].iter().all(|&s| s == 0));
        assert!(code.syndrome(&cw).iter().all(|&s| s == 0));
    }

    #[test]
    fn bit_packing_roundtrip() {
        let code = rs73();
        let sym = vec![1, 2, 3, 4, 5, 6, 7];
        let bits = code.symbols_to_bits(&sym);
        assert_eq!(&bits[..6], &[1, 0, 0, 0, 1, 0]);
        assert_eq!(code.bits_to_symbols(&bits), sym);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(RsCode::with_degree(3, 8, 3, 0).is_err());
        assert!(RsCode::with_degree(3, 7, 7, 0).is_err());
        assert!(RsCode::with_degree(3, 7, 0, 0).is_err());
        assert!(RsCode::with_degree(3, 7, 3, 3).is_err());
    }
}

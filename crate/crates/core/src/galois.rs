//! Arithmetic in GF(2^m) with log/antilog tables.
//!
//! Elements are plain `u16` values holding the coefficients of the polynomial
//! basis `{1, β, ..., β^(m-1)}`, bit `i` being the coefficient of `β^i`.

use crate::bitmatrix::BitMatrix;
use crate::error::{Error, Result};

pub type GfElem = u16;

/// Default primitive polynomials, indexed by `m`. The GF(256) entry is the
/// usual x^8+x^4+x^3+x^2+1 used by DVB and CCSDS-compatible RS codes.
const DEFAULT_POLYS: [u32; 17] =
    [0, 0, 0x7, 0xB, 0x13, 0x25, 0x43, 0x89, 0x11D, 0x211, 0x409, 0x805, 0x1053, 0x201B, 0x4443, 0x8003, 0x1100B];

#[derive(Clone, Debug)]
pub struct GaloisField {
    m: u32,
    poly: u32,
    /// `exp[i] = β^i`, stored twice over so that `exp[log a + log b]` needs no reduction.
    exp: Vec<GfElem>,
    log: Vec<u32>,
}

impl GaloisField {
    pub fn new(m: u32) -> Result<Self> {
        if !(2..=16).contains(&m) {
            return Err(Error::UnsupportedDegree(m));
        }
        Self::with_poly(m, DEFAULT_POLYS[m as usize])
    }

    /// Builds the field from an explicit polynomial mask (bit `m` must be set).
    pub fn with_poly(m: u32, poly: u32) -> Result<Self> {
        if !(2..=16).contains(&m) {
            return Err(Error::UnsupportedDegree(m));
        }
        if poly >> m != 1 {
            return Err(Error::NotPrimitive { m, poly });
        }
        let q = 1usize << m;
        let order = q - 1;
        let mut exp = vec![0 as GfElem; 2 * order];
        let mut log = vec![0u32; q];
        let mut seen = vec![false; q];
        let mut x: u32 = 1;
        for i in 0..order {
            if seen[x as usize] {
                return Err(Error::NotPrimitive { m, poly });
            }
            seen[x as usize] = true;
            exp[i] = x as GfElem;
            log[x as usize] = i as u32;
            x <<= 1;
            if x & (1 << m) != 0 {
                x ^= poly;
            }
        }
        if x != 1 {
            return Err(Error::NotPrimitive { m, poly });
        }
        for i in order..2 * order {
            exp[i] = exp[i - order];
        }
        Ok(Self { m, poly, exp, log })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn poly(&self) -> u32 {
        self.poly
    }

    /// Number of field elements, `2^m`.
    pub fn size(&self) -> usize {
        1 << self.m
    }

    /// Multiplicative order `2^m - 1`.
    pub fn order(&self) -> usize {
        self.size() - 1
    }

    #[inline]
    pub fn add(&self, a: GfElem, b: GfElem) -> GfElem {
        a ^ b
    }

    #[inline]
    pub fn mul(&self, a: GfElem, b: GfElem) -> GfElem {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    pub fn inv(&self, a: GfElem) -> Result<GfElem> {
        if a == 0 {
            return Err(Error::ZeroInverse(a));
        }
        let order = self.order() as u32;
        Ok(self.exp[((order - self.log[a as usize]) % order) as usize])
    }

    /// `a / b`; panics on `b == 0`.
    #[inline]
    pub fn div(&self, a: GfElem, b: GfElem) -> GfElem {
        assert!(b != 0, "division by zero in GF(2^{})", self.m);
        if a == 0 {
            return 0;
        }
        let order = self.order() as u32;
        self.exp[((self.log[a as usize] + order - self.log[b as usize]) % order) as usize]
    }

    /// `β^e` for any integer exponent.
    #[inline]
    pub fn alpha_pow(&self, e: i64) -> GfElem {
        self.exp[e.rem_euclid(self.order() as i64) as usize]
    }

    pub fn pow(&self, a: GfElem, e: i64) -> GfElem {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        self.alpha_pow(self.log[a as usize] as i64 * e)
    }

    /// Discrete log base β; `None` for zero.
    pub fn log(&self, a: GfElem) -> Option<u32> {
        (a != 0).then(|| self.log[a as usize])
    }

    /// The m×m GF(2) matrix of `b ↦ a·b` in the polynomial basis: column `j`
    /// is the coefficient vector of `a·β^j`.
    pub fn companion_expand(&self, a: GfElem) -> BitMatrix {
        let m = self.m as usize;
        let mut out = BitMatrix::zeros(m, m);
        for j in 0..m {
            let col = self.mul(a, 1 << j);
            for i in 0..m {
                if col >> i & 1 == 1 {
                    out.set(i, j, true);
                }
            }
        }
        out
    }
}

//! Bit-packed linear algebra over GF(2) and per-matrix error-detection
//! quantities.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Range;

use num_bigint::BigInt;

use crate::channel::Bsc;
use crate::error::{Error, Result};
use crate::exact::{binomial, RationalPoly};
use crate::math;

const WORD: usize = 64;

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

#[inline]
fn tail_mask(bits: usize) -> u64 {
    match bits % WORD {
        0 => u64::MAX,
        r => (1u64 << r) - 1,
    }
}

/// Binary vector packed into 64-bit words, least significant bit first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector { len, words: alloc::vec![0; words_for(len)] }
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut v = BitVector::zeros(0);
        for b in bits {
            if v.len.is_multiple_of(WORD) {
                v.words.push(0);
            }
            if b {
                v.words[v.len / WORD] |= 1 << (v.len % WORD);
            }
            v.len += 1;
        }
        v
    }

    /// Lowest `len` bits of `value`; bit `i` of `value` becomes position `i`.
    pub fn from_u64(len: usize, value: u64) -> Self {
        assert!(len <= WORD);
        let mut v = BitVector::zeros(len);
        if len > 0 {
            v.words[0] = value & tail_mask(len);
        }
        v
    }

    /// Parses a string of `0`/`1` characters.
    pub fn parse(s: &str) -> Option<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => return None,
            }
        }
        Some(BitVector::from_bits(bits))
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len);
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(i < self.len);
        let mask = 1u64 << (i % WORD);
        if bit {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len);
        dot_words(&self.words, &other.words)
    }

    /// Size of the intersection of the supports.
    pub fn overlap(&self, other: &BitVector) -> usize {
        assert_eq!(self.len, other.len);
        self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }
}

#[inline]
fn dot_words(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).fold(0u32, |acc, (x, y)| acc ^ (x & y).count_ones()) & 1 == 1
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

/// Dense `rows x cols` binary matrix with bit-packed rows. Bits past column
/// `cols - 1` in each row are always zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyMatrix { rows, cols });
        }
        let stride = words_for(cols);
        Ok(BitMatrix { rows, cols, stride, data: alloc::vec![0; rows * stride] })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = BitMatrix::zeros(n, n)?;
        for i in 0..n {
            m.set(i, i, true);
        }
        Ok(m)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Result<Self> {
        let mut m = BitMatrix::zeros(rows, cols)?;
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        Ok(m)
    }

    pub fn from_rows(rows: &[BitVector]) -> Result<Self> {
        let cols = rows.first().map_or(0, BitVector::len);
        let mut m = BitMatrix::zeros(rows.len(), cols)?;
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, actual: r.len() });
            }
            m.row_words_mut(i).copy_from_slice(r.words());
        }
        Ok(m)
    }

    /// Matrix whose entry `(i, j)` is bit `i * cols + j` of `counter`.
    pub fn from_counter(rows: usize, cols: usize, counter: u64) -> Result<Self> {
        assert!(rows * cols <= WORD);
        BitMatrix::from_fn(rows, cols, |i, j| counter >> (i * cols + j) & 1 == 1)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(i < self.rows && j < self.cols);
        self.data[i * self.stride + j / WORD] >> (j % WORD) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, bit: bool) {
        assert!(i < self.rows && j < self.cols);
        let w = &mut self.data[i * self.stride + j / WORD];
        let mask = 1u64 << (j % WORD);
        if bit {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub fn row_words(&self, i: usize) -> &[u64] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }

    #[inline]
    fn row_words_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.stride..(i + 1) * self.stride]
    }

    pub fn row(&self, i: usize) -> BitVector {
        BitVector { len: self.cols, words: self.row_words(i).to_vec() }
    }

    /// Total number of ones.
    pub fn weight(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// `H x^t`.
    pub fn syndrome(&self, x: &BitVector) -> BitVector {
        assert_eq!(x.len(), self.cols);
        BitVector::from_bits((0..self.rows).map(|i| dot_words(self.row_words(i), x.words())))
    }

    /// Whether `H x^t = 0`.
    pub fn annihilates(&self, x: &BitVector) -> bool {
        assert_eq!(x.len(), self.cols);
        (0..self.rows).all(|i| !dot_words(self.row_words(i), x.words()))
    }

    /// Reduced row echelon form; returns the pivot column of each nonzero row.
    fn reduce(&self) -> (Vec<u64>, Vec<usize>) {
        let mut data = self.data.clone();
        let stride = self.stride;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let (wi, mask) = (c / WORD, 1u64 << (c % WORD));
            let Some(p) = (r..self.rows).find(|&i| data[i * stride + wi] & mask != 0) else {
                continue;
            };
            if p != r {
                for k in 0..stride {
                    data.swap(p * stride + k, r * stride + k);
                }
            }
            for i in 0..self.rows {
                if i != r && data[i * stride + wi] & mask != 0 {
                    for k in wi..stride {
                        let v = data[r * stride + k];
                        data[i * stride + k] ^= v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (data, pivots)
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            if i > 0 {
                f.write_str("\n")?;
            }
            for j in 0..self.cols {
                f.write_str(if self.get(i, j) { "1" } else { "0" })?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitMatrix({}x{}; ", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", self.row(i))?;
        }
        f.write_str(")")
    }
}

/// GF(2) row rank.
pub fn rank(h: &BitMatrix) -> usize {
    h.reduce().1.len()
}

/// Basis of `{x : H x^t = 0}`, one vector per free column.
pub fn nullspace_basis(h: &BitMatrix) -> Vec<BitVector> {
    let (data, pivots) = h.reduce();
    let stride = h.stride;
    let mut is_pivot = alloc::vec![false; h.cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..h.cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut x = BitVector::zeros(h.cols);
            x.set(f, true);
            for (r, &p) in pivots.iter().enumerate() {
                if data[r * stride + f / WORD] >> (f % WORD) & 1 == 1 {
                    x.set(p, true);
                }
            }
            x
        })
        .collect()
}

/// Upper bound on the nullspace dimension that may be enumerated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationGuard {
    max_dimension: u32,
}

impl EnumerationGuard {
    pub const DEFAULT_DIMENSION: u32 = 28;

    /// At most `2^max_dimension` codewords; capped at 63.
    pub fn new(max_dimension: u32) -> Self {
        EnumerationGuard { max_dimension: max_dimension.min(63) }
    }

    pub fn max_dimension(&self) -> u32 {
        self.max_dimension
    }

    pub fn check(&self, dimension: usize) -> Result<()> {
        if dimension > self.max_dimension as usize {
            Err(Error::GuardExceeded { dimension, limit: self.max_dimension })
        } else {
            Ok(())
        }
    }
}

impl Default for EnumerationGuard {
    fn default() -> Self {
        EnumerationGuard::new(Self::DEFAULT_DIMENSION)
    }
}

/// Number of codewords of each Hamming weight, `A_0..A_n`.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct WeightDistribution {
    counts: Vec<u64>,
}

impl WeightDistribution {
    pub fn from_counts(counts: Vec<u64>) -> Self {
        assert!(!counts.is_empty());
        WeightDistribution { counts }
    }

    /// Code length `n`.
    pub fn length(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn count(&self, w: usize) -> u64 {
        self.counts[w]
    }

    /// Number of codewords, `2^(n - rank)`.
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// `sum_{w >= 1} A_w eps^w (1 - eps)^(n - w)`.
    pub fn undetected_error_prob(&self, ch: &Bsc) -> f64 {
        let n = self.length() as u32;
        let mut acc = math::CompensatedSum::default();
        for (w, &a) in self.counts.iter().enumerate().skip(1) {
            if a > 0 {
                acc.add(math::exp(math::ln(a as f64) + ch.ln_pattern_prob(n, w as u32)));
            }
        }
        acc.value()
    }

    /// The same sum expanded in the monomial basis of `eps`.
    pub fn pu_polynomial(&self) -> RationalPoly {
        let n = self.length();
        let mut coeffs = alloc::vec![BigInt::from(0); n + 1];
        for (w, &a) in self.counts.iter().enumerate().skip(1) {
            if a == 0 {
                continue;
            }
            for j in 0..=n - w {
                let c = BigInt::from(a) * BigInt::from(binomial((n - w) as u64, j as u64));
                if j % 2 == 0 {
                    coeffs[w + j] += c;
                } else {
                    coeffs[w + j] -= c;
                }
            }
        }
        RationalPoly::from_integer_coeffs(coeffs)
    }
}

/// Adds the weights of the codewords with Gray-code indices in `range` to
/// `counts`. Index `i` denotes the combination of basis vectors selected by
/// the bits of `i ^ (i >> 1)`; disjoint ranges can be accumulated
/// independently and summed.
pub fn accumulate_codeword_weights(basis: &[BitVector], n: usize, range: Range<u64>, counts: &mut [u64]) {
    assert!(counts.len() > n);
    assert!(basis.len() < 64 && range.end <= 1u64 << basis.len());
    if range.is_empty() {
        return;
    }
    let stride = words_for(n);
    let flat: Vec<u64> = basis.iter().flat_map(|b| b.words().iter().copied()).collect();
    let mut cw = alloc::vec![0u64; stride];
    let gray = range.start ^ (range.start >> 1);
    for (j, _) in basis.iter().enumerate().filter(|(j, _)| gray >> j & 1 == 1) {
        for k in 0..stride {
            cw[k] ^= flat[j * stride + k];
        }
    }
    counts[cw.iter().map(|w| w.count_ones() as usize).sum::<usize>()] += 1;
    if stride == 1 {
        let mut c = cw[0];
        for i in range.start + 1..range.end {
            c ^= flat[i.trailing_zeros() as usize];
            counts[c.count_ones() as usize] += 1;
        }
    } else {
        for i in range.start + 1..range.end {
            let j = i.trailing_zeros() as usize;
            let mut wt = 0;
            for k in 0..stride {
                cw[k] ^= flat[j * stride + k];
                wt += cw[k].count_ones() as usize;
            }
            counts[wt] += 1;
        }
    }
}

/// Weight distribution of `C(H)` under the default enumeration guard.
pub fn weight_distribution(h: &BitMatrix) -> Result<WeightDistribution> {
    weight_distribution_with(h, EnumerationGuard::default())
}

pub fn weight_distribution_with(h: &BitMatrix, guard: EnumerationGuard) -> Result<WeightDistribution> {
    let basis = nullspace_basis(h);
    guard.check(basis.len())?;
    let mut counts = alloc::vec![0u64; h.cols() + 1];
    accumulate_codeword_weights(&basis, h.cols(), 0..1u64 << basis.len(), &mut counts);
    Ok(WeightDistribution { counts })
}

pub fn undetected_error_prob(h: &BitMatrix, ch: &Bsc) -> Result<f64> {
    Ok(weight_distribution(h)?.undetected_error_prob(ch))
}

pub fn pu_polynomial(h: &BitMatrix) -> Result<RationalPoly> {
    Ok(weight_distribution(h)?.pu_polynomial())
}

/// Renders a matrix as rows of `0`/`1` characters.
pub fn to_row_strings(h: &BitMatrix) -> Vec<String> {
    (0..h.rows()).map(|i| alloc::format!("{}", h.row(i))).collect()
}

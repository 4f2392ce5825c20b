use serde::{Serialize, Serializer};
use std::fmt;

/// Fixed-length vector over the two-element field, packed into 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Parities of an integer vector.
    pub fn from_parities<I: IntoIterator<Item = i64>>(xs: I) -> Self {
        let bits: Vec<bool> = xs.into_iter().map(|x| x.rem_euclid(2) == 1).collect();
        Self::from_bools(&bits)
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, b: bool) {
        debug_assert!(i < self.len);
        let m = 1u64 << (i % 64);
        if b {
            self.words[i / 64] |= m;
        } else {
            self.words[i / 64] &= !m;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitVec) -> BitVec {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len, "length mismatch");
        self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones()).sum::<u32>() % 2 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    pub fn to_u8s(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.get(i) as u8).collect()
    }

    /// Concatenation `[self | other]`.
    pub fn concat(&self, other: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.len + other.len);
        for i in self.ones() {
            out.set(i, true);
        }
        for i in other.ones() {
            out.set(self.len + i, true);
        }
        out
    }

    pub fn slice(&self, start: usize, end: usize) -> BitVec {
        let mut out = BitVec::zeros(end - start);
        for i in start..end {
            if self.get(i) {
                out.set(i - start, true);
            }
        }
        out
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len).map(|i| if self.get(i) { '1' } else { '0' }).collect();
        write!(f, "[{s}]")
    }
}

impl Serialize for BitVec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq((0..self.len).map(|i| self.get(i) as u8))
    }
}

/// Dense matrix over the two-element field, stored as packed rows.
#[derive(Clone, PartialEq, Eq)]
pub struct Z2Matrix {
    cols: usize,
    rows: Vec<BitVec>,
}

impl Z2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Z2Matrix { cols, rows: vec![BitVec::zeros(cols); rows] }
    }

    pub fn from_rows(cols: usize, rows: Vec<BitVec>) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "row length mismatch");
        Z2Matrix { cols, rows }
    }

    pub fn from_int_rows(rows: &[Vec<i64>], cols: usize) -> Self {
        Self::from_rows(cols, rows.iter().map(|r| BitVec::from_parities(r.iter().copied())).collect())
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &BitVec {
        &self.rows[i]
    }

    pub fn row_vecs(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, b: bool) {
        self.rows[i].set(j, b)
    }

    pub fn flip(&mut self, i: usize, j: usize) {
        self.rows[i].flip(j)
    }

    pub fn transpose(&self) -> Z2Matrix {
        let mut t = Z2Matrix::zeros(self.cols, self.rows.len());
        for (i, r) in self.rows.iter().enumerate() {
            for j in r.ones() {
                t.set(j, i, true);
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.cols, "shape mismatch");
        BitVec::from_bools(&self.rows.iter().map(|r| r.dot(v)).collect::<Vec<_>>())
    }

    pub fn mul(&self, other: &Z2Matrix) -> Z2Matrix {
        assert_eq!(self.cols, other.nrows(), "shape mismatch");
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut acc = BitVec::zeros(other.cols);
                for k in r.ones() {
                    acc.xor_assign(&other.rows[k]);
                }
                acc
            })
            .collect();
        Z2Matrix { cols: other.cols, rows }
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitVec::is_zero)
    }

    /// Columns as packed vectors.
    pub fn columns(&self) -> Vec<BitVec> {
        self.transpose().rows
    }
}

impl fmt::Debug for Z2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Z2Matrix {}x{} [", self.rows.len(), self.cols)?;
        for r in &self.rows {
            writeln!(f, "  {r:?}")?;
        }
        write!(f, "]")
    }
}

/// Reduced echelon basis of a subspace, supporting membership and reduction.
///
/// Each stored vector has a distinct pivot (its first nonzero coordinate) that is zero in every
/// other stored vector. Vectors are inserted in the given order, so the basis is deterministic.
#[derive(Clone, Debug)]
pub struct Z2Span {
    len: usize,
    basis: Vec<BitVec>,
    pivots: Vec<usize>,
    /// `origin[k]` expresses `basis[k]` in terms of the inserted generators.
    origin: Vec<BitVec>,
    generators: usize,
}

impl Z2Span {
    pub fn new(len: usize) -> Self {
        Z2Span { len, basis: Vec::new(), pivots: Vec::new(), origin: Vec::new(), generators: 0 }
    }

    pub fn from_vectors<'a, I: IntoIterator<Item = &'a BitVec>>(len: usize, vs: I) -> Self {
        let vs: Vec<&BitVec> = vs.into_iter().collect();
        let mut span = Z2Span::new(len);
        span.generators = vs.len();
        for (g, v) in vs.into_iter().enumerate() {
            span.insert_tracked(v.clone(), BitVec::unit(span.generators, g));
        }
        span
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.len
    }

    pub fn basis(&self) -> &[BitVec] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Returns the reduced vector together with the generator combination that was subtracted.
    pub fn reduce_tracked(&self, v: &BitVec) -> (BitVec, BitVec) {
        assert_eq!(v.len(), self.len, "length mismatch");
        let mut r = v.clone();
        let mut comb = BitVec::zeros(self.generators);
        for (k, &p) in self.pivots.iter().enumerate() {
            if r.get(p) {
                r.xor_assign(&self.basis[k]);
                comb.xor_assign(&self.origin[k]);
            }
        }
        (r, comb)
    }

    pub fn reduce(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.len, "length mismatch");
        let mut r = v.clone();
        for (k, &p) in self.pivots.iter().enumerate() {
            if r.get(p) {
                r.xor_assign(&self.basis[k]);
            }
        }
        r
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Inserts `v`; returns false if it was already in the span.
    pub fn insert(&mut self, v: BitVec) -> bool {
        let g = self.generators;
        self.generators += 1;
        for o in &mut self.origin {
            let mut ext = BitVec::zeros(self.generators);
            for i in o.ones() {
                ext.set(i, true);
            }
            *o = ext;
        }
        self.insert_tracked(v, BitVec::unit(self.generators, g))
    }

    fn insert_tracked(&mut self, v: BitVec, tag: BitVec) -> bool {
        let (r, comb) = self.reduce_tracked(&v);
        let Some(p) = r.first_one() else { return false };
        let mut tag = tag;
        tag.xor_assign(&comb);
        // keep the basis fully reduced
        for k in 0..self.basis.len() {
            if self.basis[k].get(p) {
                self.basis[k].xor_assign(&r);
                self.origin[k].xor_assign(&tag);
            }
        }
        let pos = self.pivots.partition_point(|&q| q < p);
        self.basis.insert(pos, r);
        self.pivots.insert(pos, p);
        self.origin.insert(pos, tag);
        true
    }

    /// Writes `v` (assumed in the span) as a combination of the inserted generators.
    pub fn express(&self, v: &BitVec) -> Option<BitVec> {
        let (r, comb) = self.reduce_tracked(v);
        r.is_zero().then_some(comb)
    }
}

pub fn z2_rank(m: &Z2Matrix) -> usize {
    Z2Span::from_vectors(m.ncols(), m.row_vecs()).dim()
}

/// Solutions of `M x = b`: a particular solution and a kernel basis.
#[derive(Clone, Debug)]
pub struct Z2Solution {
    pub particular: BitVec,
    pub kernel: Vec<BitVec>,
}

pub fn z2_solve(m: &Z2Matrix, b: &BitVec) -> Option<Z2Solution> {
    assert_eq!(b.len(), m.nrows(), "shape mismatch");
    let n = m.ncols();
    // Gauss-Jordan on the augmented rows [M | b]
    let mut rows: Vec<BitVec> = m.row_vecs().iter().enumerate().map(|(i, r)| {
        let mut a = BitVec::zeros(n + 1);
        for j in r.ones() {
            a.set(j, true);
        }
        a.set(n, b.get(i));
        a
    }).collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..rows.len()).find(|&i| rows[i].get(col)) else { continue };
        rows.swap(rank, p);
        let pr = rows[rank].clone();
        for (i, r) in rows.iter_mut().enumerate() {
            if i != rank && r.get(col) {
                r.xor_assign(&pr);
            }
        }
        pivots.push(col);
        rank += 1;
    }
    if rows[rank..].iter().any(|r| r.get(n)) {
        return None;
    }
    let mut particular = BitVec::zeros(n);
    for (k, &c) in pivots.iter().enumerate() {
        particular.set(c, rows[k].get(n));
    }
    let mut is_pivot = vec![false; n];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let kernel = (0..n)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = BitVec::unit(n, f);
            for (k, &c) in pivots.iter().enumerate() {
                if rows[k].get(f) {
                    v.set(c, true);
                }
            }
            v
        })
        .collect();
    Some(Z2Solution { particular, kernel })
}

/// Whether `v` lies in the column space of `m`.
pub fn z2_in_image(m: &Z2Matrix, v: &BitVec) -> bool {
    assert_eq!(v.len(), m.nrows(), "shape mismatch");
    Z2Span::from_vectors(m.nrows(), m.columns().iter()).contains(v)
}

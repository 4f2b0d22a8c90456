use std::fmt;

use super::vector::{words_for, BitVector};
use crate::error::{Error, Result};

/// Dense, row-major, bit-packed matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    wpr: usize,
    data: Vec<u64>,
}

/// Number of pivots grouped into one lookup table during elimination.
const CHUNK: usize = 8;

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let wpr = words_for(cols);
        Self { rows, cols, wpr, data: vec![0; rows * wpr] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Stacks row vectors; all must have length `cols`.
    pub fn from_rows(cols: usize, rows: &[BitVector]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "row {i} has wrong length");
            m.row_words_mut(i).copy_from_slice(r.words());
        }
        m
    }

    /// Parses rows of `0`/`1` characters; rows separated by newlines or `;`.
    pub fn parse(s: &str) -> Result<Self> {
        let rows: Vec<BitVector> = s
            .split(['\n', ';'])
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(BitVector::parse)
            .collect::<Result<_>>()?;
        let cols = rows.first().map_or(0, BitVector::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Parse { line: 0, msg: "ragged matrix rows".into() });
        }
        Ok(Self::from_rows(cols, &rows))
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
    pub fn row_words(&self, i: usize) -> &[u64] {
        &self.data[i * self.wpr..(i + 1) * self.wpr]
    }

    #[inline]
    pub(crate) fn row_words_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.wpr..(i + 1) * self.wpr]
    }

    pub fn row(&self, i: usize) -> BitVector {
        BitVector::from_words(self.cols, self.row_words(i).to_vec())
    }

    pub fn row_vectors(&self) -> Vec<BitVector> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        debug_assert!(i < self.rows && j < self.cols);
        (self.data[i * self.wpr + (j >> 6)] >> (j & 63)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, b: bool) {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of {}x{}", self.rows, self.cols);
        let w = &mut self.data[i * self.wpr + (j >> 6)];
        if b {
            *w |= 1 << (j & 63);
        } else {
            *w &= !(1 << (j & 63));
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize, j: usize) {
        assert!(i < self.rows && j < self.cols);
        self.data[i * self.wpr + (j >> 6)] ^= 1 << (j & 63);
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    /// Number of set entries.
    pub fn weight(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn row_weight(&self, i: usize) -> usize {
        self.row_words(i).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Adds row `src` into row `dst` (`dst != src`).
    pub fn xor_row_into(&mut self, src: usize, dst: usize) {
        assert_ne!(src, dst);
        let w = self.wpr;
        let (a, b) = if src < dst {
            let (lo, hi) = self.data.split_at_mut(dst * w);
            (&lo[src * w..src * w + w], &mut hi[..w])
        } else {
            let (lo, hi) = self.data.split_at_mut(src * w);
            (&hi[..w] as &[u64], &mut lo[dst * w..dst * w + w])
        };
        for (d, s) in b.iter_mut().zip(a) {
            *d ^= s;
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.wpr {
            self.data.swap(a * self.wpr + k, b * self.wpr + k);
        }
    }

    pub fn push_row(&mut self, v: &BitVector) {
        assert_eq!(v.len(), self.cols);
        self.data.extend_from_slice(v.words());
        self.rows += 1;
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for (wi, &w) in self.row_words(i).iter().enumerate() {
                let mut w = w;
                while w != 0 {
                    let j = wi * 64 + w.trailing_zeros() as usize;
                    w &= w - 1;
                    t.data[j * t.wpr + (i >> 6)] |= 1 << (i & 63);
                }
            }
        }
        t
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "product of {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        let ow = out.wpr;
        for i in 0..self.rows {
            let dst = &mut out.data[i * ow..(i + 1) * ow];
            for (wi, &w) in self.row_words(i).iter().enumerate() {
                let mut w = w;
                while w != 0 {
                    let j = wi * 64 + w.trailing_zeros() as usize;
                    w &= w - 1;
                    for (d, s) in dst.iter_mut().zip(other.row_words(j)) {
                        *d ^= s;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Product `self · otherᵀ`, computed from row dot products.
    pub fn mul_transpose(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.cols {
            return Err(Error::Dimension(format!("A·Bᵀ with {} vs {} columns", self.cols, other.cols)));
        }
        let mut out = BitMatrix::zeros(self.rows, other.rows);
        for i in 0..self.rows {
            let a = self.row_words(i);
            for j in 0..other.rows {
                let par = a.iter().zip(other.row_words(j)).fold(0u32, |acc, (x, y)| acc ^ (x & y).count_ones()) & 1;
                if par == 1 {
                    out.set(i, j, true);
                }
            }
        }
        Ok(out)
    }

    /// `self · v` for a column vector `v`.
    pub fn mul_vec(&self, v: &BitVector) -> Result<BitVector> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!("{}x{} times vector of length {}", self.rows, self.cols, v.len())));
        }
        let mut out = BitVector::zeros(self.rows);
        for i in 0..self.rows {
            let par = self.row_words(i).iter().zip(v.words()).fold(0u32, |acc, (x, y)| acc ^ (x & y).count_ones()) & 1;
            if par == 1 {
                out.set(i, true);
            }
        }
        Ok(out)
    }

    /// `vᵀ · self`: the combination of rows selected by `v`.
    pub fn vec_mul(&self, v: &BitVector) -> Result<BitVector> {
        if v.len() != self.rows {
            return Err(Error::Dimension(format!("vector of length {} times {}x{}", v.len(), self.rows, self.cols)));
        }
        let mut out = BitVector::zeros(self.cols);
        for i in v.iter_ones() {
            for (d, s) in out.words_mut().iter_mut().zip(self.row_words(i)) {
                *d ^= s;
            }
        }
        Ok(out)
    }

    /// Vertical concatenation.
    pub fn vstack(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.cols {
            return Err(Error::Dimension(format!("vstack of {} and {} columns", self.cols, other.cols)));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(BitMatrix { rows: self.rows + other.rows, cols: self.cols, wpr: self.wpr, data })
    }

    /// Horizontal concatenation.
    pub fn hstack(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.rows != other.rows {
            return Err(Error::Dimension(format!("hstack of {} and {} rows", self.rows, other.rows)));
        }
        let mut out = BitMatrix::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            out.row_words_mut(i)[..self.wpr].copy_from_slice(self.row_words(i));
            for j in other.row(i).iter_ones() {
                out.set(i, self.cols + j, true);
            }
        }
        Ok(out)
    }

    /// Keeps the listed columns, in the listed order.
    pub fn select_columns(&self, cols: &[usize]) -> BitMatrix {
        let mut out = BitMatrix::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (k, &c) in cols.iter().enumerate() {
                if self.get(i, c) {
                    out.set(i, k, true);
                }
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> BitMatrix {
        let mut out = BitMatrix::zeros(rows.len(), self.cols);
        for (k, &r) in rows.iter().enumerate() {
            out.row_words_mut(k).copy_from_slice(self.row_words(r));
        }
        out
    }

    /// Gaussian elimination in place with deterministic first-nonzero pivoting.
    ///
    /// Pivot rows end up in rows `0..rank`, ordered by pivot column. With
    /// `full = true` the result is the reduced row echelon form; otherwise
    /// rows above each pivot are left untouched (enough for the rank).
    ///
    /// Columns are processed one 64-bit word at a time: pivots of a word
    /// block are found on the block word alone, then applied to the rest of
    /// each row through precomputed tables of all combinations of
    /// `CHUNK` pivot rows.
    pub fn echelonize(&mut self, full: bool) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        let wpr = self.wpr;
        for wb in 0..wpr {
            if r == self.rows {
                break;
            }
            // Pivot search on the panel word.
            let mut panel: Vec<u64> = (r..self.rows).map(|i| self.data[i * wpr + wb]).collect();
            let mut used = vec![false; panel.len()];
            let mut block: Vec<(usize, u32)> = Vec::new();
            let nbits = (self.cols - wb * 64).min(64) as u32;
            for b in 0..nbits {
                let m = 1u64 << b;
                let Some(i) = (0..panel.len()).find(|&i| !used[i] && panel[i] & m != 0) else {
                    continue;
                };
                used[i] = true;
                let p = panel[i];
                for (j, w) in panel.iter_mut().enumerate() {
                    if j != i && *w & m != 0 {
                        *w ^= p;
                    }
                }
                block.push((r + i, b));
            }
            if block.is_empty() {
                continue;
            }
            // Replay the block elimination on the full pivot rows.
            for a in 0..block.len() {
                let (ra, ba) = block[a];
                for (c, &(rc, _)) in block.iter().enumerate() {
                    if c != a && (self.data[rc * wpr + wb] >> ba) & 1 == 1 {
                        self.xor_row_into(ra, rc);
                    }
                }
            }
            // Move pivot rows to r, r+1, ...
            let mut pos: Vec<usize> = block.iter().map(|&(row, _)| row).collect();
            for a in 0..pos.len() {
                let target = r + a;
                let src = pos[a];
                if src != target {
                    self.swap_rows(src, target);
                    if let Some(k) = pos.iter().position(|&p| p == target) {
                        pos[k] = src;
                    }
                    pos[a] = target;
                }
            }
            let k = block.len();
            let bits: Vec<u32> = block.iter().map(|&(_, b)| b).collect();
            // Combination tables over the tail words wb..wpr.
            let tail = wpr - wb;
            let tables: Vec<(Vec<u64>, usize, usize)> = (0..k)
                .step_by(CHUNK)
                .map(|start| {
                    let s = CHUNK.min(k - start);
                    let mut t = vec![0u64; (1 << s) * tail];
                    for mask in 1usize..(1 << s) {
                        let low = mask.trailing_zeros() as usize;
                        let prev = mask & (mask - 1);
                        let prow = r + start + low;
                        for w in 0..tail {
                            t[mask * tail + w] = t[prev * tail + w] ^ self.data[prow * wpr + wb + w];
                        }
                    }
                    (t, start, s)
                })
                .collect();
            let lo = if full { 0 } else { r + k };
            for i in lo..self.rows {
                if i >= r && i < r + k {
                    continue;
                }
                let word = self.data[i * wpr + wb];
                if word == 0 {
                    continue;
                }
                let idx: Vec<usize> = tables
                    .iter()
                    .map(|(_, start, s)| (0..*s).fold(0, |acc, t| acc | ((((word >> bits[start + t]) & 1) as usize) << t)))
                    .collect();
                let row = &mut self.data[i * wpr + wb..(i + 1) * wpr];
                for ((table, _, _), &ix) in tables.iter().zip(&idx) {
                    if ix != 0 {
                        for (d, s) in row.iter_mut().zip(&table[ix * tail..(ix + 1) * tail]) {
                            *d ^= s;
                        }
                    }
                }
            }
            pivots.extend(bits.iter().map(|&b| wb * 64 + b as usize));
            r += k;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().echelonize(false).len()
    }

    /// Reduced row echelon form with its pivot columns; zero rows dropped.
    pub fn rref(&self) -> (BitMatrix, Vec<usize>) {
        let mut m = self.clone();
        let piv = m.echelonize(true);
        m.truncate_rows(piv.len());
        (m, piv)
    }

    pub fn truncate_rows(&mut self, rows: usize) {
        if rows < self.rows {
            self.rows = rows;
            self.data.truncate(rows * self.wpr);
        }
    }

    /// Basis of `{v : self · v = 0}`, one basis vector per free column.
    ///
    /// Free column `f` yields the vector with a 1 at `f` and the entries of
    /// column `f` of the RREF at the pivot positions.
    pub fn kernel_basis(&self) -> BitMatrix {
        let (r, piv) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &piv {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut k = BitMatrix::zeros(free.len(), self.cols);
        for (i, &f) in free.iter().enumerate() {
            k.set(i, f, true);
        }
        let rt = r.transpose(); // cols x rank
        for (i, &f) in free.iter().enumerate() {
            for row in rt.row(f).iter_ones() {
                k.set(i, piv[row], true);
            }
        }
        k
    }

    /// Some `x` with `self · x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &BitVector) -> Result<Option<BitVector>> {
        if b.len() != self.rows {
            return Err(Error::Dimension(format!("right-hand side of length {} for {} rows", b.len(), self.rows)));
        }
        let mut bcol = BitMatrix::zeros(self.rows, 1);
        for i in b.iter_ones() {
            bcol.set(i, 0, true);
        }
        let mut aug = self.hstack(&bcol)?;
        let piv = aug.echelonize(true);
        if piv.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = BitVector::zeros(self.cols);
        for (i, &p) in piv.iter().enumerate() {
            if aug.get(i, self.cols) {
                x.set(p, true);
            }
        }
        debug_assert_eq!(&self.mul_vec(&x)?, b);
        Ok(Some(x))
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows.min(64) {
            writeln!(f, "  {}", self.row(i))?;
        }
        Ok(())
    }
}

/// The row space of a matrix, kept in reduced row echelon form.
///
/// Membership and coordinates are read directly off the pivot columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowSpace {
    basis: BitMatrix,
    pivots: Vec<usize>,
}

impl RowSpace {
    pub fn new(m: &BitMatrix) -> Self {
        let (basis, pivots) = m.rref();
        Self { basis, pivots }
    }

    pub fn from_vectors(len: usize, vs: &[BitVector]) -> Self {
        Self::new(&BitMatrix::from_rows(len, vs))
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn len(&self) -> usize {
        self.basis.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.pivots.is_empty()
    }

    pub fn basis(&self) -> &BitMatrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Remainder of `v` after clearing every pivot position.
    pub fn reduce(&self, v: &BitVector) -> BitVector {
        let mut v = v.clone();
        for (i, &p) in self.pivots.iter().enumerate() {
            if v.get(p) {
                for (d, s) in v.words_mut().iter_mut().zip(self.basis.row_words(i)) {
                    *d ^= s;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        self.reduce(v).is_zero()
    }

    /// Coordinates of `v` in the echelon basis, or `None` if `v` is outside.
    pub fn coordinates(&self, v: &BitVector) -> Option<BitVector> {
        let c = BitVector::from_indices(self.dim(), (0..self.dim()).filter(|&i| v.get(self.pivots[i])));
        if self.basis.vec_mul(&c).ok()? == *v {
            Some(c)
        } else {
            None
        }
    }

    /// Adds `v` to the space; returns whether the dimension grew.
    pub fn insert(&mut self, v: &BitVector) -> bool {
        let r = self.reduce(v);
        if r.is_zero() {
            return false;
        }
        self.basis.push_row(&r);
        let (b, p) = self.basis.rref();
        self.basis = b;
        self.pivots = p;
        true
    }

    pub fn is_subspace_of(&self, other: &RowSpace) -> bool {
        (0..self.dim()).all(|i| other.contains(&self.basis.row(i)))
    }
}

impl PartialEq<BitMatrix> for RowSpace {
    fn eq(&self, other: &BitMatrix) -> bool {
        *self == RowSpace::new(other)
    }
}

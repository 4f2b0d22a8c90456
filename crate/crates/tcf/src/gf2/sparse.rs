use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

use super::matrix::BitMatrix;
use super::vector::BitVector;
use crate::error::{Error, Result};

/// Sparse GF(2) matrix: each row is a sorted list of column indices.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SparseBitMatrix {
    rows: usize,
    cols: usize,
    row_idx: Vec<Vec<u32>>,
}

impl SparseBitMatrix {
    pub fn new(cols: usize) -> Self {
        Self { rows: 0, cols, row_idx: Vec::new() }
    }

    /// Builds from per-row column lists; lists are sorted and duplicate
    /// pairs cancel (entries are summed over GF(2)).
    pub fn from_row_lists(cols: usize, rows: Vec<Vec<u32>>) -> Result<Self> {
        let mut out = Self::new(cols);
        for r in rows {
            out.push_row(r)?;
        }
        Ok(out)
    }

    pub fn push_row(&mut self, mut r: Vec<u32>) -> Result<()> {
        if let Some(&bad) = r.iter().find(|&&c| c as usize >= self.cols) {
            return Err(Error::Dimension(format!("column {bad} out of range {}", self.cols)));
        }
        r.sort_unstable();
        let mut dedup: Vec<u32> = Vec::with_capacity(r.len());
        for c in r {
            if dedup.last() == Some(&c) {
                dedup.pop();
            } else {
                dedup.push(c);
            }
        }
        self.row_idx.push(dedup);
        self.rows += 1;
        Ok(())
    }

    pub fn push_vector(&mut self, v: &BitVector) {
        assert_eq!(v.len(), self.cols);
        self.row_idx.push(v.iter_ones().map(|c| c as u32).collect());
        self.rows += 1;
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.row_idx[i]
    }

    pub fn row_vector(&self, i: usize) -> BitVector {
        BitVector::from_indices(self.cols, self.row_idx[i].iter().map(|&c| c as usize))
    }

    pub fn nnz(&self) -> usize {
        self.row_idx.iter().map(Vec::len).sum()
    }

    pub fn from_dense(m: &BitMatrix) -> Self {
        let row_idx = (0..m.rows()).map(|i| m.row(i).iter_ones().map(|c| c as u32).collect()).collect();
        Self { rows: m.rows(), cols: m.cols(), row_idx }
    }

    pub fn to_dense(&self) -> BitMatrix {
        let mut m = BitMatrix::zeros(self.rows, self.cols);
        for (i, r) in self.row_idx.iter().enumerate() {
            for &c in r {
                m.set(i, c as usize, true);
            }
        }
        m
    }

    pub fn transpose(&self) -> SparseBitMatrix {
        let mut t = vec![Vec::new(); self.cols];
        for (i, r) in self.row_idx.iter().enumerate() {
            for &c in r {
                t[c as usize].push(i as u32);
            }
        }
        SparseBitMatrix { rows: self.cols, cols: self.rows, row_idx: t }
    }

    /// `self · otherᵀ`, returned sparse; computed through a column index of
    /// `other` so that only overlapping rows are touched.
    pub fn mul_transpose(&self, other: &SparseBitMatrix) -> Result<SparseBitMatrix> {
        if self.cols != other.cols {
            return Err(Error::Dimension(format!("A·Bᵀ with {} vs {} columns", self.cols, other.cols)));
        }
        let col_index = other.transpose();
        let mut out = SparseBitMatrix::new(other.rows);
        let mut acc = vec![false; other.rows];
        let mut seen = vec![false; other.rows];
        for r in &self.row_idx {
            let mut touched = Vec::new();
            for &c in r {
                for &j in col_index.row(c as usize) {
                    let j = j as usize;
                    if !seen[j] {
                        seen[j] = true;
                        touched.push(j as u32);
                    }
                    acc[j] = !acc[j];
                }
            }
            let row: Vec<u32> = touched.iter().copied().filter(|&j| acc[j as usize]).collect();
            for &j in &touched {
                acc[j as usize] = false;
                seen[j as usize] = false;
            }
            out.push_row(row)?;
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.row_idx.iter().all(Vec::is_empty)
    }

    pub fn mul_vec(&self, v: &BitVector) -> Result<BitVector> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!("{} columns times vector of length {}", self.cols, v.len())));
        }
        Ok(BitVector::from_indices(
            self.rows,
            (0..self.rows).filter(|&i| self.row_idx[i].iter().filter(|&&c| v.get(c as usize)).count() % 2 == 1),
        ))
    }

    /// Rank by sparse elimination with Markowitz-style pivot selection.
    ///
    /// Each step picks the column with the fewest remaining nonzeros and,
    /// within it, the shortest row, which bounds the fill-in
    /// `(row_len − 1)(col_count − 1)` greedily.
    pub fn rank(&self) -> usize {
        let mut rows: Vec<Vec<u32>> = self.row_idx.clone();
        let mut alive = vec![true; self.rows];
        let mut col_rows: Vec<HashSet<u32>> = vec![HashSet::new(); self.cols];
        for (i, r) in rows.iter().enumerate() {
            for &c in r {
                col_rows[c as usize].insert(i as u32);
            }
        }
        let mut heap: BinaryHeap<Reverse<(usize, u32)>> =
            (0..self.cols).filter(|&c| !col_rows[c].is_empty()).map(|c| Reverse((col_rows[c].len(), c as u32))).collect();
        let mut rank = 0;
        while let Some(Reverse((count, c))) = heap.pop() {
            let c = c as usize;
            if col_rows[c].len() != count || count == 0 {
                if !col_rows[c].is_empty() && col_rows[c].len() != count {
                    heap.push(Reverse((col_rows[c].len(), c as u32)));
                }
                continue;
            }
            let piv = *col_rows[c]
                .iter()
                .min_by_key(|&&r| (rows[r as usize].len(), r))
                .expect("nonempty column");
            let prow = std::mem::take(&mut rows[piv as usize]);
            alive[piv as usize] = false;
            for &pc in &prow {
                col_rows[pc as usize].remove(&piv);
            }
            let targets: Vec<u32> = col_rows[c].iter().copied().collect();
            for t in targets {
                let old = std::mem::take(&mut rows[t as usize]);
                let merged = sym_diff(&old, &prow);
                for &pc in &prow {
                    let set = &mut col_rows[pc as usize];
                    if !set.remove(&t) {
                        set.insert(t);
                    }
                }
                rows[t as usize] = merged;
            }
            for &pc in &prow {
                let n = col_rows[pc as usize].len();
                if n > 0 {
                    heap.push(Reverse((n, pc)));
                }
            }
            rank += 1;
        }
        debug_assert!(rows.iter().zip(&alive).all(|(r, &a)| !a || r.is_empty()));
        rank
    }
}

fn sym_diff(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_entries_cancel() {
        let m = SparseBitMatrix::from_row_lists(4, vec![vec![1, 1, 2], vec![3, 0]]).unwrap();
        assert_eq!(m.row(0), &[2]);
        assert_eq!(m.row(1), &[0, 3]);
    }

    #[test]
    fn rank_matches_dense_small() {
        let d = BitMatrix::parse("1100;0110;1010;0001").unwrap();
        assert_eq!(SparseBitMatrix::from_dense(&d).rank(), d.rank());
    }

    #[test]
    fn mul_transpose_matches_dense() {
        let a = BitMatrix::parse("1101;0110;1111").unwrap();
        let b = BitMatrix::parse("1001;0111").unwrap();
        let s = SparseBitMatrix::from_dense(&a).mul_transpose(&SparseBitMatrix::from_dense(&b)).unwrap();
        assert_eq!(s.to_dense(), a.mul_transpose(&b).unwrap());
    }
}

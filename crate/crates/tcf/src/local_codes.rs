//! Binary linear codes used as local codes: Reed–Muller codes, duals,
//! star products, and the divisibility / multi-orthogonality predicates
//! that decide which diagonal gates act transversally.

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector, RowSpace, SparseBitMatrix};

/// Exhaustive codeword enumeration is used up to this dimension.
pub const EXHAUSTIVE_DIM: usize = 24;

/// A binary linear code with a full-rank generator in reduced row echelon form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearCode {
    n: usize,
    generator: BitMatrix,
    /// Coordinate labels; for Reed–Muller codes the point of `F₂^η` as an
    /// integer (coordinate `i` is the point `i`).
    labels: Vec<u32>,
}

impl LinearCode {
    /// Code spanned by the rows of `m` (rows need not be independent).
    pub fn from_spanning(m: &BitMatrix) -> Self {
        let (generator, _) = m.rref();
        let n = m.cols();
        Self { n, generator, labels: (0..n as u32).collect() }
    }

    pub fn from_rows(n: usize, rows: &[BitVector]) -> Self {
        Self::from_spanning(&BitMatrix::from_rows(n, rows))
    }

    pub fn repetition(n: usize) -> Self {
        Self::from_rows(n, &[BitVector::ones(n)])
    }

    pub fn full(n: usize) -> Self {
        Self::from_spanning(&BitMatrix::identity(n))
    }

    pub fn with_labels(mut self, labels: Vec<u32>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::Dimension(format!("{} labels for length {}", labels.len(), self.n)));
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.generator.rows()
    }

    pub fn generator(&self) -> &BitMatrix {
        &self.generator
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn basis(&self) -> Vec<BitVector> {
        self.generator.row_vectors()
    }

    pub fn row_space(&self) -> RowSpace {
        RowSpace::new(&self.generator)
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        self.row_space().contains(v)
    }

    /// Same row space (ignores labels).
    pub fn same_code(&self, other: &LinearCode) -> bool {
        self.n == other.n && self.generator == other.generator
    }

    pub fn is_subcode_of(&self, other: &LinearCode) -> bool {
        let s = other.row_space();
        self.basis().iter().all(|b| s.contains(b))
    }

    /// Parity checks (a generator of the dual code) as a sparse matrix.
    pub fn parity_checks(&self) -> SparseBitMatrix {
        SparseBitMatrix::from_dense(dual_code(self).generator())
    }

    /// Permutes coordinates: codeword bit `i` moves to position `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Result<LinearCode> {
        if perm.len() != self.n {
            return Err(Error::Dimension("permutation length".into()));
        }
        let rows: Vec<BitVector> = self
            .basis()
            .iter()
            .map(|r| BitVector::from_indices(self.n, r.iter_ones().map(|i| perm[i])))
            .collect();
        Ok(LinearCode::from_rows(self.n, &rows))
    }

    /// All codewords (Gray-code order); only for small dimensions.
    pub fn codewords(&self) -> Result<Vec<BitVector>> {
        let k = self.dim();
        if k > EXHAUSTIVE_DIM {
            return Err(Error::CapExceeded { what: "codeword enumeration".into(), needed: 1 << k.min(63), cap: 1 << EXHAUSTIVE_DIM });
        }
        let basis = self.basis();
        let mut out = Vec::with_capacity(1 << k);
        let mut cur = BitVector::zeros(self.n);
        out.push(cur.clone());
        for i in 1u64..(1u64 << k) {
            cur.xor_assign(&basis[i.trailing_zeros() as usize]);
            out.push(cur.clone());
        }
        Ok(out)
    }

    /// Weight distribution `A_w`.
    pub fn weight_distribution(&self) -> Result<Vec<u64>> {
        let mut a = vec![0u64; self.n + 1];
        for c in self.codewords()? {
            a[c.weight()] += 1;
        }
        Ok(a)
    }
}

/// `RM(r, η)`: evaluations of multilinear polynomials of degree `≤ r` on
/// `F₂^η`, coordinates in integer order of the points; generator in RREF.
pub fn reed_muller(r: u32, eta: u32) -> Result<LinearCode> {
    if r > eta {
        return Err(Error::InvalidParameter(format!("RM degree r={r} exceeds eta={eta}")));
    }
    if eta > 20 {
        return Err(Error::InvalidParameter(format!("eta={eta} too large")));
    }
    let n = 1usize << eta;
    let rows: Vec<BitVector> = (0u32..(1 << eta))
        .filter(|s| s.count_ones() <= r)
        .map(|s| BitVector::from_indices(n, (0..n).filter(|&x| (x as u32) & s == s)))
        .collect();
    Ok(LinearCode::from_rows(n, &rows))
}

/// The dual code `{v : G vᵀ = 0}`.
pub fn dual_code(c: &LinearCode) -> LinearCode {
    let k = c.generator.kernel_basis();
    let mut d = LinearCode::from_spanning(&k);
    d.labels = c.labels.clone();
    d
}

/// Largest `ℓ` such that every codeword weight is divisible by `2^ℓ`
/// (`usize::MAX` for the zero code).
///
/// Small codes are enumerated; larger ones use the basis-tuple criterion:
/// `C` is `2^ℓ`-divisible iff for every `1 ≤ s ≤ ℓ` each product of `s`
/// distinct basis words has weight divisible by `2^{ℓ−s+1}` (the weight of
/// a sum expands as `Σ_S (−2)^{|S|−1} |∗_{i∈S} c_i|`).
pub fn divisibility_level(c: &LinearCode) -> usize {
    if c.dim() <= EXHAUSTIVE_DIM {
        divisibility_exhaustive(c)
    } else {
        divisibility_by_tuples(c)
    }
}

pub fn divisibility_exhaustive(c: &LinearCode) -> usize {
    c.codewords()
        .expect("dimension checked")
        .iter()
        .map(BitVector::weight)
        .filter(|&w| w > 0)
        .map(|w| w.trailing_zeros() as usize)
        .min()
        .unwrap_or(usize::MAX)
}

pub fn divisibility_by_tuples(c: &LinearCode) -> usize {
    if c.dim() == 0 {
        return usize::MAX;
    }
    let basis = c.basis();
    // a nonzero weight is at most n, so 2^ℓ ≤ n
    let max_l = (usize::BITS - c.n().leading_zeros()) as usize;
    let mut best = 0;
    for l in 1..=max_l {
        if tuple_condition(&basis, l) {
            best = l;
        } else {
            break;
        }
    }
    best
}

fn tuple_condition(basis: &[BitVector], l: usize) -> bool {
    (1..=l.min(basis.len())).all(|s| {
        let modulus = 1usize << (l - s + 1);
        subsets(basis.len(), s).all(|idx| {
            let vs: Vec<&BitVector> = idx.iter().map(|&i| &basis[i]).collect();
            crate::gf2::weight_and_star(&vs).unwrap().is_multiple_of(modulus)
        })
    })
}

/// All `s`-element subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, s: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut cur: Option<Vec<usize>> = if s <= n { Some((0..s).collect()) } else { None };
    std::iter::from_fn(move || {
        let out = cur.clone()?;
        // advance
        let c = cur.as_mut().unwrap();
        let mut i = s;
        loop {
            if i == 0 {
                cur = None;
                break;
            }
            i -= 1;
            if c[i] < n - s + i {
                c[i] += 1;
                for j in i + 1..s {
                    c[j] = c[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    })
}

/// Whether every product `c₁ ∗ … ∗ c_ℓ` with `c_i` drawn from the basis of
/// `Cs[i]` has even weight. By multilinearity of the parity of a product
/// this is equivalent to the same statement over all codewords.
pub fn is_multi_orthogonal(cs: &[&LinearCode], ell: usize) -> Result<bool> {
    if cs.len() != ell || ell == 0 {
        return Err(Error::InvalidParameter(format!("{} codes for ell={ell}", cs.len())));
    }
    let n = cs[0].n();
    if cs.iter().any(|c| c.n() != n) {
        return Err(Error::Dimension("codes of different lengths".into()));
    }
    let bases: Vec<Vec<BitVector>> = cs.iter().map(|c| c.basis()).collect();
    let mut idx = vec![0usize; ell];
    if bases.iter().any(Vec::is_empty) {
        return Ok(true);
    }
    loop {
        let vs: Vec<&BitVector> = idx.iter().zip(&bases).map(|(&i, b)| &b[i]).collect();
        if crate::gf2::weight_and_star(&vs)? % 2 == 1 {
            return Ok(false);
        }
        // odometer
        let mut k = 0;
        loop {
            if k == ell {
                return Ok(true);
            }
            idx[k] += 1;
            if idx[k] < bases[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// `C^{∗ℓ} = ⟨c₁ ∗ … ∗ c_ℓ⟩`: spanned by products of at most `ℓ` distinct
/// basis words (repeated factors collapse since `c ∗ c = c`).
pub fn star_product_code(c: &LinearCode, ell: usize) -> Result<LinearCode> {
    if ell == 0 {
        return Err(Error::InvalidParameter("ell must be >= 1".into()));
    }
    let basis = c.basis();
    let mut rows = Vec::new();
    for s in 1..=ell.min(basis.len()) {
        for idx in subsets(basis.len(), s) {
            let mut v = basis[idx[0]].clone();
            for &i in &idx[1..] {
                v.and_assign(&basis[i]);
            }
            rows.push(v);
        }
    }
    let mut out = LinearCode::from_rows(c.n(), &rows);
    out.labels = c.labels.clone();
    Ok(out)
}

/// Star product of two possibly different codes: `⟨a ∗ b⟩`.
pub fn star_product_pair(a: &LinearCode, b: &LinearCode) -> Result<LinearCode> {
    if a.n() != b.n() {
        return Err(Error::Dimension("star product of codes of different lengths".into()));
    }
    let mut rows = Vec::new();
    for x in a.basis() {
        for y in b.basis() {
            rows.push(x.and(&y));
        }
    }
    Ok(LinearCode::from_rows(a.n(), &rows))
}

/// Coordinate permutation of `F₂^η` induced by `x ↦ A x + b`, where
/// `a_cols[j]` is the image of `e_j` (as an integer bit pattern).
pub fn affine_permutation(eta: u32, a_cols: &[u32], b: u32) -> Result<Vec<usize>> {
    if a_cols.len() != eta as usize {
        return Err(Error::Dimension("affine map needs eta columns".into()));
    }
    let n = 1usize << eta;
    let perm: Vec<usize> = (0..n as u32)
        .map(|x| ((0..eta).filter(|&j| (x >> j) & 1 == 1).fold(b, |acc, j| acc ^ a_cols[j as usize])) as usize)
        .collect();
    let mut seen = vec![false; n];
    for &p in &perm {
        if seen[p] {
            return Err(Error::InvalidParameter("affine map is not invertible".into()));
        }
        seen[p] = true;
    }
    Ok(perm)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rm_parameters() {
        let c = reed_muller(0, 1).unwrap();
        assert_eq!((c.n(), c.dim()), (2, 1));
        assert_eq!(c.basis()[0], BitVector::parse("11").unwrap());
        assert_eq!(reed_muller(1, 3).unwrap().dim(), 4);
        assert_eq!(reed_muller(2, 5).unwrap().dim(), 16);
        assert!(reed_muller(4, 3).is_err());
    }

    #[test]
    fn subsets_enumerate_binomials() {
        assert_eq!(subsets(5, 2).count(), 10);
        assert_eq!(subsets(4, 0).count(), 1);
        assert_eq!(subsets(3, 4).count(), 0);
        assert_eq!(subsets(4, 4).collect::<Vec<_>>(), vec![vec![0, 1, 2, 3]]);
    }

    #[test]
    fn star_of_one_is_identity() {
        let c = reed_muller(1, 3).unwrap();
        assert!(star_product_code(&c, 1).unwrap().same_code(&c));
    }

    #[test]
    fn repetition_is_self_dual_and_one_divisible() {
        let r = LinearCode::repetition(2);
        assert!(dual_code(&r).same_code(&r));
        assert_eq!(divisibility_level(&r), 1);
    }
}

//! Tanner sheaves: local codes on every face, induced downward from the
//! codimension-one faces, and the linear maps of the sheaf cochain complex.
//!
//! Every local code `F_σ ⊆ F₂^{σ↑}` is stored as a basis in reduced row
//! echelon form whose columns follow the sorted up-set. Cochain coordinates
//! at level `j` run over the types with `j + 1` colors in ascending mask
//! order, then over the faces of each type, then over basis rows. Because
//! bases are in RREF, the coordinates of a codeword are its bits at the
//! pivot columns; this is how restrictions are expressed in the target
//! basis.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::algebra::VectorIso;
use crate::complex::{colors_of, Complex, Face, Link};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector, RowSpace, SparseBitMatrix};
use crate::group::{type_cycle_inv, GroupElement, GroupTable};
use crate::local_codes::{star_product_pair, LinearCode};

/// A sheaf of binary codes over a colored complex.
#[derive(Debug)]
pub struct Sheaf {
    complex: Arc<Complex>,
    /// `bases[mask][face]`; empty for masks outside the complex and for the
    /// empty face unless it is the defining level.
    bases: Vec<Vec<BitMatrix>>,
    /// Per mask, per face: offset of the face's first coordinate in its level.
    offsets: Vec<Vec<usize>>,
    level_dims: Vec<usize>,
    global: OnceLock<BitMatrix>,
}

/// How lower-level codes are computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Induction {
    /// Direct sum over the first defining type, then the kernel of the
    /// remaining types' parity checks applied to it.
    TwoStage,
    /// Kernel of all parity checks stacked into one matrix.
    Stacked,
}

/// A cochain given by its value on every face of one level, independent of
/// any basis: `values[mask][face]` is a vector on the face's up-set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawCochain {
    pub level: usize,
    pub values: HashMap<u32, Vec<BitVector>>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CohomologyReport {
    pub cochain_dims: Vec<usize>,
    pub coboundary_ranks: Vec<usize>,
    pub cohomology_dims: Vec<usize>,
}

impl CohomologyReport {
    pub fn euler_cochains(&self) -> i64 {
        alternating(&self.cochain_dims)
    }

    pub fn euler_cohomology(&self) -> i64 {
        alternating(&self.cohomology_dims)
    }
}

fn alternating(v: &[usize]) -> i64 {
    v.iter().enumerate().map(|(j, &x)| if j % 2 == 0 { x as i64 } else { -(x as i64) }).sum()
}

fn pos_in(up: &[u32], t: u32) -> usize {
    up.binary_search(&t).expect("top in up-set")
}

/// Positions of `sub` inside the sorted list `sup`.
fn positions(sup: &[u32], sub: &[u32]) -> Vec<usize> {
    sub.iter().map(|&t| pos_in(sup, t)).collect()
}

fn defining_masks(c: &Complex) -> Vec<u32> {
    let k = c.colors().len();
    if k == 0 {
        return vec![];
    }
    (0..=c.colors_mask()).filter(|&m| c.has_type(m) && m.count_ones() as usize == k - 1).collect()
}

impl Sheaf {
    /// Builds a sheaf from bases of the defining codes (one per face of each
    /// codimension-one type) and induces every lower nonempty face.
    pub fn from_defining(complex: Arc<Complex>, defining: HashMap<u32, Vec<BitMatrix>>) -> Result<Self> {
        Self::from_defining_with(complex, defining, Induction::TwoStage)
    }

    pub fn from_defining_with(complex: Arc<Complex>, defining: HashMap<u32, Vec<BitMatrix>>, how: Induction) -> Result<Self> {
        let c = &*complex;
        let d = c.d();
        let mut bases: Vec<Vec<BitMatrix>> = vec![Vec::new(); 1 << (d + 1)];
        for m in defining_masks(c) {
            let list = defining.get(&m).ok_or_else(|| Error::InvalidParameter(format!("no codes for type {m:#b}")))?;
            if list.len() != c.face_count(m) {
                return Err(Error::Dimension(format!("type {m:#b}: {} codes for {} faces", list.len(), c.face_count(m))));
            }
            let mut out = Vec::with_capacity(list.len());
            for (i, b) in list.iter().enumerate() {
                if b.cols() != c.up(m, i as u32).len() {
                    return Err(Error::Dimension(format!(
                        "code of length {} on a face with {} tops",
                        b.cols(),
                        c.up(m, i as u32).len()
                    )));
                }
                out.push(b.rref().0);
            }
            bases[m as usize] = out;
        }
        if !c.is_empty() {
            let top = c.colors_mask();
            bases[top as usize] = vec![BitMatrix::identity(1); c.n_tops()];
        }
        let k = c.colors().len();
        for m in 1..c.colors_mask() {
            if !c.has_type(m) || (m.count_ones() as usize) + 1 >= k {
                continue;
            }
            let list: Vec<BitMatrix> = (0..c.face_count(m) as u32)
                .map(|i| induce_face(c, &bases, c.up(m, i), m, how, false).basis.unwrap())
                .collect();
            bases[m as usize] = list;
        }
        Ok(Self::assemble(complex, bases))
    }

    /// Builds a sheaf from explicit bases on every nonempty face, without
    /// induction (for synthetic fixtures and negative controls).
    pub fn from_all_bases(complex: Arc<Complex>, all: HashMap<u32, Vec<BitMatrix>>) -> Result<Self> {
        let c = &*complex;
        let mut bases: Vec<Vec<BitMatrix>> = vec![Vec::new(); 1 << (c.d() + 1)];
        for m in 1..=c.colors_mask() {
            if !c.has_type(m) {
                continue;
            }
            let list = all.get(&m).ok_or_else(|| Error::InvalidParameter(format!("no codes for type {m:#b}")))?;
            if list.len() != c.face_count(m) || list.iter().enumerate().any(|(i, b)| b.cols() != c.up(m, i as u32).len()) {
                return Err(Error::Dimension(format!("bad bases for type {m:#b}")));
            }
            bases[m as usize] = list.iter().map(|b| b.rref().0).collect();
        }
        Ok(Self::assemble(complex, bases))
    }

    fn assemble(complex: Arc<Complex>, bases: Vec<Vec<BitMatrix>>) -> Self {
        let c = &*complex;
        let mut offsets: Vec<Vec<usize>> = vec![Vec::new(); bases.len()];
        let levels = c.colors().len();
        let mut level_dims = vec![0usize; levels];
        for (j, ld) in level_dims.iter_mut().enumerate() {
            for m in c.masks_at_level(j) {
                let mut offs = Vec::with_capacity(c.face_count(m) + 1);
                for b in &bases[m as usize] {
                    offs.push(*ld);
                    *ld += b.rows();
                }
                offs.push(*ld);
                offsets[m as usize] = offs;
            }
        }
        let global = OnceLock::new();
        if levels == 1 {
            // the empty face is the defining level of a 0-dimensional complex
            if let Some(b) = bases[0].first() {
                let _ = global.set(b.clone());
            }
        }
        Self { complex, bases, offsets, level_dims, global }
    }

    /// Repetition codes on every defining face (the constant sheaf).
    pub fn constant(complex: Arc<Complex>) -> Result<Self> {
        let defining = defining_masks(&complex)
            .into_iter()
            .map(|m| {
                let list = (0..complex.face_count(m) as u32)
                    .map(|i| BitMatrix::from_rows(complex.up(m, i).len(), &[BitVector::ones(complex.up(m, i).len())]))
                    .collect();
                (m, list)
            })
            .collect();
        Self::from_defining(complex, defining)
    }

    /// Attaches `code` (coordinates indexed by points of `F₂^η` in integer
    /// order) to every defining face of a coset complex, oriented through the
    /// root-group coordinate of `g_σ⁻¹ g`, with `g_σ` the minimum element.
    pub fn attach_coset(complex: Arc<Complex>, table: &GroupTable, code: &LinearCode) -> Result<Self> {
        Self::attach_coset_with(complex, table, code, &|up: &[u32]| up[0])
    }

    /// As [`Self::attach_coset`] with a caller-chosen representative of
    /// every defining coset.
    pub fn attach_coset_with(
        complex: Arc<Complex>,
        table: &GroupTable,
        code: &LinearCode,
        rep: &dyn Fn(&[u32]) -> u32,
    ) -> Result<Self> {
        let defining = oriented_defining_codes(&complex, table, code, rep)?;
        Self::from_defining(complex, defining)
    }

    /// The dual sheaf: defining codes replaced by their duals, re-induced.
    pub fn dual(&self) -> Result<Self> {
        let c = &self.complex;
        let defining = defining_masks(c)
            .into_iter()
            .map(|m| (m, self.bases[m as usize].iter().map(dual_of).collect()))
            .collect();
        Self::from_defining(self.complex.clone(), defining)
    }

    /// The sheaf whose defining codes are the star products of the two
    /// sheaves' defining codes.
    pub fn star_product(&self, other: &Sheaf) -> Result<Self> {
        if !Arc::ptr_eq(&self.complex, &other.complex) {
            return Err(Error::InvalidParameter("star product of sheaves on different complexes".into()));
        }
        let c = &self.complex;
        let mut defining = HashMap::new();
        for m in defining_masks(c) {
            let mut list = Vec::new();
            for (a, b) in self.bases[m as usize].iter().zip(&other.bases[m as usize]) {
                let p = star_product_pair(&LinearCode::from_spanning(a), &LinearCode::from_spanning(b))?;
                list.push(p.generator().clone());
            }
            defining.insert(m, list);
        }
        Self::from_defining(self.complex.clone(), defining)
    }

    /// The sheaf on the link of `f`, whose defining codes are the parent's
    /// codes on the faces containing `f`.
    pub fn link_sheaf(&self, f: Face) -> Result<(Link, Sheaf)> {
        let link = self.complex.link(f)?;
        let lc = Arc::new(link.complex.clone());
        let mut defining = HashMap::new();
        for m in defining_masks(&lc) {
            let list = link.face_map[&m].iter().map(|&pf| self.bases[(m | f.mask) as usize][pf as usize].clone()).collect();
            defining.insert(m, list);
        }
        if lc.is_empty() {
            return Err(Error::InvalidParameter("the link of a top face carries no sheaf".into()));
        }
        let s = Sheaf::from_defining(lc, defining)?;
        Ok((link, s))
    }

    pub fn complex(&self) -> &Arc<Complex> {
        &self.complex
    }

    /// Number of cochain levels (`dim + 1`).
    pub fn levels(&self) -> usize {
        self.level_dims.len()
    }

    pub fn level_dim(&self, j: usize) -> usize {
        self.level_dims[j]
    }

    pub fn basis(&self, f: Face) -> &BitMatrix {
        &self.bases[f.mask as usize][f.index as usize]
    }

    pub fn bases_of_type(&self, mask: u32) -> &[BitMatrix] {
        &self.bases[mask as usize]
    }

    pub fn defining_masks(&self) -> Vec<u32> {
        defining_masks(&self.complex)
    }

    /// Global coordinate of basis row `row` of face `f` within its level.
    pub fn coord(&self, f: Face, row: usize) -> usize {
        self.offsets[f.mask as usize][f.index as usize] + row
    }

    /// `F_∅`: assignments to all tops compatible with every defining code.
    pub fn global_sections(&self) -> &BitMatrix {
        self.global.get_or_init(|| {
            let c = &*self.complex;
            let all: Vec<u32> = (0..c.n_tops() as u32).collect();
            induce_face(c, &self.bases, &all, 0, Induction::TwoStage, false).basis.unwrap()
        })
    }

    /// `dim F_∅` without forming a basis (only a rank is computed in the
    /// last elimination stage).
    pub fn global_sections_dim(&self) -> usize {
        if let Some(b) = self.global.get() {
            return b.rows();
        }
        let c = &*self.complex;
        let all: Vec<u32> = (0..c.n_tops() as u32).collect();
        induce_face(c, &self.bases, &all, 0, Induction::TwoStage, true).dim
    }

    /// Recomputes the code of a face by the requested induction method.
    pub fn induce_again(&self, f: Face, how: Induction) -> BitMatrix {
        let c = &*self.complex;
        let up: Vec<u32> = if f.mask == 0 { (0..c.n_tops() as u32).collect() } else { c.up(f.mask, f.index).to_vec() };
        induce_face(c, &self.bases, &up, f.mask, how, false).basis.unwrap()
    }

    /// `δ^j : C^j → C^{j+1}` as a sparse matrix (rows index `C^{j+1}`).
    pub fn coboundary(&self, j: usize) -> Result<SparseBitMatrix> {
        if j + 1 >= self.levels() {
            return Err(Error::InvalidParameter(format!("no coboundary out of level {j}")));
        }
        let c = &*self.complex;
        let mut out = SparseBitMatrix::new(self.level_dims[j]);
        for big in c.masks_at_level(j + 1) {
            for ti in 0..c.face_count(big) as u32 {
                let tau = Face { mask: big, index: ti };
                let up = c.up(big, ti);
                let b = self.basis(tau);
                for k in 0..b.rows() {
                    let pc = b.row(k).first_one().expect("nonzero basis row");
                    let t = up[pc];
                    let mut entries = Vec::new();
                    for color in colors_of(big) {
                        let small = big & !(1 << color);
                        let si = c.face_of(small, t);
                        let p = pos_in(c.up(small, si), t);
                        let sb = &self.bases[small as usize][si as usize];
                        for i in 0..sb.rows() {
                            if sb.get(i, p) {
                                entries.push(self.coord(Face { mask: small, index: si }, i) as u32);
                            }
                        }
                    }
                    out.push_row(entries)?;
                }
            }
        }
        Ok(out)
    }

    /// `π↑ : C^j → F₂^{tops}` (rows index tops); the columns are the basis
    /// codewords placed on their up-sets.
    pub fn projection(&self, j: usize) -> SparseBitMatrix {
        self.projection_rows(j).transpose()
    }

    /// The transpose of [`Self::projection`]: one row per coordinate of
    /// `C^j`, holding that basis codeword as a set of tops.
    pub fn projection_rows(&self, j: usize) -> SparseBitMatrix {
        let c = &*self.complex;
        let mut t = SparseBitMatrix::new(c.n_tops());
        for m in c.masks_at_level(j) {
            for i in 0..c.face_count(m) as u32 {
                let up = c.up(m, i);
                let b = &self.bases[m as usize][i as usize];
                for r in 0..b.rows() {
                    t.push_row(b.row(r).iter_ones().map(|p| up[p]).collect()).unwrap();
                }
            }
        }
        t
    }

    /// Type and face of every coordinate of `C^j`.
    pub fn coord_faces(&self, j: usize) -> Vec<Face> {
        let c = &*self.complex;
        let mut out = Vec::with_capacity(self.level_dims[j]);
        for m in c.masks_at_level(j) {
            for (i, b) in self.bases[m as usize].iter().enumerate() {
                out.extend(std::iter::repeat_n(Face { mask: m, index: i as u32 }, b.rows()));
            }
        }
        out
    }

    /// Coordinates of level `j` kept by `res_T` (faces with type `⊆ T`).
    pub fn restricted_coords(&self, j: usize, t_mask: u32) -> Vec<usize> {
        let c = &*self.complex;
        let mut out = Vec::new();
        for m in c.masks_at_level(j) {
            if m & !t_mask == 0 {
                let offs = &self.offsets[m as usize];
                out.extend(offs[0]..offs[offs.len() - 1]);
            }
        }
        out
    }

    /// `res_T` as a selection matrix `C^j → C^j(Δ_T)`.
    pub fn restriction(&self, j: usize, t_mask: u32) -> SparseBitMatrix {
        let keep = self.restricted_coords(j, t_mask);
        SparseBitMatrix::from_row_lists(self.level_dims[j], keep.iter().map(|&k| vec![k as u32]).collect()).unwrap()
    }

    /// The inclusion `ι : C^j(Δ_T) → C^j`.
    pub fn inclusion(&self, j: usize, t_mask: u32) -> SparseBitMatrix {
        self.restriction(j, t_mask).transpose()
    }

    /// `δ_T^j = res_T ∘ δ^j ∘ ι`.
    pub fn restricted_coboundary(&self, j: usize, t_mask: u32) -> Result<SparseBitMatrix> {
        let d = self.coboundary(j)?;
        let r = self.restriction(j + 1, t_mask);
        let i = self.inclusion(j, t_mask);
        sparse_mul(&sparse_mul(&r, &d)?, &i)
    }

    pub fn cohomology(&self) -> Result<CohomologyReport> {
        let n = self.levels();
        let mut ranks = Vec::with_capacity(n.saturating_sub(1));
        for j in 0..n.saturating_sub(1) {
            ranks.push(self.coboundary(j)?.rank());
        }
        let dims: Vec<usize> = (0..n)
            .map(|j| {
                let out = if j + 1 < n { ranks[j] } else { 0 };
                let inn = if j > 0 { ranks[j - 1] } else { 0 };
                self.level_dims[j] - out - inn
            })
            .collect();
        Ok(CohomologyReport { cochain_dims: self.level_dims.clone(), coboundary_ranks: ranks, cohomology_dims: dims })
    }

    /// Every restriction `F_σ → F_τ` (`σ ⊂ τ`, both nonempty) is surjective;
    /// covering pairs suffice since surjections compose.
    pub fn is_flasque(&self) -> bool {
        let c = &*self.complex;
        for small in 1..c.colors_mask() {
            if !c.has_type(small) {
                continue;
            }
            for color in c.colors() {
                if small >> color & 1 == 1 {
                    continue;
                }
                let big = small | 1 << color;
                for si in 0..c.face_count(small) as u32 {
                    let sup = c.up(small, si);
                    let sb = &self.bases[small as usize][si as usize];
                    for bi in c.faces_containing(Face { mask: small, index: si }, big) {
                        let target = &self.bases[big as usize][bi as usize];
                        let cols = positions(sup, c.up(big, bi));
                        if sb.select_columns(&cols).rank() != target.rows() {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// `H^j(Δ_σ, F) = 0` for every nonempty face `σ` of level `ℓ` and all
    /// `0 < j < dim − ℓ − 1`. Vacuous when `dim ≤ 2`.
    pub fn is_locally_acyclic(&self) -> Result<bool> {
        let c = &*self.complex;
        let dim = c.dim();
        for m in 1..c.colors_mask() {
            if !c.has_type(m) {
                continue;
            }
            let ell = m.count_ones() as isize - 1;
            let top_j = dim - ell - 1;
            if top_j <= 1 {
                continue;
            }
            for i in 0..c.face_count(m) as u32 {
                let (_, ls) = self.link_sheaf(Face { mask: m, index: i })?;
                let h = ls.cohomology()?;
                if (1..top_j as usize).any(|j| h.cohomology_dims[j] != 0) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Some `g ∈ C^j` with `δ^j g = 0` and `res_T g = f`, where `|T| = j + 1`
    /// and `f` is given in the coordinates of `C^j(Δ_T)`. `Ok(None)` means
    /// the system is inconsistent.
    pub fn lift_restricted_cocycle(&self, t_mask: u32, f: &BitVector) -> Result<Option<BitVector>> {
        let j = t_mask.count_ones() as usize - 1;
        let r = self.restriction(j, t_mask);
        if f.len() != r.rows() {
            return Err(Error::Dimension(format!("restricted cochain of length {} for {} coordinates", f.len(), r.rows())));
        }
        let mut a = if j + 1 < self.levels() { self.coboundary(j)?.to_dense() } else { BitMatrix::zeros(0, self.level_dims[j]) };
        let zero_rows = a.rows();
        a = a.vstack(&r.to_dense())?;
        let mut rhs = BitVector::zeros(zero_rows + f.len());
        for i in f.iter_ones() {
            rhs.set(zero_rows + i, true);
        }
        a.solve(&rhs)
    }

    /// Values of a coordinate cochain on every face.
    pub fn to_raw(&self, j: usize, coords: &BitVector) -> RawCochain {
        let c = &*self.complex;
        let mut values = HashMap::new();
        for m in c.masks_at_level(j) {
            let list = (0..c.face_count(m) as u32)
                .map(|i| {
                    let f = Face { mask: m, index: i };
                    let b = self.basis(f);
                    let mut v = BitVector::zeros(b.cols());
                    for r in 0..b.rows() {
                        if coords.get(self.coord(f, r)) {
                            v.xor_assign(&b.row(r));
                        }
                    }
                    v
                })
                .collect();
            values.insert(m, list);
        }
        RawCochain { level: j, values }
    }

    /// Coordinates of a raw cochain, or `None` if some value lies outside
    /// its local code.
    pub fn from_raw(&self, raw: &RawCochain) -> Option<BitVector> {
        let c = &*self.complex;
        let mut out = BitVector::zeros(self.level_dims[raw.level]);
        for m in c.masks_at_level(raw.level) {
            for (i, v) in raw.values.get(&m)?.iter().enumerate() {
                let f = Face { mask: m, index: i as u32 };
                let rs = RowSpace::new(self.basis(f));
                let co = rs.coordinates(v)?;
                for k in co.iter_ones() {
                    out.set(self.coord(f, k), true);
                }
            }
        }
        Some(out)
    }

    /// Checks that pushing every local codeword along a simplicial
    /// automorphism (top permutation plus color map) lands in the target
    /// face's local code.
    pub fn is_invariant_under(&self, top_perm: &[u32], color_map: &[usize]) -> bool {
        let c = &*self.complex;
        let map_mask = |m: u32| colors_of(m).iter().fold(0u32, |acc, &x| acc | 1 << color_map[x]);
        for m in 1..=c.colors_mask() {
            if !c.has_type(m) {
                continue;
            }
            let tm = map_mask(m);
            for i in 0..c.face_count(m) as u32 {
                let up = c.up(m, i);
                let ti = c.face_of(tm, top_perm[up[0] as usize]);
                let tup = c.up(tm, ti);
                let target = RowSpace::new(&self.bases[tm as usize][ti as usize]);
                let b = &self.bases[m as usize][i as usize];
                let moved: Vec<usize> = up.iter().map(|&t| pos_in(tup, top_perm[t as usize])).collect();
                for r in 0..b.rows() {
                    let v = BitVector::from_indices(tup.len(), b.row(r).iter_ones().map(|p| moved[p]));
                    if !target.contains(&v) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Minimum over nonempty faces of `dim F_σ − (k)^{|colors| − |T(σ)|}`
    /// where `k` is the common dimension of the defining codes; nonnegative
    /// iff the tensor-code lower bound holds everywhere.
    pub fn tensor_bound_slack(&self) -> Option<i64> {
        let c = &*self.complex;
        let defs = self.defining_masks();
        let k = self.bases[*defs.first()? as usize].first()?.rows() as i64;
        let mut slack = i64::MAX;
        for m in 1..=c.colors_mask() {
            if !c.has_type(m) {
                continue;
            }
            let e = (c.colors().len() - m.count_ones() as usize) as u32;
            for b in &self.bases[m as usize] {
                slack = slack.min(b.rows() as i64 - k.pow(e));
            }
        }
        Some(slack)
    }
}

/// Parity-check basis of the code spanned by `b`.
fn dual_of(b: &BitMatrix) -> BitMatrix {
    if b.rows() == 0 {
        return BitMatrix::identity(b.cols());
    }
    b.kernel_basis().rref().0
}

/// Sparse product `a · b`.
pub fn sparse_mul(a: &SparseBitMatrix, b: &SparseBitMatrix) -> Result<SparseBitMatrix> {
    a.mul_transpose(&b.transpose())
}

struct Induced {
    dim: usize,
    basis: Option<BitMatrix>,
}

/// Code at a face of type `mask` with up-set `up` (for the empty face `up`
/// is every top): all vectors on `up` whose restriction to each defining
/// face containing it is a codeword there.
fn induce_face(c: &Complex, bases: &[Vec<BitMatrix>], up: &[u32], mask: u32, how: Induction, dims_only: bool) -> Induced {
    let defs: Vec<u32> = defining_masks(c).into_iter().filter(|&t| t & mask == mask).collect();
    if defs.is_empty() {
        return Induced { dim: up.len(), basis: Some(BitMatrix::identity(up.len())) };
    }
    if defs.contains(&mask) {
        let b = bases[mask as usize][c.face_of(mask, up[0]) as usize].clone();
        return Induced { dim: b.rows(), basis: Some(b) };
    }
    // faces of each defining type partitioning `up`, with their positions
    let group = |t: u32| -> Vec<(u32, Vec<usize>)> {
        let mut seen: HashMap<u32, ()> = HashMap::new();
        let mut out = Vec::new();
        for &top in up {
            let f = c.face_of(t, top);
            if seen.insert(f, ()).is_none() {
                out.push((f, positions(up, c.up(t, f))));
            }
        }
        out
    };
    match how {
        Induction::Stacked => {
            let mut checks = BitMatrix::zeros(0, up.len());
            for &t in &defs {
                for (f, pos) in group(t) {
                    let h = dual_of(&bases[t as usize][f as usize]);
                    for r in 0..h.rows() {
                        checks.push_row(&BitVector::from_indices(up.len(), h.row(r).iter_ones().map(|p| pos[p])));
                    }
                }
            }
            let k = checks.kernel_basis().rref().0;
            Induced { dim: k.rows(), basis: Some(k) }
        }
        Induction::TwoStage => {
            // Bt: rows = positions in `up`, columns = current basis vectors.
            let first = group(defs[0]);
            let dim0: usize = first.iter().map(|(f, _)| bases[defs[0] as usize][*f as usize].rows()).sum();
            let mut bt = BitMatrix::zeros(up.len(), dim0);
            let mut off = 0;
            for (f, pos) in &first {
                let b = &bases[defs[0] as usize][*f as usize];
                for r in 0..b.rows() {
                    for p in b.row(r).iter_ones() {
                        bt.set(pos[p], off + r, true);
                    }
                }
                off += b.rows();
            }
            for (si, &t) in defs.iter().enumerate().skip(1) {
                let last = si + 1 == defs.len();
                let mut m = BitMatrix::zeros(0, bt.cols());
                for (f, pos) in group(t) {
                    let h = dual_of(&bases[t as usize][f as usize]);
                    for r in 0..h.rows() {
                        let mut acc = BitVector::zeros(bt.cols());
                        for p in h.row(r).iter_ones() {
                            for (a, s) in acc.words_mut().iter_mut().zip(bt.row_words(pos[p])) {
                                *a ^= s;
                            }
                        }
                        m.push_row(&acc);
                    }
                }
                if last && dims_only {
                    return Induced { dim: bt.cols() - m.rank(), basis: None };
                }
                let k = m.kernel_basis();
                bt = bt.mul_transpose(&k).expect("shapes agree");
            }
            let b = bt.transpose().rref().0;
            Induced { dim: b.rows(), basis: Some(b) }
        }
    }
}

/// The missing color of a codimension-one type.
fn missing_color(c: &Complex, mask: u32) -> usize {
    let rest = c.colors_mask() & !mask;
    debug_assert_eq!(rest.count_ones(), 1);
    rest.trailing_zeros() as usize
}

/// `α` with `h = e(α t)` in the root group of color `j`, read after
/// transporting `h` to the color-0 root group by inverse type cycling.
pub fn root_coordinate(h: &GroupElement, j: usize, table: &GroupTable) -> Result<u32> {
    let ring = table.ring();
    let d = table.d();
    let mut x = h.clone();
    for _ in 0..j {
        x = type_cycle_inv(&x);
    }
    let v = x.entry(d, 0);
    let expected = if v == 0 { GroupElement::identity(d + 1) } else { GroupElement::elementary(d + 1, d, 0, v) };
    if x != expected {
        return Err(Error::Finding(format!("element is not in the root group of color {j}")));
    }
    let alpha = ring.mul(v, ring.inv(ring.t()).unwrap());
    if !ring.is_constant(alpha) {
        return Err(Error::Finding(format!("root entry {v} is not a multiple of t by a constant")));
    }
    Ok(alpha)
}

/// Oriented defining codes on a coset complex built from `table`.
pub fn oriented_defining_codes(
    complex: &Complex,
    table: &GroupTable,
    code: &LinearCode,
    rep: &dyn Fn(&[u32]) -> u32,
) -> Result<HashMap<u32, Vec<BitMatrix>>> {
    let ring = table.ring();
    let iso = VectorIso::new(ring.base());
    let q = ring.base().q() as usize;
    if code.n() != q {
        return Err(Error::Dimension(format!("local code of length {} for up-sets of size {q}", code.n())));
    }
    let g = code.generator();
    let mut out = HashMap::new();
    for m in defining_masks(complex) {
        let j = missing_color(complex, m);
        let mut list = Vec::with_capacity(complex.face_count(m));
        for i in 0..complex.face_count(m) as u32 {
            let up = complex.up(m, i);
            if up.len() != q {
                return Err(Error::Dimension(format!("defining face with {} tops, expected {q}", up.len())));
            }
            let r = rep(up);
            if up.binary_search(&r).is_err() {
                return Err(Error::InvalidParameter("representative outside its coset".into()));
            }
            let rinv = table.element(r).inverse(ring);
            let mut coord_of_pos = vec![usize::MAX; q];
            let mut hit = vec![false; q];
            for (p, &top) in up.iter().enumerate() {
                let h = rinv.mul(table.element(top), ring);
                let alpha = root_coordinate(&h, j, table)?;
                let x = iso.point_index(alpha);
                if hit[x] {
                    return Err(Error::Finding("orientation is not a bijection".into()));
                }
                hit[x] = true;
                coord_of_pos[p] = x;
            }
            let mut b = BitMatrix::zeros(g.rows(), q);
            for rr in 0..g.rows() {
                for (p, &x) in coord_of_pos.iter().enumerate() {
                    if g.get(rr, x) {
                        b.set(rr, p, true);
                    }
                }
            }
            list.push(b);
        }
        out.insert(m, list);
    }
    Ok(out)
}

/// `(δ f)(τ) = Σ_{σ ⊂ τ} f(σ)|_{τ↑}` on raw values.
pub fn raw_coboundary(c: &Complex, f: &RawCochain) -> RawCochain {
    let mut values = HashMap::new();
    for big in c.masks_at_level(f.level + 1) {
        let list = (0..c.face_count(big) as u32)
            .map(|ti| {
                let up = c.up(big, ti);
                let mut v = BitVector::zeros(up.len());
                for color in colors_of(big) {
                    let small = big & !(1 << color);
                    let si = c.face_of(small, up[0]);
                    let sup = c.up(small, si);
                    let val = &f.values[&small][si as usize];
                    for (k, &t) in up.iter().enumerate() {
                        if val.get(pos_in(sup, t)) {
                            v.flip(k);
                        }
                    }
                }
                v
            })
            .collect();
        values.insert(big, list);
    }
    RawCochain { level: f.level + 1, values }
}

/// Cup product on raw cochains with vertices ordered by `order` (a
/// permutation of the colors): on each top `τ ⊇ σ`, the value is the
/// product of `f₁` on the first `ℓ₁ + 1` vertices of `σ` and `f₂` on the
/// last `ℓ₂ + 1`.
pub fn cup_product(c: &Complex, f1: &RawCochain, f2: &RawCochain, order: &[usize]) -> Result<RawCochain> {
    let level = f1.level + f2.level;
    if level + 1 > c.colors().len() {
        return Err(Error::InvalidParameter(format!("cup product level {level} exceeds the complex dimension")));
    }
    let rank_of = |color: usize| order.iter().position(|&x| x == color).expect("color in order");
    let mut values = HashMap::new();
    for m in c.masks_at_level(level) {
        let mut cs = colors_of(m);
        cs.sort_by_key(|&x| rank_of(x));
        let front: u32 = cs[..=f1.level].iter().fold(0, |a, &x| a | 1 << x);
        let back: u32 = cs[f1.level..].iter().fold(0, |a, &x| a | 1 << x);
        let list = (0..c.face_count(m) as u32)
            .map(|i| {
                let up = c.up(m, i);
                let fi = c.face_of(front, up[0]);
                let bi = c.face_of(back, up[0]);
                let fup = c.up(front, fi);
                let bup = c.up(back, bi);
                let a = &f1.values[&front][fi as usize];
                let b = &f2.values[&back][bi as usize];
                BitVector::from_indices(
                    up.len(),
                    up.iter().enumerate().filter(|(_, &t)| a.get(pos_in(fup, t)) && b.get(pos_in(bup, t))).map(|(k, _)| k),
                )
            })
            .collect();
        values.insert(m, list);
    }
    Ok(RawCochain { level, values })
}

/// `f↑`: on each top, the sum of the values of `f` on the top's faces.
pub fn raw_projection(c: &Complex, f: &RawCochain) -> BitVector {
    let mut out = BitVector::zeros(c.n_tops());
    for m in c.masks_at_level(f.level) {
        for (i, v) in f.values[&m].iter().enumerate() {
            let up = c.up(m, i as u32);
            for p in v.iter_ones() {
                out.flip(up[p] as usize);
            }
        }
    }
    out
}

pub fn raw_add(a: &RawCochain, b: &RawCochain) -> RawCochain {
    let mut out = a.clone();
    for (m, list) in out.values.iter_mut() {
        for (x, y) in list.iter_mut().zip(&b.values[m]) {
            x.xor_assign(y);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::fixtures;

    #[test]
    fn constant_sheaf_on_octahedron_is_incidence() {
        let c = Arc::new(fixtures::octahedron());
        let s = Sheaf::constant(c.clone()).unwrap();
        // every local code of the constant sheaf is the repetition code
        for m in 1..8u32 {
            for b in s.bases_of_type(m) {
                assert_eq!(b.rows(), 1);
                assert_eq!(b.row(0).weight(), b.cols());
            }
        }
        let d0 = s.coboundary(0).unwrap();
        assert_eq!((d0.rows(), d0.cols()), (12, 6));
        assert!((0..12).all(|r| d0.row(r).len() == 2));
        let h = s.cohomology().unwrap();
        assert_eq!(h.cohomology_dims, vec![1, 0, 1]);
    }

    #[test]
    fn torus_cohomology() {
        let c = Arc::new(fixtures::torus());
        let s = Sheaf::constant(c).unwrap();
        let h = s.cohomology().unwrap();
        assert_eq!(h.cohomology_dims, vec![1, 2, 1]);
        assert_eq!(h.euler_cochains(), 0);
    }

    #[test]
    fn zero_vertex_code_is_not_flasque() {
        let c = Arc::new(fixtures::octahedron());
        let s = Sheaf::constant(c.clone()).unwrap();
        let mut all: HashMap<u32, Vec<BitMatrix>> = (1..8u32).map(|m| (m, s.bases_of_type(m).to_vec())).collect();
        all.insert(1, vec![BitMatrix::zeros(0, 4); 2]);
        let bad = Sheaf::from_all_bases(c, all).unwrap();
        assert!(s.is_flasque());
        assert!(!bad.is_flasque());
    }

    fn vertex_link_sheaf(eta: u32, r: u32) -> Sheaf {
        use crate::algebra::RingTable;
        use crate::group::DEFAULT_ENUMERATION_CAP;
        use crate::local_codes::reed_muller;
        let ring = Arc::new(RingTable::canonical(eta, 1).unwrap());
        let k0 = GroupTable::generate(2, ring, &[1, 2], DEFAULT_ENUMERATION_CAP).unwrap();
        let c = Arc::new(Complex::from_group(&k0).unwrap());
        Sheaf::attach_coset(c, &k0, &reed_muller(r, eta).unwrap()).unwrap()
    }

    #[test]
    fn vertex_code_dimension_q8() {
        let s = vertex_link_sheaf(3, 1);
        assert_eq!(s.complex().n_tops(), 512);
        assert_eq!(s.global_sections_dim(), 76);
        assert_eq!(s.global_sections().rows(), 76);
    }

    #[test]
    fn two_stage_and_stacked_induction_agree() {
        let s = vertex_link_sheaf(2, 1);
        let root = Face { mask: 0, index: 0 };
        let a = s.induce_again(root, Induction::TwoStage);
        let b = s.induce_again(root, Induction::Stacked);
        assert_eq!(a, b);
        assert_eq!(a, *s.global_sections());
    }

    #[test]
    fn vertex_code_dimension_q32() {
        let s = vertex_link_sheaf(5, 2);
        assert_eq!(s.global_sections_dim(), 5116);
    }
}

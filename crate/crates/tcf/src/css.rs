//! The CSS code of a sheaf: X checks are projected primal codewords at
//! level `x`, Z checks projected dual codewords at level `z`, with
//! `x + z = D − 2`. Logical operators come from sheaf cohomology, one copy
//! per color type containing color 0.

use std::collections::BTreeMap;

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::complex::{colors_of, Face};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector, RowSpace, SparseBitMatrix};
use crate::sheaf::{sparse_mul, Sheaf};

/// Default bound on `n` for global rank computations.
pub const DEFAULT_RANK_CAP: usize = 1 << 20;

pub type Rational = Ratio<i64>;

fn ser_ratio<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

fn ser_opt_ratio<S: Serializer>(r: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_some(&r.to_string()),
        None => s.serialize_none(),
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

#[derive(Clone, Debug)]
pub struct CssCode {
    pub d: usize,
    pub x: usize,
    pub z: usize,
    pub n: usize,
    pub h_x: SparseBitMatrix,
    pub h_z: SparseBitMatrix,
    /// Face supporting each X check (a basis codeword of that face).
    pub x_faces: Vec<Face>,
    pub z_faces: Vec<Face>,
}

#[derive(Clone, Debug, Serialize)]
pub struct WeightHistogram {
    pub x: BTreeMap<usize, usize>,
    pub z: BTreeMap<usize, usize>,
}

impl CssCode {
    /// Builds the code from a sheaf and its dual. Only the stabilizer case
    /// `x + z = D − 2` is supported.
    pub fn extract(primal: &Sheaf, dual: &Sheaf, x: usize, z: usize) -> Result<Self> {
        let c = primal.complex();
        let d = c.d();
        if c.dim() < 2 || x + z + 2 != d {
            return Err(Error::InvalidParameter(format!("need x + z = D - 2, got x={x}, z={z}, D={d}")));
        }
        if !std::sync::Arc::ptr_eq(c, dual.complex()) {
            return Err(Error::InvalidParameter("primal and dual sheaves live on different complexes".into()));
        }
        let code = Self {
            d,
            x,
            z,
            n: c.n_tops(),
            h_x: primal.projection_rows(x),
            h_z: dual.projection_rows(z),
            x_faces: primal.coord_faces(x),
            z_faces: dual.coord_faces(z),
        };
        Ok(code)
    }

    /// `h_z · h_xᵀ = 0`.
    pub fn commutes(&self) -> bool {
        self.h_z.mul_transpose(&self.h_x).map(|m| m.is_zero()).unwrap_or(false)
    }

    fn check_cap(&self, cap: usize) -> Result<()> {
        if self.n > cap {
            return Err(Error::CapExceeded { what: "global rank".into(), needed: self.n as u64, cap: cap as u64 });
        }
        Ok(())
    }

    pub fn rank_x(&self) -> usize {
        self.h_x.to_dense().rank()
    }

    pub fn rank_z(&self) -> usize {
        self.h_z.to_dense().rank()
    }

    /// `k = n − rank h_x − rank h_z`.
    pub fn dimension(&self, cap: usize) -> Result<usize> {
        self.check_cap(cap)?;
        Ok(self.n - self.rank_x() - self.rank_z())
    }

    pub fn weight_histogram(&self) -> WeightHistogram {
        let hist = |m: &SparseBitMatrix| {
            let mut h = BTreeMap::new();
            for r in 0..m.rows() {
                *h.entry(m.row(r).len()).or_insert(0) += 1;
            }
            h
        };
        WeightHistogram { x: hist(&self.h_x), z: hist(&self.h_z) }
    }

    pub fn max_check_weight(&self) -> usize {
        let w = |m: &SparseBitMatrix| (0..m.rows()).map(|r| m.row(r).len()).max().unwrap_or(0);
        w(&self.h_x).max(w(&self.h_z))
    }

    /// Every check is supported inside the up-set of its face.
    pub fn is_locally_supported(&self, primal: &Sheaf) -> bool {
        let c = primal.complex();
        let ok = |m: &SparseBitMatrix, faces: &[Face]| {
            (0..m.rows()).all(|r| {
                let up = c.up(faces[r].mask, faces[r].index);
                m.row(r).iter().all(|t| up.binary_search(t).is_ok())
            })
        };
        ok(&self.h_x, &self.x_faces) && ok(&self.h_z, &self.z_faces)
    }

    /// Pairs (X check, Z check) whose faces' types span at most `D`
    /// colors, and how many of those overlap oddly.
    pub fn even_overlap(&self) -> Result<EvenOverlapReport> {
        let prod = self.h_z.mul_transpose(&self.h_x)?;
        let mut odd_pairs = 0usize;
        for r in 0..prod.rows() {
            for &cidx in prod.row(r) {
                let u = self.z_faces[r].mask | self.x_faces[cidx as usize].mask;
                if (u.count_ones() as usize) <= self.d {
                    odd_pairs += 1;
                }
            }
        }
        let mut by_type: BTreeMap<u32, usize> = BTreeMap::new();
        for f in &self.x_faces {
            *by_type.entry(f.mask).or_insert(0) += 1;
        }
        let mut pairs = 0usize;
        for zf in &self.z_faces {
            for (&m, &cnt) in &by_type {
                if ((m | zf.mask).count_ones() as usize) <= self.d {
                    pairs += cnt;
                }
            }
        }
        Ok(EvenOverlapReport { pairs_checked: pairs, odd_pairs })
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct EvenOverlapReport {
    pub pairs_checked: usize,
    pub odd_pairs: usize,
}

/// Local rates and, when the global ranks are available, the exact rate
/// together with the redundancy corrections.
#[derive(Clone, Debug, Serialize)]
pub struct RateReport {
    #[serde(serialize_with = "ser_ratio")]
    pub rho0: Rational,
    #[serde(serialize_with = "ser_ratio")]
    pub rho1: Rational,
    /// `6ρ₁ − 6ρ₀ − 2`.
    #[serde(serialize_with = "ser_ratio")]
    pub naive_bound: Rational,
    /// `dim H⁰(Δ,F) / n`.
    #[serde(serialize_with = "ser_opt_ratio")]
    pub rho_minus1: Option<Rational>,
    /// `dim H^D(Δ,F) / n`.
    #[serde(serialize_with = "ser_opt_ratio")]
    pub rho_bar_minus1: Option<Rational>,
    /// `k / n`.
    #[serde(serialize_with = "ser_opt_ratio")]
    pub exact_rate: Option<Rational>,
    /// `k/n = 2(3ρ₁ − 3ρ₀ − 1 + ρ₋₁ + ρ̄₋₁)`.
    pub identity_holds: Option<bool>,
}

impl RateReport {
    /// From the dimensions of one vertex code and one edge code.
    pub fn from_local(vertex_dim: usize, vertex_len: usize, edge_dim: usize, edge_len: usize) -> Self {
        let rho0 = Rational::new(vertex_dim as i64, vertex_len as i64);
        let rho1 = Rational::new(edge_dim as i64, edge_len as i64);
        let naive_bound = rho1 * 6 - rho0 * 6 - 2;
        Self { rho0, rho1, naive_bound, rho_minus1: None, rho_bar_minus1: None, exact_rate: None, identity_holds: None }
    }

    /// For a 2-dimensional sheaf and its `x = z = 0` code; the global terms
    /// are filled in when `k` is given.
    pub fn for_sheaf(s: &Sheaf, k: Option<usize>) -> Result<Self> {
        let c = s.complex();
        if c.dim() != 2 {
            return Err(Error::InvalidParameter("rate report needs a 2-dimensional complex".into()));
        }
        let v = Face { mask: 1 << c.colors()[0], index: 0 };
        let e = Face { mask: (1 << c.colors()[0]) | (1 << c.colors()[1]), index: 0 };
        let mut r = Self::from_local(s.basis(v).rows(), s.basis(v).cols(), s.basis(e).rows(), s.basis(e).cols());
        if let Some(k) = k {
            let n = c.n_tops() as i64;
            let h = s.cohomology()?;
            let rm = Rational::new(h.cohomology_dims[0] as i64, n);
            let rbm = Rational::new(h.cohomology_dims[2] as i64, n);
            let exact = Rational::new(k as i64, n);
            r.identity_holds = Some(exact == (r.rho1 * 3 - r.rho0 * 3 - 1 + rm + rbm) * 2);
            r.rho_minus1 = Some(rm);
            r.rho_bar_minus1 = Some(rbm);
            r.exact_rate = Some(exact);
        }
        Ok(r)
    }
}

/// The general rate identity
/// `k / (C(D,x+1)·n) = Σ_{|T|=x+2} ρ_T + (−1)^x Σ_{j≠x+1} (−1)^j (dim H^j/n − Σ_{|T|=j+1} ρ_T)`
/// with `ρ_T` the summed local dimension of type `T` divided by `n`.
pub fn rate_identity_holds(s: &Sheaf, x: usize, k: usize) -> Result<bool> {
    let c = s.complex();
    let d = c.d();
    let n = c.n_tops() as i64;
    let h = s.cohomology()?;
    let rho_level = |j: usize| -> Rational {
        let total: usize = c.masks_at_level(j).iter().map(|&m| s.bases_of_type(m).iter().map(|b| b.rows()).sum::<usize>()).sum();
        Rational::new(total as i64, n)
    };
    let mut rhs = rho_level(x + 1);
    let sign = |e: usize| if e.is_multiple_of(2) { 1i64 } else { -1 };
    for j in 0..=d {
        if j == x + 1 {
            continue;
        }
        let term = Rational::new(h.cohomology_dims[j] as i64, n) - rho_level(j);
        rhs += term * (sign(x) * sign(j));
    }
    Ok(Rational::new(k as i64, n) == rhs * binomial(d, x + 1) as i64)
}

/// Closed form for the number of dependencies among the X checks:
/// `C(D,x+1) Σ_{j≤x} (−1)^{x−j} dim H^j − Σ_{j<x} (−1)^{x−j} C(D−1−j, D−1−x) dim C^j`.
pub fn redundancy_formula(s: &Sheaf, x: usize) -> Result<i64> {
    let d = s.complex().d();
    let h = s.cohomology()?;
    let sign = |e: usize| if e.is_multiple_of(2) { 1i64 } else { -1 };
    let mut total = 0i64;
    for j in 0..=x {
        total += binomial(d, x + 1) as i64 * sign(x - j) * h.cohomology_dims[j] as i64;
    }
    for j in 0..x {
        total -= sign(x - j) * binomial(d - 1 - j, d - 1 - x) as i64 * s.level_dim(j) as i64;
    }
    Ok(total)
}

/// Representatives of `H^j(Δ,F)`: kernel vectors of `δ^j` kept greedily
/// when independent modulo the image of `δ^{j−1}`.
pub fn cohomology_representatives(s: &Sheaf, j: usize) -> Result<Vec<BitVector>> {
    let kernel = if j + 1 < s.levels() { s.coboundary(j)?.to_dense().kernel_basis() } else { BitMatrix::identity(s.level_dim(j)) };
    let mut span = if j > 0 {
        RowSpace::new(&s.coboundary(j - 1)?.transpose().to_dense())
    } else {
        RowSpace::from_vectors(s.level_dim(j), &[])
    };
    let mut reps = Vec::new();
    for v in kernel.row_vectors() {
        if span.insert(&v) {
            reps.push(v);
        }
    }
    Ok(reps)
}

/// A vector on the tops tagged with the color type it came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TaggedVector {
    pub color_type: u32,
    #[serde(skip)]
    pub vector: BitVector,
}

/// `π↑ ι res_T f` for each `f`.
pub fn color_projection(s: &Sheaf, level: usize, t_mask: u32, reps: &[BitVector]) -> Result<Vec<BitVector>> {
    let keep = s.restricted_coords(level, t_mask);
    let p = s.projection(level);
    reps.iter()
        .map(|f| {
            let mut g = BitVector::zeros(f.len());
            for &i in &keep {
                if f.get(i) {
                    g.set(i, true);
                }
            }
            p.mul_vec(&g)
        })
        .collect()
}

/// Color types with `size` colors containing `color`, ascending.
pub fn types_containing(s: &Sheaf, color: usize, size: usize) -> Vec<u32> {
    s.complex().masks_at_level(size - 1).into_iter().filter(|m| m >> color & 1 == 1).collect()
}

/// The overcomplete family of level-`level` logical representatives whose
/// color types all contain `color`.
pub fn overcomplete_logicals(s: &Sheaf, level: usize, color: usize) -> Result<Vec<TaggedVector>> {
    let reps = cohomology_representatives(s, level)?;
    let mut out = Vec::new();
    for t in types_containing(s, color, level + 1) {
        for v in color_projection(s, level, t, &reps)? {
            out.push(TaggedVector { color_type: t, vector: v });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct LogicalBasis {
    pub x: Vec<TaggedVector>,
    pub z: Vec<TaggedVector>,
}

impl LogicalBasis {
    pub fn x_of_type(&self, t: u32) -> Vec<&TaggedVector> {
        self.x.iter().filter(|v| v.color_type == t).collect()
    }

    pub fn census(&self) -> BTreeMap<u32, (usize, usize)> {
        let mut m: BTreeMap<u32, (usize, usize)> = BTreeMap::new();
        for v in &self.x {
            m.entry(v.color_type).or_default().0 += 1;
        }
        for v in &self.z {
            m.entry(v.color_type).or_default().1 += 1;
        }
        m
    }
}

fn independent_mod(stabilizers: &SparseBitMatrix, vs: &[TaggedVector]) -> bool {
    let mut span = RowSpace::new(&stabilizers.to_dense());
    vs.iter().all(|v| span.insert(&v.vector))
}

fn in_kernel(checks: &SparseBitMatrix, vs: &[TaggedVector]) -> bool {
    vs.iter().all(|v| checks.mul_vec(&v.vector).map(|s| s.is_zero()).unwrap_or(false))
}

/// Logical bases from `H^{x+1}(Δ,F)` and `H^{z+1}(Δ,F̄)` projected through
/// every color type containing color 0; membership and independence modulo
/// stabilizers are verified.
pub fn logical_basis(code: &CssCode, primal: &Sheaf, dual: &Sheaf) -> Result<LogicalBasis> {
    let color = primal.complex().colors()[0];
    let x = overcomplete_logicals(primal, code.x + 1, color)?;
    let z = overcomplete_logicals(dual, code.z + 1, color)?;
    if !in_kernel(&code.h_z, &x) || !in_kernel(&code.h_x, &z) {
        return Err(Error::Finding("a logical representative violates a check".into()));
    }
    if !independent_mod(&code.h_x, &x) || !independent_mod(&code.h_z, &z) {
        return Err(Error::Finding("logical representatives are dependent modulo stabilizers".into()));
    }
    Ok(LogicalBasis { x, z })
}

/// Whether stabilizers plus X logicals span `ker h_z`, stabilizers plus Z
/// logicals span `ker h_x`, and (for codes with equal check spaces) the two
/// spans coincide.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SpanReport {
    pub x_complete: bool,
    pub z_complete: bool,
    pub checks_equal: bool,
    pub spans_equal: Option<bool>,
}

pub fn span_report(code: &CssCode, lb: &LogicalBasis) -> SpanReport {
    let hx = code.h_x.to_dense();
    let hz = code.h_z.to_dense();
    let (rx, rz) = (hx.rank(), hz.rank());
    let mut sx = RowSpace::new(&hx);
    lb.x.iter().for_each(|v| {
        sx.insert(&v.vector);
    });
    let mut sz = RowSpace::new(&hz);
    lb.z.iter().for_each(|v| {
        sz.insert(&v.vector);
    });
    let x_complete = sx.dim() == code.n - rz;
    let z_complete = sz.dim() == code.n - rx;
    let checks_equal = RowSpace::new(&hx).is_subspace_of(&RowSpace::new(&hz)) && rx == rz;
    let spans_equal = checks_equal.then(|| sx.is_subspace_of(&sz) && sz.is_subspace_of(&sx));
    SpanReport { x_complete, z_complete, checks_equal, spans_equal }
}

/// Gram matrix `a_i · b_j` over F₂.
pub fn gram(a: &[BitVector], b: &[BitVector]) -> BitMatrix {
    let mut g = BitMatrix::zeros(a.len(), b.len());
    for (i, u) in a.iter().enumerate() {
        for (j, v) in b.iter().enumerate() {
            if u.dot(v) {
                g.set(i, j, true);
            }
        }
    }
    g
}

/// Paired logicals `(r_i, b_i)` with `r_i · b_j = δ_ij` and `r_i · r_j =
/// b_i · b_j = 0`, every vector keeping its color tag.
#[derive(Clone, Debug)]
pub struct DarbouxBasis {
    pub pairs: Vec<(TaggedVector, TaggedVector)>,
}

impl DarbouxBasis {
    pub fn is_darboux(&self) -> bool {
        let r: Vec<BitVector> = self.pairs.iter().map(|p| p.0.vector.clone()).collect();
        let b: Vec<BitVector> = self.pairs.iter().map(|p| p.1.vector.clone()).collect();
        gram(&r, &r).is_zero() && gram(&b, &b).is_zero() && gram(&r, &b) == BitMatrix::identity(r.len())
    }
}

/// Symplectic reduction of two isotropic families under the overlap-parity
/// form. Each step pairs the first remaining red vector with a blue partner
/// and clears both from the rest; because each family is isotropic, reds
/// only absorb reds and blues only absorb blues.
pub fn darboux(red: &[TaggedVector], blue: &[TaggedVector]) -> Result<DarbouxBasis> {
    let rv: Vec<BitVector> = red.iter().map(|v| v.vector.clone()).collect();
    let bv: Vec<BitVector> = blue.iter().map(|v| v.vector.clone()).collect();
    if !gram(&rv, &rv).is_zero() || !gram(&bv, &bv).is_zero() {
        return Err(Error::Finding("a color family is not isotropic".into()));
    }
    let a = gram(&rv, &bv);
    if red.len() != blue.len() || a.rank() != red.len() {
        return Err(Error::Finding(format!(
            "degenerate pairing: {} red, {} blue, cross-pairing rank {}",
            red.len(),
            blue.len(),
            a.rank()
        )));
    }
    let mut reds: Vec<TaggedVector> = red.to_vec();
    let mut blues: Vec<TaggedVector> = blue.to_vec();
    let mut pairs = Vec::new();
    while let Some(r) = reds.first().cloned() {
        let Some(bi) = blues.iter().position(|b| b.vector.dot(&r.vector)) else {
            return Err(Error::Finding("a red logical has no blue partner".into()));
        };
        let b = blues.remove(bi);
        reds.remove(0);
        for v in reds.iter_mut() {
            if v.vector.dot(&b.vector) {
                v.vector.xor_assign(&r.vector);
            }
        }
        for v in blues.iter_mut() {
            if v.vector.dot(&r.vector) {
                v.vector.xor_assign(&b.vector);
            }
        }
        pairs.push((r, b));
    }
    Ok(DarbouxBasis { pairs })
}

fn dense_eq(a: &SparseBitMatrix, b: &SparseBitMatrix) -> bool {
    a.rows() == b.rows() && a.cols() == b.cols() && a.to_dense() == b.to_dense()
}

fn select_rows(m: &SparseBitMatrix, rows: &[usize]) -> SparseBitMatrix {
    SparseBitMatrix::from_row_lists(m.cols(), rows.iter().map(|&r| m.row(r).to_vec()).collect()).unwrap()
}

#[derive(Clone, Debug, Serialize)]
pub struct SquareReport {
    pub color_type: u32,
    pub bottom_left: bool,
    pub top_left: bool,
    pub top_right: bool,
    pub bottom_right: bool,
    pub shrunk_is_complex: bool,
    pub shrunk_h1: usize,
    pub shrunk_cocycles: usize,
    pub lifts_found: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct UnfoldingReport {
    pub n: usize,
    pub k: usize,
    pub sheaf_h: usize,
    pub copies: usize,
    pub formula_holds: bool,
    pub squares: Vec<SquareReport>,
    pub shrunk_iso_holds: bool,
    pub squares_hold: bool,
    pub x_redundancy: usize,
    pub x_redundancy_formula: i64,
    pub z_redundancy: usize,
    pub z_redundancy_formula: i64,
}

impl UnfoldingReport {
    pub fn all_pass(&self) -> bool {
        self.formula_holds
            && self.shrunk_iso_holds
            && self.squares_hold
            && self.x_redundancy as i64 == self.x_redundancy_formula
            && self.z_redundancy as i64 == self.z_redundancy_formula
    }
}

/// The four commuting squares relating the sheaf complex, the shrunk
/// complex of `T` and the code, plus the shrunk cohomology dimension and
/// lifts of every shrunk cocycle basis vector.
pub fn squares_for_type(code: &CssCode, primal: &Sheaf, dual: &Sheaf, t_mask: u32) -> Result<SquareReport> {
    let c = primal.complex();
    let x = code.x;
    let z = code.z;
    let tc = c.colors_mask() & !t_mask;

    let mut bottom_left = true;
    for l in 0..=x {
        if (t_mask.count_ones() as usize) < l + 2 {
            continue;
        }
        let lhs = sparse_mul(&primal.restriction(l + 1, t_mask), &primal.coboundary(l)?)?;
        let rhs = sparse_mul(&primal.restricted_coboundary(l, t_mask)?, &primal.restriction(l, t_mask))?;
        bottom_left &= dense_eq(&lhs, &rhs);
    }

    let delta_t = primal.restricted_coboundary(x, t_mask)?;
    let inc_x = primal.inclusion(x, t_mask);
    let inc_x1 = primal.inclusion(x + 1, t_mask);
    let p_x = primal.projection(x);
    let p_x1 = primal.projection(x + 1);
    let top_left = dense_eq(&sparse_mul(&p_x, &inc_x)?, &sparse_mul(&sparse_mul(&p_x1, &inc_x1)?, &delta_t)?);

    // Q = π̄ᵀ π↑ ι_T : C^{x+1}(Δ_T) → C_z(Δ)
    let q = sparse_mul(&dual.projection_rows(z), &sparse_mul(&p_x1, &inc_x1)?)?;
    let tc_rows: Vec<usize> = (0..q.rows()).filter(|&r| code.z_faces[r].mask == tc).collect();
    let top_right = (0..q.rows()).all(|r| code.z_faces[r].mask == tc || q.row(r).is_empty());

    // ψ' on C^{x+1}(Δ_T) and ψ = ψ' res_T on C^{x+1}(Δ)
    let psi_shrunk = select_rows(&q, &tc_rows);
    let psi = sparse_mul(&psi_shrunk, &primal.restriction(x + 1, t_mask))?;
    let delta = primal.coboundary(x + 1)?.to_dense();
    let bottom_right = delta.rank() == delta.vstack(&psi.to_dense())?.rank();

    let shrunk_is_complex = sparse_mul(&psi_shrunk, &delta_t)?.is_zero();
    let psi_dense = psi_shrunk.to_dense();
    let cocycles = psi_dense.kernel_basis();
    let shrunk_h1 = cocycles.rows() - delta_t.rank();

    let mut lifts_found = 0;
    let d1 = primal.coboundary(x + 1)?;
    let res = primal.restriction(x + 1, t_mask);
    for f in cocycles.row_vectors() {
        match primal.lift_restricted_cocycle(t_mask, &f)? {
            Some(g) if d1.mul_vec(&g)?.is_zero() && res.mul_vec(&g)? == f => lifts_found += 1,
            Some(_) => return Err(Error::Finding("solver returned an invalid lift".into())),
            None => {}
        }
    }
    Ok(SquareReport {
        color_type: t_mask,
        bottom_left,
        top_left,
        top_right,
        bottom_right,
        shrunk_is_complex,
        shrunk_h1,
        shrunk_cocycles: cocycles.rows(),
        lifts_found,
    })
}

/// `k = C(D, x+1) · dim H^{x+1}(Δ,F)` together with the square identities
/// and shrunk-complex dimensions for every type of `x + 2` colors.
pub fn unfolding_check(code: &CssCode, primal: &Sheaf, dual: &Sheaf, cap: usize) -> Result<UnfoldingReport> {
    let k = code.dimension(cap)?;
    let h = primal.cohomology()?;
    let sheaf_h = h.cohomology_dims[code.x + 1];
    let copies = binomial(code.d, code.x + 1);
    let mut squares = Vec::new();
    for t in primal.complex().masks_at_level(code.x + 1) {
        squares.push(squares_for_type(code, primal, dual, t)?);
    }
    let shrunk_iso_holds = squares.iter().all(|s| s.shrunk_h1 == sheaf_h && s.lifts_found == s.shrunk_cocycles);
    let squares_hold = squares.iter().all(|s| s.bottom_left && s.top_left && s.top_right && s.bottom_right && s.shrunk_is_complex);
    Ok(UnfoldingReport {
        n: code.n,
        k,
        sheaf_h,
        copies,
        formula_holds: k == copies * sheaf_h,
        squares,
        shrunk_iso_holds,
        squares_hold,
        x_redundancy: code.h_x.rows() - code.rank_x(),
        x_redundancy_formula: redundancy_formula(primal, code.x)?,
        z_redundancy: code.h_z.rows() - code.rank_z(),
        z_redundancy_formula: redundancy_formula(dual, code.z)?,
    })
}

/// X logicals of color type `T` (`|T| = x + 2`) read off the shrunk
/// complex: cocycles of `ψ'` kept when independent modulo `im δ_T`, pushed
/// through `π↑ ι`. Needs no global elimination, only the shrunk one.
pub fn shrunk_logicals(code: &CssCode, primal: &Sheaf, dual: &Sheaf, t_mask: u32) -> Result<Vec<TaggedVector>> {
    let c = primal.complex();
    let (x, z) = (code.x, code.z);
    let tc = c.colors_mask() & !t_mask;
    let up = sparse_mul(&primal.projection(x + 1), &primal.inclusion(x + 1, t_mask))?;
    let q = sparse_mul(&dual.projection_rows(z), &up)?;
    let tc_rows: Vec<usize> = (0..q.rows()).filter(|&r| code.z_faces[r].mask == tc).collect();
    let cocycles = select_rows(&q, &tc_rows).to_dense().kernel_basis();
    let delta_t = primal.restricted_coboundary(x, t_mask)?;
    let mut span = RowSpace::new(&delta_t.transpose().to_dense());
    let mut out = Vec::new();
    for f in cocycles.row_vectors() {
        if span.insert(&f) {
            out.push(TaggedVector { color_type: t_mask, vector: up.mul_vec(&f)? });
        }
    }
    Ok(out)
}

/// Colors of a type, for report labels.
pub fn type_label(mask: u32) -> String {
    let cs: Vec<String> = colors_of(mask).iter().map(|c| c.to_string()).collect();
    format!("{{{}}}", cs.join(","))
}

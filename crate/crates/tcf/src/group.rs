//! `SL_{D+1}(R_m)`, its root subgroups `K_{{j}^c}`, coset enumeration and
//! the type-cycling automorphism.
//!
//! Matrix indices are 0-based here. The generator subgroup of color `j` is
//! `K_{{j}^c} = {e_{j−1,j}(α t)}` for `j ≥ 1` and `{e_{D,0}(α t)}` for
//! `j = 0`, with `α` ranging over `F_q`.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use crate::algebra::{coprimality_check, RingTable};
use crate::error::{Error, Result};

/// Default cap on enumerated group sizes.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1 << 22;

/// A square matrix over `R_m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    n: usize,
    entries: Vec<u32>,
}

impl GroupElement {
    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        Self { n, entries }
    }

    /// Builds an element, checking the determinant is 1.
    pub fn new(n: usize, entries: Vec<u32>, ring: &RingTable) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::Dimension(format!("{} entries for a {n}x{n} matrix", entries.len())));
        }
        let g = Self { n, entries };
        let det = g.det(ring);
        if det != 1 {
            return Err(Error::InvalidParameter(format!("determinant {det} != 1")));
        }
        Ok(g)
    }

    /// Elementary matrix `Id + x E_{i,j}` (`i ≠ j`).
    pub fn elementary(n: usize, i: usize, j: usize, x: u32) -> Self {
        assert!(i != j && i < n && j < n);
        let mut g = Self::identity(n);
        g.entries[i * n + j] = x;
        g
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n)
    }

    pub fn mul(&self, other: &GroupElement, ring: &RingTable) -> GroupElement {
        let n = self.n;
        let mut out = vec![0u32; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] ^= ring.mul(a, other.entries[k * n + j]);
                }
            }
        }
        GroupElement { n, entries: out }
    }

    /// Inverse by Gauss–Jordan elimination over the field `R_m`.
    pub fn inverse(&self, ring: &RingTable) -> GroupElement {
        let n = self.n;
        let mut a = self.entries.clone();
        let mut inv = Self::identity(n).entries;
        for col in 0..n {
            let p = (col..n).find(|&r| a[r * n + col] != 0).expect("invertible matrix");
            if p != col {
                for k in 0..n {
                    a.swap(p * n + k, col * n + k);
                    inv.swap(p * n + k, col * n + k);
                }
            }
            let s = ring.inv(a[col * n + col]).unwrap();
            for k in 0..n {
                a[col * n + k] = ring.mul(a[col * n + k], s);
                inv[col * n + k] = ring.mul(inv[col * n + k], s);
            }
            for r in 0..n {
                let f = a[r * n + col];
                if r != col && f != 0 {
                    for k in 0..n {
                        a[r * n + k] ^= ring.mul(f, a[col * n + k]);
                        inv[r * n + k] ^= ring.mul(f, inv[col * n + k]);
                    }
                }
            }
        }
        GroupElement { n, entries: inv }
    }

    pub fn det(&self, ring: &RingTable) -> u32 {
        let n = self.n;
        let mut a = self.entries.clone();
        let mut det = 1u32;
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| a[r * n + col] != 0) else {
                return 0;
            };
            if p != col {
                for k in 0..n {
                    a.swap(p * n + k, col * n + k);
                }
                // sign is irrelevant in characteristic 2
            }
            let piv = a[col * n + col];
            det = ring.mul(det, piv);
            let s = ring.inv(piv).unwrap();
            for r in col + 1..n {
                let f = ring.mul(a[r * n + col], s);
                if f != 0 {
                    for k in col..n {
                        a[r * n + k] ^= ring.mul(f, a[col * n + k]);
                    }
                }
            }
        }
        det
    }

    /// Commutator `a b a⁻¹ b⁻¹`.
    pub fn commutator(&self, other: &GroupElement, ring: &RingTable) -> GroupElement {
        self.mul(other, ring).mul(&self.inverse(ring), ring).mul(&other.inverse(ring), ring)
    }
}

/// `π_{T⁺}(g) = P⁻¹ g P` with `P` the cyclic permutation matrix
/// (`P_{i,i+1} = 1`), so `E_{a,b} ↦ E_{a+1,b+1}` (indices mod `D+1`).
pub fn type_cycle(g: &GroupElement) -> GroupElement {
    let n = g.n;
    let mut out = vec![0u32; n * n];
    for a in 0..n {
        for b in 0..n {
            out[((a + 1) % n) * n + (b + 1) % n] = g.entries[a * n + b];
        }
    }
    GroupElement { n, entries: out }
}

/// Inverse of [`type_cycle`].
pub fn type_cycle_inv(g: &GroupElement) -> GroupElement {
    let n = g.n;
    let mut out = vec![0u32; n * n];
    for a in 0..n {
        for b in 0..n {
            out[a * n + b] = g.entries[((a + 1) % n) * n + (b + 1) % n];
        }
    }
    GroupElement { n, entries: out }
}

/// Matrix position `(row, col)` of the root entry of color `j`.
pub fn root_position(d: usize, j: usize) -> (usize, usize) {
    assert!(j <= d);
    if j == 0 {
        (d, 0)
    } else {
        (j - 1, j)
    }
}

/// `e(α t)` at the root position of color `j`.
pub fn root_element(d: usize, j: usize, alpha: u32, ring: &RingTable) -> GroupElement {
    let (r, c) = root_position(d, j);
    GroupElement::elementary(d + 1, r, c, ring.mul(ring.embed(alpha), ring.t()))
}

/// `|SL_n(F_Q)| = Q^{n(n−1)/2} ∏_{i=2}^{n} (Q^i − 1)`, or `None` on overflow.
pub fn sl_order(n: u32, big_q: u64) -> Option<u128> {
    let q = big_q as u128;
    let mut order = q.checked_pow(n * (n - 1) / 2)?;
    for i in 2..=n {
        order = order.checked_mul(q.checked_pow(i)? - 1)?;
    }
    Some(order)
}

/// An enumerated group generated by root subgroups of the listed colors.
///
/// Element ids follow deterministic BFS order from the identity (id 0),
/// expanding generators by ascending color and `α` in `ω`-power order.
/// `right_mul[c][a][g]` is the id of `g · e(ω^a t)` for the `c`-th listed
/// color.
#[derive(Debug)]
pub struct GroupTable {
    d: usize,
    ring: Arc<RingTable>,
    colors: Vec<usize>,
    elements: Vec<GroupElement>,
    index: HashMap<GroupElement, u32>,
    right_mul: Vec<Vec<Vec<u32>>>,
}

impl GroupTable {
    /// BFS closure of `{e(α t)}` over the given colors.
    pub fn generate(d: usize, ring: Arc<RingTable>, colors: &[usize], cap: u64) -> Result<Self> {
        if colors.iter().any(|&c| c > d) || colors.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(format!("colors {colors:?} must be ascending and <= {d}")));
        }
        let f = ring.base();
        let alphas: Vec<u32> = f.nonzero_in_power_order().collect();
        let gens: Vec<Vec<GroupElement>> =
            colors.iter().map(|&c| alphas.iter().map(|&a| root_element(d, c, a, &ring)).collect()).collect();
        let id = GroupElement::identity(d + 1);
        let mut elements = vec![id.clone()];
        let mut index = HashMap::new();
        index.insert(id, 0u32);
        let mut right_mul: Vec<Vec<Vec<u32>>> = vec![vec![Vec::new(); alphas.len()]; colors.len()];
        let mut queue = VecDeque::from([0u32]);
        while let Some(g) = queue.pop_front() {
            for (ci, gs) in gens.iter().enumerate() {
                for (ai, s) in gs.iter().enumerate() {
                    let h = elements[g as usize].mul(s, &ring);
                    let next = elements.len() as u32;
                    let hid = *index.entry(h.clone()).or_insert_with(|| {
                        elements.push(h);
                        queue.push_back(next);
                        next
                    });
                    if elements.len() as u64 > cap {
                        return Err(Error::CapExceeded { what: "group enumeration".into(), needed: elements.len() as u64, cap });
                    }
                    let row = &mut right_mul[ci][ai];
                    if row.len() <= g as usize {
                        row.resize(g as usize + 1, u32::MAX);
                    }
                    row[g as usize] = hid;
                }
            }
        }
        Ok(Self { d, ring, colors: colors.to_vec(), elements, index, right_mul })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn ring(&self) -> &Arc<RingTable> {
        &self.ring
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, id: u32) -> &GroupElement {
        &self.elements[id as usize]
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn id_of(&self, g: &GroupElement) -> Option<u32> {
        self.index.get(g).copied()
    }

    /// `right_mul` table for a color (by global label) and `α = ω^a`.
    pub fn right_mul_table(&self, color: usize, a: usize) -> &[u32] {
        let ci = self.colors.iter().position(|&c| c == color).expect("color generated by this table");
        &self.right_mul[ci][a]
    }

    /// Product of two elements by id.
    pub fn mul_ids(&self, a: u32, b: u32) -> Result<u32> {
        let p = self.element(a).mul(self.element(b), &self.ring);
        self.id_of(&p).ok_or_else(|| Error::Finding("product left the enumerated group".into()))
    }

    /// Ids of `K_T = ⟨K_{{j}^c} : j ∉ T⟩`, in BFS order from the identity.
    pub fn enumerate_subgroup(&self, t_mask: u32) -> Result<Vec<u32>> {
        let gen_colors: Vec<usize> = (0..=self.d).filter(|&j| t_mask >> j & 1 == 0).collect();
        for c in &gen_colors {
            if !self.colors.contains(c) {
                return Err(Error::InvalidParameter(format!("color {c} is not generated by this table")));
            }
        }
        Ok(self.orbit_of(0, &gen_colors))
    }

    /// Elements reachable from `g` by right multiplication with generators
    /// of the given colors (the coset `g⟨…⟩`), in BFS order.
    pub fn orbit_of(&self, g: u32, gen_colors: &[usize]) -> Vec<u32> {
        let q1 = self.ring.base().q() as usize - 1;
        let mut seen = HashMap::new();
        seen.insert(g, ());
        let mut out = vec![g];
        let mut i = 0;
        while i < out.len() {
            let x = out[i];
            i += 1;
            for &c in gen_colors {
                for a in 0..q1 {
                    let y = self.right_mul_table(c, a)[x as usize];
                    if seen.insert(y, ()).is_none() {
                        out.push(y);
                    }
                }
            }
        }
        out
    }

    /// Minimum id in the coset `g K_T`.
    pub fn canonical_coset_rep(&self, g: u32, t_mask: u32) -> u32 {
        let gen_colors: Vec<usize> = self.colors.iter().copied().filter(|&j| t_mask >> j & 1 == 0).collect();
        *self.orbit_of(g, &gen_colors).iter().min().unwrap()
    }

    /// Exhaustively checks `[e_ij(α), e_jk(β)] = e_ik(αβ)` for distinct
    /// `i, j, k` and all `α, β ∈ R_m`, and that every matrix involved is an
    /// element of the table (when the table is the full group).
    pub fn verify_commutator_relation(&self) -> bool {
        let n = self.d + 1;
        let ring = &self.ring;
        let full = self.colors.len() == n;
        let size = ring.size();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if i == j || j == k || i == k {
                        continue;
                    }
                    for alpha in 0..size {
                        for beta in 0..size {
                            let a = GroupElement::elementary(n, i, j, alpha);
                            let b = GroupElement::elementary(n, j, k, beta);
                            let c = GroupElement::elementary(n, i, k, ring.mul(alpha, beta));
                            if a.commutator(&b, ring) != c {
                                return false;
                            }
                            if full && (self.id_of(&a).is_none() || self.id_of(&c).is_none()) {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        true
    }

    /// Permutation of element ids induced by [`type_cycle`]; requires the
    /// table to be closed under it (true for the full group).
    pub fn type_cycle_permutation(&self) -> Result<Vec<u32>> {
        self.elements
            .iter()
            .map(|g| self.id_of(&type_cycle(g)).ok_or_else(|| Error::InvalidParameter("table not closed under type cycling".into())))
            .collect()
    }

    /// Cayley-graph edges `(g, g·s, color)` as text, for debugging.
    pub fn cayley_edges(&self) -> String {
        let mut s = String::new();
        for (ci, &c) in self.colors.iter().enumerate() {
            for row in &self.right_mul[ci] {
                for (g, &h) in row.iter().enumerate() {
                    s.push_str(&format!("{g} {h} {c}\n"));
                }
            }
        }
        s
    }

    /// Whether `g ∈ K₀` (given as a matrix) fixes no point of at least one of
    /// `K₀/K_{{0,1}}` and `K₀/K_{{0,2}}` under left multiplication (D = 2).
    ///
    /// `g` fixes `hK` iff `h⁻¹ g h ∈ K`; `K_{{0,1}} = {e_{1,2}(·)}` and
    /// `K_{{0,2}} = {e_{0,1}(·)}` are recognized by their matrix shape and
    /// root-group membership.
    pub fn fixed_point_free_on_link(&self, g: &GroupElement) -> Result<bool> {
        if self.d != 2 {
            return Err(Error::InvalidParameter("fixed-point test is defined for D = 2".into()));
        }
        let k0 = self.k0_elements()?;
        let ring = &self.ring;
        if !k0.iter().any(|&h| self.element(h) == g) {
            return Err(Error::InvalidParameter("element is not in K_0".into()));
        }
        let in_root = |x: &GroupElement, r: usize, c: usize| -> bool {
            let mut y = x.clone();
            let v = y.entries[r * 3 + c];
            y.entries[r * 3 + c] = 0;
            y.is_identity() && self.is_root_value(v)
        };
        let mut free01 = true;
        let mut free02 = true;
        for &h in &k0 {
            let he = self.element(h);
            let conj = he.inverse(ring).mul(g, ring).mul(he, ring);
            if in_root(&conj, 1, 2) {
                free01 = false;
            }
            if in_root(&conj, 0, 1) {
                free02 = false;
            }
            if !free01 && !free02 {
                break;
            }
        }
        Ok(free01 || free02)
    }

    /// Whether `x` is of the form `α t` with `α ∈ F_q`.
    pub fn is_root_value(&self, x: u32) -> bool {
        let ring = &self.ring;
        let tinv = ring.inv(ring.t()).unwrap();
        ring.is_constant(ring.mul(x, tinv))
    }

    /// Ids of `K₀`: the whole table when it is generated by colors `{1,…,D}`,
    /// otherwise the subgroup enumerated inside the table.
    pub fn k0_elements(&self) -> Result<Vec<u32>> {
        if self.colors == (1..=self.d).collect::<Vec<_>>() {
            Ok((0..self.len() as u32).collect())
        } else {
            self.enumerate_subgroup(1)
        }
    }
}

/// Enumerates `SL_{D+1}(R_m)` from its root-subgroup generators and checks
/// the count against the order formula.
///
/// Generation is guaranteed when `gcd(q^m − 1, D + 1) = 1`; for `m = 1`
/// every root subgroup is a full root group of `SL_{D+1}(F_q)`, which
/// generates regardless, so enumeration is allowed there too.
pub fn enumerate_group(d: usize, ring: Arc<RingTable>, cap: u64) -> Result<GroupTable> {
    let eta = ring.base().eta();
    let m = ring.m();
    if m != 1 && !coprimality_check(eta, m, d as u32) {
        return Err(Error::InvalidParameter(format!("gcd(2^{}-1, {}) != 1: generation not guaranteed", eta * m, d + 1)));
    }
    let expected = sl_order(d as u32 + 1, ring.size() as u64)
        .ok_or_else(|| Error::CapExceeded { what: "group order".into(), needed: u64::MAX, cap })?;
    if expected > cap as u128 {
        return Err(Error::CapExceeded { what: "group enumeration".into(), needed: expected.min(u64::MAX as u128) as u64, cap });
    }
    let colors: Vec<usize> = (0..=d).collect();
    let t = GroupTable::generate(d, ring, &colors, cap)?;
    if t.len() as u128 != expected {
        return Err(Error::Finding(format!("BFS closure has {} elements, order formula gives {expected}", t.len())));
    }
    Ok(t)
}

/// Enumerates the subgroup `K_T` directly (without the ambient group),
/// generated by the root subgroups of the colors outside `T`.
pub fn enumerate_subgroup_direct(d: usize, ring: Arc<RingTable>, t_mask: u32, cap: u64) -> Result<GroupTable> {
    let colors: Vec<usize> = (0..=d).filter(|&j| t_mask >> j & 1 == 0).collect();
    GroupTable::generate(d, ring, &colors, cap)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(eta: u32) -> Arc<RingTable> {
        Arc::new(RingTable::canonical(eta, 1).unwrap())
    }

    #[test]
    fn sl3_f2_has_168_elements() {
        let t = enumerate_group(2, ring(1), DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(t.len(), 168);
        assert!(t.element(0).is_identity());
    }

    #[test]
    fn type_cycle_moves_roots() {
        let r = ring(3);
        let g = root_element(2, 1, 1, &r);
        assert_eq!(type_cycle(&g), root_element(2, 2, 1, &r));
        assert_eq!(type_cycle(&root_element(2, 2, 5, &r)), root_element(2, 0, 5, &r));
        let mut x = g.clone();
        for _ in 0..3 {
            x = type_cycle(&x);
        }
        assert_eq!(x, g);
        assert_eq!(type_cycle_inv(&type_cycle(&g)), g);
    }

    #[test]
    fn order_formula() {
        assert_eq!(sl_order(3, 2), Some(168));
        assert_eq!(sl_order(3, 4), Some(60480));
        assert_eq!(sl_order(3, 8), Some(512 * 511 * 63));
    }

    #[test]
    fn determinant_checked() {
        let r = ring(2);
        assert!(GroupElement::new(2, vec![1, 1, 0, 1], &r).is_ok());
        assert!(GroupElement::new(2, vec![2, 0, 0, 1], &r).is_err());
    }

    #[test]
    fn cap_refuses_large_groups() {
        let err = enumerate_group(2, ring(3), DEFAULT_ENUMERATION_CAP).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { .. }));
    }
}

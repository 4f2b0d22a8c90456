//! Colored simplicial complexes described through their top faces.
//!
//! A complex with color set `C` stores, for every type `T ⊆ C`, the face of
//! type `T` contained in each top face (`face_of[T][τ]`) together with the
//! inverse incidence (the up-set `σ↑`, sorted). Every face is determined by
//! its type and its up-set, so containment is `σ ⊂ τ ⟺ face_of[T(σ)][τ₀] = σ`
//! for any top `τ₀ ∈ τ↑`. The empty type has a single face whose up-set is
//! every top.
//!
//! Types are bit masks over the global color labels `0..=D`; a link keeps the
//! labels of its parent, so a vertex link of color 0 has colors `{1, 2}`.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::GroupTable;

/// A face: its type mask and its index among faces of that type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Face {
    pub mask: u32,
    pub index: u32,
}

#[derive(Clone, Debug, Default)]
struct TypeTable {
    face_of: Vec<u32>,
    up_offsets: Vec<u32>,
    up_tops: Vec<u32>,
}

impl TypeTable {
    fn from_face_of(face_of: Vec<u32>) -> Self {
        let count = face_of.iter().map(|&f| f as usize + 1).max().unwrap_or(0);
        let mut up_offsets = vec![0u32; count + 1];
        for &f in &face_of {
            up_offsets[f as usize + 1] += 1;
        }
        for i in 0..count {
            up_offsets[i + 1] += up_offsets[i];
        }
        let mut fill = up_offsets.clone();
        let mut up_tops = vec![0u32; face_of.len()];
        for (top, &f) in face_of.iter().enumerate() {
            up_tops[fill[f as usize] as usize] = top as u32;
            fill[f as usize] += 1;
        }
        Self { face_of, up_offsets, up_tops }
    }

    fn count(&self) -> usize {
        self.up_offsets.len() - 1
    }

    fn up(&self, i: u32) -> &[u32] {
        &self.up_tops[self.up_offsets[i as usize] as usize..self.up_offsets[i as usize + 1] as usize]
    }
}

/// A pure colored complex.
#[derive(Clone, Debug)]
pub struct Complex {
    d: usize,
    colors: Vec<usize>,
    colors_mask: u32,
    n_tops: usize,
    types: Vec<Option<TypeTable>>,
}

/// Outcome of [`Complex::verify_structure`].
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct StructureReport {
    pub top_faces: usize,
    pub faces_per_type: Vec<(u32, usize)>,
    pub purity: bool,
    pub colorability: bool,
    pub intersection: bool,
    pub disjoint_union: bool,
    /// `|faces of type T| · |σ↑| = |tops|` with constant up-set size per type.
    pub uniform_counts: bool,
    pub exhaustive: bool,
}

impl StructureReport {
    pub fn all_pass(&self) -> bool {
        self.purity && self.colorability && self.intersection && self.disjoint_union
    }
}

/// A link `Δ_σ` together with the maps back to the parent complex.
#[derive(Clone, Debug)]
pub struct Link {
    pub complex: Complex,
    /// Parent top id of every link top (`σ↑`, sorted).
    pub tops: Vec<u32>,
    /// For every link type `S`, parent face index (of type `S ∪ T(σ)`) of
    /// every link face of type `S`.
    pub face_map: HashMap<u32, Vec<u32>>,
}

pub fn mask_of(colors: &[usize]) -> u32 {
    colors.iter().fold(0, |m, &c| m | 1 << c)
}

pub fn colors_of(mask: u32) -> Vec<usize> {
    (0..32).filter(|&c| mask >> c & 1 == 1).collect()
}

impl Complex {
    /// Builds a complex from raw incidence: `face_of[T]` for every type
    /// `T ⊆ colors`, each a vector over tops of face indices. Only shapes are
    /// validated; structural properties are left to [`Self::verify_structure`].
    pub fn from_incidence(d: usize, colors: &[usize], n_tops: usize, face_of: HashMap<u32, Vec<u32>>) -> Result<Self> {
        let colors_mask = mask_of(colors);
        if colors.iter().any(|&c| c > d) {
            return Err(Error::InvalidParameter(format!("colors {colors:?} exceed D = {d}")));
        }
        let mut types: Vec<Option<TypeTable>> = vec![None; 1 << (d + 1)];
        for mask in 0..(1u32 << (d + 1)) {
            if mask & !colors_mask != 0 {
                continue;
            }
            let f = match face_of.get(&mask) {
                Some(f) => f.clone(),
                None if mask == 0 => vec![0; n_tops],
                None if mask == colors_mask => (0..n_tops as u32).collect(),
                None => return Err(Error::Dimension(format!("missing incidence for type {mask:#b}"))),
            };
            if f.len() != n_tops {
                return Err(Error::Dimension(format!("type {mask:#b}: {} entries for {n_tops} tops", f.len())));
            }
            types[mask as usize] = Some(TypeTable::from_face_of(f));
        }
        Ok(Self { d, colors: colors.to_vec(), colors_mask, n_tops, types })
    }

    /// Builds a complex from explicit top faces given as vertex lists, with a
    /// color for every vertex. Faces are identified by their vertex sets and
    /// numbered by first appearance along ascending top ids.
    pub fn from_top_faces(d: usize, vertex_colors: &[usize], tops: &[Vec<usize>]) -> Result<Self> {
        let colors: Vec<usize> = (0..=d).collect();
        let mut sorted_tops = Vec::with_capacity(tops.len());
        for (t, verts) in tops.iter().enumerate() {
            if verts.len() != d + 1 {
                return Err(Error::Dimension(format!("top {t} has {} vertices, expected {}", verts.len(), d + 1)));
            }
            let mut by_color = vec![usize::MAX; d + 1];
            for &v in verts {
                let c = *vertex_colors.get(v).ok_or_else(|| Error::InvalidParameter(format!("unknown vertex {v}")))?;
                if c > d || by_color[c] != usize::MAX {
                    return Err(Error::InvalidParameter(format!("top {t} is not properly colored")));
                }
                by_color[c] = v;
            }
            sorted_tops.push(by_color);
        }
        let mut face_of = HashMap::new();
        for mask in 0..(1u32 << (d + 1)) {
            let mut ids: HashMap<Vec<usize>, u32> = HashMap::new();
            let f: Vec<u32> = sorted_tops
                .iter()
                .map(|bc| {
                    let key: Vec<usize> = (0..=d).filter(|&c| mask >> c & 1 == 1).map(|c| bc[c]).collect();
                    let next = ids.len() as u32;
                    *ids.entry(key).or_insert(next)
                })
                .collect();
            face_of.insert(mask, f);
        }
        Self::from_incidence(d, &colors, tops.len(), face_of)
    }

    /// The coset complex of an enumerated group: tops are group elements and
    /// the faces of type `T` are the cosets `g⟨K_{{j}^c} : j ∈ colors∖T⟩`,
    /// numbered by their minimum element.
    pub fn from_group(table: &GroupTable) -> Result<Self> {
        let colors = table.colors().to_vec();
        let colors_mask = mask_of(&colors);
        let n = table.len();
        let mut face_of = HashMap::new();
        for mask in 0..(1u32 << (table.d() + 1)) {
            if mask & !colors_mask != 0 {
                continue;
            }
            let gens: Vec<usize> = colors.iter().copied().filter(|&c| mask >> c & 1 == 0).collect();
            let mut f = vec![u32::MAX; n];
            let mut next = 0u32;
            for g in 0..n as u32 {
                if f[g as usize] != u32::MAX {
                    continue;
                }
                for h in table.orbit_of(g, &gens) {
                    f[h as usize] = next;
                }
                next += 1;
            }
            face_of.insert(mask, f);
        }
        Self::from_incidence(table.d(), &colors, n, face_of)
    }

    /// Ambient dimension `D` (colors are labels in `0..=D`).
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn colors_mask(&self) -> u32 {
        self.colors_mask
    }

    /// Dimension of the top faces (`|colors| − 1`).
    pub fn dim(&self) -> isize {
        self.colors.len() as isize - 1
    }

    pub fn n_tops(&self) -> usize {
        self.n_tops
    }

    /// True for the complex `{∅}` (no colors left, e.g. the link of a top).
    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    fn table(&self, mask: u32) -> &TypeTable {
        self.types[mask as usize].as_ref().unwrap_or_else(|| panic!("type {mask:#b} not in complex"))
    }

    pub fn has_type(&self, mask: u32) -> bool {
        mask & !self.colors_mask == 0
    }

    pub fn face_count(&self, mask: u32) -> usize {
        self.table(mask).count()
    }

    /// The face of type `mask` contained in top `top`.
    pub fn face_of(&self, mask: u32, top: u32) -> u32 {
        self.table(mask).face_of[top as usize]
    }

    pub fn face_of_table(&self, mask: u32) -> &[u32] {
        &self.table(mask).face_of
    }

    /// Sorted up-set `σ↑`.
    pub fn up_set(&self, f: Face) -> Result<&[u32]> {
        if !self.has_type(f.mask) || f.index as usize >= self.face_count(f.mask) {
            return Err(Error::InvalidParameter(format!("unknown face {f:?}")));
        }
        Ok(self.table(f.mask).up(f.index))
    }

    pub fn up(&self, mask: u32, index: u32) -> &[u32] {
        self.table(mask).up(index)
    }

    /// Types in the complex with `j + 1` colors, ascending.
    pub fn masks_at_level(&self, j: usize) -> Vec<u32> {
        (0..=self.colors_mask).filter(|&m| m & !self.colors_mask == 0 && m.count_ones() as usize == j + 1).collect()
    }

    /// The face of type `sub ⊆ T(f)` contained in `f`.
    pub fn subface(&self, f: Face, sub: u32) -> u32 {
        debug_assert_eq!(sub & !f.mask, 0);
        self.face_of(sub, self.up(f.mask, f.index)[0])
    }

    pub fn contains(&self, small: Face, big: Face) -> bool {
        small.mask & !big.mask == 0 && self.subface(big, small.mask) == small.index
    }

    /// Faces of type `mask ⊇ T(f)` containing `f`, ascending.
    pub fn faces_containing(&self, f: Face, mask: u32) -> Vec<u32> {
        let mut out: Vec<u32> = self.up(f.mask, f.index).iter().map(|&t| self.face_of(mask, t)).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// The link `Δ_σ`: tops `σ↑`, colors `C ∖ T(σ)`, and faces of type `S`
    /// the parent faces of type `S ∪ T(σ)` containing `σ`.
    pub fn link(&self, f: Face) -> Result<Link> {
        let tops = self.up_set(f)?.to_vec();
        let colors: Vec<usize> = self.colors.iter().copied().filter(|&c| f.mask >> c & 1 == 0).collect();
        let rest = mask_of(&colors);
        let mut face_of = HashMap::new();
        let mut face_map = HashMap::new();
        for s in 0..=rest {
            if s & !rest != 0 {
                continue;
            }
            let mut relabel: HashMap<u32, u32> = HashMap::new();
            let mut back = Vec::new();
            let local: Vec<u32> = tops
                .iter()
                .map(|&t| {
                    let pf = self.face_of(s | f.mask, t);
                    *relabel.entry(pf).or_insert_with(|| {
                        back.push(pf);
                        back.len() as u32 - 1
                    })
                })
                .collect();
            face_of.insert(s, local);
            face_map.insert(s, back);
        }
        let complex = Self::from_incidence(self.d, &colors, tops.len(), face_of)?;
        Ok(Link { complex, tops, face_map })
    }

    /// Checks purity, colorability, the intersection property
    /// (`σ↑ ∩ σ̃↑` is empty or the up-set of a face of type `T(σ) ∪ T(σ̃)`)
    /// and the disjoint-union property (`σ↑` is the disjoint union of the
    /// up-sets of the faces of type `T ⊇ T(σ)` containing `σ`), exhaustively
    /// over all faces and type pairs.
    pub fn verify_structure(&self) -> StructureReport {
        let all: Vec<u32> = (0..=self.colors_mask).filter(|&m| m & !self.colors_mask == 0).collect();
        let faces_per_type: Vec<(u32, usize)> = all.iter().map(|&m| (m, self.face_count(m))).collect();

        // Purity: every face index is used by some top.
        let purity = all.iter().all(|&m| {
            let t = self.table(m);
            (0..t.count() as u32).all(|i| !t.up(i).is_empty())
        });

        // Colorability: a top has exactly one face of each type and its full
        // type face is itself, so distinct tops are distinct faces.
        let top_table = self.table(self.colors_mask);
        let colorability = top_table.count() == self.n_tops
            && top_table.face_of.iter().enumerate().all(|(t, &f)| f as usize == t)
            && self.table(0).count() == 1;

        // Disjoint union: for each face τ and each S ⊂ T(τ), all tops of τ↑
        // agree on their S-face. Then σ↑ is partitioned by the T-faces.
        let mut disjoint_union = true;
        'du: for &big in &all {
            let tb = self.table(big);
            for i in 0..tb.count() as u32 {
                let up = tb.up(i);
                for &small in &all {
                    if small & !big != 0 || small == big {
                        continue;
                    }
                    let fs = &self.table(small).face_of;
                    let first = fs[up[0] as usize];
                    if up.iter().any(|&t| fs[t as usize] != first) {
                        disjoint_union = false;
                        break 'du;
                    }
                }
            }
        }

        // Intersection: tops sharing the S-face and the S'-face share the
        // (S ∪ S')-face, and conversely.
        let mut intersection = true;
        'int: for (ai, &a) in all.iter().enumerate() {
            for &b in &all[ai + 1..] {
                let u = a | b;
                let (fa, fb, fu) = (&self.table(a).face_of, &self.table(b).face_of, &self.table(u).face_of);
                let mut pair_to_union: HashMap<(u32, u32), u32> = HashMap::new();
                let mut union_to_pair: HashMap<u32, (u32, u32)> = HashMap::new();
                for t in 0..self.n_tops {
                    let p = (fa[t], fb[t]);
                    if *pair_to_union.entry(p).or_insert(fu[t]) != fu[t] || *union_to_pair.entry(fu[t]).or_insert(p) != p {
                        intersection = false;
                        break 'int;
                    }
                }
            }
        }

        let uniform_counts = all.iter().all(|&m| {
            let t = self.table(m);
            let s = t.up(0).len();
            (0..t.count() as u32).all(|i| t.up(i).len() == s) && s * t.count() == self.n_tops
        });

        StructureReport {
            top_faces: self.n_tops,
            faces_per_type,
            purity,
            colorability,
            intersection,
            disjoint_union,
            uniform_counts,
            exhaustive: true,
        }
    }

    /// Checks that a permutation of tops together with a color relabeling
    /// induces a simplicial automorphism: every face of type `T` is mapped
    /// onto a single face of type `color_map(T)`, bijectively.
    pub fn is_automorphism(&self, top_perm: &[u32], color_map: &[usize]) -> bool {
        if top_perm.len() != self.n_tops {
            return false;
        }
        let map_mask = |m: u32| colors_of(m).iter().fold(0u32, |acc, &c| acc | 1 << color_map[c]);
        for m in 0..=self.colors_mask {
            if m & !self.colors_mask != 0 {
                continue;
            }
            let tm = map_mask(m);
            if !self.has_type(tm) || self.face_count(tm) != self.face_count(m) {
                return false;
            }
            let mut image = vec![u32::MAX; self.face_count(m)];
            let mut hit = vec![false; self.face_count(m)];
            for t in 0..self.n_tops {
                let src = self.face_of(m, t as u32) as usize;
                let dst = self.face_of(tm, top_perm[t]);
                if image[src] == u32::MAX {
                    if hit[dst as usize] {
                        return false;
                    }
                    hit[dst as usize] = true;
                    image[src] = dst;
                } else if image[src] != dst {
                    return false;
                }
            }
        }
        true
    }

    /// Line-oriented text dump: a header `colors … tops N` followed by one
    /// line per face `mask index up-set…`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "D {} colors {} tops {}",
            self.d,
            self.colors.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","),
            self.n_tops
        );
        for m in 0..=self.colors_mask {
            if !self.has_type(m) {
                continue;
            }
            let t = self.table(m);
            for i in 0..t.count() as u32 {
                let _ = write!(s, "{m} {i}");
                for x in t.up(i) {
                    let _ = write!(s, " {x}");
                }
                s.push('\n');
            }
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty input".into() })?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        let bad = || Error::Parse { line: 1, msg: "expected `D <d> colors <c,..> tops <n>`".into() };
        if parts.len() != 6 || parts[0] != "D" || parts[2] != "colors" || parts[4] != "tops" {
            return Err(bad());
        }
        let d: usize = parts[1].parse().map_err(|_| bad())?;
        let colors: Vec<usize> = if parts[3].is_empty() {
            vec![]
        } else {
            parts[3].split(',').filter(|x| !x.is_empty()).map(|x| x.parse().map_err(|_| bad())).collect::<Result<_>>()?
        };
        let n: usize = parts[5].parse().map_err(|_| bad())?;
        let mut face_of: HashMap<u32, Vec<u32>> = HashMap::new();
        for (ln, l) in lines {
            if l.trim().is_empty() {
                continue;
            }
            let nums: Vec<u32> = l
                .split_whitespace()
                .map(|x| x.parse().map_err(|e| Error::Parse { line: ln + 1, msg: format!("{x:?}: {e}") }))
                .collect::<Result<_>>()?;
            if nums.len() < 2 {
                return Err(Error::Parse { line: ln + 1, msg: "face line needs `mask index`".into() });
            }
            let f = face_of.entry(nums[0]).or_insert_with(|| vec![u32::MAX; n]);
            for &t in &nums[2..] {
                if t as usize >= n {
                    return Err(Error::Parse { line: ln + 1, msg: format!("top {t} out of range") });
                }
                f[t as usize] = nums[1];
            }
        }
        if face_of.values().any(|f| f.contains(&u32::MAX)) {
            return Err(Error::Parse { line: 0, msg: "some top is missing a face of some type".into() });
        }
        Self::from_incidence(d, &colors, n, face_of)
    }
}

/// Small explicit complexes used as fixtures.
pub mod fixtures {
    use super::Complex;

    /// One triangle.
    pub fn single_triangle() -> Complex {
        Complex::from_top_faces(2, &[0, 1, 2], &[vec![0, 1, 2]]).unwrap()
    }

    /// Boundary of the `(D+1)`-dimensional cross-polytope: vertices `±e_i`
    /// colored `i`, one top per sign pattern. `D = 2` is the octahedron,
    /// `D = 3` the 16-cell; both are spheres.
    pub fn cross_polytope(d: usize) -> Complex {
        let colors: Vec<usize> = (0..=d).flat_map(|i| [i, i]).collect();
        let tops: Vec<Vec<usize>> =
            (0..1usize << (d + 1)).map(|s| (0..=d).map(|i| 2 * i + (s >> i & 1)).collect()).collect();
        Complex::from_top_faces(d, &colors, &tops).unwrap()
    }

    pub fn octahedron() -> Complex {
        cross_polytope(2)
    }

    /// The 3×3 triangulated torus: vertices `(i, j) ∈ Z_3²` colored
    /// `i + 2j mod 3`, 18 triangles.
    pub fn torus() -> Complex {
        let (colors, tops) = torus_parts();
        Complex::from_top_faces(2, &colors, &tops).unwrap()
    }

    fn torus_parts() -> (Vec<usize>, Vec<Vec<usize>>) {
        let v = |i: usize, j: usize| (i % 3) * 3 + j % 3;
        let colors: Vec<usize> = (0..9).map(|x| (x / 3 + 2 * (x % 3)) % 3).collect();
        let mut tops = Vec::new();
        for i in 0..3 {
            for j in 0..3 {
                tops.push(vec![v(i, j), v(i + 1, j), v(i, j + 1)]);
                tops.push(vec![v(i + 1, j), v(i, j + 1), v(i + 1, j + 1)]);
            }
        }
        (colors, tops)
    }

    /// Suspension of the torus (`D = 3`): two apexes of color 3. Its apex
    /// links are tori, so it is not locally acyclic.
    pub fn suspended_torus() -> Complex {
        let (mut colors, tori) = torus_parts();
        colors.extend([3, 3]);
        let tops: Vec<Vec<usize>> =
            [9usize, 10].iter().flat_map(|&a| tori.iter().map(move |t| [t.as_slice(), &[a]].concat())).collect();
        Complex::from_top_faces(3, &colors, &tops).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn octahedron_counts() {
        let c = fixtures::octahedron();
        assert_eq!(c.n_tops(), 8);
        assert_eq!(c.face_count(0b001), 2);
        assert_eq!(c.face_count(0b011), 4);
        assert!(c.verify_structure().all_pass());
    }

    #[test]
    fn torus_counts() {
        let c = fixtures::torus();
        let v: usize = c.masks_at_level(0).iter().map(|&m| c.face_count(m)).sum();
        let e: usize = c.masks_at_level(1).iter().map(|&m| c.face_count(m)).sum();
        assert_eq!((v, e, c.n_tops()), (9, 27, 18));
        assert!(c.verify_structure().all_pass());
    }

    #[test]
    fn link_of_top_is_empty() {
        let c = fixtures::octahedron();
        let l = c.link(Face { mask: 0b111, index: 3 }).unwrap();
        assert!(l.complex.is_empty());
        assert_eq!(l.tops, vec![3]);
    }

    #[test]
    fn text_round_trip() {
        let c = fixtures::torus();
        let back = Complex::from_text(&c.to_text()).unwrap();
        assert_eq!(back.to_text(), c.to_text());
    }

    #[test]
    fn corrupted_incidence_is_flagged() {
        let c = fixtures::octahedron();
        let mut face_of: HashMap<u32, Vec<u32>> =
            (0..8u32).map(|m| (m, c.face_of_table(m).to_vec())).collect();
        // move one top to the other vertex of color 0 without touching edges
        let f = face_of.get_mut(&1).unwrap();
        f[0] ^= 1;
        let bad = Complex::from_incidence(2, &[0, 1, 2], 8, face_of).unwrap();
        let r = bad.verify_structure();
        assert!(!r.disjoint_union);
        assert!(!r.all_pass());
    }
}

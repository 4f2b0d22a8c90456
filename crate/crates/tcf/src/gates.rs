//! Clifford gates on the code by stabilizer conjugation, and the weight
//! conditions under which diagonal gates of higher levels preserve it.
//!
//! A Pauli is stored as `i^phase · X^x · Z^z`; under this convention
//! `Y = i·X·Z` and an operator is Hermitian iff `phase ≡ |x ∧ z| (mod 2)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::css::{CssCode, DarbouxBasis, TaggedVector};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};
use crate::group::GroupTable;
use crate::local_codes::{divisibility_level, is_multi_orthogonal, LinearCode};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pauli {
    pub x: BitVector,
    pub z: BitVector,
    pub phase: u8,
}

impl Pauli {
    pub fn identity(n: usize) -> Self {
        Self { x: BitVector::zeros(n), z: BitVector::zeros(n), phase: 0 }
    }

    pub fn x_on(v: &BitVector) -> Self {
        Self { x: v.clone(), z: BitVector::zeros(v.len()), phase: 0 }
    }

    pub fn z_on(v: &BitVector) -> Self {
        Self { x: BitVector::zeros(v.len()), z: v.clone(), phase: 0 }
    }

    /// `⊗_{q ∈ v} Y_q`.
    pub fn y_on(v: &BitVector) -> Self {
        Self { x: v.clone(), z: v.clone(), phase: (v.weight() % 4) as u8 }
    }

    /// Builds from a compact string such as `"+XIZ"`, `"-iYX"`.
    pub fn parse(s: &str) -> Result<Self> {
        let (mut phase, body) = if let Some(r) = s.strip_prefix("-i") {
            (3u8, r)
        } else if let Some(r) = s.strip_prefix("+i").or_else(|| s.strip_prefix('i')) {
            (1, r)
        } else if let Some(r) = s.strip_prefix('-') {
            (2, r)
        } else {
            (0, s.strip_prefix('+').unwrap_or(s))
        };
        let n = body.chars().count();
        let mut p = Pauli::identity(n);
        for (i, ch) in body.chars().enumerate() {
            match ch {
                'I' => {}
                'X' => p.x.set(i, true),
                'Z' => p.z.set(i, true),
                'Y' => {
                    p.x.set(i, true);
                    p.z.set(i, true);
                    phase += 1;
                }
                _ => return Err(Error::Parse { line: 0, msg: format!("bad Pauli letter {ch:?}") }),
            }
        }
        p.phase = phase % 4;
        Ok(p)
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// `self · other`.
    pub fn mul(&self, other: &Pauli) -> Pauli {
        let extra = if self.z.dot(&other.x) { 2 } else { 0 };
        Pauli { x: self.x.xor(&other.x), z: self.z.xor(&other.z), phase: (self.phase + other.phase + extra) % 4 }
    }

    pub fn commutes(&self, other: &Pauli) -> bool {
        self.x.dot(&other.z) == self.z.dot(&other.x)
    }

    pub fn is_hermitian(&self) -> bool {
        (self.phase as usize + self.x.and_weight(&self.z)).is_multiple_of(2)
    }

    pub fn is_scalar(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    pub fn weight(&self) -> usize {
        self.x.len() - (0..self.x.len()).filter(|&i| !self.x.get(i) && !self.z.get(i)).count()
    }

    /// Places this operator on qubits `offset..offset+len` of `n`.
    pub fn embed(&self, offset: usize, n: usize) -> Pauli {
        Pauli {
            x: BitVector::from_indices(n, self.x.iter_ones().map(|i| i + offset)),
            z: BitVector::from_indices(n, self.z.iter_ones().map(|i| i + offset)),
            phase: self.phase,
        }
    }

    /// Moves qubit `i` to `perm[i]`.
    pub fn permuted(&self, perm: &[u32]) -> Pauli {
        let n = self.len();
        Pauli {
            x: BitVector::from_indices(n, self.x.iter_ones().map(|i| perm[i] as usize)),
            z: BitVector::from_indices(n, self.z.iter_ones().map(|i| perm[i] as usize)),
            phase: self.phase,
        }
    }

    pub fn to_letters(&self) -> String {
        let mut phase = self.phase as usize;
        let mut body = String::new();
        for i in 0..self.len() {
            body.push(match (self.x.get(i), self.z.get(i)) {
                (false, false) => 'I',
                (true, false) => 'X',
                (false, true) => 'Z',
                (true, true) => {
                    phase += 3;
                    'Y'
                }
            });
        }
        let prefix = ["+", "+i", "-", "-i"][phase % 4];
        format!("{prefix}{body}")
    }
}

/// A gate of the circuits in this module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Gate {
    X(u32),
    Z(u32),
    S(u32),
    H(u32),
    Cz(u32, u32),
    /// `Γ = H S X`: `X → −Y → −Z → X`.
    Gamma(u32),
    /// The cyclically symmetric three-qubit gate with `XII → YXX`,
    /// `ZII → XZZ`.
    Upsilon(u32, u32, u32),
    /// Qubit `i` moves to `perm[i]` (over the whole register).
    Permute(Vec<u32>),
}

fn local(s: &str) -> Pauli {
    Pauli::parse(s).expect("static Pauli")
}

impl Gate {
    pub fn qubits(&self) -> Vec<u32> {
        match self {
            Gate::X(q) | Gate::Z(q) | Gate::S(q) | Gate::H(q) | Gate::Gamma(q) => vec![*q],
            Gate::Cz(a, b) => vec![*a, *b],
            Gate::Upsilon(a, b, c) => vec![*a, *b, *c],
            Gate::Permute(p) => (0..p.len() as u32).collect(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Gate::X(_) => "X",
            Gate::Z(_) => "Z",
            Gate::S(_) => "S",
            Gate::H(_) => "H",
            Gate::Cz(..) => "CZ",
            Gate::Gamma(_) => "GAMMA",
            Gate::Upsilon(..) => "UPSILON",
            Gate::Permute(_) => "PERM",
        }
    }

    /// Images of `X_i` and `Z_i` for each qubit of a local gate.
    fn images(&self) -> Vec<(Pauli, Pauli)> {
        match self {
            Gate::X(_) => vec![(local("X"), local("-Z"))],
            Gate::Z(_) => vec![(local("-X"), local("Z"))],
            Gate::S(_) => vec![(local("Y"), local("Z"))],
            Gate::H(_) => vec![(local("Z"), local("X"))],
            Gate::Gamma(_) => vec![(local("-Y"), local("-X"))],
            Gate::Cz(..) => vec![(local("XZ"), local("ZI")), (local("ZX"), local("IZ"))],
            Gate::Upsilon(..) => vec![
                (local("YXX"), local("XZZ")),
                (local("XYX"), local("ZXZ")),
                (local("XXY"), local("ZZX")),
            ],
            Gate::Permute(_) => unreachable!("permutations are not local"),
        }
    }

    /// `U P U†`.
    pub fn conjugate(&self, p: &Pauli) -> Pauli {
        if let Gate::Permute(perm) = self {
            return p.permuted(perm);
        }
        let qs = self.qubits();
        let imgs = self.images();
        let k = qs.len();
        let mut q = Pauli::identity(k);
        let mut rest = p.clone();
        for (i, &qb) in qs.iter().enumerate() {
            let qb = qb as usize;
            if p.x.get(qb) {
                q = q.mul(&imgs[i].0);
                rest.x.set(qb, false);
            }
            if p.z.get(qb) {
                q = q.mul(&imgs[i].1);
                rest.z.set(qb, false);
            }
        }
        for (i, &qb) in qs.iter().enumerate() {
            if q.x.get(i) {
                rest.x.flip(qb as usize);
            }
            if q.z.get(i) {
                rest.z.flip(qb as usize);
            }
        }
        rest.phase = (rest.phase + q.phase) % 4;
        rest
    }
}

/// Layers of gates with pairwise disjoint supports inside each layer.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Circuit {
    pub n: usize,
    pub layers: Vec<Vec<Gate>>,
}

impl Circuit {
    pub fn new(n: usize) -> Self {
        Self { n, layers: Vec::new() }
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn gate_count(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    /// Every layer acts on disjoint qubits.
    pub fn is_layered(&self) -> bool {
        self.layers.iter().all(|layer| {
            let mut seen = vec![false; self.n];
            layer.iter().all(|g| {
                g.qubits().into_iter().all(|q| {
                    let q = q as usize;
                    q < self.n && !std::mem::replace(&mut seen[q], true)
                })
            })
        })
    }

    /// Qubits touched, with multiplicity, over all layers.
    pub fn coverage(&self) -> Vec<usize> {
        let mut c = vec![0; self.n];
        for g in self.layers.iter().flatten() {
            if !matches!(g, Gate::Permute(_)) {
                for q in g.qubits() {
                    c[q as usize] += 1;
                }
            }
        }
        c
    }

    /// `U P U†` with the first layer applied first.
    pub fn conjugate(&self, p: &Pauli) -> Pauli {
        let mut out = p.clone();
        for g in self.layers.iter().flatten() {
            out = g.conjugate(&out);
        }
        out
    }

    /// One gate per line (`name q…`), layers separated by `# layer k`.
    pub fn netlist(&self) -> String {
        let mut s = String::new();
        for (k, layer) in self.layers.iter().enumerate() {
            let _ = writeln!(s, "# layer {k}");
            for g in layer {
                let qs: Vec<String> = match g {
                    Gate::Permute(p) => p.iter().map(|q| q.to_string()).collect(),
                    _ => g.qubits().iter().map(|q| q.to_string()).collect(),
                };
                let _ = writeln!(s, "{} {}", g.name(), qs.join(" "));
            }
        }
        s
    }
}

/// Transversal single-qubit gate on `n` qubits.
pub fn transversal(n: usize, make: impl Fn(u32) -> Gate) -> Circuit {
    Circuit { n, layers: vec![(0..n as u32).map(make).collect()] }
}

/// `CZ` between qubit `i` of block 0 and qubit `i` of block 1.
pub fn transversal_cz(n: usize) -> Circuit {
    Circuit { n: 2 * n, layers: vec![(0..n as u32).map(|i| Gate::Cz(i, i + n as u32)).collect()] }
}

/// The abelian stabilizer group, kept in echelon form so that membership
/// (with sign) is one reduction.
#[derive(Clone, Debug)]
pub struct StabilizerGroup {
    n: usize,
    rows: Vec<(usize, Pauli)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Membership {
    InGroup,
    /// `−P` is in the group.
    Negated,
    Outside,
}

fn first_pivot(p: &Pauli) -> Option<usize> {
    p.x.first_one().or_else(|| p.z.first_one().map(|i| i + p.len()))
}

fn bit_at(p: &Pauli, i: usize) -> bool {
    if i < p.len() {
        p.x.get(i)
    } else {
        p.z.get(i - p.len())
    }
}

impl StabilizerGroup {
    pub fn new(generators: &[Pauli]) -> Result<Self> {
        let n = generators.first().map(Pauli::len).unwrap_or(0);
        for (i, a) in generators.iter().enumerate() {
            if !a.is_hermitian() {
                return Err(Error::InvalidParameter(format!("generator {i} is not Hermitian")));
            }
            for b in &generators[..i] {
                if !a.commutes(b) {
                    return Err(Error::Finding(format!("generator {i} anticommutes with an earlier generator")));
                }
            }
        }
        let mut g = Self { n, rows: Vec::new() };
        for p in generators {
            let r = g.reduce(p);
            match first_pivot(&r) {
                Some(piv) => g.rows.push((piv, r)),
                None if r.phase != 0 => return Err(Error::Finding("generators imply -I".into())),
                None => {}
            }
        }
        Ok(g)
    }

    /// X checks and Z checks of a CSS code, optionally repeated over blocks.
    pub fn from_css(code: &CssCode, blocks: usize) -> Result<Self> {
        Self::new(&css_generators(code, blocks))
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn reduce(&self, p: &Pauli) -> Pauli {
        let mut r = p.clone();
        for (piv, row) in &self.rows {
            if bit_at(&r, *piv) {
                r = r.mul(row);
            }
        }
        r
    }

    pub fn membership(&self, p: &Pauli) -> Membership {
        let r = self.reduce(p);
        if !r.is_scalar() {
            Membership::Outside
        } else if r.phase == 0 {
            Membership::InGroup
        } else {
            Membership::Negated
        }
    }

    pub fn commutes_with_all(&self, p: &Pauli) -> bool {
        self.rows.iter().all(|(_, r)| r.commutes(p))
    }
}

pub fn css_generators(code: &CssCode, blocks: usize) -> Vec<Pauli> {
    let n = code.n;
    let mut out = Vec::new();
    for b in 0..blocks {
        for r in 0..code.h_x.rows() {
            out.push(Pauli::x_on(&code.h_x.row_vector(r)).embed(b * n, blocks * n));
        }
        for r in 0..code.h_z.rows() {
            out.push(Pauli::z_on(&code.h_z.row_vector(r)).embed(b * n, blocks * n));
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjugationReport {
    pub generators: usize,
    pub in_group: usize,
    pub negated: usize,
    pub outside: usize,
    /// Index of the first generator whose image is not in the group.
    pub witness: Option<usize>,
}

impl ConjugationReport {
    pub fn pass(&self) -> bool {
        self.in_group == self.generators
    }
}

/// Conjugates every generator and tests the image for membership with sign.
pub fn conjugate_and_verify(group: &StabilizerGroup, generators: &[Pauli], circ: &Circuit) -> ConjugationReport {
    let verdicts: Vec<Membership> = generators.par_iter().map(|g| group.membership(&circ.conjugate(g))).collect();
    let mut rep = ConjugationReport { generators: generators.len(), in_group: 0, negated: 0, outside: 0, witness: None };
    for (i, v) in verdicts.into_iter().enumerate() {
        match v {
            Membership::InGroup => rep.in_group += 1,
            Membership::Negated => {
                rep.negated += 1;
                rep.witness.get_or_insert(i);
            }
            Membership::Outside => {
                rep.outside += 1;
                rep.witness.get_or_insert(i);
            }
        }
    }
    rep
}

/// Logical Paulis with `X̃_j` anticommuting exactly with `Z̃_j`.
#[derive(Clone, Debug)]
pub struct LogicalPaulis {
    pub x: Vec<Pauli>,
    pub z: Vec<Pauli>,
}

impl LogicalPaulis {
    /// From a Darboux basis `(r_i, b_i)`: `X̃_j = X(r_j)`, `X̃_{j+k} = X(b_j)`,
    /// `Z̃_j = Z(b_j)`, `Z̃_{j+k} = Z(r_j)`.
    pub fn from_darboux(db: &DarbouxBasis) -> Self {
        let k = db.pairs.len();
        let mut x = Vec::with_capacity(2 * k);
        let mut z = Vec::with_capacity(2 * k);
        for (r, _) in &db.pairs {
            x.push(Pauli::x_on(&r.vector));
        }
        for (_, b) in &db.pairs {
            x.push(Pauli::x_on(&b.vector));
        }
        for (_, b) in &db.pairs {
            z.push(Pauli::z_on(&b.vector));
        }
        for (r, _) in &db.pairs {
            z.push(Pauli::z_on(&r.vector));
        }
        Self { x, z }
    }

    pub fn count(&self) -> usize {
        self.x.len()
    }

    /// The same logicals on block `b` of `blocks`.
    pub fn embed(&self, b: usize, blocks: usize) -> Self {
        let n = self.x.first().map(Pauli::len).unwrap_or(0);
        Self {
            x: self.x.iter().map(|p| p.embed(b * n, blocks * n)).collect(),
            z: self.z.iter().map(|p| p.embed(b * n, blocks * n)).collect(),
        }
    }

    pub fn concat(blocks: &[LogicalPaulis]) -> Self {
        Self { x: blocks.iter().flat_map(|b| b.x.clone()).collect(), z: blocks.iter().flat_map(|b| b.z.clone()).collect() }
    }

    /// Pairing is canonical: `X̃_i` anticommutes with `Z̃_j` iff `i = j`,
    /// and logicals of the same kind commute.
    pub fn is_canonical(&self) -> bool {
        let k = self.count();
        (0..k).all(|i| {
            (0..k).all(|j| {
                self.x[i].commutes(&self.z[j]) == (i != j) && self.x[i].commutes(&self.x[j]) && self.z[i].commutes(&self.z[j])
            })
        })
    }
}

/// Logical action of a circuit in the symplectic basis: column `j` of
/// `x_images` gives the `(X̃ | Z̃)` coordinates of `U X̃_j U†`.
#[derive(Clone, Debug)]
pub struct LogicalAction {
    /// `x_images[j]` = (X̃ part, Z̃ part) of the image of `X̃_j`.
    pub x_images: Vec<(BitVector, BitVector)>,
    pub z_images: Vec<(BitVector, BitVector)>,
    /// All images commute with the stabilizers.
    pub preserves_logical_space: bool,
}

impl LogicalAction {
    /// `coupling[j][i] = 1` iff `Z̃_i` appears in the image of `X̃_j`.
    pub fn coupling(&self) -> BitMatrix {
        let k = self.x_images.len();
        let mut m = BitMatrix::zeros(k, k);
        for (j, (_, zp)) in self.x_images.iter().enumerate() {
            for i in zp.iter_ones() {
                m.set(j, i, true);
            }
        }
        m
    }

    /// Whether every `X̃_j` keeps its own X part and nothing else (diagonal
    /// gates).
    pub fn x_parts_fixed(&self) -> bool {
        self.x_images.iter().enumerate().all(|(j, (xp, _))| xp.weight() == 1 && xp.get(j))
    }
}

fn coords(p: &Pauli, lp: &LogicalPaulis) -> (BitVector, BitVector) {
    let k = lp.count();
    let xs = BitVector::from_indices(k, (0..k).filter(|&i| !p.commutes(&lp.z[i])));
    let zs = BitVector::from_indices(k, (0..k).filter(|&i| !p.commutes(&lp.x[i])));
    (xs, zs)
}

pub fn logical_action(group: &StabilizerGroup, lp: &LogicalPaulis, circ: &Circuit) -> LogicalAction {
    let mut ok = true;
    let mut img = |p: &Pauli| {
        let q = circ.conjugate(p);
        ok &= group.commutes_with_all(&q);
        coords(&q, lp)
    };
    let x_images = lp.x.iter().map(&mut img).collect();
    let z_images = lp.z.iter().map(&mut img).collect();
    LogicalAction { x_images, z_images, preserves_logical_space: ok }
}

/// The `X̃_j → X̃_j Z̃_{j+k}` pattern (indices mod `2k`).
pub fn half_shift_coupling(count: usize) -> BitMatrix {
    let k = count / 2;
    let mut m = BitMatrix::zeros(count, count);
    for j in 0..count {
        m.set(j, (j + k) % count, true);
    }
    m
}

/// Order of a group element by repeated multiplication.
pub fn element_order(table: &GroupTable, g: u32) -> Result<usize> {
    let mut h = g;
    let mut k = 1;
    while h != 0 {
        h = table.mul_ids(g, h)?;
        k += 1;
        if k > table.len() {
            return Err(Error::Finding("element order exceeds the group size".into()));
        }
    }
    Ok(k)
}

/// Orbits of `⟨g⟩` acting on the left, each listed as `h, g h, g² h, …`
/// starting from its smallest element.
pub fn left_orbits(table: &GroupTable, g: u32) -> Result<Vec<Vec<u32>>> {
    let n = table.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for h in 0..n as u32 {
        if seen[h as usize] {
            continue;
        }
        let mut orbit = vec![h];
        seen[h as usize] = true;
        let mut cur = table.mul_ids(g, h)?;
        while cur != h {
            seen[cur as usize] = true;
            orbit.push(cur);
            cur = table.mul_ids(g, cur)?;
        }
        out.push(orbit);
    }
    Ok(out)
}

/// The left-multiplication permutation `h ↦ g h`.
pub fn left_mul_permutation(table: &GroupTable, g: u32) -> Result<Vec<u32>> {
    (0..table.len() as u32).map(|h| table.mul_ids(g, h)).collect()
}

/// The depth-≤3 CZ circuit over the `⟨g⟩`-orbits: pairs `(g^{2j}h, g^{2j+1}h)`,
/// then `(g^{2j+1}h, g^{2j+2}h)`, then `(g^{-1}h, h)` for odd order; a
/// single layer of `(h, g h)` when `g` has order 2.
pub fn g_orbit_circuit(table: &GroupTable, g: u32) -> Result<Circuit> {
    let order = element_order(table, g)?;
    if order == 1 {
        return Err(Error::InvalidParameter("the identity has no orbit gate".into()));
    }
    let orbits = left_orbits(table, g)?;
    let mut a = Vec::new();
    let mut b = Vec::new();
    let mut c = Vec::new();
    for o in &orbits {
        if order == 2 {
            a.push(Gate::Cz(o[0], o[1]));
            continue;
        }
        for j in 0..order / 2 {
            a.push(Gate::Cz(o[2 * j], o[2 * j + 1]));
            b.push(Gate::Cz(o[2 * j + 1], o[(2 * j + 2) % order]));
        }
        if order % 2 == 1 {
            c.push(Gate::Cz(o[order - 1], o[0]));
        }
    }
    let layers = [a, b, c].into_iter().filter(|l| !l.is_empty()).collect();
    Ok(Circuit { n: table.len(), layers })
}

/// One seeded element of each requested order.
pub fn sample_elements_of_orders(table: &GroupTable, orders: &[usize], seed: u64) -> Result<BTreeMap<usize, u32>> {
    let mut by_order: HashMap<usize, Vec<u32>> = HashMap::new();
    for g in 0..table.len() as u32 {
        let o = element_order(table, g)?;
        if orders.contains(&o) {
            by_order.entry(o).or_default().push(g);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = BTreeMap::new();
    for &o in orders {
        let list = by_order.get(&o).ok_or_else(|| Error::InvalidParameter(format!("no element of order {o}")))?;
        out.insert(o, *list.choose(&mut rng).unwrap());
    }
    Ok(out)
}

/// Number of unordered pairs `{h, g h}` inside `support` (qubit ids).
pub fn orbit_pairs_in_support(perm: &[u32], support: &BitVector) -> usize {
    let ordered = support.iter_ones().filter(|&h| perm[h] as usize != h && support.get(perm[h] as usize)).count();
    let involution = support.iter_ones().all(|h| perm[perm[h] as usize] as usize == h);
    if involution {
        ordered / 2
    } else {
        ordered
    }
}

/// Orbits of a permutation of order dividing 3: fixed points and triples
/// `(q, π q, π² q)` starting from the smallest element.
#[derive(Clone, Debug, Serialize)]
pub struct CycleOrbits {
    pub fixed: Vec<u32>,
    pub triples: Vec<[u32; 3]>,
}

pub fn three_cycle_orbits(perm: &[u32]) -> Result<CycleOrbits> {
    let mut seen = vec![false; perm.len()];
    let mut fixed = Vec::new();
    let mut triples = Vec::new();
    for q in 0..perm.len() as u32 {
        if seen[q as usize] {
            continue;
        }
        let a = perm[q as usize];
        if a == q {
            fixed.push(q);
            seen[q as usize] = true;
            continue;
        }
        let b = perm[a as usize];
        if perm[b as usize] != q || b == q {
            return Err(Error::Finding(format!("orbit of {q} is not a 3-cycle")));
        }
        for x in [q, a, b] {
            seen[x as usize] = true;
        }
        triples.push([q, a, b]);
    }
    Ok(CycleOrbits { fixed, triples })
}

/// `U_{T⁺-phase}`: `Z` on fixed qubits and a CZ triangle on every 3-orbit.
pub fn t_plus_phase_circuit(perm: &[u32]) -> Result<Circuit> {
    let orb = three_cycle_orbits(perm)?;
    let mut l1: Vec<Gate> = orb.fixed.iter().map(|&q| Gate::Z(q)).collect();
    let mut l2 = Vec::new();
    let mut l3 = Vec::new();
    for [a, b, c] in &orb.triples {
        l1.push(Gate::Cz(*a, *b));
        l2.push(Gate::Cz(*b, *c));
        l3.push(Gate::Cz(*a, *c));
    }
    let layers = [l1, l2, l3].into_iter().filter(|l| !l.is_empty()).collect();
    Ok(Circuit { n: perm.len(), layers })
}

/// `U_{T⁺}`: `Γ` on fixed qubits and `Υ` on every 3-orbit `(q, π q, π² q)`.
pub fn t_plus_circuit(perm: &[u32]) -> Result<Circuit> {
    let orb = three_cycle_orbits(perm)?;
    let mut layer: Vec<Gate> = orb.fixed.iter().map(|&q| Gate::Gamma(q)).collect();
    layer.extend(orb.triples.iter().map(|[a, b, c]| Gate::Upsilon(*a, *b, *c)));
    Ok(Circuit { n: perm.len(), layers: vec![layer] })
}

#[derive(Clone, Debug, Serialize)]
pub struct ImageCheck {
    pub qubits: usize,
    /// Images differing from the expected Pauli beyond a sign.
    pub mismatches: usize,
    /// Images equal to minus the expected Pauli.
    pub sign_flips: usize,
    pub witness: Option<usize>,
}

impl ImageCheck {
    pub fn pass(&self) -> bool {
        self.mismatches == 0
    }
}

/// Compares `U X_c U†` with `expected(c)` for every qubit `c`.
pub fn check_x_images(circ: &Circuit, expected: impl Fn(usize) -> Pauli + Sync) -> ImageCheck {
    let n = circ.n;
    let verdicts: Vec<(bool, bool)> = (0..n)
        .into_par_iter()
        .map(|c| {
            let got = circ.conjugate(&Pauli::x_on(&BitVector::from_indices(n, [c])));
            let want = expected(c);
            let same_bits = got.x == want.x && got.z == want.z;
            (same_bits, same_bits && got.phase != want.phase)
        })
        .collect();
    let mismatches = verdicts.iter().filter(|v| !v.0).count();
    let sign_flips = verdicts.iter().filter(|v| v.1).count();
    let witness = verdicts.iter().position(|v| !v.0);
    ImageCheck { qubits: n, mismatches, sign_flips, witness }
}

/// `X_c · Z_{a} · Z_{b} ⋯` for the given partner qubits (deduplicated;
/// partners equal to `c` are dropped).
pub fn x_with_z_partners(n: usize, c: usize, partners: &[usize]) -> Pauli {
    let mut z: Vec<usize> = partners.iter().copied().filter(|&p| p != c).collect();
    z.sort_unstable();
    z.dedup();
    Pauli { x: BitVector::from_indices(n, [c]), z: BitVector::from_indices(n, z), phase: 0 }
}

/// `Y_c · X_{a} · X_{b}` for distinct partners, `Y_c` alone otherwise.
pub fn y_with_x_partners(n: usize, c: usize, partners: &[usize]) -> Pauli {
    let mut x: Vec<usize> = partners.iter().copied().filter(|&p| p != c).collect();
    x.push(c);
    x.sort_unstable();
    x.dedup();
    Pauli { x: BitVector::from_indices(n, x), z: BitVector::from_indices(n, [c]), phase: 1 }
}

/// Whether a local gate maps the single-qubit Pauli generators to a set
/// with the canonical commutation relations (i.e. it is a Clifford).
pub fn is_valid_clifford(g: &Gate) -> bool {
    let imgs = g.images();
    let all: Vec<(&Pauli, usize, bool)> =
        imgs.iter().enumerate().flat_map(|(i, (x, z))| [(x, i, true), (z, i, false)]).collect();
    all.iter().all(|(p, ..)| p.is_hermitian())
        && all.iter().all(|(p, i, px)| {
            all.iter().all(|(q, j, qx)| {
                let should_anti = i == j && px != qx;
                p.commutes(q) != should_anti
            })
        })
}

// ---------------------------------------------------------------------------
// Weight conditions for diagonal gates

/// One factor of a product tuple.
#[derive(Clone, Debug)]
pub struct TupleItem {
    pub support: Vec<u32>,
    pub is_stabilizer: bool,
    pub color_type: u32,
}

impl TupleItem {
    pub fn from_vector(v: &BitVector, is_stabilizer: bool, color_type: u32) -> Self {
        Self { support: v.iter_ones().map(|i| i as u32).collect(), is_stabilizer, color_type }
    }
}

fn intersect(a: &[u32], b: &[u32]) -> Vec<u32> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Visits every tuple of at most `max_t` distinct items whose product is
/// nonzero, with the product's weight. Tuples with empty products are
/// skipped (their weight 0 satisfies every divisibility condition).
pub fn for_each_nonzero_product(items: &[TupleItem], n: usize, max_t: usize, mut f: impl FnMut(&[usize], usize)) {
    let mut index: Vec<Vec<u32>> = vec![Vec::new(); n];
    for (i, it) in items.iter().enumerate() {
        for &q in &it.support {
            index[q as usize].push(i as u32);
        }
    }
    fn rec(
        items: &[TupleItem],
        index: &[Vec<u32>],
        max_t: usize,
        chosen: &mut Vec<usize>,
        support: &[u32],
        f: &mut dyn FnMut(&[usize], usize),
    ) {
        f(chosen, support.len());
        if chosen.len() == max_t {
            return;
        }
        let last = *chosen.last().unwrap();
        let mut cands: Vec<u32> = support.iter().flat_map(|&q| index[q as usize].iter().copied()).filter(|&c| c as usize > last).collect();
        cands.sort_unstable();
        cands.dedup();
        for c in cands {
            let s = intersect(support, &items[c as usize].support);
            if s.is_empty() {
                continue;
            }
            chosen.push(c as usize);
            rec(items, index, max_t, chosen, &s, f);
            chosen.pop();
        }
    }
    let mut chosen = Vec::new();
    for (i, it) in items.iter().enumerate() {
        if it.support.is_empty() || max_t == 0 {
            continue;
        }
        chosen.push(i);
        rec(items, &index, max_t, &mut chosen, &it.support, &mut f);
        chosen.pop();
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct TupleCensus {
    pub nonzero_products: usize,
    pub violations: usize,
}

/// Product divisibility over basis tuples: every product of `t ≤ D`
/// distinct items (stabilizer basis words and color-typed logicals) whose
/// types span at most `D` colors has weight divisible by `2^{D−t+1}` when
/// `d_even`, and is even otherwise.
pub fn product_divisibility(items: &[TupleItem], n: usize, d: usize, d_even: bool) -> TupleCensus {
    let mut census = TupleCensus { nonzero_products: 0, violations: 0 };
    for_each_nonzero_product(items, n, d, |idx, w| {
        let union = idx.iter().fold(0u32, |a, &i| a | items[i].color_type);
        if union.count_ones() as usize > d {
            return;
        }
        census.nonzero_products += 1;
        let modulus = if d_even { 1usize << (d - idx.len() + 1) } else { 2 };
        if w % modulus != 0 {
            census.violations += 1;
        }
    });
    census
}

/// Transversal `R_ℓ` preserves the code if every product of `t ≤ ℓ`
/// distinct items containing at least one stabilizer word has weight
/// divisible by `2^{ℓ−t+1}` (inclusion–exclusion expansion of `|s|` and
/// `|x ∗ s|`).
pub fn r_condition_holds(items: &[TupleItem], n: usize, ell: usize) -> bool {
    let mut ok = true;
    for_each_nonzero_product(items, n, ell, |idx, w| {
        if ok && idx.iter().any(|&i| items[i].is_stabilizer) && w % (1usize << (ell - idx.len() + 1)) != 0 {
            ok = false;
        }
    });
    ok
}

#[derive(Clone, Debug, Serialize)]
pub struct RConditionReport {
    /// Largest `ℓ ≤ max_ell` passing the tuple condition on the given
    /// stabilizers and logicals (0 if even `ℓ = 1` fails).
    pub strongest_full: usize,
    /// Defining codes are `2^D`-divisible, so transversal `R_D` is
    /// guaranteed by the local criterion.
    pub local_guarantee_d: bool,
    /// `ℓ` guaranteed by the local criterion: `D` when it applies,
    /// otherwise 1 when every stabilizer basis word is even.
    pub strongest_local: usize,
    pub divisibility_level: usize,
}

pub fn check_r_conditions(items: &[TupleItem], n: usize, d: usize, defining: &LinearCode, max_ell: usize) -> RConditionReport {
    let mut strongest_full = 0;
    for ell in 1..=max_ell {
        if r_condition_holds(items, n, ell) {
            strongest_full = ell;
        } else {
            break;
        }
    }
    let level = divisibility_level(defining);
    let local_guarantee_d = level >= d;
    let even_stabs = items.iter().filter(|i| i.is_stabilizer).all(|i| i.support.len() % 2 == 0);
    let strongest_local = if local_guarantee_d { d } else if even_stabs { 1 } else { 0 };
    RConditionReport { strongest_full, local_guarantee_d, strongest_local, divisibility_level: level }
}

#[derive(Clone, Debug, Serialize)]
pub struct CzConditionReport {
    pub defining_d_orthogonal: bool,
    pub mixed_products: usize,
    pub odd_mixed_products: usize,
}

impl CzConditionReport {
    pub fn pass(&self) -> bool {
        self.defining_d_orthogonal && self.odd_mixed_products == 0
    }
}

/// `D`-orthogonality of the defining code and evenness of every product of
/// `D` items with at least one stabilizer word.
pub fn check_cz_conditions(items: &[TupleItem], n: usize, d: usize, defining: &LinearCode) -> Result<CzConditionReport> {
    let codes: Vec<&LinearCode> = vec![defining; d];
    let defining_d_orthogonal = is_multi_orthogonal(&codes, d)?;
    let mut mixed = 0;
    let mut odd = 0;
    for_each_nonzero_product(items, n, d, |idx, w| {
        if idx.len() == d && idx.iter().any(|&i| items[i].is_stabilizer) {
            mixed += 1;
            if w % 2 == 1 {
                odd += 1;
            }
        }
    });
    Ok(CzConditionReport { defining_d_orthogonal, mixed_products: mixed, odd_mixed_products: odd })
}

/// Tuple items for a code: X-check rows typed by their face, plus logicals.
pub fn tuple_items(code: &CssCode, logicals: &[TaggedVector]) -> Vec<TupleItem> {
    let mut items: Vec<TupleItem> = (0..code.h_x.rows())
        .map(|r| TupleItem { support: code.h_x.row(r).to_vec(), is_stabilizer: true, color_type: code.x_faces[r].mask })
        .collect();
    items.extend(logicals.iter().map(|l| TupleItem::from_vector(&l.vector, false, l.color_type)));
    items
}

/// Logicals on which subset-transversal `R_{D−ℓ}` acts: all `(D−ℓ)`-tuples
/// of distinct color types, also distinct from the subset's types, with
/// `(−2)^{D−ℓ−1} |subset ∗ L₁ ∗ … ∗ L_{D−ℓ}| ≡ 2^{D−ℓ−1} (mod 2^{D−ℓ})`,
/// i.e. with odd product. Each returned tuple receives a `C^{D−ℓ−1}Z`.
pub fn logical_phase_prediction(
    logicals: &[TaggedVector],
    d: usize,
    ell: usize,
    subset: &BitVector,
    subset_types: u32,
) -> Result<Vec<Vec<usize>>> {
    if ell >= d {
        return Err(Error::InvalidParameter(format!("ell = {ell} must be < D = {d}")));
    }
    let t = d - ell;
    let eligible: Vec<usize> = (0..logicals.len()).filter(|&i| logicals[i].color_type & !subset_types != 0 && logicals[i].color_type != subset_types).collect();
    let mut out = Vec::new();
    for idx in crate::local_codes::subsets(eligible.len(), t) {
        let chosen: Vec<usize> = idx.iter().map(|&i| eligible[i]).collect();
        let types: Vec<u32> = chosen.iter().map(|&i| logicals[i].color_type).collect();
        if (1..types.len()).any(|a| types[..a].contains(&types[a])) {
            continue;
        }
        let mut prod = subset.clone();
        for &i in &chosen {
            prod.and_assign(&logicals[i].vector);
        }
        // (−2)^{t−1} w mod 2^t is 2^{t−1} exactly when w is odd
        if prod.weight() % 2 == 1 {
            out.push(chosen);
        }
    }
    Ok(out)
}

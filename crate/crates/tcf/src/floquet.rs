//! The period-6 Floquet variant of the 2D code: edge checks measured in the
//! order X-orange, Z̄-green, X-purple, Z̄-orange, X-green, Z̄-purple, with
//! the instantaneous stabilizer group tracked exactly.
//!
//! Colors are the three two-color types, named after the vertex pairs
//! `orange = {c0,c1}`, `green = {c1,c2}`, `purple = {c0,c2}`.

use serde::Serialize;

use crate::complex::{Complex, Face};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector, RowSpace};
use crate::sheaf::Sheaf;

pub const PERIOD: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CheckKind {
    X,
    Z,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EdgeColor {
    Orange,
    Green,
    Purple,
}

impl EdgeColor {
    pub const CYCLE: [EdgeColor; 3] = [EdgeColor::Orange, EdgeColor::Green, EdgeColor::Purple];

    /// The two-color type for the complex colors `c`.
    pub fn mask(self, c: &[usize]) -> u32 {
        let (a, b) = match self {
            EdgeColor::Orange => (c[0], c[1]),
            EdgeColor::Green => (c[1], c[2]),
            EdgeColor::Purple => (c[0], c[2]),
        };
        (1 << a) | (1 << b)
    }
}

#[derive(Clone, Debug)]
pub struct Round {
    pub kind: CheckKind,
    pub color: EdgeColor,
    pub mask: u32,
    pub checks: Vec<BitVector>,
}

#[derive(Clone, Debug)]
pub struct FloquetSchedule {
    pub n: usize,
    pub rounds: Vec<Round>,
}

fn edge_checks(s: &Sheaf, mask: u32) -> Vec<BitVector> {
    let rows = s.projection_rows(1);
    s.coord_faces(1).iter().enumerate().filter(|(_, f)| f.mask == mask).map(|(i, _)| rows.row_vector(i)).collect()
}

/// Largest weight of a basis codeword on a face at `level`.
pub fn max_basis_weight(s: &Sheaf, level: usize) -> usize {
    let c = s.complex();
    c.masks_at_level(level)
        .into_iter()
        .flat_map(|m| (0..c.face_count(m) as u32).map(move |i| Face { mask: m, index: i }))
        .flat_map(|f| {
            let b = s.basis(f);
            (0..b.rows()).map(move |r| b.row_weight(r))
        })
        .max()
        .unwrap_or(0)
}

impl FloquetSchedule {
    /// X rounds measure primal edge-basis codewords, Z rounds measure dual
    /// ones.
    pub fn build(primal: &Sheaf, dual: &Sheaf) -> Result<Self> {
        let c = primal.complex();
        if c.d() != 2 || c.colors().len() != 3 {
            return Err(Error::InvalidParameter(format!("the Floquet schedule needs a 2D complex, got D = {}", c.d())));
        }
        let colors = c.colors().to_vec();
        let rounds = (0..PERIOD)
            .map(|t| {
                let kind = if t % 2 == 0 { CheckKind::X } else { CheckKind::Z };
                let color = EdgeColor::CYCLE[t % 3];
                let mask = color.mask(&colors);
                let src = if kind == CheckKind::X { primal } else { dual };
                Round { kind, color, mask, checks: edge_checks(src, mask) }
            })
            .collect();
        Ok(Self { n: c.n_tops(), rounds })
    }

    pub fn period(&self) -> usize {
        self.rounds.len()
    }

    pub fn max_check_weight(&self) -> usize {
        self.rounds.iter().flat_map(|r| r.checks.iter().map(BitVector::weight)).max().unwrap_or(0)
    }
}

/// A CSS stabilizer group: the X part and the Z part as row spaces.
#[derive(Clone, Debug)]
pub struct CssGroup {
    pub n: usize,
    pub x: Vec<BitVector>,
    pub z: Vec<BitVector>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct MeasurementOutcome {
    pub measured: usize,
    /// Checks already in the group before the round.
    pub deterministic: usize,
    /// Checks commuting with the group but outside it.
    pub commuting_new: usize,
    /// Generators of the other type removed by the round.
    pub kicked_out: usize,
}

fn basis_of(n: usize, vs: &[BitVector]) -> Vec<BitVector> {
    RowSpace::from_vectors(n, vs).basis().row_vectors()
}

impl CssGroup {
    pub fn empty(n: usize) -> Self {
        Self { n, x: Vec::new(), z: Vec::new() }
    }

    /// Stabilizers of `|0…0⟩`.
    pub fn all_zero_state(n: usize) -> Self {
        Self { n, x: Vec::new(), z: (0..n).map(|i| BitVector::from_indices(n, [i])).collect() }
    }

    pub fn rank(&self) -> usize {
        self.x.len() + self.z.len()
    }

    pub fn logical_dim(&self) -> usize {
        self.n - self.rank()
    }

    pub fn is_abelian(&self) -> bool {
        self.x.iter().all(|a| self.z.iter().all(|b| !a.dot(b)))
    }

    pub fn contains(&self, kind: CheckKind, v: &BitVector) -> bool {
        let side = if kind == CheckKind::X { &self.x } else { &self.z };
        RowSpace::from_vectors(self.n, side).contains(v)
    }

    pub fn is_subgroup_of(&self, other: &CssGroup) -> bool {
        let ox = RowSpace::from_vectors(self.n, &other.x);
        let oz = RowSpace::from_vectors(self.n, &other.z);
        self.x.iter().all(|v| ox.contains(v)) && self.z.iter().all(|v| oz.contains(v))
    }

    pub fn same_group(&self, other: &CssGroup) -> bool {
        self.is_subgroup_of(other) && other.is_subgroup_of(self)
    }

    /// Measures a family of mutually commuting checks of one kind: the
    /// other side shrinks to the elements commuting with every check, and
    /// the checks join their side.
    pub fn measure(&mut self, kind: CheckKind, checks: &[BitVector]) -> MeasurementOutcome {
        let n = self.n;
        let (same, other) = if kind == CheckKind::X { (&mut self.x, &mut self.z) } else { (&mut self.z, &mut self.x) };
        let before = RowSpace::from_vectors(n, same);
        let mut out = MeasurementOutcome { measured: checks.len(), ..Default::default() };
        // overlap[i][c] = other_i · check_c
        let mut overlap = BitMatrix::zeros(other.len(), checks.len());
        for (i, o) in other.iter().enumerate() {
            for (c, m) in checks.iter().enumerate() {
                if o.dot(m) {
                    overlap.set(i, c, true);
                }
            }
        }
        for (c, m) in checks.iter().enumerate() {
            if before.contains(m) {
                out.deterministic += 1;
            } else if (0..other.len()).all(|i| !overlap.get(i, c)) {
                out.commuting_new += 1;
            }
        }
        // combinations a of `other` with a · overlap = 0
        let keep = overlap.transpose().kernel_basis();
        let new_other: Vec<BitVector> = (0..keep.rows())
            .map(|r| {
                let mut v = BitVector::zeros(n);
                for i in keep.row(r).iter_ones() {
                    v.xor_assign(&other[i]);
                }
                v
            })
            .collect();
        let new_other = basis_of(n, &new_other);
        out.kicked_out = other.len() - new_other.len();
        *other = new_other;
        let mut all = same.clone();
        all.extend(checks.iter().cloned());
        *same = basis_of(n, &all);
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RoundReport {
    pub round: usize,
    pub kind: CheckKind,
    pub color: EdgeColor,
    pub outcome: MeasurementOutcome,
    pub rank_x: usize,
    pub rank_z: usize,
    pub logical_dim: usize,
    pub abelian: bool,
    /// The measured-check group is contained in the stabilizer of the
    /// state evolved from `|0…0⟩`.
    pub contained_in_state: bool,
    pub state_rank: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct VertexLifecycle {
    pub vertex_mask: u32,
    pub operators: usize,
    /// `alive[t]`: every operator is in the group after round `t`.
    pub alive: Vec<bool>,
    /// `absent[t]`: no operator is in the group after round `t`.
    pub absent: Vec<bool>,
    /// Re-measurement at round 4 is deterministic for all of them.
    pub deterministic_at_4: bool,
}

impl VertexLifecycle {
    /// Created at round 0, kept through round 4, destroyed at round 5.
    pub fn matches_cycle(&self) -> bool {
        self.alive[..5].iter().all(|&a| a) && self.absent[5] && self.deterministic_at_4
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FloquetReport {
    pub n: usize,
    pub period: usize,
    pub max_check_weight: usize,
    pub warmup: Vec<RoundReport>,
    pub steady: Vec<RoundReport>,
    /// Steady-state checks that commute with the group without being in it
    /// plus non-abelian or uncontained rounds.
    pub anomalies: usize,
    pub returns_after_period: bool,
    pub steady_logical_dims: Vec<usize>,
    pub lifecycle: Option<VertexLifecycle>,
}

impl FloquetReport {
    pub fn logical_dim_is(&self, k_half: usize) -> bool {
        self.steady_logical_dims.iter().all(|&d| d == k_half)
    }
}

/// Runs one warm-up period and one steady period. The measured-check group
/// starts empty; the state tableau starts from `|0…0⟩`.
pub fn run_period(schedule: &FloquetSchedule, vertex_ops: Option<(u32, Vec<BitVector>)>, tableau_cap: usize) -> Result<FloquetReport> {
    let n = schedule.n;
    if n > tableau_cap {
        return Err(Error::CapExceeded { what: "tableau qubits".into(), needed: n as u64, cap: tableau_cap as u64 });
    }
    let mut isg = CssGroup::empty(n);
    let mut state = CssGroup::all_zero_state(n);
    let mut warmup = Vec::new();
    let mut steady = Vec::new();
    let mut snapshots = Vec::new();
    let mut anomalies = 0;
    let mut alive = Vec::new();
    let mut absent = Vec::new();
    let mut deterministic_at_4 = false;
    for step in 0..2 * PERIOD + 1 {
        let t = step % PERIOD;
        let r = &schedule.rounds[t];
        if step == PERIOD + 4 {
            if let Some((_, ops)) = &vertex_ops {
                deterministic_at_4 = ops.iter().all(|v| isg.contains(CheckKind::X, v));
            }
        }
        let outcome = isg.measure(r.kind, &r.checks);
        state.measure(r.kind, &r.checks);
        let rep = RoundReport {
            round: step,
            kind: r.kind,
            color: r.color,
            rank_x: isg.x.len(),
            rank_z: isg.z.len(),
            logical_dim: isg.logical_dim(),
            abelian: isg.is_abelian() && state.is_abelian(),
            contained_in_state: isg.is_subgroup_of(&state),
            state_rank: state.rank(),
            outcome,
        };
        if step >= PERIOD {
            anomalies += rep.outcome.commuting_new + usize::from(!rep.abelian) + usize::from(!rep.contained_in_state);
            snapshots.push(isg.clone());
            if let Some((_, ops)) = &vertex_ops {
                let xs = RowSpace::from_vectors(n, &isg.x);
                alive.push(ops.iter().all(|v| xs.contains(v)));
                absent.push(ops.iter().all(|v| !xs.contains(v)));
            }
            steady.push(rep);
        } else {
            warmup.push(rep);
        }
    }
    let returns_after_period = snapshots[0].same_group(&snapshots[PERIOD]);
    let steady_logical_dims = steady[..PERIOD].iter().map(|r| r.logical_dim).collect();
    let lifecycle = vertex_ops.map(|(vertex_mask, ops)| VertexLifecycle {
        vertex_mask,
        operators: ops.len(),
        alive,
        absent,
        deterministic_at_4,
    });
    Ok(FloquetReport {
        n,
        period: schedule.period(),
        max_check_weight: schedule.max_check_weight(),
        warmup,
        steady: steady[..PERIOD].to_vec(),
        anomalies,
        returns_after_period,
        steady_logical_dims,
        lifecycle,
    })
}

/// X vertex operators of the middle color (created by the first round,
/// re-measured at round 4).
pub fn middle_vertex_operators(primal: &Sheaf) -> (u32, Vec<BitVector>) {
    let c = primal.complex();
    let mask = 1u32 << c.colors()[1];
    let rows = primal.projection_rows(0);
    let ops = primal.coord_faces(0).iter().enumerate().filter(|(_, f)| f.mask == mask).map(|(i, _)| rows.row_vector(i)).collect();
    (mask, ops)
}

#[derive(Clone, Debug, Serialize)]
pub struct PermutationLayout {
    /// `groups[t]`: tops grouped by the edge of round color `t`.
    pub groups: Vec<Vec<Vec<u32>>>,
    pub group_sizes: Vec<usize>,
    /// `π` maps every group of color `t` onto a group of color `t + 1`.
    pub maps_partitions: bool,
    pub cube_is_identity: bool,
    pub fixed_points: usize,
    pub three_orbits: usize,
    pub permutation: Vec<u32>,
}

/// Partitions of the qubits by edge up-sets of each color, and the
/// type-cycling permutation `perm` carrying one onto the next.
pub fn permutation_layout(c: &Complex, perm: &[u32]) -> Result<PermutationLayout> {
    if c.d() != 2 || c.colors().len() != 3 {
        return Err(Error::InvalidParameter("the permutation layout needs a 2D complex".into()));
    }
    if perm.len() != c.n_tops() {
        return Err(Error::InvalidParameter(format!("permutation of length {} on {} tops", perm.len(), c.n_tops())));
    }
    let colors = c.colors().to_vec();
    let groups: Vec<Vec<Vec<u32>>> = EdgeColor::CYCLE
        .iter()
        .map(|col| {
            let m = col.mask(&colors);
            (0..c.face_count(m) as u32).map(|i| c.up(m, i).to_vec()).collect()
        })
        .collect();
    let maps_partitions = (0..3).all(|t| {
        let next = EdgeColor::CYCLE[(t + 1) % 3].mask(&colors);
        groups[t].iter().all(|g| {
            let imgs: Vec<u32> = g.iter().map(|&q| perm[q as usize]).collect();
            let f = c.face_of(next, imgs[0]);
            let mut a = imgs.clone();
            a.sort_unstable();
            let mut b = c.up(next, f).to_vec();
            b.sort_unstable();
            a == b
        })
    });
    let cube_is_identity = (0..perm.len()).all(|q| perm[perm[perm[q] as usize] as usize] as usize == q);
    let fixed_points = (0..perm.len()).filter(|&q| perm[q] as usize == q).count();
    let group_sizes = groups.iter().map(|g| g.first().map(Vec::len).unwrap_or(0)).collect();
    Ok(PermutationLayout {
        group_sizes,
        maps_partitions,
        cube_is_identity,
        fixed_points,
        three_orbits: (perm.len() - fixed_points) / 3,
        permutation: perm.to_vec(),
        groups,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::fixtures;
    use std::sync::Arc;

    fn constant_pair(c: Complex) -> (Sheaf, Sheaf) {
        let s = Sheaf::constant(Arc::new(c)).unwrap();
        let d = s.dual().unwrap();
        (s, d)
    }

    #[test]
    fn honeycomb_schedule_on_the_torus() {
        let (s, d) = constant_pair(fixtures::torus());
        let sch = FloquetSchedule::build(&s, &d).unwrap();
        assert_eq!(sch.period(), 6);
        assert_eq!(sch.max_check_weight(), 2);
        let rep = run_period(&sch, Some(middle_vertex_operators(&s)), 1 << 10).unwrap();
        assert_eq!(rep.anomalies, 0);
        assert!(rep.returns_after_period);
        assert!(rep.logical_dim_is(2), "{:?}", rep.steady_logical_dims);
        assert!(rep.lifecycle.unwrap().matches_cycle());
    }

    #[test]
    fn single_triangle_is_trivial() {
        let (s, d) = constant_pair(fixtures::single_triangle());
        let sch = FloquetSchedule::build(&s, &d).unwrap();
        let rep = run_period(&sch, None, 16).unwrap();
        assert_eq!(rep.n, 1);
        assert!(rep.steady.iter().all(|r| r.rank_x + r.rank_z == 1));
        assert!(rep.returns_after_period);
    }

    #[test]
    fn measurement_kicks_out_anticommuting_generators() {
        let mut g = CssGroup::all_zero_state(2);
        let out = g.measure(CheckKind::X, &[BitVector::from_indices(2, [0, 1])]);
        assert_eq!(out.kicked_out, 1);
        assert_eq!(g.rank(), 2);
        assert!(g.contains(CheckKind::Z, &BitVector::from_indices(2, [0, 1])));
    }
}

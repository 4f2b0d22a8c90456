//! Tanner color codes on colored coset complexes.
//!
//! The crate builds the complexes, sheaves and CSS codes bottom-up and
//! verifies their structural properties by exact computation over GF(2):
//!
//! - [`gf2`]: bit-packed vectors and matrices, rank/kernel/solve.
//! - [`algebra`]: `F_{2^η}`, the ring `R_m = F_q[t]/φ`, the coordinate map `U`.
//! - [`local_codes`]: Reed–Muller codes, duals, star products, divisibility.
//! - [`group`]: `SL_{D+1}(R_m)`, the root subgroups, cosets, type cycling.
//! - [`complex`]: colored simplicial complexes, up-sets, links.
//! - [`sheaf`]: local codes on faces, coboundaries, cup products.
//! - [`css`]: check matrices, logical bases, rate reports.
//! - [`gates`]: Pauli tableaux and transversal/fold gate verification.
//! - [`floquet`]: the period-6 measurement schedule.

pub mod algebra;
pub mod complex;
pub mod css;
pub mod error;
pub mod floquet;
pub mod gates;
pub mod gf2;
pub mod group;
pub mod instance;
pub mod local_codes;
pub mod sheaf;
pub mod suites;

pub use error::{Error, Result};

//! Parameter sets and the objects built from them: the coset complex of
//! `SL_{D+1}(R_m)` with oriented Reed–Muller codes, either globally or only
//! on the link of one color-0 vertex.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{build_ring, coprimality_check, RingTable};
use crate::complex::{Complex, Face};
use crate::css::{CssCode, DEFAULT_RANK_CAP};
use crate::error::{Error, Result};
use crate::group::{enumerate_group, GroupTable, DEFAULT_ENUMERATION_CAP};
use crate::local_codes::{reed_muller, LinearCode};
use crate::sheaf::Sheaf;

/// Default bound on the qubit count for stabilizer-tableau simulation.
pub const DEFAULT_TABLEAU_CAP: usize = 1 << 14;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(default)]
pub struct InstanceConfig {
    pub d: usize,
    pub eta: u32,
    pub m: u32,
    /// Coefficients of `φ` from degree 0 to `m`; `None` picks the canonical one.
    pub phi: Option<Vec<u32>>,
    /// Reed–Muller degree of the defining codes `RM(r, η)`.
    pub r: u32,
    pub x: usize,
    pub z: usize,
    pub enumeration_cap: u64,
    pub tableau_cap: usize,
    pub rank_cap: usize,
    pub seed: u64,
}

impl Default for InstanceConfig {
    fn default() -> Self {
        Self {
            d: 2,
            eta: 1,
            m: 1,
            phi: None,
            r: 0,
            x: 0,
            z: 0,
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
            tableau_cap: DEFAULT_TABLEAU_CAP,
            rank_cap: DEFAULT_RANK_CAP,
            seed: 0,
        }
    }
}

impl InstanceConfig {
    pub fn q(&self) -> u32 {
        1 << self.eta
    }

    pub fn validate(&self) -> Result<()> {
        if self.d < 2 {
            return Err(Error::InvalidParameter(format!("D = {} < 2", self.d)));
        }
        if self.x + self.z + 2 != self.d {
            return Err(Error::InvalidParameter(format!("x + z must equal D - 2 (x={}, z={}, D={})", self.x, self.z, self.d)));
        }
        if self.eta == 0 || self.r > self.eta {
            return Err(Error::InvalidParameter(format!("RM({}, {}) is not defined", self.r, self.eta)));
        }
        if self.m == 0 {
            return Err(Error::InvalidParameter("m must be positive".into()));
        }
        // with m = 1 every root subgroup is a full root group and the
        // generation argument does not need coprimality
        if self.m != 1 && !coprimality_check(self.eta, self.m, self.d as u32) {
            return Err(Error::InvalidParameter(format!(
                "gcd(2^{} - 1, {}) != 1",
                self.eta * self.m,
                self.d + 1
            )));
        }
        Ok(())
    }

    pub fn ring(&self) -> Result<RingTable> {
        build_ring(self.eta, self.m, self.phi.clone())
    }

    pub fn local_code(&self) -> Result<LinearCode> {
        reed_muller(self.r, self.eta)
    }
}

/// A fully enumerated instance.
#[derive(Debug)]
pub struct Instance {
    pub config: InstanceConfig,
    pub table: GroupTable,
    pub complex: Arc<Complex>,
    pub primal: Sheaf,
    pub dual: Sheaf,
}

impl Instance {
    pub fn build(config: &InstanceConfig) -> Result<Self> {
        config.validate()?;
        let ring = Arc::new(config.ring()?);
        let table = enumerate_group(config.d, ring, config.enumeration_cap)?;
        let complex = Arc::new(Complex::from_group(&table)?);
        let primal = Sheaf::attach_coset(complex.clone(), &table, &config.local_code()?)?;
        let dual = primal.dual()?;
        Ok(Self { config: config.clone(), table, complex, primal, dual })
    }

    pub fn code(&self) -> Result<CssCode> {
        CssCode::extract(&self.primal, &self.dual, self.config.x, self.config.z)
    }

    pub fn ring(&self) -> &RingTable {
        self.table.ring()
    }
}

/// The link of a color-0 vertex, built from the subgroup generated by the
/// other colors' root groups; only local quantities are available.
#[derive(Debug)]
pub struct LocalInstance {
    pub config: InstanceConfig,
    pub table: GroupTable,
    pub complex: Arc<Complex>,
    pub sheaf: Sheaf,
}

impl LocalInstance {
    pub fn build(config: &InstanceConfig) -> Result<Self> {
        config.validate()?;
        let ring = Arc::new(config.ring()?);
        let colors: Vec<usize> = (1..=config.d).collect();
        let table = GroupTable::generate(config.d, ring, &colors, config.enumeration_cap)?;
        let complex = Arc::new(Complex::from_group(&table)?);
        let sheaf = Sheaf::attach_coset(complex.clone(), &table, &config.local_code()?)?;
        Ok(Self { config: config.clone(), table, complex, sheaf })
    }

    /// `dim F_v` for the vertex whose link this is.
    pub fn vertex_dim(&self) -> usize {
        self.sheaf.global_sections_dim()
    }

    pub fn vertex_len(&self) -> usize {
        self.complex.n_tops()
    }

    /// Dimension and length of one defining code.
    pub fn edge_code(&self) -> (usize, usize) {
        let m = self.sheaf.defining_masks()[0];
        let b = self.sheaf.basis(Face { mask: m, index: 0 });
        (b.rows(), b.cols())
    }
}

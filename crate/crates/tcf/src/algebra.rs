//! Finite-field arithmetic for `F_q = F_{2^η}` and `R_m = F_q[t]/⟨φ⟩`.
//!
//! Field elements are bit patterns in the polynomial basis `1, ω, ω², …`
//! where `ω` is the class of `x` modulo a primitive polynomial. Ring
//! elements are coefficient vectors over `F_q` of degree `< m`, packed into
//! an integer with `η` bits per coefficient (coefficient `i` occupies bits
//! `iη..(i+1)η`), so ring addition is integer XOR.

use crate::error::{Error, Result};
use crate::gf2::BitVector;

/// Primitive polynomials over F₂ (bit `i` = coefficient of `x^i`).
pub fn default_modulus(eta: u32) -> Option<u32> {
    Some(match eta {
        1 => 0b11,
        2 => 0b111,
        3 => 0b1011,
        4 => 0b10011,
        5 => 0b100101,
        6 => 0b1000011,
        7 => 0b10000011,
        8 => 0b100011101,
        _ => return None,
    })
}

/// Log/antilog tables for `F_{2^η}` with generator `ω = x`.
#[derive(Clone, Debug)]
pub struct FieldTable {
    eta: u32,
    modulus: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl FieldTable {
    pub fn new(eta: u32) -> Result<Self> {
        let m = default_modulus(eta).ok_or_else(|| Error::InvalidParameter(format!("no shipped modulus for eta={eta}")))?;
        Self::with_modulus(eta, m)
    }

    /// Builds the tables; rejects a modulus for which `x` is not a generator.
    pub fn with_modulus(eta: u32, modulus: u32) -> Result<Self> {
        if eta == 0 || eta > 16 || modulus >> eta != 1 {
            return Err(Error::InvalidParameter(format!("modulus {modulus:#b} is not of degree {eta}")));
        }
        let q = 1u32 << eta;
        let order = q - 1;
        let reduce = |mut a: u32| {
            if a & q != 0 {
                a ^= modulus;
            }
            a
        };
        let mut exp = vec![0u32; 2 * order as usize];
        let mut log = vec![u32::MAX; q as usize];
        let mut a = 1u32;
        for k in 0..order {
            if log[a as usize] != u32::MAX {
                return Err(Error::NotPrimitive { orbit: k as u64, expected: order as u64 });
            }
            exp[k as usize] = a;
            log[a as usize] = k;
            // multiply by ω = x
            a = reduce(a << 1);
        }
        if a != 1 {
            return Err(Error::NotPrimitive { orbit: order as u64 + 1, expected: order as u64 });
        }
        for k in order..2 * order {
            exp[k as usize] = exp[(k - order) as usize];
        }
        Ok(Self { eta, modulus, exp, log })
    }

    pub fn eta(&self) -> u32 {
        self.eta
    }

    pub fn q(&self) -> u32 {
        1 << self.eta
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// The generator `ω`.
    pub fn omega(&self) -> u32 {
        self.exp[1 % self.exp.len().max(1)]
    }

    /// `ω^k` for any integer `k` (negative allowed).
    pub fn omega_pow(&self, k: i64) -> u32 {
        let order = (self.q() - 1) as i64;
        self.exp[k.rem_euclid(order) as usize]
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        a ^ b
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
        }
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            None
        } else {
            let order = self.q() - 1;
            Some(self.exp[((order - self.log[a as usize]) % order) as usize])
        }
    }

    /// Discrete log base `ω`; `None` for zero.
    pub fn log(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.log[a as usize])
    }

    /// Nonzero elements in ω-power order `ω⁰, ω¹, …`.
    pub fn nonzero_in_power_order(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.q() - 1).map(|k| self.exp[k as usize])
    }
}

/// `R_m = F_q[t]/⟨φ⟩` with `φ` primitive, so `R_m ≅ F_{q^m}` and `t`
/// generates the multiplicative group.
#[derive(Clone, Debug)]
pub struct RingTable {
    base: FieldTable,
    m: u32,
    /// Coefficients of φ from degree 0 to degree m (monic: last entry 1).
    phi: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl RingTable {
    /// Builds the ring; `phi` lists coefficients from degree 0 up to `m`.
    pub fn new(base: FieldTable, phi: Vec<u32>) -> Result<Self> {
        let m = phi.len().checked_sub(1).filter(|&m| m >= 1).ok_or_else(|| Error::InvalidParameter("phi must have degree >= 1".into()))? as u32;
        let q = base.q();
        if *phi.last().unwrap() != 1 {
            return Err(Error::InvalidParameter("phi must be monic".into()));
        }
        if phi.iter().any(|&c| c >= q) {
            return Err(Error::InvalidParameter("phi coefficient outside F_q".into()));
        }
        if (base.eta() * m) > 24 {
            return Err(Error::InvalidParameter(format!("ring of size 2^{} too large for tables", base.eta() * m)));
        }
        let size = 1u32 << (base.eta() * m);
        let order = size - 1;
        let mut ring = Self { base, m, phi, exp: vec![0; 2 * order as usize], log: vec![u32::MAX; size as usize] };
        let t = ring.t_poly();
        let mut a = 1u32;
        for k in 0..order {
            if ring.log[a as usize] != u32::MAX {
                return Err(Error::NotPrimitive { orbit: k as u64, expected: order as u64 });
            }
            ring.exp[k as usize] = a;
            ring.log[a as usize] = k;
            a = ring.poly_mul(a, t);
        }
        if a != 1 {
            return Err(Error::NotPrimitive { orbit: order as u64 + 1, expected: order as u64 });
        }
        for k in order..2 * order {
            ring.exp[k as usize] = ring.exp[(k - order) as usize];
        }
        Ok(ring)
    }

    /// Uses the canonical primitive `φ`: for `m = 1`, `φ = t + ω`
    /// (so `t = ω`); otherwise the first primitive monic polynomial in
    /// increasing order of its packed coefficient vector.
    pub fn canonical(eta: u32, m: u32) -> Result<Self> {
        let base = FieldTable::new(eta)?;
        if m == 1 {
            let omega = base.omega();
            return Self::new(base, vec![omega, 1]);
        }
        let q = base.q();
        let total = (q as u64).pow(m);
        for packed in 0..total {
            let mut phi: Vec<u32> = (0..m).map(|i| ((packed / (q as u64).pow(i)) % q as u64) as u32).collect();
            if phi[0] == 0 {
                continue;
            }
            phi.push(1);
            if let Ok(r) = Self::new(base.clone(), phi) {
                return Ok(r);
            }
        }
        Err(Error::InvalidParameter(format!("no primitive polynomial of degree {m} found")))
    }

    /// Parses `φ` from hex coefficients listed from degree `m` down to 0,
    /// separated by commas or spaces (e.g. `"1,2"` is `t + ω` over F₈).
    pub fn parse_phi(text: &str) -> Result<Vec<u32>> {
        let mut coeffs: Vec<u32> = text
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| u32::from_str_radix(s.trim_start_matches("0x"), 16).map_err(|e| Error::Parse { line: 0, msg: format!("{s:?}: {e}") }))
            .collect::<Result<_>>()?;
        coeffs.reverse();
        Ok(coeffs)
    }

    pub fn base(&self) -> &FieldTable {
        &self.base
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn phi(&self) -> &[u32] {
        &self.phi
    }

    pub fn size(&self) -> u32 {
        1 << (self.base.eta() * self.m)
    }

    /// Coefficient of `t^i`.
    pub fn coeff(&self, a: u32, i: u32) -> u32 {
        (a >> (i * self.base.eta())) & (self.base.q() - 1)
    }

    pub fn coeffs(&self, a: u32) -> Vec<u32> {
        (0..self.m).map(|i| self.coeff(a, i)).collect()
    }

    pub fn from_coeffs(&self, c: &[u32]) -> u32 {
        c.iter().enumerate().fold(0, |acc, (i, &x)| acc | (x << (i as u32 * self.base.eta())))
    }

    /// The constant polynomial `α ∈ F_q`.
    pub fn embed(&self, alpha: u32) -> u32 {
        alpha
    }

    /// Whether `a` is a constant polynomial, i.e. lies in `F_q`.
    pub fn is_constant(&self, a: u32) -> bool {
        a < self.base.q()
    }

    /// The class of `t`.
    pub fn t(&self) -> u32 {
        self.t_poly()
    }

    fn t_poly(&self) -> u32 {
        if self.m == 1 {
            // t ≡ −φ₀ = φ₀ in characteristic 2
            self.phi[0]
        } else {
            1 << self.base.eta()
        }
    }

    fn poly_mul(&self, a: u32, b: u32) -> u32 {
        let m = self.m as usize;
        let f = &self.base;
        let ac = self.coeffs(a);
        let bc = self.coeffs(b);
        let mut prod = vec![0u32; 2 * m];
        for i in 0..m {
            for j in 0..m {
                prod[i + j] ^= f.mul(ac[i], bc[j]);
            }
        }
        for d in (m..2 * m).rev() {
            let c = prod[d];
            if c != 0 {
                prod[d] = 0;
                for k in 0..m {
                    prod[d - m + k] ^= f.mul(c, self.phi[k]);
                }
            }
        }
        self.from_coeffs(&prod[..m])
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        a ^ b
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
        }
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            None
        } else {
            let order = self.size() - 1;
            Some(self.exp[((order - self.log[a as usize]) % order) as usize])
        }
    }

    /// `t^k` for any integer `k`.
    pub fn t_pow(&self, k: i64) -> u32 {
        let order = (self.size() - 1) as i64;
        self.exp[k.rem_euclid(order) as usize]
    }

    /// Length of the multiplicative orbit of `t` (equals `q^m − 1` when φ is primitive).
    pub fn t_orbit_length(&self) -> u64 {
        let t = self.t();
        let mut a = t;
        let mut k = 1u64;
        while a != 1 {
            a = self.poly_mul(a, t);
            k += 1;
            if k > self.size() as u64 {
                break;
            }
        }
        k
    }

    /// Multiplication straight from polynomial arithmetic (table-free); used
    /// to cross-check the log tables.
    pub fn mul_direct(&self, a: u32, b: u32) -> u32 {
        self.poly_mul(a, b)
    }
}

/// Validates and builds `R_m`; a convenience wrapper over [`RingTable`].
pub fn build_ring(eta: u32, m: u32, phi: Option<Vec<u32>>) -> Result<RingTable> {
    match phi {
        None => RingTable::canonical(eta, m),
        Some(p) => {
            if p.len() as u32 != m + 1 {
                return Err(Error::InvalidParameter(format!("phi has degree {}, expected {m}", p.len().saturating_sub(1))));
            }
            RingTable::new(FieldTable::new(eta)?, p)
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `gcd(2^{ηm} − 1, D + 1) = 1`.
pub fn coprimality_check(eta: u32, m: u32, d: u32) -> bool {
    gcd((1u64 << (eta * m)) - 1, d as u64 + 1) == 1
}

/// The F₂-linear bijection `U : F_q → F₂^η` with `U(ω^j) = e_{j+1}`.
#[derive(Clone, Debug)]
pub struct VectorIso {
    eta: u32,
    /// `coords[x]` = packed coordinates of `x` in the basis `ω⁰ … ω^{η−1}`.
    coords: Vec<u32>,
}

impl VectorIso {
    pub fn new(field: &FieldTable) -> Self {
        let eta = field.eta();
        let basis: Vec<u32> = (0..eta).map(|j| field.omega_pow(j as i64)).collect();
        let mut coords = vec![0u32; field.q() as usize];
        for c in 0..field.q() {
            let x = (0..eta).filter(|&j| (c >> j) & 1 == 1).fold(0, |acc, j| acc ^ basis[j as usize]);
            coords[x as usize] = c;
        }
        Self { eta, coords }
    }

    /// Integer whose bit `j` is the `ω^j` coordinate; used as the index of
    /// the point `U(x)` of `F₂^η` in integer order.
    pub fn point_index(&self, x: u32) -> usize {
        self.coords[x as usize] as usize
    }

    pub fn eta(&self) -> u32 {
        self.eta
    }
}

/// `U(x)` as a length-`η` bit vector.
pub fn field_to_bits(x: u32, iso: &VectorIso) -> BitVector {
    BitVector::from_u64(iso.eta as usize, iso.point_index(x) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_fields_are_fields() {
        for eta in 1..=6 {
            let f = FieldTable::new(eta).unwrap();
            let q = f.q();
            for a in 0..q {
                for b in 0..q {
                    for c in 0..q.min(16) {
                        assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
                        assert_eq!(f.mul(a, b ^ c), f.mul(a, b) ^ f.mul(a, c));
                    }
                }
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
            }
        }
    }

    #[test]
    fn coprimality_examples() {
        assert!(coprimality_check(3, 1, 2));
        assert!(!coprimality_check(3, 2, 2));
        assert!(coprimality_check(1, 1, 2));
        assert!(!coprimality_check(2, 1, 2));
    }

    #[test]
    fn ring_sizes_and_orbits() {
        let r = RingTable::canonical(1, 1).unwrap();
        assert_eq!(r.size(), 2);
        assert_eq!(r.phi(), &[1, 1]);
        let r = RingTable::canonical(3, 1).unwrap();
        assert_eq!(r.t_orbit_length(), 7);
        let r = RingTable::canonical(3, 3).unwrap();
        assert_eq!(r.size(), 512);
        assert_eq!(r.t_orbit_length(), 511);
    }

    #[test]
    fn non_primitive_phi_rejected_with_orbit() {
        // over F₄, t + 1 has t = 1, orbit length 1
        let err = RingTable::new(FieldTable::new(2).unwrap(), vec![1, 1]).unwrap_err();
        match err {
            Error::NotPrimitive { orbit, expected } => {
                assert_eq!(orbit, 1);
                assert_eq!(expected, 3);
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn phi_parsing_high_to_low() {
        assert_eq!(RingTable::parse_phi("1,2").unwrap(), vec![2, 1]);
        assert_eq!(RingTable::parse_phi("1 0 3").unwrap(), vec![3, 0, 1]);
    }

    #[test]
    fn iso_basis_images() {
        let f = FieldTable::new(3).unwrap();
        let u = VectorIso::new(&f);
        assert!(field_to_bits(0, &u).is_zero());
        assert_eq!(field_to_bits(1, &u), BitVector::from_indices(3, [0]));
        let w = f.omega();
        let w2 = f.mul(w, w);
        assert_eq!(field_to_bits(w ^ w2, &u), BitVector::from_indices(3, [1, 2]));
    }
}

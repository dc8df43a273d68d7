//! Entropic and fidelity quantities. Logarithms are base 2 throughout.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::qchannel::{apply, environment_state, KrausChannel};
use crate::qstate::{DensityOperator, Ensemble};

/// Eigenvalues below this contribute nothing to an entropy sum.
pub const EIGENVALUE_CUTOFF: f64 = 1e-12;
/// Computed entropies in `[-ENTROPY_NEG_SLACK, 0)` are clamped to 0.
pub const ENTROPY_NEG_SLACK: f64 = 1e-9;

/// An information quantity in bits.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Bits(pub f64);

impl Bits {
    pub const ZERO: Bits = Bits(0.0);

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn abs(self) -> Bits {
        Bits(self.0.abs())
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} bits", self.0)
    }
}

impl Add for Bits {
    type Output = Bits;
    fn add(self, rhs: Bits) -> Bits {
        Bits(self.0 + rhs.0)
    }
}

impl Sub for Bits {
    type Output = Bits;
    fn sub(self, rhs: Bits) -> Bits {
        Bits(self.0 - rhs.0)
    }
}

impl Neg for Bits {
    type Output = Bits;
    fn neg(self) -> Bits {
        Bits(-self.0)
    }
}

impl Sum for Bits {
    fn sum<I: Iterator<Item = Bits>>(iter: I) -> Bits {
        Bits(iter.map(|b| b.0).sum())
    }
}

/// `-Σ p log2 p` over a spectrum, with `0 log 0 = 0`.
pub fn spectrum_entropy(eigenvalues: &[f64]) -> Bits {
    let s: f64 = eigenvalues
        .iter()
        .filter(|&&l| l > EIGENVALUE_CUTOFF)
        .map(|&l| -l * l.log2())
        .sum();
    debug_assert!(s >= -ENTROPY_NEG_SLACK, "entropy {s} is negative");
    Bits(s.max(0.0))
}

/// `S(ρ) = -tr(ρ log2 ρ)`.
pub fn von_neumann_entropy(rho: &DensityOperator) -> Bits {
    spectrum_entropy(&rho.eigenvalues())
}

/// `H(x) = -x log2 x - (1-x) log2(1-x)`, zero at both endpoints.
pub fn binary_entropy(x: f64) -> Result<Bits> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::OutOfRange(x));
    }
    let term = |p: f64| if p > 0.0 { -p * p.log2() } else { 0.0 };
    Ok(Bits(term(x) + term(1.0 - x)))
}

/// Entropy exchange `S(ρ, ε)`: the entropy of the environment output.
pub fn entropy_exchange(rho: &DensityOperator, channel: &KrausChannel) -> Result<Bits> {
    Ok(von_neumann_entropy(&environment_state(channel, rho)?))
}

/// Coherent information `I(ρ, ε) = S(ε(ρ)) − S(ρ, ε)`; may be negative.
pub fn coherent_information(rho: &DensityOperator, channel: &KrausChannel) -> Result<Bits> {
    channel.require_square()?;
    let s_b = von_neumann_entropy(&apply(channel, rho)?);
    Ok(s_b - entropy_exchange(rho, channel)?)
}

/// Entanglement fidelity `F(ρ, ε) = Σ_k |tr(ρ A_k)|²`.
pub fn entanglement_fidelity(rho: &DensityOperator, channel: &KrausChannel) -> Result<f64> {
    channel.require_square()?;
    if rho.dim() != channel.dim_in() {
        return Err(Error::DimMismatch {
            expected: channel.dim_in(),
            found: rho.dim(),
        });
    }
    Ok(channel
        .kraus()
        .iter()
        .map(|a| {
            let t: Complex64 = linalg::trace(&(rho.matrix() * a));
            t.norm_sqr()
        })
        .sum())
}

/// Holevo quantity `χ = S(Σ p_k ρ_k) − Σ p_k S(ρ_k)`.
pub fn holevo_chi(ensemble: &Ensemble) -> Bits {
    let mixed = von_neumann_entropy(&ensemble.average());
    let avg: f64 = ensemble
        .probs()
        .iter()
        .zip(ensemble.states())
        .map(|(p, s)| p * von_neumann_entropy(s).0)
        .sum();
    Bits(mixed.0 - avg)
}

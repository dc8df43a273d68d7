//! Lower bounds on the guaranteed privacy of a channel.
//!
//! Three bounds are provided:
//!
//! - the coherent-information bound `P >= S(ρ^B) − S(ρ^E)`;
//! - the fidelity bound obtained by replacing `S(ρ^E)` with its quantum Fano
//!   upper bound `H(F) + (1−F) log2(d²−1)`, which peaks at
//!   `F = (d²−1)/d²`;
//! - the multipartite bound over `N` output factors, whose derivation chains
//!   Araki-Lieb with subadditivity.
//!
//! None of these compute the privacy itself, which is a supremum over
//! strategies.

use serde::{Deserialize, Serialize};

use crate::entropy::{
    binary_entropy, coherent_information, entanglement_fidelity, entropy_exchange,
    von_neumann_entropy, Bits,
};
use crate::error::{Error, Result};
use crate::qchannel::{apply, tensor_all_channels, KrausChannel};
use crate::qstate::{tensor_all, DensityOperator, MultipartiteState};

/// Everything computed for one `(ρ, ε)` pair. Holds lower bounds on the
/// privacy, never the privacy itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrivacyBoundReport {
    pub d: usize,
    #[serde(rename = "S_B")]
    pub s_b: Bits,
    #[serde(rename = "S_E")]
    pub s_e: Bits,
    #[serde(rename = "F")]
    pub f: f64,
    pub coherent_bound: Bits,
    pub fano_bound: Bits,
    /// `H(F) + (1−F) log2(d²−1) − S_E`; nonnegative by the quantum Fano
    /// inequality.
    pub fano_inequality_slack: Bits,
}

/// Entropies of one output factor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FactorEntropies {
    #[serde(rename = "S_Bi")]
    pub s_b: Bits,
    #[serde(rename = "S_Ei")]
    pub s_e: Bits,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultipartiteBoundReport {
    #[serde(rename = "N")]
    pub n: usize,
    /// `S(ρ^B) − S(ρ^E)` on the joint states.
    pub lhs: Bits,
    /// `S(B_1) − Σ_{i≥2} S(B_i) − Σ_i S(E_i)`.
    pub rhs: Bits,
    pub per_factor: Vec<FactorEntropies>,
}

impl MultipartiteBoundReport {
    /// `lhs − rhs`, nonnegative whenever the chain holds.
    pub fn slack(&self) -> Bits {
        self.lhs - self.rhs
    }

    pub fn holds(&self, atol: f64) -> bool {
        self.slack().0 >= -atol
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdditivityReport {
    /// Coherent information of the product channel on the product input.
    pub lhs: Bits,
    /// Sum of per-factor coherent informations.
    pub rhs: Bits,
}

/// `S(ρ^B) − S(ρ^E)`, i.e. the coherent information.
pub fn coherent_privacy_bound(rho: &DensityOperator, channel: &KrausChannel) -> Result<Bits> {
    coherent_information(rho, channel)
}

fn check_fano_args(f: f64, d: usize) -> Result<()> {
    if !(0.0..=1.0).contains(&f) {
        return Err(Error::BadF(f));
    }
    if d < 2 {
        return Err(Error::BadDim(d));
    }
    Ok(())
}

/// `S_B − F log2 F − (1−F) log2(1−F) + (F−1) log2(d²−1)`.
///
/// `s_b` is a free nonnegative parameter and is not capped at `log2 d`.
pub fn fano_privacy_bound(s_b: Bits, f: f64, d: usize) -> Result<Bits> {
    check_fano_args(f, d)?;
    if !(s_b.0 >= 0.0) {
        return Err(Error::NegativeEntropy(s_b.0));
    }
    let d2m1 = (d * d - 1) as f64;
    Ok(s_b + binary_entropy(f)? + Bits((f - 1.0) * d2m1.log2()))
}

/// Location `(d²−1)/d²` of the maximum of [`fano_privacy_bound`] in `F`.
pub fn fano_max_location(d: usize) -> Result<f64> {
    if d < 2 {
        return Err(Error::BadDim(d));
    }
    let d2 = (d * d) as f64;
    Ok((d2 - 1.0) / d2)
}

/// Peak value `S_B + log2(d²/(d²−1))` of [`fano_privacy_bound`].
pub fn fano_max_value(s_b: Bits, d: usize) -> Result<Bits> {
    if d < 2 {
        return Err(Error::BadDim(d));
    }
    let d2 = (d * d) as f64;
    Ok(s_b + Bits((d2 / (d2 - 1.0)).log2()))
}

/// Computes every single-channel quantity for `(ρ, ε)`.
pub fn fano_bound_from_channel(
    rho: &DensityOperator,
    channel: &KrausChannel,
) -> Result<PrivacyBoundReport> {
    channel.require_square()?;
    let d = channel.dim_in();
    if d < 2 {
        return Err(Error::BadDim(d));
    }
    let s_b = von_neumann_entropy(&apply(channel, rho)?);
    let s_e = entropy_exchange(rho, channel)?;
    // F can exceed 1 by round-off only.
    let f = entanglement_fidelity(rho, channel)?.clamp(0.0, 1.0);
    let fano_upper = binary_entropy(f)? + Bits((1.0 - f) * ((d * d - 1) as f64).log2());
    Ok(PrivacyBoundReport {
        d,
        s_b,
        s_e,
        f,
        coherent_bound: s_b - s_e,
        fano_bound: fano_privacy_bound(s_b, f, d)?,
        fano_inequality_slack: fano_upper - s_e,
    })
}

/// Right-hand side of the multipartite bound,
/// `S(B_1) − S(E_1) + Σ_{i=2..N} [−S(ρ*^{B_i}) − S(E_i)]`.
///
/// `ref_b_star[j]` is the reference state for factor `j + 2` (1-based), so it
/// holds `N − 1` entries.
pub fn multipartite_bound_rhs(
    reduced_b: &[DensityOperator],
    reduced_e: &[DensityOperator],
    ref_b_star: &[DensityOperator],
) -> Result<Bits> {
    let n = reduced_b.len();
    if n == 0 || reduced_e.len() != n || ref_b_star.len() + 1 != n {
        return Err(Error::LengthMismatch(format!(
            "{} Bob factors, {} Eve factors, {} reference states (need N >= 1, N, N-1)",
            n,
            reduced_e.len(),
            ref_b_star.len()
        )));
    }
    let head = von_neumann_entropy(&reduced_b[0]) - von_neumann_entropy(&reduced_e[0]);
    let tail: Bits = ref_b_star
        .iter()
        .zip(&reduced_e[1..])
        .map(|(b_star, e)| -von_neumann_entropy(b_star) - von_neumann_entropy(e))
        .sum();
    Ok(head + tail)
}

/// Evaluates both sides of the per-instance chain
/// `S(B) − S(E) >= S(B_1) − Σ_{i≥2} S(B_i) − Σ_i S(E_i)`, with the reference
/// states taken to be the actual reduced states.
pub fn multipartite_chain_check(
    rho_b: &MultipartiteState,
    rho_e: &MultipartiteState,
) -> Result<MultipartiteBoundReport> {
    let n = rho_b.num_factors();
    if rho_e.num_factors() != n {
        return Err(Error::FactorMismatch(format!(
            "Bob has {} factors, Eve has {}",
            n,
            rho_e.num_factors()
        )));
    }
    let marg_b = (0..n)
        .map(|i| rho_b.marginal(i))
        .collect::<Result<Vec<_>>>()?;
    let marg_e = (0..n)
        .map(|i| rho_e.marginal(i))
        .collect::<Result<Vec<_>>>()?;
    let per_factor: Vec<FactorEntropies> = marg_b
        .iter()
        .zip(&marg_e)
        .map(|(b, e)| FactorEntropies {
            s_b: von_neumann_entropy(b),
            s_e: von_neumann_entropy(e),
        })
        .collect();
    let lhs = von_neumann_entropy(&rho_b.density()) - von_neumann_entropy(&rho_e.density());
    let rhs = multipartite_bound_rhs(&marg_b, &marg_e, &marg_b[1..])?;
    Ok(MultipartiteBoundReport {
        n,
        lhs,
        rhs,
        per_factor,
    })
}

/// Compares `I(⊗ρ_i, ⊗ε_i)` against `Σ_i I(ρ_i, ε_i)`.
pub fn additivity_check(
    states: &[DensityOperator],
    channels: &[KrausChannel],
) -> Result<AdditivityReport> {
    if states.is_empty() || states.len() != channels.len() {
        return Err(Error::LengthMismatch(format!(
            "{} states for {} channels",
            states.len(),
            channels.len()
        )));
    }
    let rhs = states
        .iter()
        .zip(channels)
        .map(|(s, c)| coherent_information(s, c))
        .sum::<Result<Bits>>()?;
    let joint_state = tensor_all(states).into_density();
    let joint_channel = tensor_all_channels(channels);
    let lhs = coherent_information(&joint_state, &joint_channel)?;
    Ok(AdditivityReport { lhs, rhs })
}

//! Named, seeded randomized inequality suites.
//!
//! Every trial produces a signed margin `slack = weak side − strong side`, so
//! `slack >= 0` means the inequality held. Equality-type checks report
//! `−|difference|`. A trial is a violation when `slack < −atol`.
//!
//! Trial `i` of a run with seed `s` draws all of its randomness from
//! `seed + i`, which makes reports independent of scheduling.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::entropy::{entanglement_fidelity, entropy_exchange, von_neumann_entropy};
use crate::error::{Error, Result};
use crate::linalg::max_abs_diff;
use crate::privacy::{additivity_check, fano_bound_from_channel, multipartite_chain_check};
use crate::qchannel::{
    apply, environment_state, random_channel, remix_kraus, stinespring_isometry,
};
use crate::qstate::{
    partial_trace, random_density, random_pure, DensityOperator, MultipartiteState,
};
use crate::rng::{self, SeededRng};

pub const DEFAULT_ATOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckName {
    /// `S(AB) >= |S(A) − S(B)|`
    ArakiLieb,
    /// `S(AB) <= S(A) + S(B)`
    Subadditivity,
    /// `S(ρ, ε) <= H(F) + (1−F) log2(d²−1)`
    QuantumFano,
    /// `S(B) − S(E) >= S(B_1) − Σ_{i≥2} S(B_i) − Σ_i S(E_i)` for N = 2, 3
    Theorem1Chain,
    /// `I(⊗ρ_i, ⊗ε_i) = Σ I(ρ_i, ε_i)` for N = 2, 3
    Additivity,
    /// fidelity and entropy exchange unchanged by a unitary Kraus remix
    KrausRemix,
    /// W matrix equals the environment marginal of the Stinespring dilation
    EnvIdentity,
    /// `F(|ψ><ψ|, ε) = <ψ|ε(|ψ><ψ|)|ψ>`
    FidelityPure,
}

impl CheckName {
    pub const ALL: [CheckName; 8] = [
        CheckName::ArakiLieb,
        CheckName::Subadditivity,
        CheckName::QuantumFano,
        CheckName::Theorem1Chain,
        CheckName::Additivity,
        CheckName::KrausRemix,
        CheckName::EnvIdentity,
        CheckName::FidelityPure,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            CheckName::ArakiLieb => "araki_lieb",
            CheckName::Subadditivity => "subadditivity",
            CheckName::QuantumFano => "quantum_fano",
            CheckName::Theorem1Chain => "theorem1_chain",
            CheckName::Additivity => "additivity",
            CheckName::KrausRemix => "kraus_remix",
            CheckName::EnvIdentity => "env_identity",
            CheckName::FidelityPure => "fidelity_pure",
        }
    }
}

impl fmt::Display for CheckName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CheckName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CheckName::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::UnknownCheck(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckSpec {
    pub name: CheckName,
    pub trials: usize,
    /// Dimension of each system (or of each factor, for multipartite checks).
    pub dim: usize,
    /// Number of Kraus operators of random channels.
    pub env_dim: usize,
    pub seed: u64,
    pub atol: f64,
}

impl CheckSpec {
    pub fn new(name: CheckName, trials: usize, dim: usize, env_dim: usize, seed: u64) -> Self {
        Self {
            name,
            trials,
            dim,
            env_dim,
            seed,
            atol: DEFAULT_ATOL,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::BadParam("trials must be at least 1".into()));
        }
        if !(self.atol > 0.0) {
            return Err(Error::BadParam(format!(
                "atol must be positive, got {}",
                self.atol
            )));
        }
        if self.dim < 2 {
            return Err(Error::BadDim(self.dim));
        }
        if self.env_dim == 0 {
            return Err(Error::BadParam("env_dim must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub spec: CheckSpec,
    pub violations: usize,
    /// Most negative slack observed (reported even with no violations).
    pub worst_margin: f64,
    /// Wall time; omitted from serialized output when cleared.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    /// The same report with the wall-clock field removed, for
    /// byte-reproducible output.
    pub fn without_timing(mut self) -> Self {
        self.elapsed_ms = None;
        self
    }
}

fn random_rank(rng: &mut SeededRng, dim: usize) -> usize {
    rng.random_range(1..=dim)
}

fn random_state(rng: &mut SeededRng, dim: usize) -> Result<DensityOperator> {
    let rank = random_rank(rng, dim);
    random_density(dim, rank, rng.random())
}

fn random_multipartite(
    rng: &mut SeededRng,
    dim: usize,
    factors: usize,
) -> Result<MultipartiteState> {
    let total = dim.pow(factors as u32);
    MultipartiteState::from_density(vec![dim; factors], random_state(rng, total)?)
}

/// Slack of a single trial.
fn trial_margin(spec: &CheckSpec, trial: usize) -> Result<f64> {
    let mut rng = rng::seeded(spec.seed.wrapping_add(trial as u64));
    let (d, k) = (spec.dim, spec.env_dim);
    let margin = match spec.name {
        CheckName::ArakiLieb | CheckName::Subadditivity => {
            let ab = random_multipartite(&mut rng, d, 2)?;
            let s_ab = von_neumann_entropy(&ab.density()).0;
            let s_a = von_neumann_entropy(&ab.marginal(0)?).0;
            let s_b = von_neumann_entropy(&ab.marginal(1)?).0;
            if spec.name == CheckName::ArakiLieb {
                s_ab - (s_a - s_b).abs()
            } else {
                s_a + s_b - s_ab
            }
        }
        CheckName::QuantumFano => {
            let rho = random_state(&mut rng, d)?;
            let ch = random_channel(d, k, rng.random())?;
            fano_bound_from_channel(&rho, &ch)?.fano_inequality_slack.0
        }
        CheckName::Theorem1Chain => {
            let factors = 2 + trial % 2;
            let b = random_multipartite(&mut rng, d, factors)?;
            let e = random_multipartite(&mut rng, d, factors)?;
            multipartite_chain_check(&b, &e)?.slack().0
        }
        CheckName::Additivity => {
            let factors = 2 + trial % 2;
            let mut states = Vec::with_capacity(factors);
            let mut channels = Vec::with_capacity(factors);
            for _ in 0..factors {
                states.push(random_state(&mut rng, d)?);
                channels.push(random_channel(d, k, rng.random())?);
            }
            let r = additivity_check(&states, &channels)?;
            -(r.lhs.0 - r.rhs.0).abs()
        }
        CheckName::KrausRemix => {
            let rho = random_state(&mut rng, d)?;
            let ch = random_channel(d, k, rng.random())?;
            let u = rng::haar_unitary(&mut rng, k);
            let remixed = remix_kraus(&ch, &u)?;
            let df = entanglement_fidelity(&rho, &ch)? - entanglement_fidelity(&rho, &remixed)?;
            let ds = entropy_exchange(&rho, &ch)?.0 - entropy_exchange(&rho, &remixed)?.0;
            -df.abs().max(ds.abs())
        }
        CheckName::EnvIdentity => {
            let rho = random_state(&mut rng, d)?;
            let ch = random_channel(d, k, rng.random())?;
            let w = environment_state(&ch, &rho)?;
            let joint = stinespring_isometry(&ch).dilate(&rho)?;
            let eve = partial_trace(&joint, &[1])?;
            -max_abs_diff(w.matrix(), eve.matrix())
        }
        CheckName::FidelityPure => {
            let psi = random_pure(d, rng.random());
            let ch = random_channel(d, k, rng.random())?;
            let rho = psi.density();
            let out = apply(&ch, &rho)?;
            let v = psi.amplitudes();
            let overlap = (v.adjoint() * out.matrix() * v)[(0, 0)].re;
            -(entanglement_fidelity(&rho, &ch)? - overlap).abs()
        }
    };
    Ok(margin)
}

/// Runs one suite. Trials execute in parallel; the report does not depend
/// on the thread count.
pub fn run_check(spec: &CheckSpec) -> Result<CheckReport> {
    spec.validate()?;
    let start = Instant::now();
    let margins = (0..spec.trials)
        .into_par_iter()
        .map(|t| trial_margin(spec, t))
        .collect::<Result<Vec<f64>>>()?;
    // NaN margins count as violations and as the worst possible margin.
    let margins: Vec<f64> = margins
        .into_iter()
        .map(|m| if m.is_nan() { f64::NEG_INFINITY } else { m })
        .collect();
    let violations = margins.iter().filter(|&&m| m < -spec.atol).count();
    let worst_margin = margins.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(CheckReport {
        spec: spec.clone(),
        violations,
        worst_margin,
        elapsed_ms: Some(start.elapsed().as_secs_f64() * 1e3),
    })
}

/// Dimensions exercised by [`run_all`].
pub const RUN_ALL_DIMS: [usize; 2] = [2, 3];
/// Kraus count used by [`run_all`].
pub const RUN_ALL_ENV_DIM: usize = 3;

/// Every check at every dimension in [`RUN_ALL_DIMS`], sharing one seed.
pub fn run_all(seed: u64, trials: usize) -> Result<Vec<CheckReport>> {
    RUN_ALL_DIMS
        .iter()
        .flat_map(|&dim| {
            CheckName::ALL
                .into_iter()
                .map(move |name| CheckSpec::new(name, trials, dim, RUN_ALL_ENV_DIM, seed))
        })
        .map(|spec| run_check(&spec))
        .collect()
}

/// Total violations across a set of reports.
pub fn total_violations(reports: &[CheckReport]) -> usize {
    reports.iter().map(|r| r.violations).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for name in CheckName::ALL {
            assert_eq!(name.as_str().parse::<CheckName>().unwrap(), name);
            let json = serde_json::to_string(&name).unwrap();
            assert_eq!(json, format!("\"{}\"", name.as_str()));
        }
        assert_eq!(
            "entropy_power".parse::<CheckName>(),
            Err(Error::UnknownCheck("entropy_power".into()))
        );
    }

    #[test]
    fn araki_lieb_suite() {
        let r = run_check(&CheckSpec::new(CheckName::ArakiLieb, 1000, 2, 1, 7)).unwrap();
        assert_eq!(r.violations, 0);
        assert!(r.worst_margin.is_finite());
    }

    #[test]
    fn quantum_fano_suite() {
        let r = run_check(&CheckSpec::new(CheckName::QuantumFano, 1000, 3, 4, 7)).unwrap();
        assert_eq!(r.violations, 0);
    }

    #[test]
    fn env_identity_suite() {
        let r = run_check(&CheckSpec::new(CheckName::EnvIdentity, 200, 2, 3, 1)).unwrap();
        assert_eq!(r.violations, 0);
        assert!(r.worst_margin > -1e-10);
    }

    #[test]
    fn every_check_runs_clean() {
        for name in CheckName::ALL {
            let r = run_check(&CheckSpec::new(name, 50, 2, 2, 3)).unwrap();
            assert!(r.passed(), "{name}: {r:?}");
        }
    }

    #[test]
    fn reports_are_reproducible() {
        let spec = CheckSpec::new(CheckName::Theorem1Chain, 40, 2, 2, 99);
        let a = run_check(&spec).unwrap().without_timing();
        let b = run_check(&spec).unwrap().without_timing();
        assert_eq!(a, b);
        assert_eq!(a.worst_margin.to_bits(), b.worst_margin.to_bits());
        let line = serde_json::to_string(&a).unwrap();
        assert!(!line.contains("elapsed_ms"));
    }

    #[test]
    fn trial_seeds_are_shifted_run_seeds() {
        // Trial i of seed s is trial 0 of seed s + i.
        let long = CheckSpec::new(CheckName::QuantumFano, 5, 2, 2, 10);
        let single = CheckSpec::new(CheckName::QuantumFano, 1, 2, 2, 13);
        assert_eq!(
            trial_margin(&long, 3).unwrap().to_bits(),
            trial_margin(&single, 0).unwrap().to_bits()
        );
    }

    #[test]
    fn invalid_specs_are_rejected() {
        let mut spec = CheckSpec::new(CheckName::ArakiLieb, 0, 2, 1, 0);
        assert!(run_check(&spec).is_err());
        spec.trials = 1;
        spec.atol = 0.0;
        assert!(run_check(&spec).is_err());
        spec.atol = 1e-9;
        spec.dim = 1;
        assert!(run_check(&spec).is_err());
    }

    #[test]
    fn run_all_smoke() {
        let reports = run_all(5, 1).unwrap();
        assert_eq!(reports.len(), CheckName::ALL.len() * RUN_ALL_DIMS.len());
        assert_eq!(total_violations(&reports), 0);
    }
}

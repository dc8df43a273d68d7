//! Finite-n checks of entropy semicontinuity along convergent sequences.
//!
//! A [`MixingSequence`] is `ρ_n = (1 − a_n) ρ + a_n σ` with `a_n → 0`, so it
//! converges to `ρ` in trace norm. Limits inferior and superior are replaced
//! by the minimum and maximum over a declared tail window
//! `[tail_start, n_max]`. Elements are computed on demand, never stored.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::entropy::{von_neumann_entropy, Bits};
use crate::error::{Error, Result};
use crate::qstate::{random_density, trace_distance, DensityOperator};

/// Most distinct indices visited when checking monotonicity of distances.
const MAX_DISTANCE_SAMPLES: usize = 2000;

/// Default tolerance in bits.
pub const DEFAULT_TOL: f64 = 0.05;

/// Mixing weight schedule `a_n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Schedule {
    /// `a_n = 1/n`
    Harmonic,
    /// `a_n = r^n`, `r ∈ (0, 1)`
    Geometric(f64),
}

impl Schedule {
    pub fn weight(&self, n: usize) -> f64 {
        match *self {
            Schedule::Harmonic => 1.0 / n as f64,
            Schedule::Geometric(r) => r.powi(n.min(i32::MAX as usize) as i32),
        }
    }
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Schedule::Harmonic => write!(f, "harmonic"),
            Schedule::Geometric(r) => write!(f, "geometric:{r}"),
        }
    }
}

impl FromStr for Schedule {
    type Err = String;

    /// Parses `harmonic` or `geometric:<r>`.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.split_once(':') {
            None if s == "harmonic" => Ok(Schedule::Harmonic),
            Some(("geometric", r)) => {
                let r: f64 = r.parse().map_err(|e| format!("bad ratio {r:?}: {e}"))?;
                if r > 0.0 && r < 1.0 {
                    Ok(Schedule::Geometric(r))
                } else {
                    Err(format!("geometric ratio {r} must lie in (0, 1)"))
                }
            }
            _ => Err(format!(
                "unknown schedule {s:?} (expected harmonic or geometric:<r>)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixingSequence {
    base: DensityOperator,
    perturbation: DensityOperator,
    schedule: Schedule,
    n_max: usize,
}

impl MixingSequence {
    pub fn base(&self) -> &DensityOperator {
        &self.base
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn schedule(&self) -> Schedule {
        self.schedule
    }

    /// `ρ_n` for `n ∈ 1..=n_max`.
    pub fn element(&self, n: usize) -> DensityOperator {
        assert!(
            (1..=self.n_max).contains(&n),
            "index {n} outside 1..={}",
            self.n_max
        );
        self.base
            .mix(&self.perturbation, self.schedule.weight(n))
            .expect("dims checked at construction")
    }

    /// `tr|ρ_n − ρ|`.
    pub fn distance(&self, n: usize) -> f64 {
        trace_distance(&self.element(n), &self.base).expect("dims checked at construction")
    }
}

/// Builds `ρ_n = (1 − a_n) base + a_n perturbation`, `n = 1..=n_max`.
pub fn make_mixing_sequence(
    base: DensityOperator,
    perturbation: DensityOperator,
    schedule: Schedule,
    n_max: usize,
) -> Result<MixingSequence> {
    if base.dim() != perturbation.dim() {
        return Err(Error::DimMismatch {
            expected: base.dim(),
            found: perturbation.dim(),
        });
    }
    if n_max < 2 {
        return Err(Error::BadWindow {
            tail_start: 1,
            n_max,
        });
    }
    if let Schedule::Geometric(r) = schedule {
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::BadParam(format!(
                "geometric ratio {r} must lie in (0, 1)"
            )));
        }
    }
    Ok(MixingSequence {
        base,
        perturbation,
        schedule,
        n_max,
    })
}

/// Indices at which distances are sampled: every index for short sequences,
/// otherwise a log-spaced subset that always includes `1` and `n_max`.
fn sample_indices(n_max: usize) -> Vec<usize> {
    if n_max <= MAX_DISTANCE_SAMPLES {
        return (1..=n_max).collect();
    }
    let ratio = (n_max as f64).ln() / (MAX_DISTANCE_SAMPLES - 1) as f64;
    let mut idx: Vec<usize> = (0..MAX_DISTANCE_SAMPLES)
        .map(|k| ((k as f64 * ratio).exp().round() as usize).clamp(1, n_max))
        .collect();
    idx.push(n_max);
    idx.dedup();
    idx
}

/// Condition (i) proxy: `tr|ρ_{n_max} − ρ| < tol` (or exactly zero) and the
/// sampled distances never increase.
pub fn check_condition_i(seq: &MixingSequence, tol: f64) -> bool {
    let final_distance = seq.distance(seq.n_max);
    if !(final_distance < tol || final_distance == 0.0) {
        return false;
    }
    let distances: Vec<f64> = sample_indices(seq.n_max)
        .par_iter()
        .map(|&n| seq.distance(n))
        .collect();
    distances.windows(2).all(|w| w[1] <= w[0] + 1e-12)
}

fn check_window(n_max: usize, tail_start: usize) -> Result<()> {
    if tail_start == 0 || tail_start >= n_max {
        return Err(Error::BadWindow { tail_start, n_max });
    }
    Ok(())
}

/// Semicontinuity proxy: `min_{n ∈ [tail_start, n_max]} S(ρ_n) ≥ S(ρ) − tol`.
pub fn semicontinuity_check(seq: &MixingSequence, tail_start: usize, tol: f64) -> Result<bool> {
    check_window(seq.n_max, tail_start)?;
    let tail_min = (tail_start..=seq.n_max)
        .into_par_iter()
        .map(|n| von_neumann_entropy(&seq.element(n)).0)
        .reduce(|| f64::INFINITY, f64::min);
    Ok(tail_min >= von_neumann_entropy(&seq.base).0 - tol)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma1Report {
    pub n_max: usize,
    pub tail_start: usize,
    /// `min_tail [S(ρ_n^B) − S(ρ_n^E)]`
    pub tail_min_diff: Bits,
    /// `S(ρ^B) − S(ρ^E)`
    pub limit_diff: Bits,
    /// `min_tail [−S(ρ_n^B) − S(ρ_n^E)]`
    pub tail_min_neg_sum: Bits,
    /// `−S(ρ*^B) − S(ρ^E)`
    pub limit_neg_sum: Bits,
    /// Larger of the two final trace distances `tr|ρ_{n_max} − ρ|`.
    pub condition_i_final: f64,
    /// Both tail inequalities hold within the tolerance.
    pub conditions_hold: bool,
}

#[derive(Debug, Clone, Copy)]
struct TailStats {
    min_diff: f64,
    min_neg_sum: f64,
    max_b: f64,
    max_e: f64,
}

impl TailStats {
    const EMPTY: TailStats = TailStats {
        min_diff: f64::INFINITY,
        min_neg_sum: f64::INFINITY,
        max_b: f64::NEG_INFINITY,
        max_e: f64::NEG_INFINITY,
    };

    fn merge(self, o: TailStats) -> TailStats {
        TailStats {
            min_diff: self.min_diff.min(o.min_diff),
            min_neg_sum: self.min_neg_sum.min(o.min_neg_sum),
            max_b: self.max_b.max(o.max_b),
            max_e: self.max_e.max(o.max_e),
        }
    }
}

/// Runs both conclusions of the semicontinuity lemma on a pair of sequences.
///
/// Preconditions are verified, not assumed: condition (i) through
/// [`check_condition_i`] on both sequences, condition (ii) as
/// `max_tail S(ρ_n^B) ≤ S(ρ*^B) + tol` and `max_tail S(ρ_n^E) ≤ S(ρ^E) + tol`.
/// A failed precondition is reported as [`Error::ConditionViolated`].
pub fn lemma1_experiment(
    seq_b: &MixingSequence,
    seq_e: &MixingSequence,
    rho_star_b: &DensityOperator,
    tail_start: usize,
    tol: f64,
) -> Result<Lemma1Report> {
    if seq_b.n_max != seq_e.n_max {
        return Err(Error::LengthMismatch(format!(
            "Bob's sequence has n_max {}, Eve's has {}",
            seq_b.n_max, seq_e.n_max
        )));
    }
    let n_max = seq_b.n_max;
    check_window(n_max, tail_start)?;
    for (who, seq) in [("Bob", seq_b), ("Eve", seq_e)] {
        if !check_condition_i(seq, tol) {
            return Err(Error::ConditionViolated(format!(
                "condition (i) fails for {who}'s sequence: tr|rho_n - rho| = {:e} at n = {n_max}",
                seq.distance(n_max)
            )));
        }
    }

    let stats = (tail_start..=n_max)
        .into_par_iter()
        .map(|n| {
            let s_b = von_neumann_entropy(&seq_b.element(n)).0;
            let s_e = von_neumann_entropy(&seq_e.element(n)).0;
            TailStats {
                min_diff: s_b - s_e,
                min_neg_sum: -s_b - s_e,
                max_b: s_b,
                max_e: s_e,
            }
        })
        .reduce(|| TailStats::EMPTY, TailStats::merge);

    let s_b_limit = von_neumann_entropy(seq_b.base()).0;
    let s_e_limit = von_neumann_entropy(seq_e.base()).0;
    let s_star = von_neumann_entropy(rho_star_b).0;
    if stats.max_b > s_star + tol {
        return Err(Error::ConditionViolated(format!(
            "condition (ii) fails for Bob: tail max entropy {} exceeds S(rho*) + tol = {}",
            stats.max_b,
            s_star + tol
        )));
    }
    if stats.max_e > s_e_limit + tol {
        return Err(Error::ConditionViolated(format!(
            "condition (ii) fails for Eve: tail max entropy {} exceeds S(rho^E) + tol = {}",
            stats.max_e,
            s_e_limit + tol
        )));
    }

    let limit_diff = s_b_limit - s_e_limit;
    let limit_neg_sum = -s_star - s_e_limit;
    let conditions_hold =
        stats.min_diff >= limit_diff - tol && stats.min_neg_sum >= limit_neg_sum - tol;
    Ok(Lemma1Report {
        n_max,
        tail_start,
        tail_min_diff: Bits(stats.min_diff),
        limit_diff: Bits(limit_diff),
        tail_min_neg_sum: Bits(stats.min_neg_sum),
        limit_neg_sum: Bits(limit_neg_sum),
        condition_i_final: seq_b.distance(n_max).max(seq_e.distance(n_max)),
        conditions_hold,
    })
}

/// Weight of `I/d` in the bases drawn by [`random_instance`].
pub const INTERIOR_MIX: f64 = 0.5;

/// A seeded pair of harmonic sequences with `ρ*^B` set to Bob's limit.
///
/// Both limits are Ginibre states mixed half-and-half with `I/d`, which keeps
/// their spectra inside `[1/(2d), 1/2 + 1/(2d)]`. From `tail_start = 100` on,
/// concavity then limits every entropy excursion from the limit to about
/// `0.016` bits. Perturbations are Ginibre states of seeded rank.
pub fn random_instance(
    dim: usize,
    n_max: usize,
    seed: u64,
) -> Result<(MixingSequence, MixingSequence, DensityOperator)> {
    let mut rng = crate::rng::seeded(seed);
    let mut next = || rand::Rng::random::<u64>(&mut rng);
    let interior = |s: u64| -> Result<DensityOperator> {
        random_density(dim, dim, s)?.mix(&DensityOperator::maximally_mixed(dim), INTERIOR_MIX)
    };
    let base_b = interior(next())?;
    let base_e = interior(next())?;
    let rank_b = 1 + (next() % dim as u64) as usize;
    let rank_e = 1 + (next() % dim as u64) as usize;
    let pert_b = random_density(dim, rank_b, next())?;
    let pert_e = random_density(dim, rank_e, next())?;
    let seq_b = make_mixing_sequence(base_b.clone(), pert_b, Schedule::Harmonic, n_max)?;
    let seq_e = make_mixing_sequence(base_e, pert_e, Schedule::Harmonic, n_max)?;
    Ok((seq_b, seq_e, base_b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{random_density, random_pure, validate_density};

    fn harmonic(base: DensityOperator, pert: DensityOperator, n_max: usize) -> MixingSequence {
        make_mixing_sequence(base, pert, Schedule::Harmonic, n_max).unwrap()
    }

    #[test]
    fn schedule_parsing() {
        assert_eq!("harmonic".parse::<Schedule>().unwrap(), Schedule::Harmonic);
        assert_eq!(
            "geometric:0.5".parse::<Schedule>().unwrap(),
            Schedule::Geometric(0.5)
        );
        assert!("geometric:1.5".parse::<Schedule>().is_err());
        assert!("geometric".parse::<Schedule>().is_err());
        assert!("linear".parse::<Schedule>().is_err());
        assert_eq!(Schedule::Geometric(0.25).to_string(), "geometric:0.25");
    }

    #[test]
    fn constant_sequence_has_zero_distance() {
        let rho = random_density(3, 3, 1).unwrap();
        let seq = harmonic(rho.clone(), rho.clone(), 50);
        for n in 1..=50 {
            assert_eq!(seq.element(n), rho);
            assert_eq!(seq.distance(n), 0.0);
        }
    }

    #[test]
    fn harmonic_distance_is_linear_in_weight() {
        let rho = random_density(2, 2, 3).unwrap();
        let sigma = random_density(2, 1, 4).unwrap();
        let full = trace_distance(&sigma, &rho).unwrap();
        let seq = harmonic(rho, sigma, 100);
        for n in [1, 2, 5, 10, 100] {
            assert!((seq.distance(n) - full / n as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn elements_are_deterministic_and_valid() {
        let seq = make_mixing_sequence(
            random_density(3, 2, 5).unwrap(),
            random_density(3, 3, 6).unwrap(),
            Schedule::Geometric(0.7),
            40,
        )
        .unwrap();
        for n in 1..=40 {
            assert_eq!(seq.element(n), seq.element(n));
            validate_density(seq.element(n).into_matrix()).unwrap();
        }
    }

    #[test]
    fn construction_errors() {
        let a = DensityOperator::maximally_mixed(2);
        let b = DensityOperator::maximally_mixed(3);
        assert!(matches!(
            make_mixing_sequence(a.clone(), b, Schedule::Harmonic, 10),
            Err(Error::DimMismatch { .. })
        ));
        assert!(make_mixing_sequence(a.clone(), a.clone(), Schedule::Harmonic, 1).is_err());
        assert!(make_mixing_sequence(a.clone(), a, Schedule::Geometric(1.0), 10).is_err());
    }

    #[test]
    fn condition_i_cases() {
        let rho = random_density(2, 2, 7).unwrap();
        let sigma = DensityOperator::basis(2, 0);
        // tr|σ − ρ| ≤ 2, so the final distance is at most 2/1000 < 0.01.
        let seq = harmonic(rho.clone(), sigma.clone(), 1000);
        assert!(trace_distance(&sigma, &rho).unwrap() <= 2.0);
        assert!(check_condition_i(&seq, 0.01));
        assert!(check_condition_i(
            &harmonic(rho.clone(), rho.clone(), 10),
            0.01
        ));
        assert!(!check_condition_i(&harmonic(rho, sigma, 2), 1e-9));
    }

    #[test]
    fn long_sequences_are_sampled() {
        let idx = sample_indices(1_000_000);
        assert!(idx.len() <= MAX_DISTANCE_SAMPLES + 1);
        assert_eq!(idx[0], 1);
        assert_eq!(*idx.last().unwrap(), 1_000_000);
        assert!(idx.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn semicontinuity_cases() {
        let rho = random_density(3, 3, 2).unwrap();
        assert!(semicontinuity_check(&harmonic(rho.clone(), rho.clone(), 20), 5, 0.0).unwrap());

        let pure = random_pure(2, 1).density();
        let seq = harmonic(pure, DensityOperator::maximally_mixed(2), 200);
        assert!(semicontinuity_check(&seq, 10, 0.0).unwrap());

        let seq = harmonic(
            DensityOperator::maximally_mixed(2),
            random_pure(2, 5).density(),
            1000,
        );
        assert!(semicontinuity_check(&seq, 100, 0.05).unwrap());

        assert!(matches!(
            semicontinuity_check(&seq, 1000, 0.05),
            Err(Error::BadWindow {
                tail_start: 1000,
                n_max: 1000
            })
        ));
    }

    #[test]
    fn lemma_on_constant_sequences_is_exact() {
        let b = random_density(2, 2, 11).unwrap();
        let e = random_density(3, 3, 12).unwrap();
        let sb = harmonic(b.clone(), b.clone(), 30);
        let se = harmonic(e.clone(), e.clone(), 30);
        let r = lemma1_experiment(&sb, &se, &b, 3, 0.0).unwrap();
        assert!(r.conditions_hold);
        assert_eq!(r.tail_min_diff, r.limit_diff);
        assert_eq!(r.tail_min_neg_sum, r.limit_neg_sum);
        assert_eq!(r.condition_i_final, 0.0);
    }

    #[test]
    fn lemma_on_random_interior_instances() {
        for seed in 0..10u64 {
            let (sb, se, star) = random_instance(2 + seed as usize % 2, 1000, seed).unwrap();
            let r = lemma1_experiment(&sb, &se, &star, 100, 0.05).unwrap();
            assert!(r.conditions_hold, "seed {seed}: {r:?}");
        }
    }

    #[test]
    fn near_boundary_limits_can_break_condition_ii_at_finite_n() {
        // Entropy has a log-divergent slope near the boundary, so for some raw
        // Ginibre limits n = 100 is not yet inside the 0.05-bit window.
        let violated = (0..20u64).any(|seed| {
            let b = random_density(2, 2, seed).unwrap();
            let sb = harmonic(b.clone(), random_density(2, 2, seed + 200).unwrap(), 1000);
            let se = harmonic(b.clone(), b.clone(), 1000);
            matches!(
                lemma1_experiment(&sb, &se, &b, 100, 0.05),
                Err(Error::ConditionViolated(_))
            )
        });
        assert!(violated);
    }

    #[test]
    fn undersized_reference_violates_condition_ii() {
        let b = DensityOperator::maximally_mixed(2);
        let sb = harmonic(b.clone(), random_pure(2, 3).density(), 200);
        let se = harmonic(b.clone(), b.clone(), 200);
        let star = random_pure(2, 4).density();
        match lemma1_experiment(&sb, &se, &star, 20, 0.05) {
            Err(Error::ConditionViolated(msg)) => assert!(msg.contains("(ii)")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn mismatched_lengths_are_rejected() {
        let b = DensityOperator::maximally_mixed(2);
        let sb = harmonic(b.clone(), b.clone(), 20);
        let se = harmonic(b.clone(), b.clone(), 30);
        assert!(matches!(
            lemma1_experiment(&sb, &se, &b, 5, 0.05),
            Err(Error::LengthMismatch(_))
        ));
    }

    #[test]
    fn report_round_trips_through_json() {
        let b = DensityOperator::maximally_mixed(2);
        let sb = harmonic(b.clone(), b.clone(), 20);
        let r = lemma1_experiment(&sb, &sb, &b, 5, 0.05).unwrap();
        let back: Lemma1Report = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back, r);
    }
}

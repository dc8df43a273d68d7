//! Finite-dimensional quantum states.
//!
//! [`DensityOperator`] is the validated single-system state, and
//! [`MultipartiteState`] carries a declared tensor factorization so that
//! reduced states can be taken. Tensor factors are ordered with the first
//! factor as the most significant index, matching [`kron`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, kron, CMatrix, CVector};
use crate::rng;

/// Hermiticity and trace tolerance used by [`validate_density`].
pub const DENSITY_ATOL: f64 = 1e-8;
/// Eigenvalues in `[-EIGENVALUE_FLOOR, 0)` are accepted and clamped to zero.
pub const EIGENVALUE_FLOOR: f64 = 1e-8;
/// Norm tolerance for [`PureState`].
pub const PURE_NORM_ATOL: f64 = 1e-10;
/// Eigenvalues below this are dropped when purifying.
const PURIFY_CUTOFF: f64 = 1e-12;
/// Probability-sum tolerance for [`Ensemble`].
pub const ENSEMBLE_ATOL: f64 = 1e-10;

/// A Hermitian, positive-semidefinite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: CMatrix,
}

impl DensityOperator {
    /// Wraps a matrix the caller has already established to be a state.
    pub(crate) fn from_matrix_unchecked(matrix: CMatrix) -> Self {
        debug_assert!(matrix.is_square());
        Self { matrix }
    }

    /// The maximally mixed state `I/d`.
    pub fn maximally_mixed(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be positive");
        Self::from_matrix_unchecked(CMatrix::identity(dim, dim).scale(1.0 / dim as f64))
    }

    /// The computational basis projector `|index><index|`.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index out of range");
        let mut m = CMatrix::zeros(dim, dim);
        m[(index, index)] = linalg::ONE;
        Self::from_matrix_unchecked(m)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    /// Eigenvalues in descending order, with round-off negatives clamped to 0.
    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigenvalues(&self.matrix)
            .into_iter()
            .map(|l| l.max(0.0))
            .collect()
    }

    /// `(1 - weight) * self + weight * other`, computed as
    /// `self + weight * (other - self)` so that equal endpoints reproduce
    /// `self` bit for bit.
    pub fn mix(&self, other: &DensityOperator, weight: f64) -> Result<DensityOperator> {
        check_dims(self.dim(), other.dim())?;
        let diff = &other.matrix - &self.matrix;
        Ok(Self::from_matrix_unchecked(
            &self.matrix + diff.scale(weight),
        ))
    }

    /// `U rho U^dagger`.
    pub fn conjugate(&self, u: &CMatrix) -> Result<DensityOperator> {
        check_dims(self.dim(), u.ncols())?;
        Ok(Self::from_matrix_unchecked(u * &self.matrix * u.adjoint()))
    }
}

/// A normalized state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: CVector,
}

impl PureState {
    pub fn new(amplitudes: CVector) -> Result<Self> {
        let defect = (amplitudes.norm_squared() - 1.0).abs();
        if amplitudes.is_empty() || defect > PURE_NORM_ATOL {
            return Err(Error::NotNormalized(defect));
        }
        Ok(Self { amplitudes })
    }

    /// Normalizes `amplitudes`; fails only on the zero vector.
    pub fn normalized(amplitudes: CVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm == 0.0 {
            return Err(Error::NotNormalized(1.0));
        }
        Ok(Self {
            amplitudes: amplitudes.unscale(norm),
        })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    /// `|psi><psi|`.
    pub fn density(&self) -> DensityOperator {
        DensityOperator::from_matrix_unchecked(linalg::outer(&self.amplitudes))
    }
}

/// A density operator over a declared tensor product of factors.
#[derive(Debug, Clone, PartialEq)]
pub struct MultipartiteState {
    dims: Vec<usize>,
    matrix: CMatrix,
}

impl MultipartiteState {
    /// Validates `matrix` as a density operator and checks the factorization.
    pub fn new(dims: Vec<usize>, matrix: CMatrix) -> Result<Self> {
        let state = validate_density(matrix)?;
        Self::from_density(dims, state)
    }

    pub fn from_density(dims: Vec<usize>, state: DensityOperator) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::FactorMismatch(format!(
                "invalid factor dims {dims:?}"
            )));
        }
        let total: usize = dims.iter().product();
        if total != state.dim() {
            return Err(Error::DimMismatch {
                expected: total,
                found: state.dim(),
            });
        }
        Ok(Self {
            dims,
            matrix: state.matrix,
        })
    }

    /// Single-factor view of a density operator.
    pub fn single(state: DensityOperator) -> Self {
        Self {
            dims: vec![state.dim()],
            matrix: state.matrix,
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_factors(&self) -> usize {
        self.dims.len()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// The joint state with the factorization forgotten.
    pub fn density(&self) -> DensityOperator {
        DensityOperator::from_matrix_unchecked(self.matrix.clone())
    }

    pub fn into_density(self) -> DensityOperator {
        DensityOperator::from_matrix_unchecked(self.matrix)
    }

    /// Reduced state on a single factor.
    pub fn marginal(&self, factor: usize) -> Result<DensityOperator> {
        partial_trace(self, &[factor]).map(MultipartiteState::into_density)
    }

    /// Appends the factors of `other` after the factors of `self`.
    pub fn tensor(&self, other: &MultipartiteState) -> MultipartiteState {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        MultipartiteState {
            dims,
            matrix: kron(&self.matrix, &other.matrix),
        }
    }
}

/// A probability-weighted collection of states of equal dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    probs: Vec<f64>,
    states: Vec<DensityOperator>,
}

impl Ensemble {
    pub fn new(probs: Vec<f64>, states: Vec<DensityOperator>) -> Result<Self> {
        if probs.is_empty() || probs.len() != states.len() {
            return Err(Error::BadEnsemble(format!(
                "{} probabilities for {} states",
                probs.len(),
                states.len()
            )));
        }
        if let Some(p) = probs.iter().find(|p| !(**p >= 0.0)) {
            return Err(Error::BadEnsemble(format!("negative probability {p}")));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > ENSEMBLE_ATOL {
            return Err(Error::BadEnsemble(format!("probabilities sum to {sum}")));
        }
        let dim = states[0].dim();
        if let Some(s) = states.iter().find(|s| s.dim() != dim) {
            return Err(Error::DimMismatch {
                expected: dim,
                found: s.dim(),
            });
        }
        Ok(Self { probs, states })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn states(&self) -> &[DensityOperator] {
        &self.states
    }

    /// `sum_k p_k rho_k`.
    pub fn average(&self) -> DensityOperator {
        let dim = self.states[0].dim();
        let avg = self
            .probs
            .iter()
            .zip(&self.states)
            .fold(CMatrix::zeros(dim, dim), |acc, (p, s)| {
                acc + s.matrix.scale(*p)
            });
        DensityOperator::from_matrix_unchecked(avg)
    }
}

fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimMismatch { expected, found });
    }
    Ok(())
}

/// Checks the density-operator invariants in order (square, Hermitian,
/// positive, unit trace) and reports the first one violated together with
/// the size of the violation.
pub fn validate_density(m: CMatrix) -> Result<DensityOperator> {
    if !m.is_square() || m.nrows() == 0 {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NotHermitian(f64::INFINITY));
    }
    let herm = linalg::hermiticity_defect(&m);
    if herm > DENSITY_ATOL {
        return Err(Error::NotHermitian(herm));
    }
    let min_eig = linalg::hermitian_eigenvalues(&m)
        .last()
        .copied()
        .unwrap_or(0.0);
    if min_eig < -EIGENVALUE_FLOOR {
        return Err(Error::NegativeEigenvalue(min_eig));
    }
    let tr_defect = (linalg::trace(&m) - linalg::ONE).norm();
    if tr_defect > DENSITY_ATOL {
        return Err(Error::TraceNotOne(tr_defect));
    }
    Ok(DensityOperator { matrix: m })
}

/// `a ⊗ b` with factor dims `[d_a, d_b]`.
pub fn tensor(a: &DensityOperator, b: &DensityOperator) -> MultipartiteState {
    MultipartiteState {
        dims: vec![a.dim(), b.dim()],
        matrix: kron(&a.matrix, &b.matrix),
    }
}

/// Tensor product of any nonempty list of states, one factor per state.
pub fn tensor_all(states: &[DensityOperator]) -> MultipartiteState {
    let (first, rest) = states
        .split_first()
        .expect("tensor_all needs at least one state");
    rest.iter()
        .fold(MultipartiteState::single(first.clone()), |acc, s| {
            acc.tensor(&MultipartiteState::single(s.clone()))
        })
}

/// Reduced state on the factors in `keep`, returned in the original factor
/// order. Duplicate indices are ignored.
pub fn partial_trace(s: &MultipartiteState, keep: &[usize]) -> Result<MultipartiteState> {
    let n = s.dims.len();
    if keep.is_empty() {
        return Err(Error::BadIndex {
            index: 0,
            factors: n,
        });
    }
    if let Some(&bad) = keep.iter().find(|&&k| k >= n) {
        return Err(Error::BadIndex {
            index: bad,
            factors: n,
        });
    }
    let mut kept = vec![false; n];
    for &k in keep {
        kept[k] = true;
    }
    let kept_dims: Vec<usize> = (0..n).filter(|&i| kept[i]).map(|i| s.dims[i]).collect();
    let kept_total: usize = kept_dims.iter().product();
    let total = s.matrix.nrows();

    // Split each joint index into (kept part, traced part).
    let split: Vec<(usize, usize)> = (0..total)
        .map(|mut idx| {
            let (mut k_idx, mut k_stride) = (0, 1);
            let (mut t_idx, mut t_stride) = (0, 1);
            for f in (0..n).rev() {
                let digit = idx % s.dims[f];
                idx /= s.dims[f];
                if kept[f] {
                    k_idx += digit * k_stride;
                    k_stride *= s.dims[f];
                } else {
                    t_idx += digit * t_stride;
                    t_stride *= s.dims[f];
                }
            }
            (k_idx, t_idx)
        })
        .collect();

    let mut out = CMatrix::zeros(kept_total, kept_total);
    for (i, &(ki, ti)) in split.iter().enumerate() {
        for (j, &(kj, tj)) in split.iter().enumerate() {
            if ti == tj {
                out[(ki, kj)] += s.matrix[(i, j)];
            }
        }
    }
    Ok(MultipartiteState {
        dims: kept_dims,
        matrix: out,
    })
}

/// `tr|a - b|`, the sum of singular values of the difference (no factor 1/2).
pub fn trace_distance(a: &DensityOperator, b: &DensityOperator) -> Result<f64> {
    check_dims(a.dim(), b.dim())?;
    let diff = &a.matrix - &b.matrix;
    Ok(linalg::hermitian_eigenvalues(&diff)
        .into_iter()
        .map(f64::abs)
        .sum())
}

/// Standard purification `sum_k sqrt(l_k) |e_k> ⊗ |k>` on `d x d`, with the
/// spectrum in descending order so a pure input maps to `|psi> ⊗ |0>`.
pub fn purify(rho: &DensityOperator) -> PureState {
    let d = rho.dim();
    let (values, vectors) = linalg::hermitian_eigen(&rho.matrix);
    let mut amps = CVector::zeros(d * d);
    for (k, &lambda) in values.iter().enumerate() {
        // Round-off eigenvalues would otherwise leak ~1e-8 amplitudes.
        if lambda < PURIFY_CUTOFF {
            continue;
        }
        let weight = lambda.sqrt();
        for i in 0..d {
            amps[i * d + k] = vectors[(i, k)] * weight;
        }
    }
    PureState::normalized(amps).expect("a unit-trace state has nonzero spectrum")
}

/// Ginibre state `G G^dagger / tr(G G^dagger)` with `G` of shape
/// `dim x rank`, seeded.
pub fn random_density(dim: usize, rank: usize, seed: u64) -> Result<DensityOperator> {
    if dim == 0 || rank == 0 || rank > dim {
        return Err(Error::BadRank { rank, dim });
    }
    let mut rng = rng::seeded(seed);
    let g = rng::ginibre(&mut rng, dim, rank);
    let gg = &g * g.adjoint();
    let tr = linalg::trace(&gg).re;
    Ok(DensityOperator::from_matrix_unchecked(
        linalg::hermitian_part(&gg.unscale(tr)),
    ))
}

/// Seeded random pure state: a normalized complex normal vector.
pub fn random_pure(dim: usize, seed: u64) -> PureState {
    assert!(dim >= 1, "dimension must be positive");
    let mut rng = rng::seeded(seed);
    let v = CVector::from_fn(dim, |_, _| rng::complex_normal(&mut rng));
    PureState::normalized(v).expect("complex normal vector is nonzero almost surely")
}

/// JSON state document: `{"dims":[...], "matrix":[[[re,im],...],...]}`,
/// rows outermost.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateDocument {
    pub dims: Vec<usize>,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

impl StateDocument {
    pub fn from_state(state: &MultipartiteState) -> Self {
        Self {
            dims: state.dims.clone(),
            matrix: matrix_to_rows(&state.matrix),
        }
    }

    pub fn from_density(state: &DensityOperator) -> Self {
        Self {
            dims: vec![state.dim()],
            matrix: matrix_to_rows(&state.matrix),
        }
    }

    /// Validates the document into a state with its declared factorization.
    pub fn to_state(&self) -> Result<MultipartiteState> {
        MultipartiteState::new(self.dims.clone(), rows_to_matrix(&self.matrix)?)
    }
}

pub(crate) fn matrix_to_rows(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|r| {
            (0..m.ncols())
                .map(|c| [m[(r, c)].re, m[(r, c)].im])
                .collect()
        })
        .collect()
}

pub(crate) fn rows_to_matrix(rows: &[Vec<[f64; 2]>]) -> Result<CMatrix> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if nrows == 0 || ncols == 0 {
        return Err(Error::NotSquare {
            rows: nrows,
            cols: ncols,
        });
    }
    if let Some(bad) = rows.iter().find(|r| r.len() != ncols) {
        return Err(Error::NotSquare {
            rows: nrows,
            cols: bad.len(),
        });
    }
    Ok(CMatrix::from_fn(nrows, ncols, |r, c| {
        let [re, im] = rows[r][c];
        num_complex::Complex64::new(re, im)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn bell() -> MultipartiteState {
        let s = 1.0 / 2f64.sqrt();
        let v = CVector::from_vec(vec![c(s), c(0.0), c(0.0), c(s)]);
        let psi = PureState::new(v).unwrap();
        MultipartiteState::from_density(vec![2, 2], psi.density()).unwrap()
    }

    #[test]
    fn maximally_mixed_qubit_is_valid() {
        let m = CMatrix::identity(2, 2).scale(0.5);
        let rho = validate_density(m).unwrap();
        let eigs = rho.eigenvalues();
        assert!((eigs[0] - 0.5).abs() < 1e-15 && (eigs[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn trace_defect_is_reported() {
        let m = CMatrix::from_diagonal(&CVector::from_vec(vec![c(1.0), c(0.01)]));
        match validate_density(m) {
            Err(Error::TraceNotOne(d)) => assert!((d - 0.01).abs() < 1e-12),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn asymmetric_matrix_is_not_hermitian() {
        let m = CMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(0.0), c(0.0)]);
        assert!(
            matches!(validate_density(m), Err(Error::NotHermitian(d)) if (d - 1.0).abs() < 1e-15)
        );
    }

    #[test]
    fn negative_eigenvalue_and_shape_errors() {
        let m = CMatrix::from_diagonal(&CVector::from_vec(vec![c(1.5), c(-0.5)]));
        assert!(
            matches!(validate_density(m), Err(Error::NegativeEigenvalue(l)) if (l + 0.5).abs() < 1e-12)
        );
        let rect = CMatrix::zeros(2, 3);
        assert!(matches!(
            validate_density(rect),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn tiny_negative_eigenvalues_are_accepted_and_clamped() {
        let m = CMatrix::from_diagonal(&CVector::from_vec(vec![c(1.0 + 5e-9), c(-5e-9)]));
        let rho = validate_density(m).unwrap();
        assert_eq!(rho.eigenvalues()[1], 0.0);
    }

    #[test]
    fn tensor_of_maximally_mixed_qubits() {
        let half = DensityOperator::maximally_mixed(2);
        let t = tensor(&half, &half);
        assert_eq!(t.dims(), &[2, 2]);
        let expected = CMatrix::identity(4, 4).scale(0.25);
        assert!(linalg::max_abs_diff(t.matrix(), &expected) < 1e-15);
    }

    #[test]
    fn tensor_with_pure_factor_embeds_block() {
        let rho = random_density(3, 3, 11).unwrap();
        let t = tensor(&rho, &DensityOperator::basis(2, 0));
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(t.matrix()[(2 * i, 2 * j)], rho.matrix()[(i, j)]);
                assert_eq!(t.matrix()[(2 * i + 1, 2 * j + 1)], c(0.0));
            }
        }
    }

    #[test]
    fn bell_marginal_is_maximally_mixed() {
        let b = bell();
        for k in 0..2 {
            let r = b.marginal(k).unwrap();
            assert!(
                linalg::max_abs_diff(r.matrix(), DensityOperator::maximally_mixed(2).matrix())
                    < 1e-15
            );
        }
    }

    #[test]
    fn partial_trace_rejects_bad_indices() {
        let b = bell();
        assert!(matches!(
            partial_trace(&b, &[2]),
            Err(Error::BadIndex {
                index: 2,
                factors: 2
            })
        ));
        assert!(matches!(
            partial_trace(&b, &[]),
            Err(Error::BadIndex { .. })
        ));
    }

    #[test]
    fn partial_trace_keeps_original_factor_order() {
        let a = random_density(2, 2, 1).unwrap();
        let b = random_density(3, 2, 2).unwrap();
        let c3 = random_density(2, 1, 3).unwrap();
        let s = tensor_all(&[a.clone(), b.clone(), c3.clone()]);
        let r = partial_trace(&s, &[2, 0]).unwrap();
        assert_eq!(r.dims(), &[2, 2]);
        assert!(linalg::max_abs_diff(r.matrix(), tensor(&a, &c3).matrix()) < 1e-14);
        let keep_all = partial_trace(&s, &[0, 1, 2]).unwrap();
        assert!(linalg::max_abs_diff(keep_all.matrix(), s.matrix()) < 1e-15);
    }

    #[test]
    fn trace_distance_anchors() {
        let rho = random_density(3, 2, 5).unwrap();
        assert!(trace_distance(&rho, &rho).unwrap().abs() < 1e-15);
        let d =
            trace_distance(&DensityOperator::basis(2, 0), &DensityOperator::basis(2, 1)).unwrap();
        assert!((d - 2.0).abs() < 1e-15);
        assert!(matches!(
            trace_distance(&rho, &DensityOperator::maximally_mixed(2)),
            Err(Error::DimMismatch {
                expected: 3,
                found: 2
            })
        ));
    }

    #[test]
    fn purify_pure_state_is_product_with_zero() {
        let psi = random_pure(3, 9);
        let p = purify(&psi.density());
        // |psi> ⊗ |0> up to a global phase
        let overlap: Complex64 = (0..3)
            .map(|i| psi.amplitudes()[i].conj() * p.amplitudes()[i * 3])
            .sum();
        assert!((overlap.norm() - 1.0).abs() < 1e-12);
        for i in 0..3 {
            for k in 1..3 {
                assert!(p.amplitudes()[i * 3 + k].norm() < 1e-12);
            }
        }
    }

    #[test]
    fn purify_maximally_mixed_gives_maximally_entangled_state() {
        let p = purify(&DensityOperator::maximally_mixed(2));
        let joint = MultipartiteState::from_density(vec![2, 2], p.density()).unwrap();
        let r = joint.marginal(0).unwrap();
        assert!(
            linalg::max_abs_diff(r.matrix(), DensityOperator::maximally_mixed(2).matrix()) < 1e-12
        );
    }

    #[test]
    fn purify_random_rank_three_round_trip() {
        let rho = random_density(3, 3, 21).unwrap();
        let p = purify(&rho);
        assert_eq!(p.dim(), 9);
        let joint = MultipartiteState::from_density(vec![3, 3], p.density()).unwrap();
        let r = joint.marginal(0).unwrap();
        assert!(linalg::max_abs_diff(r.matrix(), rho.matrix()) < 1e-10);
    }

    #[test]
    fn random_density_contracts() {
        assert!(matches!(
            random_density(2, 3, 0),
            Err(Error::BadRank { rank: 3, dim: 2 })
        ));
        assert!(matches!(
            random_density(2, 0, 0),
            Err(Error::BadRank { .. })
        ));
        let pure = random_density(2, 1, 4).unwrap();
        assert!(pure.eigenvalues()[1] < 1e-12);
        let full = random_density(3, 3, 4).unwrap();
        validate_density(full.matrix().clone()).unwrap();
        assert_eq!(
            random_density(3, 2, 77).unwrap(),
            random_density(3, 2, 77).unwrap()
        );
    }

    #[test]
    fn random_pure_contracts() {
        let a = random_pure(4, 1);
        let b = random_pure(4, 2);
        assert!((a.amplitudes().norm() - 1.0).abs() < 1e-12);
        assert_ne!(a, b);
        assert_eq!(a, random_pure(4, 1));
        validate_density(a.density().into_matrix()).unwrap();
    }

    #[test]
    fn ensemble_validation() {
        let s = vec![DensityOperator::basis(2, 0), DensityOperator::basis(2, 1)];
        assert!(Ensemble::new(vec![0.5, 0.5], s.clone()).is_ok());
        assert!(Ensemble::new(vec![0.6, 0.5], s.clone()).is_err());
        assert!(Ensemble::new(vec![1.5, -0.5], s.clone()).is_err());
        assert!(Ensemble::new(vec![1.0], s).is_err());
    }

    #[test]
    fn state_document_round_trip() {
        let rho = random_density(2, 2, 8).unwrap();
        let t = tensor(&rho, &DensityOperator::maximally_mixed(3));
        let doc = StateDocument::from_state(&t);
        let json = serde_json::to_string(&doc).unwrap();
        let back: StateDocument = serde_json::from_str(&json).unwrap();
        let state = back.to_state().unwrap();
        assert_eq!(state.dims(), &[2, 3]);
        assert_eq!(state.matrix(), t.matrix());
    }

    #[test]
    fn state_document_rejects_wrong_factorization() {
        let doc = StateDocument::from_density(&DensityOperator::maximally_mixed(4));
        let bad = StateDocument {
            dims: vec![3],
            ..doc
        };
        assert!(matches!(
            bad.to_state(),
            Err(Error::DimMismatch {
                expected: 3,
                found: 4
            })
        ));
    }
}

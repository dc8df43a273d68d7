//! Quantum channels in Kraus form.
//!
//! A channel `ε(ρ) = Σ_k A_k ρ A_k†` is stored only as its Kraus list. The
//! environment output is the `K x K` matrix `W_ij = tr(A_i ρ A_j†)`, and the
//! Stinespring isometry `V = Σ_k A_k ⊗ |k>` is kept as an independent route to
//! both marginals.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, kron, CMatrix, ONE, ZERO};
use crate::qstate::{matrix_to_rows, rows_to_matrix, DensityOperator, MultipartiteState};
use crate::rng;

/// Completeness tolerance for [`validate_channel`].
pub const COMPLETENESS_ATOL: f64 = 1e-8;
/// Unitarity tolerance for remixing matrices and unitary channels.
pub const UNITARY_ATOL: f64 = 1e-10;

/// A completely positive trace-preserving map, `dim_in -> dim_out`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    dim_in: usize,
    dim_out: usize,
    kraus: Vec<CMatrix>,
}

/// A Stinespring isometry `V: C^dim_in -> C^dim_out ⊗ C^K`, output factor
/// first.
#[derive(Debug, Clone, PartialEq)]
pub struct Isometry {
    matrix: CMatrix,
    dim_out: usize,
    env_dim: usize,
}

/// Built-in channel families for [`make_channel`].
#[derive(Debug, Clone, PartialEq)]
pub enum ChannelKind {
    Identity,
    /// `p ∈ [0, 1]`; `p = 1` maps every input to `I/d`. On a qubit the Kraus
    /// set is `{√(1−3p/4) I, √(p/4) X, √(p/4) Y, √(p/4) Z}`; on a qudit the
    /// Paulis are replaced by the `d² − 1` nontrivial Weyl operators.
    Depolarizing(f64),
    /// `p ∈ [0, 1]`; Kraus set `{√(1−p) I, √p |k><k|}`. Diagonals are fixed.
    Dephasing(f64),
    /// Qubit only, `γ ∈ [0, 1]`.
    AmplitudeDamping(f64),
    Unitary(CMatrix),
}

impl KrausChannel {
    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    /// Number of Kraus operators, which is also the environment dimension.
    pub fn num_kraus(&self) -> usize {
        self.kraus.len()
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim_in: dim,
            dim_out: dim,
            kraus: vec![CMatrix::identity(dim, dim)],
        }
    }

    /// Rejects channels whose output space differs from the input space.
    pub(crate) fn require_square(&self) -> Result<()> {
        if self.dim_in != self.dim_out {
            return Err(Error::DimMismatch {
                expected: self.dim_in,
                found: self.dim_out,
            });
        }
        Ok(())
    }

    fn require_input(&self, rho: &DensityOperator) -> Result<()> {
        if rho.dim() != self.dim_in {
            return Err(Error::DimMismatch {
                expected: self.dim_in,
                found: rho.dim(),
            });
        }
        Ok(())
    }
}

impl Isometry {
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn env_dim(&self) -> usize {
        self.env_dim
    }

    /// `V ρ V†` as a state on output ⊗ environment.
    pub fn dilate(&self, rho: &DensityOperator) -> Result<MultipartiteState> {
        if rho.dim() != self.matrix.ncols() {
            return Err(Error::DimMismatch {
                expected: self.matrix.ncols(),
                found: rho.dim(),
            });
        }
        let joint = &self.matrix * rho.matrix() * self.matrix.adjoint();
        MultipartiteState::from_density(
            vec![self.dim_out, self.env_dim],
            DensityOperator::from_matrix_unchecked(joint),
        )
    }
}

/// Validates a Kraus list: nonempty, uniform shapes, `Σ A_k† A_k = I`.
/// The reported defect is the operator norm of `Σ A_k† A_k − I`.
pub fn validate_channel(kraus: Vec<CMatrix>) -> Result<KrausChannel> {
    let first = kraus.first().ok_or(Error::EmptyKraus)?;
    let (dim_out, dim_in) = first.shape();
    if dim_in == 0 || dim_out == 0 {
        return Err(Error::BadParam("Kraus operators must be nonempty".into()));
    }
    for (index, a) in kraus.iter().enumerate() {
        if a.shape() != (dim_out, dim_in) {
            return Err(Error::ShapeMismatch {
                index,
                rows: a.nrows(),
                cols: a.ncols(),
                expected_rows: dim_out,
                expected_cols: dim_in,
            });
        }
    }
    let defect = completeness_defect(&kraus, dim_in);
    if !(defect <= COMPLETENESS_ATOL) {
        return Err(Error::NotTracePreserving(defect));
    }
    Ok(KrausChannel {
        dim_in,
        dim_out,
        kraus,
    })
}

fn completeness_defect(kraus: &[CMatrix], dim_in: usize) -> f64 {
    let sum = kraus.iter().fold(CMatrix::zeros(dim_in, dim_in), |acc, a| {
        acc + a.adjoint() * a
    });
    let diff = sum - CMatrix::identity(dim_in, dim_in);
    linalg::hermitian_eigenvalues(&diff)
        .into_iter()
        .map(f64::abs)
        .fold(0.0, f64::max)
}

/// `ε(ρ) = Σ_k A_k ρ A_k†`.
pub fn apply(channel: &KrausChannel, rho: &DensityOperator) -> Result<DensityOperator> {
    channel.require_input(rho)?;
    let d = channel.dim_out;
    let out = channel.kraus.iter().fold(CMatrix::zeros(d, d), |acc, a| {
        acc + a * rho.matrix() * a.adjoint()
    });
    Ok(DensityOperator::from_matrix_unchecked(out))
}

/// Environment output `W_ij = tr(A_i ρ A_j†)` as a `K x K` state.
pub fn environment_state(channel: &KrausChannel, rho: &DensityOperator) -> Result<DensityOperator> {
    channel.require_input(rho)?;
    let k = channel.kraus.len();
    let images: Vec<CMatrix> = channel.kraus.iter().map(|a| a * rho.matrix()).collect();
    let mut w = CMatrix::zeros(k, k);
    for i in 0..k {
        for j in i..k {
            // tr(A_i ρ A_j†) = Σ_{r,c} (A_i ρ)_{rc} conj(A_j)_{rc}
            let v: Complex64 = images[i]
                .iter()
                .zip(channel.kraus[j].iter())
                .map(|(x, y)| x * y.conj())
                .sum();
            w[(i, j)] = v;
            w[(j, i)] = v.conj();
        }
    }
    Ok(DensityOperator::from_matrix_unchecked(w))
}

/// `V = Σ_k A_k ⊗ |k>`: row `o·K + k` of `V` is row `o` of `A_k`.
pub fn stinespring_isometry(channel: &KrausChannel) -> Isometry {
    let k = channel.kraus.len();
    let v = CMatrix::from_fn(channel.dim_out * k, channel.dim_in, |row, col| {
        channel.kraus[row % k][(row / k, col)]
    });
    Isometry {
        matrix: v,
        dim_out: channel.dim_out,
        env_dim: k,
    }
}

/// `ε_a ⊗ ε_b` with Kraus set `{A_i ⊗ B_j}`, `i` major.
pub fn tensor_channels(a: &KrausChannel, b: &KrausChannel) -> KrausChannel {
    let kraus = a
        .kraus
        .iter()
        .flat_map(|ka| b.kraus.iter().map(move |kb| kron(ka, kb)))
        .collect();
    KrausChannel {
        dim_in: a.dim_in * b.dim_in,
        dim_out: a.dim_out * b.dim_out,
        kraus,
    }
}

/// Tensor product of a nonempty list of channels.
pub fn tensor_all_channels(channels: &[KrausChannel]) -> KrausChannel {
    let (first, rest) = channels
        .split_first()
        .expect("tensor_all_channels needs at least one channel");
    rest.iter()
        .fold(first.clone(), |acc, c| tensor_channels(&acc, c))
}

fn check_probability(name: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::BadParam(format!("{name} = {p} is outside [0, 1]")));
    }
    Ok(())
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn pauli_set() -> [CMatrix; 3] {
    [
        CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
        CMatrix::from_row_slice(2, 2, &[ZERO, c(0.0, -1.0), c(0.0, 1.0), ZERO]),
        CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, c(-1.0, 0.0)]),
    ]
}

/// The `d² − 1` nontrivial Weyl operators `X^a Z^b`.
fn weyl_set(d: usize) -> Vec<CMatrix> {
    let omega = 2.0 * std::f64::consts::PI / d as f64;
    let mut out = Vec::with_capacity(d * d - 1);
    for a in 0..d {
        for b in 0..d {
            if a == 0 && b == 0 {
                continue;
            }
            // (X^a Z^b)|j> = ω^{bj} |j + a>
            let mut m = CMatrix::zeros(d, d);
            for j in 0..d {
                m[((j + a) % d, j)] = Complex64::from_polar(1.0, omega * (b * j) as f64);
            }
            out.push(m);
        }
    }
    out
}

/// Builds one of the standard channel families on `dim`.
pub fn make_channel(kind: &ChannelKind, dim: usize) -> Result<KrausChannel> {
    if dim == 0 {
        return Err(Error::BadParam("dimension must be positive".into()));
    }
    let id = CMatrix::identity(dim, dim);
    let kraus = match kind {
        ChannelKind::Identity => vec![id],
        ChannelKind::Depolarizing(p) => {
            check_probability("p", *p)?;
            let d2 = (dim * dim) as f64;
            let others = if dim == 2 {
                pauli_set().to_vec()
            } else {
                weyl_set(dim)
            };
            let mut kraus = vec![id.scale((1.0 - p * (d2 - 1.0) / d2).sqrt())];
            kraus.extend(others.into_iter().map(|m| m.scale((p / d2).sqrt())));
            kraus
        }
        ChannelKind::Dephasing(p) => {
            check_probability("p", *p)?;
            let mut kraus = vec![id.scale((1.0 - p).sqrt())];
            kraus.extend((0..dim).map(|k| {
                let mut proj = CMatrix::zeros(dim, dim);
                proj[(k, k)] = c(p.sqrt(), 0.0);
                proj
            }));
            kraus
        }
        ChannelKind::AmplitudeDamping(gamma) => {
            if dim != 2 {
                return Err(Error::BadParam(format!(
                    "amplitude damping is defined on qubits, got dim {dim}"
                )));
            }
            check_probability("gamma", *gamma)?;
            vec![
                CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, c((1.0 - gamma).sqrt(), 0.0)]),
                CMatrix::from_row_slice(2, 2, &[ZERO, c(gamma.sqrt(), 0.0), ZERO, ZERO]),
            ]
        }
        ChannelKind::Unitary(u) => {
            if u.shape() != (dim, dim) {
                return Err(Error::BadParam(format!(
                    "unitary has shape {:?}, expected {dim}x{dim}",
                    u.shape()
                )));
            }
            let defect = linalg::unitarity_defect(u);
            if defect > UNITARY_ATOL {
                return Err(Error::BadParam(format!(
                    "matrix is not unitary (defect {defect:e})"
                )));
            }
            vec![u.clone()]
        }
    };
    validate_channel(kraus)
}

/// Seeded Haar-style channel: a `(dim·env_dim) x dim` isometry from the QR
/// decomposition of a Ginibre matrix, cut into `env_dim` consecutive
/// `dim x dim` row blocks.
pub fn random_channel(dim: usize, env_dim: usize, seed: u64) -> Result<KrausChannel> {
    if dim == 0 || env_dim == 0 {
        return Err(Error::BadParam(format!(
            "random channel needs dim >= 1 and env_dim >= 1, got {dim}, {env_dim}"
        )));
    }
    let mut rng = rng::seeded(seed);
    let v = rng::haar_isometry(&mut rng, dim * env_dim, dim);
    let kraus = (0..env_dim)
        .map(|k| v.rows(k * dim, dim).into_owned())
        .collect();
    Ok(KrausChannel {
        dim_in: dim,
        dim_out: dim,
        kraus,
    })
}

/// Re-expresses the channel through `A'_j = Σ_k u_jk A_k` for a `K x K`
/// unitary `u`. The map itself is unchanged.
pub fn remix_kraus(channel: &KrausChannel, u: &CMatrix) -> Result<KrausChannel> {
    let k = channel.kraus.len();
    if u.shape() != (k, k) {
        return Err(Error::NotUnitary(f64::INFINITY));
    }
    let defect = linalg::unitarity_defect(u);
    if defect > UNITARY_ATOL {
        return Err(Error::NotUnitary(defect));
    }
    let (rows, cols) = (channel.dim_out, channel.dim_in);
    let kraus = (0..k)
        .map(|j| {
            (0..k).fold(CMatrix::zeros(rows, cols), |acc, m| {
                acc + channel.kraus[m].map(|z| z * u[(j, m)])
            })
        })
        .collect();
    Ok(KrausChannel {
        dim_in: cols,
        dim_out: rows,
        kraus,
    })
}

/// JSON channel document: `{"dim_in":d, "dim_out":d, "kraus":[matrix, ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelDocument {
    pub dim_in: usize,
    pub dim_out: usize,
    pub kraus: Vec<Vec<Vec<[f64; 2]>>>,
}

impl ChannelDocument {
    pub fn from_channel(channel: &KrausChannel) -> Self {
        Self {
            dim_in: channel.dim_in,
            dim_out: channel.dim_out,
            kraus: channel.kraus.iter().map(matrix_to_rows).collect(),
        }
    }

    pub fn to_channel(&self) -> Result<KrausChannel> {
        let kraus = self
            .kraus
            .iter()
            .map(|m| rows_to_matrix(m))
            .collect::<Result<Vec<_>>>()?;
        let channel = validate_channel(kraus)?;
        if channel.dim_in != self.dim_in || channel.dim_out != self.dim_out {
            return Err(Error::ShapeMismatch {
                index: 0,
                rows: channel.dim_out,
                cols: channel.dim_in,
                expected_rows: self.dim_out,
                expected_cols: self.dim_in,
            });
        }
        Ok(channel)
    }
}

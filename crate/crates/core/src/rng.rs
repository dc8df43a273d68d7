//! Seeded randomness.
//!
//! Every random construction in the crate draws from a ChaCha20 stream keyed
//! by `ChaCha20Rng::seed_from_u64(seed)`. There is no global generator.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::linalg::CMatrix;

/// The generator behind every seeded constructor.
pub type SeededRng = ChaCha20Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Complex number with independent standard normal real and imaginary parts.
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// Ginibre matrix: i.i.d. complex normal entries, filled row by row.
pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    let entries: Vec<Complex64> = (0..rows * cols).map(|_| complex_normal(rng)).collect();
    CMatrix::from_row_slice(rows, cols, &entries)
}

/// Haar-distributed isometry of shape `rows x cols` (`rows >= cols`) from the
/// QR decomposition of a Ginibre matrix, with the phases of `R`'s diagonal
/// absorbed into `Q`.
pub fn haar_isometry<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    assert!(rows >= cols, "isometry needs rows >= cols");
    let qr = ginibre(rng, rows, cols).qr();
    let r = qr.r();
    let mut q = qr.q();
    for c in 0..cols {
        let d = r[(c, c)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for row in 0..rows {
            q[(row, c)] *= phase;
        }
    }
    q
}

/// Haar-random unitary of size `n`.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    haar_isometry(rng, n, n)
}

// Copyright 2026 The hsmetro Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Dense complex unitaries on a handful of optical modes.
//!
//! Every [`UnitaryMatrix`] is checked on construction: entries are finite
//! and `max |U†U - I| <= UNITARITY_TOL`. Products are re-checked, so a value
//! of this type can always be treated as a passive linear network.

use crate::rng::standard_normal;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};

/// Tolerance on `max |U†U - I|` accepted for a unitary.
pub const UNITARITY_TOL: f64 = 1e-10;

/// Largest supported number of modes.
pub const MAX_MODES: usize = 64;

/// Tolerance on the norm of a vector handed to [`complete_unitary`].
pub const UNIT_NORM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    m: DMatrix<Complex64>,
}

/// `max |a†a - I|` for an arbitrary square complex matrix.
pub fn unitarity_defect(a: &DMatrix<Complex64>) -> f64 {
    let n = a.nrows();
    let g = a.adjoint() * a;
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
            worst = worst.max((g[(i, j)] - target).norm());
        }
    }
    worst
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 || dim > MAX_MODES {
        return Err(Error::InvalidArgument(format!(
            "number of modes must be in 1..={MAX_MODES}, got {dim}"
        )));
    }
    Ok(())
}

impl UnitaryMatrix {
    /// Wraps a matrix after checking shape, finiteness and unitarity.
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::Dimension {
                expected: m.nrows(),
                found: m.ncols(),
            });
        }
        check_dim(m.nrows())?;
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument(
                "matrix has non-finite entries".into(),
            ));
        }
        let defect = unitarity_defect(&m);
        if defect > UNITARITY_TOL {
            return Err(Error::NotUnitary { defect });
        }
        Ok(UnitaryMatrix { m })
    }

    /// Builds from `dim*dim` entries in row-major order.
    pub fn from_row_major(dim: usize, entries: &[Complex64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::Dimension {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        Self::new(DMatrix::from_row_slice(dim, dim, entries))
    }

    pub fn identity(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(UnitaryMatrix {
            m: DMatrix::identity(dim, dim),
        })
    }

    /// Phase shift `e^{i angle}` on one mode (0-based), identity elsewhere.
    pub fn phase_shifter(dim: usize, mode: usize, angle: f64) -> Result<Self> {
        check_dim(dim)?;
        if mode >= dim {
            return Err(Error::InvalidArgument(format!(
                "mode {mode} outside 0..{dim}"
            )));
        }
        if !angle.is_finite() {
            return Err(Error::Domain(format!(
                "phase shift angle {angle} is not finite"
            )));
        }
        let mut m = DMatrix::identity(dim, dim);
        m[(mode, mode)] = Complex64::from_polar(1.0, angle);
        Ok(UnitaryMatrix { m })
    }

    /// Beam splitter `exp(i eta sigma_y)` acting on modes `(a, b)` (0-based):
    /// the real rotation `[[cos, sin], [-sin, cos]]`, reflectivity `sin eta`.
    pub fn beam_splitter(dim: usize, a: usize, b: usize, eta: f64) -> Result<Self> {
        check_dim(dim)?;
        if a >= dim || b >= dim {
            return Err(Error::InvalidArgument(format!(
                "modes ({a}, {b}) outside 0..{dim}"
            )));
        }
        if a == b {
            return Err(Error::InvalidArgument(
                "beam splitter needs two distinct modes".into(),
            ));
        }
        if !eta.is_finite() {
            return Err(Error::Domain(format!(
                "beam splitter angle {eta} is not finite"
            )));
        }
        let (s, c) = eta.sin_cos();
        let mut m = DMatrix::identity(dim, dim);
        m[(a, a)] = Complex64::new(c, 0.0);
        m[(a, b)] = Complex64::new(s, 0.0);
        m[(b, a)] = Complex64::new(-s, 0.0);
        m[(b, b)] = Complex64::new(c, 0.0);
        Ok(UnitaryMatrix { m })
    }

    /// Balanced discrete Fourier transform, which spreads mode 1 evenly over
    /// every mode.
    pub fn dft(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        let norm = 1.0 / (dim as f64).sqrt();
        let m = DMatrix::from_fn(dim, dim, |j, k| {
            let angle = 2.0 * std::f64::consts::PI * (j * k) as f64 / dim as f64;
            Complex64::from_polar(norm, angle)
        });
        Self::new(m)
    }

    /// Haar-random unitary (QR of a complex Ginibre matrix with the phases of
    /// `R`'s diagonal divided out).
    pub fn random<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<Self> {
        check_dim(dim)?;
        let z = DMatrix::from_fn(dim, dim, |_, _| {
            Complex64::new(standard_normal(rng), standard_normal(rng))
        });
        let qr = z.qr();
        let mut q = qr.q();
        let r = qr.r();
        for k in 0..dim {
            let d = r[(k, k)];
            let phase = if d.norm() > 0.0 {
                d / d.norm()
            } else {
                Complex64::new(1.0, 0.0)
            };
            for i in 0..dim {
                q[(i, k)] *= phase;
            }
        }
        Self::new(q)
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    /// Entry at 0-based `(row, col)`.
    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.m[(row, col)]
    }

    /// Row-major copy of all entries.
    pub fn to_row_major(&self) -> Vec<Complex64> {
        let n = self.dim();
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                out.push(self.m[(i, j)]);
            }
        }
        out
    }

    pub fn column(&self, col: usize) -> Vec<Complex64> {
        self.m.column(col).iter().copied().collect()
    }

    /// `self * other`.
    pub fn multiply(&self, other: &UnitaryMatrix) -> Result<UnitaryMatrix> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Self::new(&self.m * &other.m)
    }

    pub fn adjoint(&self) -> UnitaryMatrix {
        UnitaryMatrix {
            m: self.m.adjoint(),
        }
    }

    /// `self * v`.
    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                found: v.len(),
            });
        }
        let n = self.dim();
        Ok((0..n)
            .map(|i| (0..n).map(|j| self.m[(i, j)] * v[j]).sum())
            .collect())
    }

    pub fn unitarity_defect(&self) -> f64 {
        unitarity_defect(&self.m)
    }
}

/// Product of a sequence of same-sized unitaries, leftmost first:
/// `compose([a, b, c]) = a * b * c`.
pub fn compose(factors: &[&UnitaryMatrix]) -> Result<UnitaryMatrix> {
    let (first, rest) = factors
        .split_first()
        .ok_or_else(|| Error::InvalidArgument("empty product".into()))?;
    rest.iter()
        .try_fold((*first).clone(), |acc, f| acc.multiply(f))
}

/// Unitary `W` whose first column is exactly `first_column`.
///
/// Writing `v = e^{i arg v_1} v'` with `v'_1 = |v_1|`, the Householder
/// reflection `H = I - 2 w w† / (w† w)`, `w = e_1 - v'`, maps `e_1` to `v'`;
/// `W = e^{i arg v_1} H`. When `v' = e_1` the reflection degenerates to the
/// identity.
pub fn complete_unitary(first_column: &[Complex64]) -> Result<UnitaryMatrix> {
    let dim = first_column.len();
    check_dim(dim)?;
    if first_column
        .iter()
        .any(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        return Err(Error::InvalidArgument(
            "target vector has non-finite entries".into(),
        ));
    }
    let norm = first_column
        .iter()
        .map(|z| z.norm_sqr())
        .sum::<f64>()
        .sqrt();
    if (norm - 1.0).abs() > UNIT_NORM_TOL {
        return Err(Error::InvalidArgument(format!(
            "target vector must have unit norm, got {norm}"
        )));
    }

    let lead = first_column[0];
    let lead_abs = lead.norm();
    let phase = if lead_abs > 0.0 {
        lead / lead_abs
    } else {
        Complex64::new(1.0, 0.0)
    };

    // w = e_1 - v' with 1 - |v_1| written as (sum_{j>1} |v_j|^2) / (1 + |v_1|)
    let tail_sq: f64 = first_column[1..].iter().map(|z| z.norm_sqr()).sum();
    let mut w: Vec<Complex64> = first_column.iter().map(|z| -(z / phase)).collect();
    w[0] = Complex64::new(tail_sq / (1.0 + lead_abs), 0.0);
    let w_sq: f64 = w.iter().map(|z| z.norm_sqr()).sum();

    let mut m = DMatrix::<Complex64>::identity(dim, dim);
    if w_sq > 0.0 {
        let scale = 2.0 / w_sq;
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] -= w[i] * w[j].conj() * scale;
            }
        }
    }
    m *= phase;
    for (i, z) in first_column.iter().enumerate() {
        m[(i, 0)] = *z;
    }
    UnitaryMatrix::new(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn max_diff(a: &UnitaryMatrix, b: &UnitaryMatrix) -> f64 {
        (a.as_matrix() - b.as_matrix())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    fn random_unit_vector(dim: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
        let v: Vec<Complex64> = (0..dim)
            .map(|_| c(standard_normal(rng), standard_normal(rng)))
            .collect();
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v.into_iter().map(|z| z / n).collect()
    }

    #[test]
    fn identity_products() {
        let i = UnitaryMatrix::identity(4).unwrap();
        assert_eq!(i.multiply(&i).unwrap(), i);
        assert_eq!(i.adjoint(), i);
        assert_eq!(i.unitarity_defect(), 0.0);
    }

    #[test]
    fn random_times_adjoint_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for dim in 1..=6 {
            let u = UnitaryMatrix::random(dim, &mut rng).unwrap();
            let p = u.multiply(&u.adjoint()).unwrap();
            assert!(max_diff(&p, &UnitaryMatrix::identity(dim).unwrap()) < 1e-10);
            assert_eq!(u.adjoint().adjoint(), u);
        }
    }

    #[test]
    fn balanced_splitters_square_to_i_sigma_y() {
        let b = UnitaryMatrix::beam_splitter(2, 0, 1, std::f64::consts::FRAC_PI_4).unwrap();
        let bb = b.multiply(&b).unwrap();
        // cos(pi/2) I + i sin(pi/2) sigma_y
        let expected = UnitaryMatrix::from_row_major(
            2,
            &[c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)],
        )
        .unwrap();
        assert!(max_diff(&bb, &expected) < 1e-12);
    }

    #[test]
    fn adjoint_of_diagonal_phases() {
        let (l, lp) = (0.4, -1.3);
        let d = UnitaryMatrix::phase_shifter(2, 0, l)
            .unwrap()
            .multiply(&UnitaryMatrix::phase_shifter(2, 1, lp).unwrap())
            .unwrap();
        let a = d.adjoint();
        assert!((a.entry(0, 0) - Complex64::from_polar(1.0, -l)).norm() < 1e-15);
        assert!((a.entry(1, 1) - Complex64::from_polar(1.0, -lp)).norm() < 1e-15);
        assert_eq!(a.entry(0, 1), c(0.0, 0.0));
    }

    #[test]
    fn defect_values() {
        let b = UnitaryMatrix::beam_splitter(2, 0, 1, 0.7).unwrap();
        assert!(b.unitarity_defect() <= 1e-14);
        let mut raw = b.as_matrix().clone();
        raw[(0, 1)] += c(1e-3, 0.0);
        assert!(unitarity_defect(&raw) >= 1e-4);
        assert!(matches!(
            UnitaryMatrix::new(raw),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn multiply_dimension_mismatch() {
        let a = UnitaryMatrix::identity(2).unwrap();
        let b = UnitaryMatrix::identity(3).unwrap();
        assert_eq!(
            a.multiply(&b),
            Err(Error::Dimension {
                expected: 2,
                found: 3
            })
        );
    }

    #[test]
    fn element_constructors_reject_bad_modes() {
        assert!(UnitaryMatrix::beam_splitter(2, 0, 0, 0.1).is_err());
        assert!(UnitaryMatrix::beam_splitter(2, 0, 2, 0.1).is_err());
        assert!(UnitaryMatrix::phase_shifter(2, 2, 0.1).is_err());
        assert!(UnitaryMatrix::identity(0).is_err());
        assert!(UnitaryMatrix::identity(MAX_MODES + 1).is_err());
    }

    #[test]
    fn completion_of_e1_is_identity() {
        let e1 = vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        let w = complete_unitary(&e1).unwrap();
        assert_eq!(w, UnitaryMatrix::identity(3).unwrap());
    }

    #[test]
    fn completion_of_second_basis_vector() {
        let target = vec![c(0.0, 0.0), c(1.0, 0.0)];
        let w = complete_unitary(&target).unwrap();
        assert_eq!(w.column(0), target);
        let back = w.adjoint().apply(&target).unwrap();
        assert!((back[0] - c(1.0, 0.0)).norm() < 1e-15);
        assert!(back[1].norm() < 1e-15);
    }

    #[test]
    fn completion_of_random_vectors() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let v = random_unit_vector(6, &mut rng);
            let w = complete_unitary(&v).unwrap();
            let col = w.column(0);
            let err = col
                .iter()
                .zip(&v)
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(err <= 1e-12);
            assert!(w.unitarity_defect() <= 1e-10);
            // refocusing: <e1| W† |v> has unit modulus
            let back = w.adjoint().apply(&v).unwrap();
            assert!((back[0].norm_sqr() - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn completion_near_e1_is_stable() {
        let eps = 1e-9;
        let lead = (1.0f64 - eps * eps).sqrt();
        let v = vec![Complex64::from_polar(lead, 0.3), c(eps, 0.0)];
        let w = complete_unitary(&v).unwrap();
        assert!(w.unitarity_defect() < 1e-14);
    }

    #[test]
    fn completion_rejects_non_unit_vector() {
        let v = vec![c(1.0, 0.0), c(0.1, 0.0)];
        assert!(matches!(
            complete_unitary(&v),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn dft_is_unitary_and_spreads_mode_one() {
        let f = UnitaryMatrix::dft(5).unwrap();
        for z in f.column(0) {
            assert!((z.norm_sqr() - 0.2).abs() < 1e-15);
        }
    }
}

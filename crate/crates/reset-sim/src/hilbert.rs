//! Dense complex operator algebra on the truncated transmon ⊗ resonator
//! Hilbert space.
//!
//! Basis ordering is fixed as transmon-major throughout the crate:
//! `index = transmon_level * n_resonator + resonator_level`. Every embedding,
//! population extraction and Hamiltonian assembly relies on this single
//! convention.

use ndarray::Array2;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Truncated Hilbert-space dimensions.
///
/// The protocol needs at least the third transmon level `|f⟩` and one
/// resonator photon, hence the invariants `n_transmon >= 3`,
/// `n_resonator >= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertSpec {
    pub n_transmon: usize,
    pub n_resonator: usize,
}

impl Default for HilbertSpec {
    fn default() -> Self {
        Self {
            n_transmon: 4,
            n_resonator: 3,
        }
    }
}

impl HilbertSpec {
    pub fn new(n_transmon: usize, n_resonator: usize) -> Result<Self> {
        if n_transmon < 3 {
            return Err(Error::InvalidDimension {
                dim: n_transmon,
                reason: "n_transmon must be >= 3",
            });
        }
        if n_resonator < 2 {
            return Err(Error::InvalidDimension {
                dim: n_resonator,
                reason: "n_resonator must be >= 2",
            });
        }
        Ok(Self {
            n_transmon,
            n_resonator,
        })
    }

    /// Total dimension of the tensor-product space.
    pub fn dim(&self) -> usize {
        self.n_transmon * self.n_resonator
    }

    /// Basis index of `|q, r⟩` in transmon-major ordering.
    pub fn index(&self, transmon_level: usize, resonator_level: usize) -> usize {
        debug_assert!(transmon_level < self.n_transmon);
        debug_assert!(resonator_level < self.n_resonator);
        transmon_level * self.n_resonator + resonator_level
    }
}

/// Which subsystem an operator acts on when embedded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    Transmon,
    Resonator,
}

/// Dense square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    pub mat: Array2<C64>,
}

impl Operator {
    pub fn new(mat: Array2<C64>) -> Self {
        assert_eq!(mat.nrows(), mat.ncols(), "operators are square");
        Self { mat }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::new(Array2::zeros((dim, dim)))
    }

    pub fn identity(dim: usize) -> Self {
        Self::new(Array2::eye(dim))
    }

    /// `|i⟩⟨j|` in a `dim`-dimensional space.
    pub fn ket_bra(dim: usize, i: usize, j: usize) -> Self {
        let mut m = Array2::zeros((dim, dim));
        m[(i, j)] = C64::new(1.0, 0.0);
        Self::new(m)
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn dagger(&self) -> Self {
        Self::new(self.mat.t().mapv(|z| z.conj()))
    }

    pub fn dot(&self, other: &Operator) -> Self {
        Self::new(self.mat.dot(&other.mat))
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::new(self.mat.mapv(|z| z * s))
    }

    pub fn add(&self, other: &Operator) -> Self {
        Self::new(&self.mat + &other.mat)
    }

    /// Largest absolute deviation from Hermiticity, `max |A - A†|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in i..n {
                let d = (self.mat[(i, j)] - self.mat[(j, i)].conj()).norm();
                if d > worst {
                    worst = d;
                }
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        let mut worst = 0.0_f64;
        for (a, b) in self.mat.iter().zip(other.mat.iter()) {
            let d = (a - b).norm();
            if d > worst {
                worst = d;
            }
        }
        worst
    }
}

/// Lowering operator: `a[i][i+1] = sqrt(i+1)`.
pub fn annihilation(dim: usize) -> Result<Operator> {
    if dim < 2 {
        return Err(Error::InvalidDimension {
            dim,
            reason: "ladder operator needs at least two levels",
        });
    }
    let mut m = Array2::zeros((dim, dim));
    for i in 0..dim - 1 {
        m[(i, i + 1)] = C64::new(((i + 1) as f64).sqrt(), 0.0);
    }
    Ok(Operator::new(m))
}

/// Kronecker product, `(A ⊗ B)[(i·dB+k),(j·dB+l)] = A[i][j]·B[k][l]`.
pub fn kron(a: &Operator, b: &Operator) -> Operator {
    let (da, db) = (a.dim(), b.dim());
    let mut m = Array2::zeros((da * db, da * db));
    for i in 0..da {
        for j in 0..da {
            let aij = a.mat[(i, j)];
            if aij == C64::new(0.0, 0.0) {
                continue;
            }
            for k in 0..db {
                for l in 0..db {
                    m[(i * db + k, j * db + l)] = aij * b.mat[(k, l)];
                }
            }
        }
    }
    Operator::new(m)
}

/// Embed a single-subsystem operator into the full space.
pub fn embed(op: &Operator, which: Subsystem, spec: &HilbertSpec) -> Result<Operator> {
    let expected = match which {
        Subsystem::Transmon => spec.n_transmon,
        Subsystem::Resonator => spec.n_resonator,
    };
    if op.dim() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            got: op.dim(),
            context: "embed: operator does not match subsystem dimension",
        });
    }
    Ok(match which {
        Subsystem::Transmon => kron(op, &Operator::identity(spec.n_resonator)),
        Subsystem::Resonator => kron(&Operator::identity(spec.n_transmon), op),
    })
}

/// Density matrix on the full space. Same storage as [`Operator`]; the
/// physical invariants (Hermitian, unit trace, positive) are checked by
/// [`DensityMatrix::validate`] rather than on every arithmetic step.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    pub mat: Array2<C64>,
}

impl DensityMatrix {
    pub fn new(mat: Array2<C64>) -> Self {
        assert_eq!(mat.nrows(), mat.ncols(), "density matrices are square");
        Self { mat }
    }

    /// Pure basis state `|q, r⟩⟨q, r|`.
    pub fn basis_state(spec: &HilbertSpec, transmon_level: usize, resonator_level: usize) -> Self {
        let mut m = Array2::zeros((spec.dim(), spec.dim()));
        let k = spec.index(transmon_level, resonator_level);
        m[(k, k)] = C64::new(1.0, 0.0);
        Self::new(m)
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn trace(&self) -> C64 {
        self.mat.diag().iter().sum()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        Operator::new(self.mat.clone()).hermiticity_defect()
    }

    /// Smallest eigenvalue (Hermitian part), for positivity checks.
    pub fn min_eigenvalue(&self) -> f64 {
        hermitian_eigenvalues(&self.mat)
            .into_iter()
            .fold(f64::INFINITY, f64::min)
    }

    /// Check the density-matrix invariants: Hermitian to 1e-10, unit trace
    /// to 1e-8, eigenvalues above -1e-8.
    pub fn validate(&self) -> Result<()> {
        let herm = self.hermiticity_defect();
        if herm > 1e-10 {
            return Err(Error::InvalidParameter {
                name: "density.hermiticity",
                constraint: "max |rho - rho^dagger| <= 1e-10",
                value: herm,
            });
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > 1e-8 || tr.im.abs() > 1e-8 {
            return Err(Error::InvalidParameter {
                name: "density.trace",
                constraint: "|Tr rho - 1| <= 1e-8",
                value: (tr - C64::new(1.0, 0.0)).norm(),
            });
        }
        let min_ev = self.min_eigenvalue();
        if min_ev < -1e-8 {
            return Err(Error::InvalidParameter {
                name: "density.positivity",
                constraint: "min eigenvalue >= -1e-8",
                value: min_ev,
            });
        }
        Ok(())
    }
}

/// Marginal populations: diagonal of the partial trace over the other
/// subsystem. Returns `(transmon_marginals, resonator_marginals)`.
pub fn populations(rho: &DensityMatrix, spec: &HilbertSpec) -> (Vec<f64>, Vec<f64>) {
    let mut transmon = vec![0.0; spec.n_transmon];
    let mut resonator = vec![0.0; spec.n_resonator];
    for q in 0..spec.n_transmon {
        for r in 0..spec.n_resonator {
            let p = rho.mat[(spec.index(q, r), spec.index(q, r))].re;
            transmon[q] += p;
            resonator[r] += p;
        }
    }
    (transmon, resonator)
}

/// Thermal state: transmon levels populated with Boltzmann ratios
/// `p(k) ∝ (p_e/p_g)^k`, resonator in vacuum.
pub fn thermal_state(spec: &HilbertSpec, p_e: f64) -> Result<DensityMatrix> {
    if !(0.0..0.5).contains(&p_e) {
        return Err(Error::InvalidParameter {
            name: "p_thermal_e",
            constraint: "0 <= p_e < 0.5",
            value: p_e,
        });
    }
    let ratio = p_e / (1.0 - p_e);
    let weights: Vec<f64> = (0..spec.n_transmon)
        .map(|k| ratio.powi(k as i32))
        .collect();
    let norm: f64 = weights.iter().sum();
    let mut m = Array2::zeros((spec.dim(), spec.dim()));
    for (q, w) in weights.iter().enumerate() {
        let k = spec.index(q, 0);
        m[(k, k)] = C64::new(w / norm, 0.0);
    }
    Ok(DensityMatrix::new(m))
}

/// Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// For the crate's matrix sizes (dimension ≤ ~20) this converges in a few
/// sweeps and avoids a LAPACK dependency. The input is assumed Hermitian;
/// only the lower triangle is referenced through the symmetrized update.
pub fn hermitian_eigenvalues(mat: &Array2<C64>) -> Vec<f64> {
    let n = mat.nrows();
    let mut a = mat.clone();
    // off-diagonal Frobenius norm squared
    let off = |a: &Array2<C64>| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[(i, j)].norm_sqr();
                }
            }
        }
        s
    };
    let scale: f64 = mat.iter().map(|z| z.norm_sqr()).sum::<f64>().max(1e-300);
    let tol = 1e-28 * scale;
    for _sweep in 0..60 {
        if off(&a) <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq.norm_sqr() <= tol / (n * n) as f64 {
                    continue;
                }
                // Unitary 2x2 rotation zeroing a[p][q]: diagonalize the
                // Hermitian block [[app, apq], [apq*, aqq]].
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let phase = apq / C64::new(apq.norm(), 0.0);
                let theta = 0.5 * (2.0 * apq.norm()).atan2(app - aqq);
                let (c, s) = (theta.cos(), theta.sin());
                // columns
                for i in 0..n {
                    let aip = a[(i, p)];
                    let aiq = a[(i, q)];
                    a[(i, p)] = aip * c + aiq * phase.conj() * s;
                    a[(i, q)] = -aip * phase * s + aiq * c;
                }
                // rows
                for j in 0..n {
                    let apj = a[(p, j)];
                    let aqj = a[(q, j)];
                    a[(p, j)] = apj * c + aqj * phase * s;
                    a[(q, j)] = -apj * phase.conj() * s + aqj * c;
                }
            }
        }
    }
    (0..n).map(|i| a[(i, i)].re).collect()
}

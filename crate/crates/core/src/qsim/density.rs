use nalgebra::DMatrix;

use super::state::{permute_index, qubit_bit};
use super::{check_qubits, PureState, C64, MAX_DENSITY_QUBITS};
use crate::error::{Error, Result};
use crate::permgroup::Permutation;

/// Tolerance for Hermiticity, trace and positivity checks.
pub const DENSITY_TOL: f64 = 1e-9;

/// A density matrix on `n ≤ 6` qubits, qubit 0 most significant.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    n: usize,
    m: DMatrix<C64>,
}

/// Maps each index of a `bits.len()`-qubit sub-register onto the full register.
fn scatter(n: usize, bits: &[usize]) -> Vec<usize> {
    let k = bits.len();
    (0..1usize << k)
        .map(|a| {
            bits.iter()
                .enumerate()
                .filter(|(pos, _)| a & (1 << (k - 1 - pos)) != 0)
                .fold(0, |acc, (_, &q)| acc | qubit_bit(n, q))
        })
        .collect()
}

fn split_keep(n: usize, keep: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
    let mut kept = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if kept.len() != keep.len() {
        return Err(Error::InvalidInstance("duplicate qubit in keep set".into()));
    }
    if let Some(&q) = kept.iter().find(|&&q| q >= n) {
        return Err(Error::BadIndex { index: q, len: n });
    }
    if kept.is_empty() {
        return Err(Error::InvalidInstance("keep set must be nonempty".into()));
    }
    let traced = (0..n).filter(|q| !kept.contains(q)).collect();
    Ok((kept, traced))
}

impl DensityMatrix {
    pub fn from_pure(psi: &PureState) -> Result<Self> {
        check_qubits(psi.n_qubits(), MAX_DENSITY_QUBITS)?;
        let v = nalgebra::DVector::from_column_slice(psi.amplitudes());
        Ok(Self { n: psi.n_qubits(), m: &v * v.adjoint() })
    }

    /// Reduced state of the `keep` qubits of a pure state, computed from the
    /// amplitude vector without forming the full density matrix.
    pub fn reduced_from_pure(psi: &PureState, keep: &[usize]) -> Result<Self> {
        let n = psi.n_qubits();
        let (kept, traced) = split_keep(n, keep)?;
        check_qubits(kept.len(), MAX_DENSITY_QUBITS)?;
        let ka = scatter(n, &kept);
        let tb = scatter(n, &traced);
        let amps = psi.amplitudes();
        let d = ka.len();
        let mut m = DMatrix::<C64>::zeros(d, d);
        for (a, &fa) in ka.iter().enumerate() {
            for (b, &fb) in ka.iter().enumerate().skip(a) {
                let v: C64 = tb.iter().map(|&t| amps[fa | t] * amps[fb | t].conj()).sum();
                m[(a, b)] = v;
                m[(b, a)] = v.conj();
            }
        }
        Ok(Self { n: kept.len(), m })
    }

    /// Validates Hermiticity, unit trace and positivity within tolerance.
    pub fn from_matrix(m: DMatrix<C64>) -> Result<Self> {
        let d = m.nrows();
        if d != m.ncols() || d < 2 || !d.is_power_of_two() {
            return Err(Error::Parse(format!("{}x{} is not a qubit density matrix", d, m.ncols())));
        }
        let n = d.trailing_zeros() as usize;
        check_qubits(n, MAX_DENSITY_QUBITS)?;
        let rho = Self { n, m };
        rho.validate(DENSITY_TOL)?;
        Ok(rho)
    }

    pub fn maximally_mixed(n: usize) -> Result<Self> {
        check_qubits(n, MAX_DENSITY_QUBITS)?;
        let d = 1usize << n;
        Ok(Self { n, m: DMatrix::identity(d, d) * C64::new(1.0 / d as f64, 0.0) })
    }

    pub fn validate(&self, tol: f64) -> Result<()> {
        let herm = (&self.m - self.m.adjoint()).camax();
        if herm > tol {
            return Err(Error::Parse(format!("matrix is not Hermitian (deviation {herm})")));
        }
        let tr = self.trace();
        if (tr - 1.0).abs() > tol {
            return Err(Error::Parse(format!("trace is {tr}, expected 1")));
        }
        let min = self.eigenvalues().iter().copied().fold(f64::INFINITY, f64::min);
        if min < -tol {
            return Err(Error::Parse(format!("negative eigenvalue {min}")));
        }
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.m
    }

    pub fn trace(&self) -> f64 {
        self.m.trace().re
    }

    pub fn purity(&self) -> f64 {
        (&self.m * &self.m).trace().re
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.m)
    }

    /// `self ⊗ other`.
    pub fn tensor(&self, other: &DensityMatrix) -> Result<Self> {
        check_qubits(self.n + other.n, MAX_DENSITY_QUBITS)?;
        Ok(Self { n: self.n + other.n, m: self.m.kronecker(&other.m) })
    }

    pub fn tensor_all(factors: &[DensityMatrix]) -> Result<Self> {
        let (first, rest) = factors
            .split_first()
            .ok_or_else(|| Error::InvalidInstance("empty tensor product".into()))?;
        rest.iter().try_fold(first.clone(), |acc, f| acc.tensor(f))
    }

    /// Traces out every qubit not in `keep`; kept qubits retain their relative
    /// order.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        let (kept, traced) = split_keep(self.n, keep)?;
        let ka = scatter(self.n, &kept);
        let tb = scatter(self.n, &traced);
        let d = ka.len();
        let mut m = DMatrix::<C64>::zeros(d, d);
        for (a, &fa) in ka.iter().enumerate() {
            for (b, &fb) in ka.iter().enumerate() {
                m[(a, b)] = tb.iter().map(|&t| self.m[(fa | t, fb | t)]).sum();
            }
        }
        Ok(Self { n: kept.len(), m })
    }

    /// Reduced state of qubit `q`.
    pub fn marginal(&self, q: usize) -> Result<Self> {
        self.partial_trace(&[q])
    }

    /// `ρ_1 ⊗ .. ⊗ ρ_n` built from the single-qubit marginals.
    pub fn product_of_marginals(&self) -> Result<Self> {
        let marginals = (0..self.n).map(|q| self.marginal(q)).collect::<Result<Vec<_>>>()?;
        Self::tensor_all(&marginals)
    }

    /// `P_σ ρ P_σ†` by index remapping.
    pub fn permuted(&self, sigma: &Permutation) -> Result<Self> {
        if sigma.degree() != self.n {
            return Err(Error::DegreeMismatch { expected: self.n, found: sigma.degree() });
        }
        let map: Vec<usize> = (0..self.dim()).map(|x| permute_index(self.n, sigma, x)).collect();
        let mut m = DMatrix::<C64>::zeros(self.dim(), self.dim());
        for x in 0..self.dim() {
            for y in 0..self.dim() {
                m[(map[x], map[y])] = self.m[(x, y)];
            }
        }
        Ok(Self { n: self.n, m })
    }

    /// Convex combination of states on the same register.
    pub fn mix(terms: &[(f64, DensityMatrix)]) -> Result<Self> {
        let (_, first) =
            terms.first().ok_or_else(|| Error::InvalidInstance("empty mixture".into()))?;
        let mut m = DMatrix::<C64>::zeros(first.dim(), first.dim());
        for (w, rho) in terms {
            if rho.n != first.n {
                return Err(Error::DimensionMismatch { left: first.n, right: rho.n });
            }
            m += &rho.m * C64::new(*w, 0.0);
        }
        Ok(Self { n: first.n, m })
    }
}

pub(crate) fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Vec<f64> {
    let herm = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let mut ev: Vec<f64> = herm.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

/// `‖r - s‖₁`.
pub fn trace_norm_distance(r: &DensityMatrix, s: &DensityMatrix) -> Result<f64> {
    if r.n != s.n {
        return Err(Error::DimensionMismatch { left: r.n, right: s.n });
    }
    Ok(hermitian_eigenvalues(&(&r.m - &s.m)).iter().map(|x| x.abs()).sum())
}

/// `D(r, s) = ½‖r - s‖₁`, via the eigenvalues of the Hermitian difference.
pub fn trace_distance(r: &DensityMatrix, s: &DensityMatrix) -> Result<f64> {
    Ok(trace_norm_distance(r, s)? / 2.0)
}

/// Index form of `partial_trace` taking 1-based qubit labels.
pub fn partial_trace(r: &DensityMatrix, keep_one_based: &[usize]) -> Result<DensityMatrix> {
    let keep = keep_one_based
        .iter()
        .map(|&q| q.checked_sub(1).ok_or(Error::BadIndex { index: 0, len: r.n }))
        .collect::<Result<Vec<_>>>()?;
    r.partial_trace(&keep)
}

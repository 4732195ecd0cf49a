//! Brute-force ground truth on explicit complex matrices.
//!
//! Everything here is exponential in the number of qudits and capped at
//! dimension [`MAX_DIM`]. Basis states `|x_1 .. x_n⟩` are indexed with qudit
//! 1 as the most significant base-`q` digit, and each digit is the integer
//! encoding of a field element. `ω = exp(2πi/p)`.
//!
//! Gate conjugation follows the Heisenberg convention used by the
//! check-matrix column actions: a gate `U` maps a Pauli `G` to `U† G U`.

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

use crate::check_matrix::{CliffordOp, MatrixError};
use crate::field::{FieldCtx, FieldElement, FieldError};
use crate::pauli::{PauliError, PauliOperator, PauliRow};

pub const MAX_DIM: usize = 1024;
pub const TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("dimension {dim} exceeds the oracle limit of {max}")]
    DimensionTooLarge { dim: u64, max: usize },
    #[error("operator is not proportional to a generalized Pauli")]
    NotAPauli,
    #[error("generators {first} and {second} do not commute")]
    NonCommutingGenerators { first: usize, second: usize },
    #[error("operator dimensions differ: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// `exp(2πi k / p)`.
pub fn root_of_unity(p: u32, k: u32) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * f64::from(k % p) / f64::from(p))
}

/// `q^n`, or an error past [`MAX_DIM`].
pub fn dimension(ctx: &FieldCtx, n: usize) -> Result<usize, OracleError> {
    let dim = u64::from(ctx.q())
        .checked_pow(n as u32)
        .filter(|&d| d <= MAX_DIM as u64);
    match dim {
        Some(d) => Ok(d as usize),
        None => Err(OracleError::DimensionTooLarge {
            dim: u64::from(ctx.q()).saturating_pow(n.min(64) as u32),
            max: MAX_DIM,
        }),
    }
}

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    dim: usize,
    data: Vec<Complex64>,
}

impl DenseOperator {
    pub fn zeros(dim: usize) -> Self {
        DenseOperator {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut out = Self::zeros(dim);
        for i in 0..dim {
            out.data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row * self.dim + col] = value;
    }

    pub fn mul(&self, other: &DenseOperator) -> Result<DenseOperator, OracleError> {
        self.check_dim(other)?;
        let d = self.dim;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self.data[i * d + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..d {
                    out.data[i * d + j] += a * other.data[k * d + j];
                }
            }
        }
        Ok(out)
    }

    pub fn adjoint(&self) -> DenseOperator {
        let d = self.dim;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for j in 0..d {
                out.data[j * d + i] = self.data[i * d + j].conj();
            }
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> DenseOperator {
        DenseOperator {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let d = self.dim;
        (0..d)
            .map(|i| (0..d).map(|j| self.data[i * d + j] * v[j]).sum())
            .collect()
    }

    pub fn approx_eq(&self, other: &DenseOperator, tol: f64) -> bool {
        self.dim == other.dim && self.data.iter().zip(&other.data).all(|(a, b)| (a - b).norm() <= tol)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.adjoint()
            .mul(self)
            .map(|m| m.approx_eq(&Self::identity(self.dim), tol))
            .unwrap_or(false)
    }

    /// `c` with `self = c·other`, if one exists within `tol`.
    pub fn proportionality(&self, other: &DenseOperator, tol: f64) -> Option<Complex64> {
        if self.dim != other.dim {
            return None;
        }
        let (idx, pivot) = other
            .data
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))?;
        if pivot.norm() <= tol {
            return None;
        }
        let c = self.data[idx] / pivot;
        let matches = self
            .data
            .iter()
            .zip(&other.data)
            .all(|(a, b)| (a - c * b).norm() <= tol);
        matches.then_some(c)
    }

    fn check_dim(&self, other: &DenseOperator) -> Result<(), OracleError> {
        if self.dim == other.dim {
            Ok(())
        } else {
            Err(OracleError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            })
        }
    }
}

/// Per-qudit digits of a basis index.
fn decode(index: usize, q: usize, n: usize) -> Vec<u32> {
    let mut digits = vec![0; n];
    let mut rest = index;
    for slot in digits.iter_mut().rev() {
        *slot = (rest % q) as u32;
        rest /= q;
    }
    digits
}

fn encode(digits: &[u32], q: usize) -> usize {
    digits.iter().fold(0, |acc, &d| acc * q + d as usize)
}

/// A matrix with one nonzero entry per column: column `y` maps to row
/// `target[y]` with weight `phase[y]`.
struct Monomial {
    target: Vec<usize>,
    phase: Vec<Complex64>,
}

impl Monomial {
    fn from_pauli(g: &PauliOperator, extra: Complex64) -> Result<Self, OracleError> {
        let ctx = g.ctx();
        let n = g.n();
        let q = ctx.q() as usize;
        let dim = dimension(ctx, n)?;
        let p = ctx.p();
        let mut target = Vec::with_capacity(dim);
        let mut phase = Vec::with_capacity(dim);
        for y in 0..dim {
            let digits = decode(y, q, n);
            let mut exponent = g.gamma;
            let mut shifted = Vec::with_capacity(n);
            for (i, &d) in digits.iter().enumerate() {
                let yi = FieldElement::new(d);
                exponent = (exponent + ctx.trace(ctx.mul(g.beta()[i], yi))) % p;
                shifted.push(ctx.add(yi, g.alpha()[i]).value());
            }
            target.push(encode(&shifted, q));
            phase.push(extra * root_of_unity(p, exponent));
        }
        Ok(Monomial { target, phase })
    }

    fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
        for (y, &amp) in v.iter().enumerate() {
            out[self.target[y]] += self.phase[y] * amp;
        }
        out
    }

    fn to_dense(&self) -> DenseOperator {
        let mut out = DenseOperator::zeros(self.target.len());
        for (y, (&row, &ph)) in self.target.iter().zip(&self.phase).enumerate() {
            out.set(row, y, ph);
        }
        out
    }
}

/// `ω^γ X_α Z_β` with `X_α Z_β |y⟩ = ω^{tr(β·y)} |y+α⟩`.
pub fn pauli_matrix(g: &PauliOperator) -> Result<DenseOperator, OracleError> {
    Ok(Monomial::from_pauli(g, Complex64::new(1.0, 0.0))?.to_dense())
}

/// Applies `ω^γ X_α Z_β` to a state vector.
pub fn apply_pauli(g: &PauliOperator, state: &[Complex64]) -> Result<Vec<Complex64>, OracleError> {
    let m = Monomial::from_pauli(g, Complex64::new(1.0, 0.0))?;
    if state.len() != m.target.len() {
        return Err(OracleError::DimensionMismatch {
            left: state.len(),
            right: m.target.len(),
        });
    }
    Ok(m.apply(state))
}

/// Diagonal of the single-qudit phase gate with parameter `gamma`.
fn phase_diagonal(ctx: &FieldCtx, gamma: FieldElement) -> Result<Vec<Complex64>, OracleError> {
    if gamma.is_zero() {
        return Ok(vec![Complex64::new(1.0, 0.0); ctx.q() as usize]);
    }
    if ctx.p() == 2 {
        // (-i)^{wgt(γ0 y)} with γ0² = γ.
        let root = ctx.sqrt_char2(gamma)?;
        ctx.elements()
            .map(|y| {
                let w = ctx.wgt(ctx.mul(root, y))?;
                Ok(Complex64::new(0.0, -1.0).powu(w))
            })
            .collect()
    } else {
        // ω^{-tr(½ γ y²)}.
        let half = ctx.inv(ctx.from_int(2))?;
        let c = ctx.mul(half, gamma);
        Ok(ctx
            .elements()
            .map(|y| {
                let t = ctx.trace(ctx.mul(c, ctx.mul(y, y)));
                root_of_unity(ctx.p(), ctx.p() - t)
            })
            .collect())
    }
}

/// The unitary realizing `op` on `n` qudits.
pub fn gate_unitary(ctx: &FieldCtx, op: &CliffordOp, n: usize) -> Result<DenseOperator, OracleError> {
    op.validate(ctx, n)?;
    let q = ctx.q() as usize;
    let dim = dimension(ctx, n)?;
    let mut u = DenseOperator::zeros(dim);
    match *op {
        CliffordOp::Dft { target } => {
            let norm = 1.0 / (q as f64).sqrt();
            for x in 0..dim {
                let mut digits = decode(x, q, n);
                let xt = FieldElement::new(digits[target]);
                for y in ctx.elements() {
                    digits[target] = y.value();
                    let phase = root_of_unity(ctx.p(), ctx.trace(ctx.mul(xt, y)));
                    u.set(encode(&digits, q), x, phase * norm);
                }
            }
        }
        CliffordOp::Mul { target, gamma } => {
            for x in 0..dim {
                let mut digits = decode(x, q, n);
                digits[target] = ctx.mul(gamma, FieldElement::new(digits[target])).value();
                u.set(encode(&digits, q), x, Complex64::new(1.0, 0.0));
            }
        }
        CliffordOp::Phase { target, gamma } => {
            let diag = phase_diagonal(ctx, gamma)?;
            for x in 0..dim {
                let digits = decode(x, q, n);
                u.set(x, x, diag[digits[target] as usize]);
            }
        }
        CliffordOp::Add { control, target } => {
            for x in 0..dim {
                let mut digits = decode(x, q, n);
                let sum = ctx.add(FieldElement::new(digits[target]), FieldElement::new(digits[control]));
                digits[target] = sum.value();
                u.set(encode(&digits, q), x, Complex64::new(1.0, 0.0));
            }
        }
    }
    Ok(u)
}

/// Identifies `U† G U` as `c · X_α' Z_β'`, returning the phaseless Pauli and `c`.
pub fn conjugate_to_pauli(
    u: &DenseOperator,
    g: &PauliOperator,
) -> Result<(PauliOperator, Complex64), OracleError> {
    let ctx = g.ctx();
    let n = g.n();
    let q = ctx.q() as usize;
    let gm = pauli_matrix(g)?;
    let conj = u.adjoint().mul(&gm)?.mul(u)?;
    let dim = conj.dim();
    // A Pauli sends |0⟩ to a multiple of |α⟩.
    let alpha_index = (0..dim)
        .find(|&r| conj.get(r, 0).norm() > TOLERANCE)
        .ok_or(OracleError::NotAPauli)?;
    let alpha = decode(alpha_index, q, n);
    for beta_index in 0..dim {
        let beta = decode(beta_index, q, n);
        let candidate = PauliOperator::from_row(ctx, PauliRow::from_values(&alpha, &beta));
        let cm = pauli_matrix(&candidate)?;
        if let Some(c) = conj.proportionality(&cm, TOLERANCE) {
            if (c.norm() - 1.0).abs() > TOLERANCE {
                return Err(OracleError::NotAPauli);
            }
            return Ok((candidate, c));
        }
    }
    Err(OracleError::NotAPauli)
}

/// `Σ_k |k⟩|k⟩ / √q` on two qudits.
pub fn ebit_state(ctx: &FieldCtx) -> Result<Vec<Complex64>, OracleError> {
    let q = ctx.q() as usize;
    let dim = dimension(ctx, 2)?;
    let mut state = vec![Complex64::new(0.0, 0.0); dim];
    let amp = Complex64::new(1.0 / (q as f64).sqrt(), 0.0);
    for k in 0..q {
        state[k * q + k] = amp;
    }
    Ok(state)
}

/// Whether `g |ψ⟩ = |ψ⟩` within [`TOLERANCE`].
pub fn is_stabilized(state: &[Complex64], g: &PauliOperator) -> Result<bool, OracleError> {
    let image = apply_pauli(g, state)?;
    Ok(image.iter().zip(state).all(|(a, b)| (a - b).norm() <= TOLERANCE))
}

/// Dimension of the joint `+1` eigenspace of commuting generators on `n`
/// qudits, as the rank of the product of their group projectors.
///
/// For `p = 2` each generator is first multiplied by `i^{tr(α·β)}` so that
/// it is Hermitian and squares to the identity.
pub fn stabilized_subspace_dim(
    ctx: &FieldCtx,
    n: usize,
    generators: &[PauliOperator],
) -> Result<usize, OracleError> {
    let dim = dimension(ctx, n)?;
    for g in generators {
        if g.n() != n {
            return Err(OracleError::Pauli(PauliError::DimensionMismatch { left: n, right: g.n() }));
        }
    }
    for i in 0..generators.len() {
        for j in i + 1..generators.len() {
            if !generators[i].commutes(&generators[j])? {
                return Err(OracleError::NonCommutingGenerators { first: i, second: j });
            }
        }
    }
    let p = ctx.p();
    let ops = generators
        .iter()
        .map(|g| {
            let extra = if p == 2 {
                let dot = g
                    .alpha()
                    .iter()
                    .zip(g.beta())
                    .fold(FieldElement::ZERO, |acc, (&a, &b)| ctx.add(acc, ctx.mul(a, b)));
                Complex64::new(0.0, 1.0).powu(ctx.trace(dot))
            } else {
                Complex64::new(1.0, 0.0)
            };
            Monomial::from_pauli(g, extra)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let inv_p = 1.0 / f64::from(p);
    let project = |mut v: Vec<Complex64>| {
        for op in &ops {
            let mut acc = v.clone();
            let mut power = v;
            for _ in 1..p {
                power = op.apply(&power);
                for (a, b) in acc.iter_mut().zip(&power) {
                    *a += b;
                }
            }
            v = acc.into_iter().map(|z| z * inv_p).collect();
        }
        v
    };
    // Rank of the projector's columns by Gram-Schmidt.
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    for y in 0..dim {
        let mut e = vec![Complex64::new(0.0, 0.0); dim];
        e[y] = Complex64::new(1.0, 0.0);
        let mut col = project(e);
        for _ in 0..2 {
            for b in &basis {
                let overlap: Complex64 = b.iter().zip(&col).map(|(x, z)| x.conj() * z).sum();
                for (c, x) in col.iter_mut().zip(b) {
                    *c -= overlap * x;
                }
            }
        }
        let norm = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > TOLERANCE.sqrt() {
            basis.push(col.into_iter().map(|z| z / norm).collect());
        }
    }
    Ok(basis.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn el(v: u32) -> FieldElement {
        FieldElement::new(v)
    }

    fn op(ctx: &FieldCtx, gamma: u32, alpha: &[u32], beta: &[u32]) -> PauliOperator {
        PauliOperator::new(ctx, gamma, PauliRow::from_values(alpha, beta))
    }

    #[test]
    fn qubit_gates() {
        let f2 = FieldCtx::prime(2).unwrap();
        let h = gate_unitary(&f2, &CliffordOp::Dft { target: 0 }, 1).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((h.get(0, 0) - c(s, 0.0)).norm() < 1e-12);
        assert!((h.get(1, 1) - c(-s, 0.0)).norm() < 1e-12);
        let x = pauli_matrix(&op(&f2, 0, &[1], &[0])).unwrap();
        assert_eq!((x.get(0, 1), x.get(1, 0), x.get(0, 0)), (c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)));

        let (img, phase) = conjugate_to_pauli(&h, &op(&f2, 0, &[1], &[0])).unwrap();
        assert_eq!(img.row, PauliRow::from_values(&[0], &[1]));
        assert!((phase - c(1.0, 0.0)).norm() < 1e-9);

        let p = gate_unitary(&f2, &CliffordOp::Phase { target: 0, gamma: el(1) }, 1).unwrap();
        let (img, phase) = conjugate_to_pauli(&p, &op(&f2, 0, &[1], &[0])).unwrap();
        assert_eq!(img.row, PauliRow::from_values(&[1], &[1]));
        assert!((phase - c(0.0, 1.0)).norm() < 1e-9);
    }

    #[test]
    fn qutrit_phase_gate_diagonal() {
        let f3 = FieldCtx::prime(3).unwrap();
        let p = gate_unitary(&f3, &CliffordOp::Phase { target: 0, gamma: el(1) }, 1).unwrap();
        let w = root_of_unity(3, 1);
        for (i, expected) in [c(1.0, 0.0), w, w].into_iter().enumerate() {
            assert!((p.get(i, i) - expected).norm() < 1e-12);
        }
    }

    #[test]
    fn gates_are_unitary() {
        let f4 = FieldCtx::new(2, 2, None).unwrap();
        let f5 = FieldCtx::prime(5).unwrap();
        for ctx in [&f4, &f5] {
            let ops = [
                CliffordOp::Dft { target: 1 },
                CliffordOp::Mul { target: 0, gamma: el(2) },
                CliffordOp::Phase { target: 1, gamma: el(3) },
                CliffordOp::Add { control: 1, target: 0 },
            ];
            for g in ops {
                assert!(gate_unitary(ctx, &g, 2).unwrap().is_unitary(TOLERANCE), "{g}");
            }
        }
    }

    #[test]
    fn add_conjugation_matches_tableau_at_q5() {
        let f5 = FieldCtx::prime(5).unwrap();
        let add = CliffordOp::Add { control: 0, target: 1 };
        let u = gate_unitary(&f5, &add, 2).unwrap();
        let g = op(&f5, 0, &[2, 3], &[4, 1]);
        let (img, _) = conjugate_to_pauli(&u, &g).unwrap();
        let mut row = g.row.clone();
        add.act(&f5, &mut row);
        assert_eq!(img.row, row);
    }

    #[test]
    fn ebit_stabilizers() {
        let f2 = FieldCtx::prime(2).unwrap();
        let bell = ebit_state(&f2).unwrap();
        assert!(is_stabilized(&bell, &op(&f2, 0, &[1, 1], &[0, 0])).unwrap());
        assert!(is_stabilized(&bell, &op(&f2, 0, &[0, 0], &[1, 1])).unwrap());

        let f3 = FieldCtx::prime(3).unwrap();
        let phi = ebit_state(&f3).unwrap();
        assert!(is_stabilized(&phi, &op(&f3, 0, &[1, 1], &[0, 0])).unwrap());
        assert!(is_stabilized(&phi, &op(&f3, 0, &[0, 0], &[1, 2])).unwrap());
        assert!(!is_stabilized(&phi, &op(&f3, 0, &[0, 0], &[1, 1])).unwrap());
    }

    #[test]
    fn subspace_dimensions() {
        let f2 = FieldCtx::prime(2).unwrap();
        assert_eq!(stabilized_subspace_dim(&f2, 1, &[]).unwrap(), 2);
        assert_eq!(stabilized_subspace_dim(&f2, 1, &[op(&f2, 0, &[0], &[1])]).unwrap(), 1);
        // Y = i·XZ is Hermitian, XZ itself is not.
        assert_eq!(stabilized_subspace_dim(&f2, 1, &[op(&f2, 0, &[1], &[1])]).unwrap(), 1);
        let err = stabilized_subspace_dim(&f2, 1, &[op(&f2, 0, &[1], &[0]), op(&f2, 0, &[0], &[1])]);
        assert!(matches!(err, Err(OracleError::NonCommutingGenerators { first: 0, second: 1 })));

        let f3 = FieldCtx::prime(3).unwrap();
        let gens = [op(&f3, 0, &[1, 1], &[0, 0]), op(&f3, 0, &[0, 0], &[1, 2])];
        assert_eq!(stabilized_subspace_dim(&f3, 2, &gens).unwrap(), 1);
    }

    #[test]
    fn dimension_cap() {
        let f2 = FieldCtx::prime(2).unwrap();
        assert!(dimension(&f2, 10).is_ok());
        assert!(matches!(dimension(&f2, 11), Err(OracleError::DimensionTooLarge { dim: 2048, .. })));
    }
}

//! The generalized Pauli (error) group on `n` qudits.
//!
//! Every element has the normal form `ω^γ X_α Z_β` with `γ ∈ Z_p` and
//! `α, β ∈ F_q^n`. Dropping `γ` leaves a [`PauliRow`], the symplectic vector
//! used in check matrices.
//!
//! Sign convention: [`symplectic_product`] is `Σ tr(α_i β'_i − α'_i β_i)`.
//! The group commutator then reads `g·h = ω^{h⊙g} h·g`, see
//! [`PauliOperator::commutation_exponent`].

use std::fmt;

use thiserror::Error;

use crate::field::{FieldCtx, FieldElement};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PauliError {
    #[error("dimension mismatch: {left} vs {right} qudits")]
    DimensionMismatch { left: usize, right: usize },
    #[error("operators belong to different fields")]
    FieldMismatch,
}

/// Phaseless Pauli operator `X_α Z_β`, one row of a check matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliRow {
    pub alpha: Vec<FieldElement>,
    pub beta: Vec<FieldElement>,
}

impl PauliRow {
    pub fn identity(n: usize) -> Self {
        PauliRow {
            alpha: vec![FieldElement::ZERO; n],
            beta: vec![FieldElement::ZERO; n],
        }
    }

    /// Builds a row from raw encodings. Panics if the lengths differ.
    pub fn from_values(alpha: &[u32], beta: &[u32]) -> Self {
        assert_eq!(alpha.len(), beta.len(), "X and Z parts must have equal length");
        PauliRow {
            alpha: alpha.iter().map(|&v| FieldElement::new(v)).collect(),
            beta: beta.iter().map(|&v| FieldElement::new(v)).collect(),
        }
    }

    /// `X_a` on a single qudit (0-based) of an `n`-qudit register.
    pub fn single_x(n: usize, qudit: usize, a: FieldElement) -> Self {
        let mut row = Self::identity(n);
        row.alpha[qudit] = a;
        row
    }

    /// `Z_b` on a single qudit (0-based) of an `n`-qudit register.
    pub fn single_z(n: usize, qudit: usize, b: FieldElement) -> Self {
        let mut row = Self::identity(n);
        row.beta[qudit] = b;
        row
    }

    pub fn n(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_identity(&self) -> bool {
        self.alpha.iter().chain(&self.beta).all(|e| e.is_zero())
    }

    /// Number of qudits on which the operator acts nontrivially.
    pub fn weight(&self) -> usize {
        self.alpha
            .iter()
            .zip(&self.beta)
            .filter(|(a, b)| !a.is_zero() || !b.is_zero())
            .count()
    }

    pub fn add(&self, ctx: &FieldCtx, other: &PauliRow) -> PauliRow {
        PauliRow {
            alpha: zip_with(&self.alpha, &other.alpha, |a, b| ctx.add(a, b)),
            beta: zip_with(&self.beta, &other.beta, |a, b| ctx.add(a, b)),
        }
    }

    pub fn sub(&self, ctx: &FieldCtx, other: &PauliRow) -> PauliRow {
        PauliRow {
            alpha: zip_with(&self.alpha, &other.alpha, |a, b| ctx.sub(a, b)),
            beta: zip_with(&self.beta, &other.beta, |a, b| ctx.sub(a, b)),
        }
    }

    pub fn scale(&self, ctx: &FieldCtx, s: FieldElement) -> PauliRow {
        PauliRow {
            alpha: self.alpha.iter().map(|&a| ctx.mul(a, s)).collect(),
            beta: self.beta.iter().map(|&b| ctx.mul(b, s)).collect(),
        }
    }

    /// `self + s·other`, componentwise.
    pub fn add_scaled(&self, ctx: &FieldCtx, other: &PauliRow, s: FieldElement) -> PauliRow {
        self.add(ctx, &other.scale(ctx, s))
    }

    /// Coordinates over F_p: the base-p digits of every α entry followed by
    /// those of every β entry.
    pub fn to_fp_vector(&self, ctx: &FieldCtx) -> Vec<u32> {
        self.alpha
            .iter()
            .chain(&self.beta)
            .flat_map(|&e| ctx.digits(e))
            .collect()
    }

    /// Appends `extra` qudits acting trivially.
    pub fn extended(&self, extra: usize) -> PauliRow {
        let mut row = self.clone();
        row.alpha.extend(std::iter::repeat_n(FieldElement::ZERO, extra));
        row.beta.extend(std::iter::repeat_n(FieldElement::ZERO, extra));
        row
    }
}

impl fmt::Display for PauliRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X({}) Z({})", join(&self.alpha), join(&self.beta))
    }
}

fn join(v: &[FieldElement]) -> String {
    v.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",")
}

fn zip_with(
    a: &[FieldElement],
    b: &[FieldElement],
    f: impl Fn(FieldElement, FieldElement) -> FieldElement,
) -> Vec<FieldElement> {
    a.iter().zip(b).map(|(&x, &y)| f(x, y)).collect()
}

fn check_dims(g: &PauliRow, h: &PauliRow) -> Result<(), PauliError> {
    if g.n() != h.n() {
        return Err(PauliError::DimensionMismatch {
            left: g.n(),
            right: h.n(),
        });
    }
    Ok(())
}

/// `Σ_i tr(α_g,i β_h,i − α_h,i β_g,i) mod p`.
pub fn symplectic_product(ctx: &FieldCtx, g: &PauliRow, h: &PauliRow) -> Result<u32, PauliError> {
    check_dims(g, h)?;
    let p = ctx.p();
    let mut acc = 0u32;
    for i in 0..g.n() {
        let plus = ctx.trace(ctx.mul(g.alpha[i], h.beta[i]));
        let minus = ctx.trace(ctx.mul(h.alpha[i], g.beta[i]));
        acc = (acc + plus + p - minus) % p;
    }
    Ok(acc)
}

pub fn commutes(ctx: &FieldCtx, g: &PauliRow, h: &PauliRow) -> Result<bool, PauliError> {
    Ok(symplectic_product(ctx, g, h)? == 0)
}

/// An element `ω^γ X_α Z_β` of the error group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PauliOperator {
    ctx: FieldCtx,
    pub gamma: u32,
    pub row: PauliRow,
}

impl PauliOperator {
    pub fn new(ctx: &FieldCtx, gamma: u32, row: PauliRow) -> Self {
        PauliOperator {
            ctx: ctx.clone(),
            gamma: gamma % ctx.p(),
            row,
        }
    }

    pub fn from_row(ctx: &FieldCtx, row: PauliRow) -> Self {
        Self::new(ctx, 0, row)
    }

    pub fn identity(ctx: &FieldCtx, n: usize) -> Self {
        Self::new(ctx, 0, PauliRow::identity(n))
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn n(&self) -> usize {
        self.row.n()
    }

    pub fn alpha(&self) -> &[FieldElement] {
        &self.row.alpha
    }

    pub fn beta(&self) -> &[FieldElement] {
        &self.row.beta
    }

    fn compatible(&self, other: &PauliOperator) -> Result<(), PauliError> {
        if self.ctx != other.ctx {
            return Err(PauliError::FieldMismatch);
        }
        check_dims(&self.row, &other.row)
    }

    /// Group product `self · other`, exact including the ω phase.
    ///
    /// Moving `X_{α_h}` left past `Z_{β_g}` contributes `ω^{tr(α_h β_g)}`.
    pub fn mul(&self, other: &PauliOperator) -> Result<PauliOperator, PauliError> {
        self.compatible(other)?;
        let ctx = &self.ctx;
        let p = ctx.p();
        let reorder = (0..self.n())
            .map(|i| ctx.trace(ctx.mul(other.row.alpha[i], self.row.beta[i])))
            .fold(0u32, |acc, t| (acc + t) % p);
        Ok(PauliOperator {
            ctx: ctx.clone(),
            gamma: (self.gamma + other.gamma + reorder) % p,
            row: self.row.add(ctx, &other.row),
        })
    }

    pub fn symplectic_product(&self, other: &PauliOperator) -> Result<u32, PauliError> {
        self.compatible(other)?;
        symplectic_product(&self.ctx, &self.row, &other.row)
    }

    pub fn commutes(&self, other: &PauliOperator) -> Result<bool, PauliError> {
        Ok(self.symplectic_product(other)? == 0)
    }

    /// The exponent `e` with `self · other = ω^e · other · self`.
    ///
    /// Equals `other ⊙ self`, the negative of `self ⊙ other`.
    pub fn commutation_exponent(&self, other: &PauliOperator) -> Result<u32, PauliError> {
        other.symplectic_product(self)
    }

    pub fn weight(&self) -> usize {
        self.row.weight()
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w^{} {}", self.gamma, self.row)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5_rows() -> Vec<PauliRow> {
        vec![
            PauliRow::from_values(&[3, 1, 1, 0], &[1, 2, 0, 2]),
            PauliRow::from_values(&[0, 3, 0, 4], &[2, 4, 1, 3]),
            PauliRow::from_values(&[1, 1, 0, 2], &[3, 1, 1, 2]),
            PauliRow::from_values(&[2, 3, 1, 0], &[4, 0, 1, 3]),
        ]
    }

    #[test]
    fn worked_example_products() {
        let ctx = FieldCtx::prime(5).unwrap();
        let rows = f5_rows();
        assert_eq!(symplectic_product(&ctx, &rows[0], &rows[1]).unwrap(), 2);
        assert_eq!(symplectic_product(&ctx, &rows[0], &rows[2]).unwrap(), 4);
        assert_eq!(symplectic_product(&ctx, &rows[0], &rows[0]).unwrap(), 0);
        assert!(!commutes(&ctx, &rows[0], &rows[1]).unwrap());
        assert_eq!(rows[0].weight(), 4);
    }

    #[test]
    fn qubit_products() {
        let ctx = FieldCtx::prime(2).unwrap();
        let x = PauliOperator::from_row(&ctx, PauliRow::from_values(&[1], &[0]));
        let z = PauliOperator::from_row(&ctx, PauliRow::from_values(&[0], &[1]));
        let xz = x.mul(&z).unwrap();
        assert_eq!((xz.gamma, xz.row.clone()), (0, PauliRow::from_values(&[1], &[1])));
        let zx = z.mul(&x).unwrap();
        assert_eq!((zx.gamma, zx.row), (1, PauliRow::from_values(&[1], &[1])));
        assert_eq!(x.mul(&PauliOperator::identity(&ctx, 1)).unwrap(), x);
    }

    #[test]
    fn x_powers_commute_for_qutrits() {
        let ctx = FieldCtx::prime(3).unwrap();
        let x1 = PauliRow::single_x(1, 0, FieldElement::new(1));
        let x2 = PauliRow::single_x(1, 0, FieldElement::new(2));
        assert!(commutes(&ctx, &x1, &x2).unwrap());
    }

    #[test]
    fn weights_and_errors() {
        assert_eq!(PauliRow::identity(3).weight(), 0);
        assert_eq!(PauliRow::from_values(&[1, 0], &[0, 0]).weight(), 1);
        let ctx = FieldCtx::prime(3).unwrap();
        let err = symplectic_product(&ctx, &PauliRow::identity(1), &PauliRow::identity(2));
        assert_eq!(err, Err(PauliError::DimensionMismatch { left: 1, right: 2 }));
    }

    #[test]
    fn display() {
        let ctx = FieldCtx::prime(5).unwrap();
        let g = PauliOperator::new(&ctx, 2, PauliRow::from_values(&[1, 0], &[3, 4]));
        assert_eq!(g.to_string(), "w^2 X(1,0) Z(3,4)");
    }

    #[test]
    fn commutator_phase_matches_product_order() {
        let ctx = FieldCtx::new(3, 2, None).unwrap();
        let g = PauliOperator::new(&ctx, 1, PauliRow::from_values(&[4, 7], &[2, 5]));
        let h = PauliOperator::new(&ctx, 2, PauliRow::from_values(&[8, 1], &[3, 0]));
        let gh = g.mul(&h).unwrap();
        let hg = h.mul(&g).unwrap();
        assert_eq!(gh.row, hg.row);
        let e = g.commutation_exponent(&h).unwrap();
        assert_eq!(gh.gamma, (hg.gamma + e) % 3);
        assert_eq!((e + g.symplectic_product(&h).unwrap()) % 3, 0);
    }
}

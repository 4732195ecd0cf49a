//! Phaseless stabilizer presentations and the operations that act on them.
//!
//! A [`CheckMatrix`] holds `r` rows `(α | β) ∈ F_q^{2n}`. Row operations
//! replace generators without changing the generated group; Clifford column
//! operations apply a symplectic change of frame to every row at once.
//!
//! Column actions follow the Heisenberg picture: applying gate `U` maps each
//! row `P` to `U† P U`. In that convention
//!
//! | gate | action on qudit column(s) |
//! |------|---------------------------|
//! | `DFT(i)` | `(α_i, β_i) → (β_i, −α_i)` |
//! | `MUL(γ, i)` | `(α_i, β_i) → (γ⁻¹ α_i, γ β_i)` |
//! | `PHASE(γ, i)` | `(α_i, β_i) → (α_i, β_i + γ α_i)` |
//! | `ADD(i → j)` | `α_j ← α_j − α_i`, `β_i ← β_i + β_j` |
//!
//! Qudit indices are 0-based in memory; the text and JSON formats are 1-based.

use std::fmt;

use thiserror::Error;

use crate::field::{FieldCtx, FieldElement};
use crate::format::{self, ParseError};
use crate::linalg;
use crate::pauli::{symplectic_product, PauliRow};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("index {index} out of range (size {size})")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("operation needs two distinct indices, got {0} twice")]
    RepeatedIndex(usize),
    #[error("gamma {0} is not invertible")]
    NonInvertibleGamma(u32),
    #[error("row scalar {0} is not allowed here")]
    BadScalar(u32),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("entry {value} out of range for a field of order {order}")]
    EntryOutOfRange { value: u32, order: u32 },
}

/// A Clifford gate, identified by its action on check-matrix columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CliffordOp {
    Dft { target: usize },
    Mul { target: usize, gamma: FieldElement },
    Phase { target: usize, gamma: FieldElement },
    Add { control: usize, target: usize },
}

impl CliffordOp {
    pub fn qudits(&self) -> Vec<usize> {
        match *self {
            CliffordOp::Dft { target }
            | CliffordOp::Mul { target, .. }
            | CliffordOp::Phase { target, .. } => vec![target],
            CliffordOp::Add { control, target } => vec![control, target],
        }
    }

    /// The gate sequence undoing this gate, built from the same gate menu.
    pub fn inverse(&self, ctx: &FieldCtx) -> Vec<CliffordOp> {
        match *self {
            CliffordOp::Dft { .. } => vec![*self; 3],
            CliffordOp::Mul { target, gamma } => vec![CliffordOp::Mul {
                target,
                gamma: ctx.inv(gamma).expect("multiplier gamma is nonzero"),
            }],
            CliffordOp::Phase { target, gamma } => vec![CliffordOp::Phase {
                target,
                gamma: ctx.neg(gamma),
            }],
            CliffordOp::Add { .. } => vec![*self; ctx.p() as usize - 1],
        }
    }

    pub fn validate(&self, ctx: &FieldCtx, n: usize) -> Result<(), MatrixError> {
        for index in self.qudits() {
            if index >= n {
                return Err(MatrixError::IndexOutOfRange { index, size: n });
            }
        }
        match *self {
            CliffordOp::Mul { gamma, .. } if gamma.is_zero() => {
                Err(MatrixError::NonInvertibleGamma(0))
            }
            CliffordOp::Mul { gamma, .. } | CliffordOp::Phase { gamma, .. }
                if gamma.value() >= ctx.q() =>
            {
                Err(MatrixError::EntryOutOfRange {
                    value: gamma.value(),
                    order: ctx.q(),
                })
            }
            CliffordOp::Add { control, target } if control == target => {
                Err(MatrixError::RepeatedIndex(control))
            }
            _ => Ok(()),
        }
    }

    /// Applies the column action to a single row.
    pub fn act(&self, ctx: &FieldCtx, row: &mut PauliRow) {
        match *self {
            CliffordOp::Dft { target } => {
                let (a, b) = (row.alpha[target], row.beta[target]);
                row.alpha[target] = b;
                row.beta[target] = ctx.neg(a);
            }
            CliffordOp::Mul { target, gamma } => {
                let inv = ctx.inv(gamma).expect("multiplier gamma is nonzero");
                row.alpha[target] = ctx.mul(inv, row.alpha[target]);
                row.beta[target] = ctx.mul(gamma, row.beta[target]);
            }
            CliffordOp::Phase { target, gamma } => {
                let shift = ctx.mul(gamma, row.alpha[target]);
                row.beta[target] = ctx.add(row.beta[target], shift);
            }
            CliffordOp::Add { control, target } => {
                row.alpha[target] = ctx.sub(row.alpha[target], row.alpha[control]);
                row.beta[control] = ctx.add(row.beta[control], row.beta[target]);
            }
        }
    }
}

impl fmt::Display for CliffordOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliffordOp::Dft { target } => write!(f, "DFT({})", target + 1),
            CliffordOp::Mul { target, gamma } => write!(f, "MUL[{}]({})", gamma, target + 1),
            CliffordOp::Phase { target, gamma } => write!(f, "PHASE[{}]({})", gamma, target + 1),
            CliffordOp::Add { control, target } => write!(f, "ADD({}->{})", control + 1, target + 1),
        }
    }
}

/// A generator replacement. Indices are 0-based row positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RowOp {
    Swap { a: usize, b: usize },
    /// `row[dest] ← row[dest] + scalar · row[src]`
    AddMul { dest: usize, src: usize, scalar: FieldElement },
    /// `row[row] ← scalar · row[row]`
    Scale { row: usize, scalar: FieldElement },
}

impl RowOp {
    pub fn inverse(&self, ctx: &FieldCtx) -> RowOp {
        match *self {
            RowOp::Swap { .. } => *self,
            RowOp::AddMul { dest, src, scalar } => RowOp::AddMul {
                dest,
                src,
                scalar: ctx.neg(scalar),
            },
            RowOp::Scale { row, scalar } => RowOp::Scale {
                row,
                scalar: ctx.inv(scalar).expect("row scale is nonzero"),
            },
        }
    }

    /// Applies the operation to any list of row-indexed items.
    pub(crate) fn apply_to<T: Clone>(
        &self,
        items: &mut [T],
        add_scaled: impl Fn(&T, &T, FieldElement) -> T,
        scale: impl Fn(&T, FieldElement) -> T,
    ) {
        match *self {
            RowOp::Swap { a, b } => items.swap(a, b),
            RowOp::AddMul { dest, src, scalar } => {
                items[dest] = add_scaled(&items[dest], &items[src], scalar)
            }
            RowOp::Scale { row, scalar } => items[row] = scale(&items[row], scalar),
        }
    }
}

impl fmt::Display for RowOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RowOp::Swap { a, b } => write!(f, "swap(r{}, r{})", a + 1, b + 1),
            RowOp::AddMul { dest, src, scalar } => {
                write!(f, "r{} += {}*r{}", dest + 1, scalar, src + 1)
            }
            RowOp::Scale { row, scalar } => write!(f, "r{} *= {}", row + 1, scalar),
        }
    }
}

/// One entry of a reduction log.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Op {
    Row(RowOp),
    Clifford(CliffordOp),
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Op::Row(op) => op.fmt(f),
            Op::Clifford(op) => op.fmt(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckMatrix {
    ctx: FieldCtx,
    n: usize,
    rows: Vec<PauliRow>,
}

impl CheckMatrix {
    pub fn new(ctx: &FieldCtx, n: usize, rows: Vec<PauliRow>) -> Result<Self, MatrixError> {
        for row in &rows {
            if row.alpha.len() != n || row.beta.len() != n {
                return Err(MatrixError::DimensionMismatch(format!(
                    "row has {}|{} entries, expected {n}|{n}",
                    row.alpha.len(),
                    row.beta.len()
                )));
            }
            if let Some(bad) = row.alpha.iter().chain(&row.beta).find(|e| e.value() >= ctx.q()) {
                return Err(MatrixError::EntryOutOfRange {
                    value: bad.value(),
                    order: ctx.q(),
                });
            }
        }
        Ok(CheckMatrix {
            ctx: ctx.clone(),
            n,
            rows,
        })
    }

    /// Builds a matrix from `(alpha, beta)` value slices.
    pub fn from_values(ctx: &FieldCtx, rows: &[(&[u32], &[u32])]) -> Result<Self, MatrixError> {
        let n = rows.first().map_or(0, |(a, _)| a.len());
        let rows = rows
            .iter()
            .map(|(a, b)| {
                if a.len() != b.len() {
                    return Err(MatrixError::DimensionMismatch("X and Z parts differ in length".into()));
                }
                Ok(PauliRow::from_values(a, b))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(ctx, n, rows)
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[PauliRow] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &PauliRow {
        &self.rows[i]
    }

    pub fn into_rows(self) -> Vec<PauliRow> {
        self.rows
    }

    /// Parses the `EACM` text format.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let doc = format::parse_document(text, "EACM")?;
        let mut rows = Vec::with_capacity(doc.r);
        for line in &doc.rows {
            let bar = line.iter().position(|t| t.text == "|");
            match bar {
                Some(pos) if pos == doc.n && line.len() == 2 * doc.n + 1 => {}
                Some(pos) if pos != doc.n => {
                    return Err(line[pos].error(format!("expected {} entries before `|`", doc.n)))
                }
                None => {
                    return Err(line[0].error("row is missing the `|` separator"));
                }
                Some(_) => {
                    let at = line.get(2 * doc.n + 1).unwrap_or(&line[line.len() - 1]);
                    return Err(at.error(format!("expected {} entries after `|`", doc.n)));
                }
            }
            let alpha = line[..doc.n]
                .iter()
                .map(|t| t.element(&doc.ctx))
                .collect::<Result<Vec<_>, _>>()?;
            let beta = line[doc.n + 1..]
                .iter()
                .map(|t| t.element(&doc.ctx))
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(PauliRow { alpha, beta });
        }
        Ok(CheckMatrix {
            ctx: doc.ctx,
            n: doc.n,
            rows,
        })
    }

    /// Canonical `EACM` text; `parse(to_text(m)) == m`.
    pub fn to_text(&self) -> String {
        let mut out = format::header_text("EACM", &self.ctx, self.n, self.rows.len());
        for row in &self.rows {
            let alpha: Vec<String> = row.alpha.iter().map(|e| e.to_string()).collect();
            let beta: Vec<String> = row.beta.iter().map(|e| e.to_string()).collect();
            out.push_str(&alpha.join(" "));
            out.push_str(" | ");
            out.push_str(&beta.join(" "));
            out.push('\n');
        }
        out
    }

    fn check_row(&self, index: usize) -> Result<(), MatrixError> {
        if index >= self.rows.len() {
            return Err(MatrixError::IndexOutOfRange {
                index,
                size: self.rows.len(),
            });
        }
        Ok(())
    }

    /// Rejects row scalars outside the allowed domain: any element of a prime
    /// field, but only prime-subfield values over an extension (a generator
    /// can only be raised to integer powers).
    fn check_scalar(&self, scalar: FieldElement) -> Result<(), MatrixError> {
        let limit = if self.ctx.is_prime_field() { self.ctx.q() } else { self.ctx.p() };
        if scalar.value() >= limit {
            return Err(MatrixError::BadScalar(scalar.value()));
        }
        Ok(())
    }

    pub fn validate_row_op(&self, op: &RowOp) -> Result<(), MatrixError> {
        match *op {
            RowOp::Swap { a, b } => {
                self.check_row(a)?;
                self.check_row(b)
            }
            RowOp::AddMul { dest, src, scalar } => {
                self.check_row(dest)?;
                self.check_row(src)?;
                if dest == src {
                    return Err(MatrixError::RepeatedIndex(dest));
                }
                self.check_scalar(scalar)
            }
            RowOp::Scale { row, scalar } => {
                self.check_row(row)?;
                if scalar.is_zero() {
                    return Err(MatrixError::BadScalar(0));
                }
                self.check_scalar(scalar)
            }
        }
    }

    pub fn apply_row_op(&mut self, op: &RowOp) -> Result<(), MatrixError> {
        self.validate_row_op(op)?;
        let ctx = self.ctx.clone();
        op.apply_to(
            &mut self.rows,
            |d, s, k| d.add_scaled(&ctx, s, k),
            |r, k| r.scale(&ctx, k),
        );
        Ok(())
    }

    /// `row[dest] += scalar · row[src]`, returning the new matrix.
    pub fn row_add(&self, dest: usize, src: usize, scalar: FieldElement) -> Result<Self, MatrixError> {
        let mut out = self.clone();
        out.apply_row_op(&RowOp::AddMul { dest, src, scalar })?;
        Ok(out)
    }

    pub fn apply_clifford(&mut self, op: &CliffordOp) -> Result<(), MatrixError> {
        op.validate(&self.ctx, self.n)?;
        for row in &mut self.rows {
            op.act(&self.ctx, row);
        }
        Ok(())
    }

    /// Returns the matrix after the column action of `op`.
    pub fn with_clifford(&self, op: &CliffordOp) -> Result<Self, MatrixError> {
        let mut out = self.clone();
        out.apply_clifford(op)?;
        Ok(out)
    }

    pub fn apply(&mut self, op: &Op) -> Result<(), MatrixError> {
        match op {
            Op::Row(op) => self.apply_row_op(op),
            Op::Clifford(op) => self.apply_clifford(op),
        }
    }

    /// Folds an operation log over this matrix.
    pub fn replay<'a>(&self, ops: impl IntoIterator<Item = &'a Op>) -> Result<Self, MatrixError> {
        let mut out = self.clone();
        for op in ops {
            out.apply(op)?;
        }
        Ok(out)
    }

    pub fn symplectic_product(&self, i: usize, j: usize) -> u32 {
        symplectic_product(&self.ctx, &self.rows[i], &self.rows[j])
            .expect("rows of one matrix share a dimension")
    }

    /// `G[i][j] = row_i ⊙ row_j`.
    pub fn gram_matrix(&self) -> Vec<Vec<u32>> {
        (0..self.rows.len())
            .map(|i| (0..self.rows.len()).map(|j| self.symplectic_product(i, j)).collect())
            .collect()
    }

    pub fn is_abelian(&self) -> bool {
        self.gram_matrix().iter().flatten().all(|&v| v == 0)
    }

    /// Rows as F_p coordinate vectors.
    pub fn fp_rows(&self) -> Vec<Vec<u32>> {
        self.rows.iter().map(|r| r.to_fp_vector(&self.ctx)).collect()
    }

    /// Dimension over F_p of the row span.
    pub fn fp_rank(&self) -> usize {
        linalg::rank(&self.fp_rows(), self.ctx.p())
    }

    /// True when no nontrivial F_p-combination of rows vanishes.
    pub fn is_independent(&self) -> bool {
        self.fp_rank() == self.rows.len()
    }

    /// Whether both matrices generate the same group modulo phases.
    pub fn row_space_equal(&self, other: &CheckMatrix) -> Result<bool, MatrixError> {
        if self.ctx != other.ctx || self.n != other.n {
            return Err(MatrixError::DimensionMismatch(format!(
                "{} qudits over GF({}) vs {} qudits over GF({})",
                self.n,
                self.ctx.q(),
                other.n,
                other.ctx.q()
            )));
        }
        Ok(linalg::same_span(&self.fp_rows(), &other.fp_rows(), self.ctx.p()))
    }

    /// Appends `extra` qudit columns, filled with zeros.
    pub fn extended(&self, extra: usize) -> Self {
        CheckMatrix {
            ctx: self.ctx.clone(),
            n: self.n + extra,
            rows: self.rows.iter().map(|r| r.extended(extra)).collect(),
        }
    }

    pub(crate) fn rows_mut(&mut self) -> &mut [PauliRow] {
        &mut self.rows
    }
}

impl fmt::Display for CheckMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const F5_TEXT: &str = "\
EACM 5 1 4 4
3 1 1 0 | 1 2 0 2
0 3 0 4 | 2 4 1 3
1 1 0 2 | 3 1 1 2
2 3 1 0 | 4 0 1 3
";

    fn el(v: u32) -> FieldElement {
        FieldElement::new(v)
    }

    #[test]
    fn parse_and_serialize() {
        let m = CheckMatrix::parse(F5_TEXT).unwrap();
        assert_eq!((m.n(), m.row_count()), (4, 4));
        assert_eq!(m.row(0), &PauliRow::from_values(&[3, 1, 1, 0], &[1, 2, 0, 2]));
        assert_eq!(m.to_text(), F5_TEXT);

        let messy = "# worked example\nEACM 5 1 4 1\n3 1 1 0 |1 2 0 2\n";
        assert!(matches!(CheckMatrix::parse(messy), Err(ParseError::Syntax { line: 3, .. })));

        let bad = F5_TEXT.replace("3 1 1 0 | 1 2 0 2", "3 1 7 0 | 1 2 0 2");
        assert_eq!(
            CheckMatrix::parse(&bad),
            Err(ParseError::EntryOutOfRange { line: 2, column: 5, value: 7, order: 5 })
        );
    }

    #[test]
    fn extension_field_round_trip() {
        let text = "EACM 2 2 2 1\npoly 1 1 1\n2 3 | 0 1\n";
        let m = CheckMatrix::parse(text).unwrap();
        assert_eq!(m.ctx().q(), 4);
        assert_eq!(m.to_text(), text);
    }

    #[test]
    fn worked_example_row_additions() {
        let m = CheckMatrix::parse(F5_TEXT).unwrap();
        let step = m.row_add(1, 2, el(1)).unwrap();
        assert_eq!(step.row(1), &PauliRow::from_values(&[1, 4, 0, 1], &[0, 0, 2, 0]));
        assert!(m.row_space_equal(&step).unwrap());
        assert_eq!(m.row_add(1, 2, el(0)).unwrap(), m);
        assert_eq!(m.row_add(1, 1, el(1)), Err(MatrixError::RepeatedIndex(1)));
        assert!(matches!(m.row_add(9, 1, el(1)), Err(MatrixError::IndexOutOfRange { .. })));
    }

    #[test]
    fn later_worked_example_row_addition() {
        // Rows 1, 2 and 4 of the matrix reached after the first pair is cleared.
        let ctx = FieldCtx::prime(5).unwrap();
        let m = CheckMatrix::from_values(
            &ctx,
            &[
                (&[1, 0, 0, 0], &[0, 0, 0, 0]),
                (&[0, 0, 0, 0], &[1, 0, 0, 0]),
                (&[1, 0, 2, 2], &[2, 0, 4, 2]),
            ],
        )
        .unwrap();
        let out = m.row_add(2, 0, el(4)).unwrap().row_add(2, 1, el(3)).unwrap();
        assert_eq!(out.row(2), &PauliRow::from_values(&[0, 0, 2, 2], &[0, 0, 4, 2]));
    }

    #[test]
    fn column_actions() {
        let f5 = FieldCtx::prime(5).unwrap();
        let mut row = PauliRow::from_values(&[2], &[3]);
        CliffordOp::Dft { target: 0 }.act(&f5, &mut row);
        assert_eq!(row, PauliRow::from_values(&[3], &[3]));

        let mut row = PauliRow::from_values(&[1], &[1]);
        CliffordOp::Mul { target: 0, gamma: el(2) }.act(&f5, &mut row);
        assert_eq!(row, PauliRow::from_values(&[3], &[2]));

        let f2 = FieldCtx::prime(2).unwrap();
        let mut row = PauliRow::from_values(&[1, 0], &[0, 0]);
        CliffordOp::Add { control: 0, target: 1 }.act(&f2, &mut row);
        assert_eq!(row, PauliRow::from_values(&[1, 1], &[0, 0]));
    }

    #[test]
    fn op_validation() {
        let f5 = FieldCtx::prime(5).unwrap();
        let m = CheckMatrix::parse(F5_TEXT).unwrap();
        assert_eq!(
            m.with_clifford(&CliffordOp::Mul { target: 0, gamma: el(0) }),
            Err(MatrixError::NonInvertibleGamma(0))
        );
        assert!(matches!(
            m.with_clifford(&CliffordOp::Dft { target: 4 }),
            Err(MatrixError::IndexOutOfRange { index: 4, size: 4 })
        ));
        assert!(CliffordOp::Add { control: 1, target: 1 }.validate(&f5, 4).is_err());

        let f4 = FieldCtx::new(2, 2, None).unwrap();
        let m4 = CheckMatrix::from_values(&f4, &[(&[1], &[0]), (&[0], &[1])]).unwrap();
        assert_eq!(m4.row_add(0, 1, el(2)), Err(MatrixError::BadScalar(2)));
        assert!(m4.row_add(0, 1, el(1)).is_ok());
    }

    #[test]
    fn row_space_comparisons() {
        let m = CheckMatrix::parse(F5_TEXT).unwrap();
        let mut permuted = m.clone();
        permuted.apply_row_op(&RowOp::Swap { a: 0, b: 3 }).unwrap();
        assert!(m.row_space_equal(&permuted).unwrap());
        let mut zeroed = m.clone();
        zeroed.rows_mut()[2] = PauliRow::identity(4);
        assert!(!m.row_space_equal(&zeroed).unwrap());
        assert!(m.is_independent());
    }

    #[test]
    fn inverses_undo_gates() {
        let m = CheckMatrix::parse(F5_TEXT).unwrap();
        let ctx = m.ctx().clone();
        for op in [
            CliffordOp::Dft { target: 1 },
            CliffordOp::Mul { target: 2, gamma: el(3) },
            CliffordOp::Phase { target: 0, gamma: el(4) },
            CliffordOp::Add { control: 3, target: 1 },
        ] {
            let mut out = m.with_clifford(&op).unwrap();
            for inv in op.inverse(&ctx) {
                out.apply_clifford(&inv).unwrap();
            }
            assert_eq!(out, m, "{op}");
        }
    }
}

//! Reduction of an arbitrary check matrix to canonical hyperbolic form.
//!
//! The target frame is
//!
//! ```text
//! (X e_1 | 0), (0 | Z e_1), …, (X e_c | 0), (0 | Z e_c),
//! (0 | Z e_{c+1}), …, (0 | Z e_{c+a})
//! ```
//!
//! reached by generator replacements ([`RowOp`]) and Clifford column
//! operations ([`CliffordOp`]). Every hyperbolic pair costs one ebit; every
//! remaining isotropic generator fixes one ancilla, leaving `k = n − a − c`
//! logical qudits.
//!
//! Pairs are formed one at a time. The first pair `(i, j)` of remaining rows
//! with `row_i ⊙ row_j ≠ 0` (lowest `i`, then lowest `j`) selects row `i` as
//! the pivot, which is swapped to the front of the remaining block. Its
//! partner is the row right after it; when their product `a1` is not 1, a
//! third row with product `a2 ≠ 0` is added to the partner `m` times, where
//! `a1 + m·a2 ≡ 1 (mod p)`. Without such a row the pair cannot be normalized
//! by generator additions alone: [`Mode::Strict`] reports
//! [`ReductionError::NotConstructible`] while [`Mode::Normalized`] rescales
//! the partner.

use std::fmt;

use thiserror::Error;

use crate::check_matrix::{CheckMatrix, CliffordOp, MatrixError, Op, RowOp};
use crate::field::{FieldCtx, FieldElement};
use crate::linalg;
use crate::pauli::PauliRow;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("pair {pair} has symplectic product {product}, which no generator addition can normalize to 1")]
    NotConstructible { pair: usize, product: u32 },
    #[error("reduction requires a prime field, got GF({p}^{m})")]
    NonPrimeField { p: u32, m: u32 },
    #[error("generators are linearly dependent over F_p")]
    DependentRows,
    #[error("a2 must be nonzero modulo p")]
    ZeroA2,
    #[error("inconsistent counts: n={n}, rows={rows}, c={c}")]
    InconsistentCounts { n: usize, rows: usize, c: usize },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Mode {
    /// Only swaps and generator additions; fails on pairs whose product
    /// cannot be brought to 1 that way.
    #[default]
    Strict,
    /// Additionally allows generator powers (row scaling); always succeeds.
    Normalized,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Strict => "strict",
            Mode::Normalized => "normalized",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "strict" => Ok(Mode::Strict),
            "normalized" => Ok(Mode::Normalized),
            other => Err(format!("unknown mode `{other}` (expected strict or normalized)")),
        }
    }
}

/// Multiplier `m` with `a1 + m·a2 ≡ 1 (mod p)`, so that
/// `g1 ⊙ (g2 · g3^m) = 1` when `g1 ⊙ g2 = a1` and `g1 ⊙ g3 = a2`.
pub fn normalize_pair(p: u32, a1: u32, a2: u32) -> Result<u32, ReductionError> {
    let ctx = FieldCtx::prime(p).map_err(|_| ReductionError::NonPrimeField { p, m: 1 })?;
    let a2 = ctx.from_int(a2 as i64);
    let inv = ctx.inv(a2).map_err(|_| ReductionError::ZeroA2)?;
    let need = ctx.from_int(1 - a1 as i64);
    Ok(ctx.mul(need, inv).value())
}

/// `(a, k)` for a code on `n` qudits with `row_count` generators and `c` pairs.
pub fn code_params(n: usize, row_count: usize, c: usize) -> Result<(usize, usize), ReductionError> {
    if 2 * c > row_count || row_count > n + c {
        return Err(ReductionError::InconsistentCounts { n, rows: row_count, c });
    }
    let a = row_count - 2 * c;
    Ok((a, n - a - c))
}

/// Appends one receiver column per hyperbolic pair: the X row of pair `i`
/// gains `X_1` on receiver qudit `i`, its Z row gains `Z_{p−1}`.
pub fn augment_ebits(canonical: &CheckMatrix, c: usize) -> CheckMatrix {
    let n = canonical.n();
    let ctx = canonical.ctx().clone();
    let mut out = canonical.extended(c);
    let minus_one = ctx.from_int(-1);
    let rows = out.rows_mut();
    for pair in 0..c {
        rows[2 * pair].alpha[n + pair] = FieldElement::ONE;
        rows[2 * pair + 1].beta[n + pair] = minus_one;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionResult {
    pub input: CheckMatrix,
    pub canonical: CheckMatrix,
    pub oplog: Vec<Op>,
    pub c: usize,
    pub a: usize,
    pub k: usize,
    pub mode: Mode,
    /// The canonical matrix with the receiver's ebit columns appended.
    pub augmented: CheckMatrix,
}

impl ReductionResult {
    pub fn n(&self) -> usize {
        self.input.n()
    }

    pub fn ctx(&self) -> &FieldCtx {
        self.input.ctx()
    }

    /// `[[n,k;c]]_q`
    pub fn label(&self) -> String {
        format!("[[{},{};{}]]_{}", self.n(), self.k, self.c, self.ctx().q())
    }

    pub fn row_ops(&self) -> impl Iterator<Item = &RowOp> {
        self.oplog.iter().filter_map(|op| match op {
            Op::Row(r) => Some(r),
            Op::Clifford(_) => None,
        })
    }

    pub fn clifford_ops(&self) -> impl Iterator<Item = &CliffordOp> {
        self.oplog.iter().filter_map(|op| match op {
            Op::Clifford(c) => Some(c),
            Op::Row(_) => None,
        })
    }

    /// Receiver columns for the original generators: the canonical ebit
    /// columns pulled back through the inverse row operations.
    pub fn original_bob_columns(&self) -> Vec<PauliRow> {
        let ctx = self.ctx().clone();
        let n = self.n();
        let mut bob: Vec<PauliRow> = self
            .augmented
            .rows()
            .iter()
            .map(|r| PauliRow {
                alpha: r.alpha[n..].to_vec(),
                beta: r.beta[n..].to_vec(),
            })
            .collect();
        for op in self.row_ops().collect::<Vec<_>>().into_iter().rev() {
            op.inverse(&ctx).apply_to(
                &mut bob,
                |d, s, k| d.add_scaled(&ctx, s, k),
                |r, k| r.scale(&ctx, k),
            );
        }
        bob
    }

    /// The input generators with their receiver halves appended. These rows
    /// pairwise commute and generate the same group as the encoded operators.
    pub fn augmented_original(&self) -> CheckMatrix {
        let n = self.n();
        let c = self.c;
        let rows = self
            .input
            .rows()
            .iter()
            .zip(self.original_bob_columns())
            .map(|(row, bob)| {
                let mut r = row.extended(c);
                r.alpha[n..].copy_from_slice(&bob.alpha);
                r.beta[n..].copy_from_slice(&bob.beta);
                r
            })
            .collect();
        CheckMatrix::new(self.ctx(), n + c, rows).expect("augmented rows are well formed")
    }
}

/// Reduces `input` to canonical form, logging every operation.
pub fn reduce(input: &CheckMatrix, mode: Mode) -> Result<ReductionResult, ReductionError> {
    let ctx = input.ctx();
    if !ctx.is_prime_field() {
        return Err(ReductionError::NonPrimeField { p: ctx.p(), m: ctx.m() });
    }
    if !input.is_independent() {
        return Err(ReductionError::DependentRows);
    }
    let mut state = Reducer {
        ctx: ctx.clone(),
        matrix: input.clone(),
        oplog: Vec::new(),
    };
    let r = input.row_count();
    let mut c = 0;
    while let Some((i, j)) = state.find_pivot(2 * c) {
        debug_assert!(j > i);
        state.form_pair(2 * c, i, c + 1, mode)?;
        state.clear_pair(2 * c, c);
        c += 1;
    }
    for (offset, row) in (2 * c..r).enumerate() {
        state.clear_isotropic(row, c + offset);
    }
    let (a, k) = code_params(input.n(), r, c)?;
    let canonical = state.matrix;
    let augmented = augment_ebits(&canonical, c);
    Ok(ReductionResult {
        input: input.clone(),
        canonical,
        oplog: state.oplog,
        c,
        a,
        k,
        mode,
        augmented,
    })
}

/// Half the F_p-rank of the symplectic Gram matrix: the fewest ebits any
/// generating set of the same group can need.
pub fn min_ebits(matrix: &CheckMatrix) -> usize {
    linalg::rank(&matrix.gram_matrix(), matrix.ctx().p()) / 2
}

struct Reducer {
    ctx: FieldCtx,
    matrix: CheckMatrix,
    oplog: Vec<Op>,
}

impl Reducer {
    fn p(&self) -> u32 {
        self.ctx.p()
    }

    fn row(&self, i: usize) -> &PauliRow {
        self.matrix.row(i)
    }

    fn alpha(&self, row: usize, col: usize) -> FieldElement {
        self.matrix.row(row).alpha[col]
    }

    fn beta(&self, row: usize, col: usize) -> FieldElement {
        self.matrix.row(row).beta[col]
    }

    fn gate(&mut self, op: CliffordOp) {
        self.matrix
            .apply_clifford(&op)
            .expect("reducer only emits valid gates");
        self.oplog.push(Op::Clifford(op));
    }

    fn gate_times(&mut self, op: CliffordOp, times: u32) {
        for _ in 0..times {
            self.gate(op);
        }
    }

    fn row_op(&mut self, op: RowOp) {
        self.matrix
            .apply_row_op(&op)
            .expect("reducer only emits valid row operations");
        self.oplog.push(Op::Row(op));
    }

    /// `row[dest] -= coeff · row[src]`, skipped when `coeff` is zero.
    fn eliminate(&mut self, dest: usize, src: usize, coeff: FieldElement) {
        if !coeff.is_zero() {
            let scalar = self.ctx.neg(coeff);
            self.row_op(RowOp::AddMul { dest, src, scalar });
        }
    }

    fn find_pivot(&self, start: usize) -> Option<(usize, usize)> {
        let r = self.matrix.row_count();
        (start..r).find_map(|i| {
            (i + 1..r)
                .find(|&j| self.matrix.symplectic_product(i, j) != 0)
                .map(|j| (i, j))
        })
    }

    /// Arranges rows `start` and `start + 1` into a pair with product 1.
    fn form_pair(
        &mut self,
        start: usize,
        pivot: usize,
        pair_number: usize,
        mode: Mode,
    ) -> Result<(), ReductionError> {
        if pivot != start {
            self.row_op(RowOp::Swap { a: start, b: pivot });
        }
        let partner = start + 1;
        let p = self.p();
        let a1 = self.matrix.symplectic_product(start, partner);
        if a1 == 1 {
            return Ok(());
        }
        let third = (partner + 1..self.matrix.row_count())
            .find(|&w| self.matrix.symplectic_product(start, w) != 0);
        match third {
            Some(w) => {
                let a2 = self.matrix.symplectic_product(start, w);
                let m = normalize_pair(p, a1, a2)?;
                if m != 0 {
                    self.row_op(RowOp::AddMul {
                        dest: partner,
                        src: w,
                        scalar: FieldElement::new(m),
                    });
                }
            }
            None => match mode {
                Mode::Strict => {
                    return Err(ReductionError::NotConstructible {
                        pair: pair_number,
                        product: a1,
                    })
                }
                Mode::Normalized => {
                    let scalar = self
                        .ctx
                        .inv(FieldElement::new(a1))
                        .expect("pivot product is nonzero");
                    self.row_op(RowOp::Scale { row: partner, scalar });
                }
            },
        }
        debug_assert_eq!(self.matrix.symplectic_product(start, partner), 1);
        Ok(())
    }

    /// Brings the pair at rows `start`, `start + 1` to `(e_t | 0), (0 | e_t)`
    /// and removes column `t` from every later row.
    fn clear_pair(&mut self, start: usize, t: usize) {
        let (u, v) = (start, start + 1);
        self.clear_to_x(u, t);
        self.clear_partner(v, t);
        let coeff = self.alpha(v, t);
        self.eliminate(v, u, coeff);
        for w in v + 1..self.matrix.row_count() {
            let (ax, bz) = (self.alpha(w, t), self.beta(w, t));
            self.eliminate(w, u, ax);
            self.eliminate(w, v, bz);
        }
    }

    /// Column operations on qudits `t..` turning `row` into `(e_t | 0)`.
    fn clear_to_x(&mut self, row: usize, t: usize) {
        let n = self.matrix.n();
        if self.alpha(row, t).is_zero() {
            if let Some(j) = (t + 1..n).find(|&j| !self.alpha(row, j).is_zero()) {
                self.gate(CliffordOp::Add { control: j, target: t });
            } else if !self.beta(row, t).is_zero() {
                self.gate(CliffordOp::Dft { target: t });
            } else {
                let j = (t + 1..n)
                    .find(|&j| !self.beta(row, j).is_zero())
                    .expect("independent row has support beyond the cleared columns");
                self.gate(CliffordOp::Dft { target: j });
                self.gate(CliffordOp::Add { control: j, target: t });
            }
        }
        let lead = self.alpha(row, t);
        if lead != FieldElement::ONE {
            self.gate(CliffordOp::Mul { target: t, gamma: lead });
        }
        for j in t + 1..n {
            let a = self.alpha(row, j).value();
            self.gate_times(CliffordOp::Add { control: t, target: j }, a);
        }
        let diag = self.beta(row, t);
        if !diag.is_zero() {
            let gamma = self.ctx.neg(diag);
            self.gate(CliffordOp::Phase { target: t, gamma });
        }
        for j in t + 1..n {
            if !self.beta(row, j).is_zero() {
                self.gate(CliffordOp::Dft { target: j });
                let a = self.alpha(row, j).value();
                self.gate_times(CliffordOp::Add { control: t, target: j }, a);
            }
        }
        debug_assert_eq!(self.row(row), &unit_x(n, t));
    }

    /// Given `(e_t | 0)` in the row above, clears the partner row on qudits
    /// `t+1..` with gates that fix the pivot row. Leaves `β_t = 1` and a
    /// possibly nonzero `α_t`.
    fn clear_partner(&mut self, row: usize, t: usize) {
        let n = self.matrix.n();
        for j in t + 1..n {
            self.isolate_z(row, j);
            let b = self.beta(row, j);
            if !b.is_zero() {
                let times = self.ctx.neg(b).value();
                self.gate_times(CliffordOp::Add { control: j, target: t }, times);
            }
        }
        debug_assert_eq!(self.beta(row, t), FieldElement::ONE);
    }

    /// Single-qudit gates on qudit `j` that leave `row` with `α_j = 0`.
    fn isolate_z(&mut self, row: usize, j: usize) {
        let a = self.alpha(row, j);
        if a.is_zero() {
            return;
        }
        let b = self.beta(row, j);
        if !b.is_zero() {
            let ratio = self.ctx.div(b, a).expect("alpha is nonzero");
            self.gate(CliffordOp::Phase { target: j, gamma: self.ctx.neg(ratio) });
        }
        self.gate(CliffordOp::Dft { target: j });
    }

    /// Turns an isotropic row into `(0 | e_t)` and removes column `t` from the
    /// rows below it.
    fn clear_isotropic(&mut self, row: usize, t: usize) {
        let n = self.matrix.n();
        for j in t..n {
            self.isolate_z(row, j);
        }
        if self.beta(row, t).is_zero() {
            let j = (t + 1..n)
                .find(|&j| !self.beta(row, j).is_zero())
                .expect("independent row has support beyond the cleared columns");
            self.gate(CliffordOp::Add { control: t, target: j });
        }
        let lead = self.beta(row, t);
        if lead != FieldElement::ONE {
            let gamma = self.ctx.inv(lead).expect("lead is nonzero");
            self.gate(CliffordOp::Mul { target: t, gamma });
        }
        for j in t + 1..n {
            let b = self.beta(row, j);
            if !b.is_zero() {
                let times = self.ctx.neg(b).value();
                self.gate_times(CliffordOp::Add { control: j, target: t }, times);
            }
        }
        debug_assert_eq!(self.row(row), &unit_z(n, t));
        for w in row + 1..self.matrix.row_count() {
            debug_assert!(self.alpha(w, t).is_zero(), "isotropic rows stay orthogonal");
            let coeff = self.beta(w, t);
            self.eliminate(w, row, coeff);
        }
    }
}

fn unit_x(n: usize, t: usize) -> PauliRow {
    PauliRow::single_x(n, t, FieldElement::ONE)
}

fn unit_z(n: usize, t: usize) -> PauliRow {
    PauliRow::single_z(n, t, FieldElement::ONE)
}

/// The canonical matrix for `c` pairs and `a` isotropic rows on `n` qudits.
pub fn canonical_form(ctx: &FieldCtx, n: usize, c: usize, a: usize) -> CheckMatrix {
    let mut rows = Vec::with_capacity(2 * c + a);
    for t in 0..c {
        rows.push(unit_x(n, t));
        rows.push(unit_z(n, t));
    }
    for t in c..c + a {
        rows.push(unit_z(n, t));
    }
    CheckMatrix::new(ctx, n, rows).expect("canonical rows are well formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5_example() -> CheckMatrix {
        CheckMatrix::parse(
            "EACM 5 1 4 4
             3 1 1 0 | 1 2 0 2
             0 3 0 4 | 2 4 1 3
             1 1 0 2 | 3 1 1 2
             2 3 1 0 | 4 0 1 3",
        )
        .unwrap()
    }

    fn f7_example() -> CheckMatrix {
        CheckMatrix::parse(
            "EACM 7 1 5 4
             2 1 0 4 3 | 6 1 5 1 2
             1 2 1 2 2 | 3 2 1 4 1
             0 2 4 1 0 | 2 1 4 5 2
             4 2 1 0 5 | 0 1 0 3 2",
        )
        .unwrap()
    }

    #[test]
    fn multipliers() {
        assert_eq!(normalize_pair(5, 2, 4).unwrap(), 1);
        assert_eq!(normalize_pair(5, 1, 3).unwrap(), 0);
        assert_eq!(normalize_pair(7, 0, 3).unwrap(), 5);
        assert_eq!(normalize_pair(7, 2, 0), Err(ReductionError::ZeroA2));
    }

    #[test]
    fn params() {
        assert_eq!(code_params(4, 4, 1).unwrap(), (2, 1));
        assert_eq!(code_params(5, 4, 2).unwrap(), (0, 3));
        assert_eq!(code_params(6, 6, 0).unwrap(), (6, 0));
        assert!(code_params(2, 5, 1).is_err());
        assert!(code_params(4, 1, 1).is_err());
    }

    #[test]
    fn f5_reduces_in_both_modes() {
        let ctx = FieldCtx::prime(5).unwrap();
        for mode in [Mode::Strict, Mode::Normalized] {
            let res = reduce(&f5_example(), mode).unwrap();
            assert_eq!((res.c, res.a, res.k), (1, 2, 1));
            assert_eq!(res.canonical, canonical_form(&ctx, 4, 1, 2));
            assert_eq!(res.label(), "[[4,1;1]]_5");
            assert_eq!(res.oplog[0], Op::Row(RowOp::AddMul { dest: 1, src: 2, scalar: FieldElement::ONE }));
        }
    }

    #[test]
    fn f7_fails_strict_and_succeeds_normalized() {
        assert_eq!(
            reduce(&f7_example(), Mode::Strict),
            Err(ReductionError::NotConstructible { pair: 2, product: 2 })
        );
        let res = reduce(&f7_example(), Mode::Normalized).unwrap();
        assert_eq!((res.c, res.a, res.k), (2, 0, 3));
        assert!(res.augmented.is_abelian());
    }

    #[test]
    fn canonical_input_needs_no_gates() {
        let ctx = FieldCtx::prime(3).unwrap();
        let m = canonical_form(&ctx, 5, 2, 1);
        let res = reduce(&m, Mode::Strict).unwrap();
        assert!(res.oplog.is_empty());
        assert_eq!((res.c, res.a, res.k), (2, 1, 2));
    }

    #[test]
    fn rejects_bad_inputs() {
        let f4 = FieldCtx::new(2, 2, None).unwrap();
        let m = CheckMatrix::from_values(&f4, &[(&[1], &[0])]).unwrap();
        assert_eq!(reduce(&m, Mode::Strict), Err(ReductionError::NonPrimeField { p: 2, m: 2 }));
        let f3 = FieldCtx::prime(3).unwrap();
        let dep = CheckMatrix::from_values(&f3, &[(&[1, 2], &[0, 1]), (&[2, 1], &[0, 2])]).unwrap();
        assert_eq!(reduce(&dep, Mode::Normalized), Err(ReductionError::DependentRows));
    }

    #[test]
    fn augmentation() {
        let ctx = FieldCtx::prime(7).unwrap();
        let aug = augment_ebits(&canonical_form(&ctx, 2, 1, 0), 1);
        assert_eq!(aug.row(0), &PauliRow::from_values(&[1, 0, 1], &[0, 0, 0]));
        assert_eq!(aug.row(1), &PauliRow::from_values(&[0, 0, 0], &[1, 0, 6]));
        assert!(aug.is_abelian());
        let plain = canonical_form(&ctx, 3, 0, 2);
        assert_eq!(augment_ebits(&plain, 0), plain);
    }

    #[test]
    fn replay_reproduces_canonical() {
        for m in [f5_example(), f7_example()] {
            let res = reduce(&m, Mode::Normalized).unwrap();
            assert_eq!(m.replay(&res.oplog).unwrap(), res.canonical);
            assert_eq!(2 * res.c, 2 * min_ebits(&m));
        }
    }

    #[test]
    fn single_leftover_row() {
        // One pair plus one isotropic Z-type row that needs a swap of sides.
        let ctx = FieldCtx::prime(3).unwrap();
        let m = CheckMatrix::from_values(
            &ctx,
            &[(&[0, 1, 0], &[0, 0, 0]), (&[0, 0, 2], &[0, 0, 0]), (&[0, 0, 0], &[0, 1, 0])],
        )
        .unwrap();
        let res = reduce(&m, Mode::Strict).unwrap();
        assert_eq!((res.c, res.a, res.k), (1, 1, 1));
        assert_eq!(res.canonical, canonical_form(&ctx, 3, 1, 1));
    }
}

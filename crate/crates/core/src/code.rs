//! Entanglement-assisted code semantics on top of a reduction.
//!
//! Generators come in two groups: hyperbolic pairs `(X̄ⁱ, Z̄ⁱ)`, one per
//! ebit, and isotropic generators, one per ancilla. The code's generators
//! are kept in the encoded frame: the input rows after the reduction's row
//! operations, which span the same group as the input and already carry
//! the pair grouping. Membership tests work over the F_p-span of rows.

use thiserror::Error;

use crate::check_matrix::{CheckMatrix, MatrixError, Op};
use crate::field::{FieldCtx, FieldElement};
use crate::format::{self, ParseError};
use crate::linalg;
use crate::pauli::{symplectic_product, PauliRow};
use crate::reduction::ReductionResult;

/// Upper bound on error pairs examined by [`is_correctable`].
pub const MAX_PAIRS: usize = 1_000_000;

#[derive(Debug, Error)]
pub enum CodeError {
    #[error("bad generator grouping: {0}")]
    BadGrouping(String),
    #[error("error acts on receiver qudit {qudit}; the channel only touches qudits 1..={n}")]
    ErrorOnBobQudit { qudit: usize, n: usize },
    #[error("{pairs} error pairs exceed the limit of {max}")]
    TooLarge { pairs: usize, max: usize },
    #[error("parity-check matrix has no rows")]
    EmptyMatrix,
    #[error("row has {found} qudits, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// Whether `x_bar` and `z_bar` satisfy the EA commutation relations: all
/// products vanish except `X̄ⁱ ⊙ Z̄ⁱ = 1` for `i < x_bar.len()`.
pub fn check_eq4(ctx: &FieldCtx, x_bar: &[PauliRow], z_bar: &[PauliRow]) -> Result<bool, CodeError> {
    if x_bar.len() > z_bar.len() {
        return Err(CodeError::BadGrouping(format!(
            "{} X rows but only {} Z rows",
            x_bar.len(),
            z_bar.len()
        )));
    }
    let n = x_bar.iter().chain(z_bar).map(PauliRow::n).next().unwrap_or(0);
    if let Some(bad) = x_bar.iter().chain(z_bar).find(|r| r.n() != n) {
        return Err(CodeError::BadGrouping(format!("rows of {} and {} qudits", n, bad.n())));
    }
    let prod = |g: &PauliRow, h: &PauliRow| symplectic_product(ctx, g, h).expect("lengths checked");
    for (i, zi) in z_bar.iter().enumerate() {
        if z_bar[i + 1..].iter().any(|zj| prod(zi, zj) != 0) {
            return Ok(false);
        }
    }
    for (i, xi) in x_bar.iter().enumerate() {
        if x_bar[i + 1..].iter().any(|xj| prod(xi, xj) != 0) {
            return Ok(false);
        }
        for (j, zj) in z_bar.iter().enumerate() {
            if prod(xi, zj) != u32::from(i == j) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Whether `g` lies in the F_p-span of `generators`, ignoring phases.
pub fn in_group(g: &PauliRow, generators: &CheckMatrix) -> Result<bool, CodeError> {
    check_len(g, generators.n())?;
    let ctx = generators.ctx();
    if g.is_identity() {
        return Ok(true);
    }
    Ok(linalg::solve_combination(&generators.fp_rows(), &g.to_fp_vector(ctx), ctx.p()).is_some())
}

/// Whether `g` commutes with every generator.
pub fn in_centralizer(g: &PauliRow, generators: &CheckMatrix) -> Result<bool, CodeError> {
    check_len(g, generators.n())?;
    let ctx = generators.ctx();
    Ok(generators
        .rows()
        .iter()
        .all(|h| symplectic_product(ctx, g, h).expect("lengths checked") == 0))
}

fn check_len(g: &PauliRow, n: usize) -> Result<(), CodeError> {
    if g.n() == n {
        Ok(())
    } else {
        Err(CodeError::DimensionMismatch { expected: n, found: g.n() })
    }
}

/// Symplectic products of an error with each augmented generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Syndrome(pub Vec<u32>);

impl Syndrome {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&s| s == 0)
    }
}

impl std::fmt::Display for Syndrome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(" "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EACode {
    pub n: usize,
    pub k: usize,
    pub c: usize,
    pub a: usize,
    /// Canonical generators before ebit columns are added.
    pub canonical: CheckMatrix,
    /// Encoded-frame generators on `n + c` qudits: rows `2i, 2i+1` are the
    /// pair `(X̄ⁱ, Z̄ⁱ)`, the last `a` rows are isotropic.
    pub augmented: CheckMatrix,
    pub pairs: Vec<(usize, usize)>,
    pub isotropic: Vec<usize>,
    pub oplog: Vec<Op>,
}

impl EACode {
    pub fn from_reduction(result: &ReductionResult) -> Self {
        let ctx = result.ctx().clone();
        let n = result.n();
        let c = result.c;
        let mut rows = result.input.rows().to_vec();
        for op in result.row_ops() {
            op.apply_to(&mut rows, |d, s, k| d.add_scaled(&ctx, s, k), |r, k| r.scale(&ctx, k));
        }
        let rows = rows
            .into_iter()
            .zip(result.augmented.rows())
            .map(|(row, canon)| {
                let mut r = row.extended(c);
                r.alpha[n..].copy_from_slice(&canon.alpha[n..]);
                r.beta[n..].copy_from_slice(&canon.beta[n..]);
                r
            })
            .collect();
        let augmented = CheckMatrix::new(&ctx, n + c, rows).expect("encoded rows are well formed");
        EACode {
            n,
            k: result.k,
            c,
            a: result.a,
            canonical: result.canonical.clone(),
            augmented,
            pairs: (0..c).map(|i| (2 * i, 2 * i + 1)).collect(),
            isotropic: (2 * c..2 * c + result.a).collect(),
            oplog: result.oplog.clone(),
        }
    }

    pub fn ctx(&self) -> &FieldCtx {
        self.augmented.ctx()
    }

    /// `[[n,k;c]]_q`
    pub fn label(&self) -> String {
        format!("[[{},{};{}]]_{}", self.n, self.k, self.c, self.ctx().q())
    }

    /// The `X̄` and `Z̄` groups of `matrix`, using this code's row layout.
    pub fn grouping(&self, matrix: &CheckMatrix) -> (Vec<PauliRow>, Vec<PauliRow>) {
        let x_bar = self.pairs.iter().map(|&(x, _)| matrix.row(x).clone()).collect();
        let z_bar = self
            .pairs
            .iter()
            .map(|&(_, z)| z)
            .chain(self.isotropic.iter().copied())
            .map(|i| matrix.row(i).clone())
            .collect();
        (x_bar, z_bar)
    }

    /// Encoded-frame generators restricted to the sender's `n` qudits.
    pub fn sender_generators(&self) -> CheckMatrix {
        let n = self.n;
        let rows = self
            .augmented
            .rows()
            .iter()
            .map(|r| PauliRow {
                alpha: r.alpha[..n].to_vec(),
                beta: r.beta[..n].to_vec(),
            })
            .collect();
        CheckMatrix::new(self.ctx(), n, rows).expect("rows are well formed")
    }

    pub fn isotropic_generators(&self) -> CheckMatrix {
        let rows = self.isotropic.iter().map(|&i| self.augmented.row(i).clone()).collect();
        CheckMatrix::new(self.ctx(), self.n + self.c, rows).expect("rows are well formed")
    }

    /// Pads an error on `n` qudits with identity on the receiver, or checks
    /// that an `n + c` qudit error leaves the receiver alone.
    pub fn channel_error(&self, error: &PauliRow) -> Result<PauliRow, CodeError> {
        let n = self.n;
        match error.n() {
            len if len == n => Ok(error.extended(self.c)),
            len if len == n + self.c => {
                let hit = (n..len).find(|&i| !error.alpha[i].is_zero() || !error.beta[i].is_zero());
                match hit {
                    Some(i) => Err(CodeError::ErrorOnBobQudit { qudit: i + 1, n }),
                    None => Ok(error.clone()),
                }
            }
            found => Err(CodeError::DimensionMismatch { expected: n, found }),
        }
    }

    pub fn syndrome(&self, error: &PauliRow) -> Result<Syndrome, CodeError> {
        let e = self.channel_error(error)?;
        let ctx = self.ctx();
        Ok(Syndrome(
            self.augmented
                .rows()
                .iter()
                .map(|g| symplectic_product(ctx, &e, g).expect("lengths match"))
                .collect(),
        ))
    }

    /// Every pair of errors either differs by an isotropic element or is
    /// distinguished by some generator.
    pub fn is_correctable(&self, errors: &[PauliRow]) -> Result<bool, CodeError> {
        let pairs = errors.len().saturating_mul(errors.len().saturating_add(1)) / 2;
        if pairs > MAX_PAIRS {
            return Err(CodeError::TooLarge { pairs, max: MAX_PAIRS });
        }
        let ctx = self.ctx().clone();
        let padded = errors
            .iter()
            .map(|e| self.channel_error(e))
            .collect::<Result<Vec<_>, _>>()?;
        let isotropic = self.isotropic_generators();
        for (i, e1) in padded.iter().enumerate() {
            for e2 in &padded[i + 1..] {
                let diff = e2.sub(&ctx, e1);
                if in_group(&diff, &isotropic)? {
                    continue;
                }
                if in_centralizer(&diff, &self.augmented)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Free function form of [`EACode::is_correctable`].
pub fn is_correctable(errors: &[PauliRow], code: &EACode) -> Result<bool, CodeError> {
    code.is_correctable(errors)
}

/// A classical parity-check matrix over `F_q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalMatrix {
    ctx: FieldCtx,
    n: usize,
    rows: Vec<Vec<FieldElement>>,
}

impl ClassicalMatrix {
    pub fn new(ctx: &FieldCtx, n: usize, rows: Vec<Vec<FieldElement>>) -> Result<Self, CodeError> {
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(CodeError::DimensionMismatch { expected: n, found: bad.len() });
        }
        Ok(ClassicalMatrix { ctx: ctx.clone(), n, rows })
    }

    pub fn from_values(ctx: &FieldCtx, rows: &[&[u32]]) -> Result<Self, CodeError> {
        let n = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&v| {
                        ctx.element(u64::from(v))
                            .map_err(|_| MatrixError::EntryOutOfRange { value: v, order: ctx.q() })
                    })
                    .collect::<Result<Vec<_>, _>>()
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

    pub fn rows(&self) -> &[Vec<FieldElement>] {
        &self.rows
    }

    /// Parses `CLSC`, or `EACM` whose right-hand side is all zero.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let keyword = format::detect_keyword(text);
        let is_eacm = keyword.as_deref() == Some("EACM");
        let doc = format::parse_document(text, if is_eacm { "EACM" } else { "CLSC" })?;
        let n = doc.n;
        let mut rows = Vec::with_capacity(doc.r);
        for line in &doc.rows {
            let expected = if is_eacm { 2 * n + 1 } else { n };
            if line.len() != expected {
                let at = line.get(expected).unwrap_or(&line[line.len() - 1]);
                return Err(at.error(format!("expected {expected} entries, found {}", line.len())));
            }
            if is_eacm {
                if line[n].text != "|" {
                    return Err(line[n].error("expected `|` separating the two halves"));
                }
                for tok in &line[n + 1..] {
                    if !tok.element(&doc.ctx)?.is_zero() {
                        return Err(tok.error("a classical matrix must have an all-zero right half"));
                    }
                }
            }
            rows.push(line[..n].iter().map(|t| t.element(&doc.ctx)).collect::<Result<Vec<_>, _>>()?);
        }
        Ok(ClassicalMatrix { ctx: doc.ctx, n, rows })
    }

    pub fn to_text(&self) -> String {
        let mut out = format::header_text("CLSC", &self.ctx, self.n, self.rows.len());
        for row in &self.rows {
            let parts: Vec<String> = row.iter().map(|e| e.value().to_string()).collect();
            out.push_str(&parts.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Rows `(Hᵢ | 0)` for every parity check, then `(0 | Hᵢ)`.
pub fn css_import(h: &ClassicalMatrix) -> Result<CheckMatrix, CodeError> {
    if h.rows.is_empty() {
        return Err(CodeError::EmptyMatrix);
    }
    let zero = vec![FieldElement::ZERO; h.n];
    let x_rows = h.rows.iter().map(|r| PauliRow { alpha: r.clone(), beta: zero.clone() });
    let z_rows = h.rows.iter().map(|r| PauliRow { alpha: zero.clone(), beta: r.clone() });
    Ok(CheckMatrix::new(&h.ctx, h.n, x_rows.chain(z_rows).collect())?)
}

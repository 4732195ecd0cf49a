//! Entanglement-assisted stabilizer codes over qudits of prime-power dimension.

pub mod check_matrix;
pub mod code;
pub mod circuit;
pub mod field;
pub mod format;
pub mod linalg;
pub mod oracle;
pub mod pauli;
pub mod reduction;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/fields.md")]
    mod fields {}
    #[doc = include_str!("../../../book/src/paulis.md")]
    mod paulis {}
    #[doc = include_str!("../../../book/src/check-matrices.md")]
    mod check_matrices {}
    #[doc = include_str!("../../../book/src/reduction.md")]
    mod reduction {}
    #[doc = include_str!("../../../book/src/circuits.md")]
    mod circuits {}
    #[doc = include_str!("../../../book/src/ea-codes.md")]
    mod ea_codes {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
}

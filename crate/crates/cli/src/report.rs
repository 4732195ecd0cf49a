use serde::{Deserialize, Serialize};

use qudit_ea::reduction::ReductionResult;

/// Machine-readable summary of one run, printed by `--json`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    /// SHA-256 of the input file, lowercase hex.
    pub input_digest: String,
    pub mode: String,
    pub params: Params,
    pub label: String,
    /// Canonical matrix in EACM text form.
    pub canonical: String,
    pub op_counts: OpCounts,
    pub verdicts: Vec<Verdict>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    pub n: usize,
    pub k: usize,
    pub c: usize,
    pub a: usize,
    pub p: u32,
    pub m: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpCounts {
    pub row: usize,
    pub clifford: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub passed: bool,
    /// Not evaluated, e.g. past the oracle's dimension limit.
    #[serde(default)]
    pub skipped: bool,
    pub detail: String,
}

impl Verdict {
    pub fn check(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Verdict { name: name.into(), passed, skipped: false, detail: detail.into() }
    }

    pub fn skip(name: &str, detail: impl Into<String>) -> Self {
        Verdict { name: name.into(), passed: true, skipped: true, detail: detail.into() }
    }
}

impl RunReport {
    pub fn new(digest: &str, result: &ReductionResult, verdicts: Vec<Verdict>) -> Self {
        let ctx = result.ctx();
        RunReport {
            input_digest: digest.into(),
            mode: result.mode.to_string(),
            params: Params {
                n: result.n(),
                k: result.k,
                c: result.c,
                a: result.a,
                p: ctx.p(),
                m: ctx.m(),
            },
            label: result.label(),
            canonical: result.canonical.to_text(),
            op_counts: OpCounts {
                row: result.row_ops().count(),
                clifford: result.clifford_ops().count(),
            },
            verdicts,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use qudit_ea::check_matrix::CheckMatrix;
    use qudit_ea::reduction::{reduce, Mode};

    #[test]
    fn json_round_trip() {
        let m = CheckMatrix::parse("EACM 3 1 2 2\n1 0 | 0 0\n0 0 | 1 0\n").unwrap();
        let result = reduce(&m, Mode::Strict).unwrap();
        let report = RunReport::new(
            "00",
            &result,
            vec![Verdict::check("abelian", true, "ok"), Verdict::skip("subspace_dim", "too big")],
        );
        let text = serde_json::to_string(&report).unwrap();
        assert_eq!(serde_json::from_str::<RunReport>(&text).unwrap(), report);
        assert_eq!(report.label, "[[2,1;1]]_3");
        assert!(report.all_passed());
    }
}

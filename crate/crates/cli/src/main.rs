//! `qudit-ea`: reduce check matrices to entanglement-assisted canonical form,
//! synthesize encoding circuits and check them.
//!
//! Exit codes: 0 success, 2 input error, 3 not constructible, 4 verification
//! failure.

mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use qudit_ea::check_matrix::{CheckMatrix, CliffordOp};
use qudit_ea::circuit::{synthesize_encoding_circuit, Circuit, CircuitError};
use qudit_ea::code::{css_import, ClassicalMatrix, CodeError, EACode};
use qudit_ea::field::{FieldCtx, FieldElement};
use qudit_ea::format::detect_keyword;
use qudit_ea::oracle::{self, OracleError};
use qudit_ea::pauli::{symplectic_product, PauliOperator, PauliRow};
use qudit_ea::reduction::{min_ebits, reduce, Mode, ReductionError, ReductionResult};

use report::{RunReport, Verdict};

const EXIT_INPUT: u8 = 2;
const EXIT_NOT_CONSTRUCTIBLE: u8 = 3;
const EXIT_VERIFY: u8 = 4;

#[derive(Parser)]
#[command(name = "qudit-ea", version, about = "Entanglement-assisted qudit stabilizer codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    /// EACM check matrix, or a CLSC parity-check matrix (imported as CSS)
    file: PathBuf,
    #[arg(long, default_value_t = Mode::Strict)]
    mode: Mode,
    /// Print a JSON report instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce to canonical form and report code parameters
    Reduce(Common),
    /// Write the encoding circuit as JSON
    Circuit {
        #[command(flatten)]
        common: Common,
        /// Output path; stdout when absent
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check the reduction, its circuit and the code's invariants
    Verify {
        #[command(flatten)]
        common: Common,
        /// Circuit file to check against the reduction
        #[arg(long)]
        circuit: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random symplectic-preservation trials
        #[arg(long, default_value_t = 64)]
        trials: usize,
    },
    /// Cross-check against explicit complex matrices
    Oracle {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = oracle::MAX_DIM)]
        max_dim: usize,
    },
    /// Import a classical parity-check matrix as a CSS-form code
    Css(Common),
    /// Syndrome of an error given as `X:<qudit>:<elem>,Z:<qudit>:<elem>,...`
    Syndrome {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        error: String,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl ToString) -> Self {
        Failure { code: EXIT_INPUT, message: message.to_string() }
    }
}

impl From<ReductionError> for Failure {
    fn from(err: ReductionError) -> Self {
        let code = match err {
            ReductionError::NotConstructible { .. } => EXIT_NOT_CONSTRUCTIBLE,
            _ => EXIT_INPUT,
        };
        Failure { code, message: err.to_string() }
    }
}

impl From<CircuitError> for Failure {
    fn from(err: CircuitError) -> Self {
        let code = match err {
            CircuitError::PostconditionFailed => EXIT_VERIFY,
            _ => EXIT_INPUT,
        };
        Failure { code, message: err.to_string() }
    }
}

impl From<CodeError> for Failure {
    fn from(err: CodeError) -> Self {
        Failure::input(err)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

struct Loaded {
    digest: String,
    matrix: CheckMatrix,
}

fn load(path: &Path) -> Result<Loaded, Failure> {
    let bytes = fs::read(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| Failure::input("input is not UTF-8"))?;
    let matrix = if detect_keyword(&text).as_deref() == Some("CLSC") {
        let h = ClassicalMatrix::parse(&text).map_err(Failure::input)?;
        css_import(&h)?
    } else {
        CheckMatrix::parse(&text).map_err(Failure::input)?
    };
    Ok(Loaded {
        digest: format!("{:x}", Sha256::digest(&bytes)),
        matrix,
    })
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Reduce(common) => {
            let (loaded, result) = load_and_reduce(&common)?;
            let report = RunReport::new(&loaded.digest, &result, Vec::new());
            emit(&report, common.json, || describe(&result));
            Ok(0)
        }
        Command::Css(common) => {
            let bytes = fs::read(&common.file)
                .map_err(|e| Failure::input(format!("{}: {e}", common.file.display())))?;
            let text = String::from_utf8_lossy(&bytes);
            let h = ClassicalMatrix::parse(&text).map_err(Failure::input)?;
            let matrix = css_import(&h)?;
            let result = reduce(&matrix, common.mode)?;
            let digest = format!("{:x}", Sha256::digest(&bytes));
            let report = RunReport::new(&digest, &result, Vec::new());
            emit(&report, common.json, || {
                format!("{}\nimported check matrix:\n{}", result.label(), matrix.to_text())
            });
            Ok(0)
        }
        Command::Circuit { common, output } => {
            let (_, result) = load_and_reduce(&common)?;
            let circuit = synthesize_encoding_circuit(&result)?;
            let json = circuit.to_json();
            match output {
                Some(path) => fs::write(&path, json + "\n")
                    .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?,
                None => println!("{json}"),
            }
            Ok(0)
        }
        Command::Verify { common, circuit, seed, trials } => {
            let (loaded, result) = load_and_reduce(&common)?;
            let mut verdicts = invariant_verdicts(&result);
            verdicts.push(random_preservation(&result, seed, trials));
            if let Some(path) = circuit {
                verdicts.push(check_circuit_file(&path, &result)?);
            }
            finish(RunReport::new(&loaded.digest, &result, verdicts), common.json)
        }
        Command::Oracle { common, max_dim } => {
            if max_dim > oracle::MAX_DIM {
                return Err(Failure::input(format!("--max-dim may be at most {}", oracle::MAX_DIM)));
            }
            let (loaded, result) = load_and_reduce(&common)?;
            let verdicts = oracle_verdicts(&result, max_dim);
            finish(RunReport::new(&loaded.digest, &result, verdicts), common.json)
        }
        Command::Syndrome { common, error } => {
            let (_, result) = load_and_reduce(&common)?;
            let code = EACode::from_reduction(&result);
            let row = parse_error_spec(&error, result.ctx(), code.n, code.c)?;
            let syndrome = code.syndrome(&row)?;
            if common.json {
                println!("{}", serde_json::json!({ "label": code.label(), "syndrome": syndrome.0 }));
            } else {
                println!("{syndrome}");
            }
            Ok(0)
        }
    }
}

fn load_and_reduce(common: &Common) -> Result<(Loaded, ReductionResult), Failure> {
    let loaded = load(&common.file)?;
    let result = reduce(&loaded.matrix, common.mode)?;
    Ok((loaded, result))
}

fn emit(report: &RunReport, json: bool, text: impl FnOnce() -> String) {
    if json {
        println!("{}", serde_json::to_string_pretty(report).expect("report serializes"));
    } else {
        println!("{}", text());
    }
}

fn finish(report: RunReport, json: bool) -> Result<u8, Failure> {
    let ok = report.all_passed();
    emit(&report, json, || {
        let mut out = report.label.clone();
        for v in &report.verdicts {
            let status = if v.skipped {
                "SKIP"
            } else if v.passed {
                "ok"
            } else {
                "FAIL"
            };
            out.push_str(&format!("\n{status:>4}  {}: {}", v.name, v.detail));
        }
        out
    });
    Ok(if ok { 0 } else { EXIT_VERIFY })
}

fn describe(result: &ReductionResult) -> String {
    let n = result.n();
    let mut out = format!(
        "{}\nmode {}: c={} a={} k={}\ncanonical:\n{}",
        result.label(),
        result.mode,
        result.c,
        result.a,
        result.k,
        result.canonical.to_text()
    );
    if result.c > 0 {
        out.push_str("receiver columns:\n");
        for row in result.augmented.rows() {
            let a: Vec<String> = row.alpha[n..].iter().map(|e| e.value().to_string()).collect();
            let b: Vec<String> = row.beta[n..].iter().map(|e| e.value().to_string()).collect();
            out.push_str(&format!("{} | {}\n", a.join(" "), b.join(" ")));
        }
    }
    out.push_str(&format!(
        "operations: {} row, {} clifford",
        result.row_ops().count(),
        result.clifford_ops().count()
    ));
    out
}

fn invariant_verdicts(result: &ReductionResult) -> Vec<Verdict> {
    let mut out = Vec::new();
    let replayed = result.input.replay(&result.oplog);
    out.push(Verdict::check(
        "replay",
        matches!(&replayed, Ok(m) if *m == result.canonical),
        "input replayed through the operation log equals the canonical matrix",
    ));
    out.push(Verdict::check(
        "abelian",
        result.augmented.is_abelian(),
        "augmented canonical generators pairwise commute",
    ));
    let gram = min_ebits(&result.input);
    out.push(Verdict::check(
        "gram_rank",
        gram == result.c,
        format!("half the Gram rank is {gram}, ebits used {}", result.c),
    ));
    out.push(Verdict::check(
        "params",
        result.k + result.a + result.c == result.n(),
        format!("n={} k={} a={} c={}", result.n(), result.k, result.a, result.c),
    ));
    let code = EACode::from_reduction(result);
    let (x_bar, z_bar) = code.grouping(&code.sender_generators());
    let eq4 = qudit_ea::code::check_eq4(result.ctx(), &x_bar, &z_bar).unwrap_or(false);
    out.push(Verdict::check("commutation_relations", eq4, "pair and isotropic relations hold"));
    match synthesize_encoding_circuit(result) {
        Ok(c) => out.push(Verdict::check(
            "row_space",
            true,
            format!("{}-gate circuit maps the augmented canonical group onto the encoded group", c.gates.len()),
        )),
        Err(e) => out.push(Verdict::check("row_space", false, e.to_string())),
    }
    out
}

fn random_preservation(result: &ReductionResult, seed: u64, trials: usize) -> Verdict {
    let ctx = result.ctx();
    let width = result.n() + result.c;
    let gates: Vec<CliffordOp> = result.clifford_ops().copied().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random_row = |rng: &mut ChaCha8Rng| {
        let values: Vec<u32> = (0..2 * width).map(|_| rng.gen_range(0..ctx.q())).collect();
        PauliRow::from_values(&values[..width], &values[width..])
    };
    for trial in 0..trials {
        let mut g = random_row(&mut rng);
        let mut h = random_row(&mut rng);
        let before = symplectic_product(ctx, &g, &h).expect("equal widths");
        for gate in &gates {
            gate.act(ctx, &mut g);
            gate.act(ctx, &mut h);
        }
        let after = symplectic_product(ctx, &g, &h).expect("equal widths");
        if before != after {
            return Verdict::check(
                "symplectic_preservation",
                false,
                format!("trial {trial} (seed {seed}): product {before} became {after}"),
            );
        }
    }
    Verdict::check(
        "symplectic_preservation",
        true,
        format!("{trials} random pairs preserved (seed {seed})"),
    )
}

fn check_circuit_file(path: &Path, result: &ReductionResult) -> Result<Verdict, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let circuit = Circuit::from_json(&text)?;
    let ctx = result.ctx();
    if (circuit.p, circuit.m, circuit.n, circuit.c) != (ctx.p(), ctx.m(), result.n(), result.c) {
        return Ok(Verdict::check(
            "circuit_file",
            false,
            format!(
                "circuit is for p={} m={} n={} c={}, code has p={} m={} n={} c={}",
                circuit.p,
                circuit.m,
                circuit.n,
                circuit.c,
                ctx.p(),
                ctx.m(),
                result.n(),
                result.c
            ),
        ));
    }
    let ok = circuit.verify_encoding(result)?;
    Ok(Verdict::check(
        "circuit_file",
        ok,
        format!("{} gates from {}", circuit.gates.len(), path.display()),
    ))
}

fn oracle_verdicts(result: &ReductionResult, max_dim: usize) -> Vec<Verdict> {
    let ctx = result.ctx();
    let width = result.n() + result.c;
    let q = u64::from(ctx.q());
    let expected = q.pow(result.k as u32);
    let code = EACode::from_reduction(result);
    let mut out = Vec::new();
    for (name, matrix) in [("subspace_dim", &code.augmented), ("canonical_subspace_dim", &result.augmented)] {
        out.push(subspace_verdict(name, ctx, width, matrix, expected, max_dim));
    }
    out.push(gate_verdict(result, max_dim));
    if q * q <= max_dim as u64 {
        out.push(ebit_verdict(ctx));
    } else {
        out.push(Verdict::skip("ebit_state", format!("dimension {} exceeds {max_dim}", q * q)));
    }
    out
}

fn subspace_verdict(
    name: &str,
    ctx: &FieldCtx,
    width: usize,
    matrix: &CheckMatrix,
    expected: u64,
    max_dim: usize,
) -> Verdict {
    match oracle::dimension(ctx, width) {
        Ok(dim) if dim <= max_dim => {}
        _ => {
            return Verdict::skip(
                name,
                format!("{}^{} exceeds the dimension limit {max_dim}", ctx.q(), width),
            )
        }
    }
    let generators: Vec<PauliOperator> =
        matrix.rows().iter().map(|r| PauliOperator::from_row(ctx, r.clone())).collect();
    match oracle::stabilized_subspace_dim(ctx, width, &generators) {
        Ok(d) => Verdict::check(
            name,
            d as u64 == expected,
            format!("subspace dim {d} (expected {expected})"),
        ),
        Err(e) => Verdict::check(name, false, e.to_string()),
    }
}

/// Checks each distinct gate of the log on one or two qudits, against the
/// tableau action on every single-qudit X and Z.
fn gate_verdict(result: &ReductionResult, max_dim: usize) -> Verdict {
    let ctx = result.ctx();
    let mut local: Vec<CliffordOp> = result
        .clifford_ops()
        .map(|g| match *g {
            CliffordOp::Dft { .. } => CliffordOp::Dft { target: 0 },
            CliffordOp::Mul { gamma, .. } => CliffordOp::Mul { target: 0, gamma },
            CliffordOp::Phase { gamma, .. } => CliffordOp::Phase { target: 0, gamma },
            CliffordOp::Add { .. } => CliffordOp::Add { control: 0, target: 1 },
        })
        .collect();
    local.sort_by_key(|g| g.to_string());
    local.dedup();
    let mut checked = 0;
    let mut skipped = 0;
    for gate in &local {
        let n = gate.qudits().len();
        match oracle::dimension(ctx, n) {
            Ok(d) if d <= max_dim => {}
            _ => {
                skipped += 1;
                continue;
            }
        }
        if let Err(detail) = gate_matches(ctx, gate, n) {
            return Verdict::check("gate_conjugation", false, format!("{gate}: {detail}"));
        }
        checked += 1;
    }
    if checked == 0 && skipped > 0 {
        return Verdict::skip("gate_conjugation", format!("{skipped} gate kinds exceed the dimension limit"));
    }
    Verdict::check(
        "gate_conjugation",
        true,
        format!("{checked} distinct gates match dense conjugation, {skipped} skipped"),
    )
}

fn gate_matches(ctx: &FieldCtx, gate: &CliffordOp, n: usize) -> Result<(), String> {
    let u = oracle::gate_unitary(ctx, gate, n).map_err(|e| e.to_string())?;
    for t in 0..n {
        for row in [PauliRow::single_x(n, t, FieldElement::ONE), PauliRow::single_z(n, t, FieldElement::ONE)] {
            let (image, _) = oracle::conjugate_to_pauli(&u, &PauliOperator::from_row(ctx, row.clone()))
                .map_err(|e: OracleError| e.to_string())?;
            let mut expected = row;
            gate.act(ctx, &mut expected);
            if image.row != expected {
                return Err(format!("dense image {} but tableau gives {}", image.row, expected));
            }
        }
    }
    Ok(())
}

fn ebit_verdict(ctx: &FieldCtx) -> Verdict {
    let state = match oracle::ebit_state(ctx) {
        Ok(s) => s,
        Err(e) => return Verdict::check("ebit_state", false, e.to_string()),
    };
    let minus_one = ctx.from_int(-1);
    let xx = PauliRow { alpha: vec![FieldElement::ONE; 2], beta: vec![FieldElement::ZERO; 2] };
    let zz = PauliRow { alpha: vec![FieldElement::ZERO; 2], beta: vec![FieldElement::ONE, minus_one] };
    let ok = [xx, zz].into_iter().all(|r| {
        oracle::is_stabilized(&state, &PauliOperator::from_row(ctx, r)).unwrap_or(false)
    });
    Verdict::check("ebit_state", ok, "maximally entangled pair is fixed by X⊗X and Z⊗Z_{p-1}")
}

/// Parses `X:<qudit>:<elem>` / `Z:<qudit>:<elem>` terms separated by commas.
/// Terms on the same qudit accumulate.
fn parse_error_spec(spec: &str, ctx: &FieldCtx, n: usize, c: usize) -> Result<PauliRow, Failure> {
    let mut row = PauliRow::identity(n);
    for term in spec.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let bad = || Failure::input(format!("bad error term `{term}`, expected X:<qudit>:<elem> or Z:<qudit>:<elem>"));
        let parts: Vec<&str> = term.split(':').collect();
        let [kind, qudit, value] = parts[..] else {
            return Err(bad());
        };
        let qudit: usize = qudit.parse().map_err(|_| bad())?;
        let value: u64 = value.parse().map_err(|_| bad())?;
        if qudit > n && qudit <= n + c {
            return Err(CodeError::ErrorOnBobQudit { qudit, n }.into());
        }
        if qudit == 0 || qudit > n {
            return Err(Failure::input(format!("qudit {qudit} out of range 1..={n}")));
        }
        let e = ctx.element(value).map_err(Failure::input)?;
        let slot = match kind {
            "X" => &mut row.alpha[qudit - 1],
            "Z" => &mut row.beta[qudit - 1],
            _ => return Err(bad()),
        };
        *slot = ctx.add(*slot, e);
    }
    Ok(row)
}

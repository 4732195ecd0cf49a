//! Correctability of the [[3,1;2]]_2 CSS code against weight-one X errors,
//! cross-checked by brute force over the full stabilizer group.

use qudit_ea::code::{css_import, ClassicalMatrix, EACode};
use qudit_ea::field::FieldElement;
use qudit_ea::pauli::PauliRow;
use qudit_ea::reduction::{reduce, Mode};

fn code() -> EACode {
    let h = ClassicalMatrix::parse(include_str!("../../../fixtures/css_312.clsc")).unwrap();
    EACode::from_reduction(&reduce(&css_import(&h).unwrap(), Mode::Normalized).unwrap())
}

fn bits(r: &PauliRow) -> Vec<u32> {
    r.alpha.iter().chain(&r.beta).map(|e| e.value()).collect()
}

/// Binary symplectic product on concatenated (x | z) bit vectors.
fn product(a: &[u32], b: &[u32]) -> u32 {
    let n = a.len() / 2;
    (0..n).map(|i| a[i] * b[n + i] + a[n + i] * b[i]).sum::<u32>() % 2
}

/// Every pairwise difference is in the isotropic span or anticommutes with
/// some element of the stabilizer group, both checked by enumeration.
fn brute_force(code: &EACode, errors: &[PauliRow]) -> bool {
    let gens: Vec<Vec<u32>> = code.augmented.rows().iter().map(bits).collect();
    let group: Vec<Vec<u32>> = (0u32..1 << gens.len())
        .map(|mask| {
            let mut acc = vec![0; gens[0].len()];
            for (i, g) in gens.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    acc.iter_mut().zip(g).for_each(|(a, b)| *a ^= b);
                }
            }
            acc
        })
        .collect();
    let iso: Vec<Vec<u32>> = code.isotropic.iter().map(|&i| gens[i].clone()).collect();
    let iso_span: Vec<Vec<u32>> = (0u32..1 << iso.len())
        .map(|mask| {
            let mut acc = vec![0; gens[0].len()];
            for (i, g) in iso.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    acc.iter_mut().zip(g).for_each(|(a, b)| *a ^= b);
                }
            }
            acc
        })
        .collect();
    let padded: Vec<Vec<u32>> = errors.iter().map(|e| bits(&e.extended(code.c))).collect();
    for (i, e1) in padded.iter().enumerate() {
        for e2 in &padded[i + 1..] {
            let d: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a ^ b).collect();
            let harmless = iso_span.contains(&d);
            let detected = group.iter().any(|s| product(&d, s) == 1);
            if !harmless && !detected {
                return false;
            }
        }
    }
    true
}

fn weight_one_x_errors() -> Vec<PauliRow> {
    std::iter::once(PauliRow::identity(3))
        .chain((0..3).map(|q| PauliRow::single_x(3, q, FieldElement::ONE)))
        .collect()
}

#[test]
fn weight_one_x_errors_are_correctable() {
    let code = code();
    let errors = weight_one_x_errors();
    let expected = brute_force(&code, &errors);
    assert!(expected, "regression value for this fixture is `true`");
    assert_eq!(code.is_correctable(&errors).unwrap(), expected);
}

#[test]
fn logical_difference_is_not_correctable() {
    let code = code();
    let errors = [PauliRow::identity(3), PauliRow::from_values(&[1, 1, 1], &[0, 0, 0])];
    assert!(!brute_force(&code, &errors));
    assert!(!code.is_correctable(&errors).unwrap());
}

#[test]
fn all_single_qubit_errors_agree_with_brute_force() {
    let code = code();
    let mut errors = vec![PauliRow::identity(3)];
    for q in 0..3 {
        for (a, b) in [(1, 0), (0, 1), (1, 1)] {
            let mut r = PauliRow::identity(3);
            r.alpha[q] = FieldElement::new(a);
            r.beta[q] = FieldElement::new(b);
            errors.push(r);
        }
    }
    assert_eq!(code.is_correctable(&errors).unwrap(), brute_force(&code, &errors));
}

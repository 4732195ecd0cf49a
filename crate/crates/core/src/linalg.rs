//! Gaussian elimination over the prime field F_p on plain `u32` rows.

fn inv_mod(a: u32, p: u32) -> u32 {
    let mut acc = 1u64;
    let mut base = a as u64 % p as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

/// Row-reduces `rows` in place to reduced echelon form and returns the pivot
/// columns. Zero rows end up at the bottom.
pub fn echelonize(rows: &mut [Vec<u32>], p: u32) -> Vec<usize> {
    let width = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..width {
        if r == rows.len() {
            break;
        }
        let Some(found) = (r..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(r, found);
        let scale = inv_mod(rows[r][col], p);
        for v in rows[r].iter_mut() {
            *v = (*v as u64 * scale as u64 % p as u64) as u32;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col] == 0 {
                continue;
            }
            let factor = row[col];
            for (v, &pv) in row.iter_mut().zip(&pivot_row) {
                *v = ((*v as u64 + (p - factor) as u64 * pv as u64) % p as u64) as u32;
            }
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<u32>], p: u32) -> usize {
    let mut work = rows.to_vec();
    echelonize(&mut work, p).len()
}

/// True iff both row sets span the same subspace of F_p^width.
pub fn same_span(a: &[Vec<u32>], b: &[Vec<u32>], p: u32) -> bool {
    let ra = rank(a, p);
    if ra != rank(b, p) {
        return false;
    }
    let joined: Vec<Vec<u32>> = a.iter().chain(b).cloned().collect();
    rank(&joined, p) == ra
}

/// Coefficients `c` with `Σ c_i rows_i = target`, if any exist.
pub fn solve_combination(rows: &[Vec<u32>], target: &[u32], p: u32) -> Option<Vec<u32>> {
    let r = rows.len();
    let width = target.len();
    // Columns of the augmented system are the given rows; solve A^T c = target.
    let mut system: Vec<Vec<u32>> = (0..width)
        .map(|j| {
            let mut eq: Vec<u32> = rows.iter().map(|row| row[j]).collect();
            eq.push(target[j]);
            eq
        })
        .collect();
    let pivots = echelonize(&mut system, p);
    if pivots.contains(&r) {
        return None;
    }
    let mut coeffs = vec![0u32; r];
    for (i, &col) in pivots.iter().enumerate() {
        coeffs[col] = system[i][r];
    }
    Some(coeffs)
}

//! Exact integer left kernels via Hermite-style row reduction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;

/// Row-reduces `rows` in place over the first `width` columns using only
/// unimodular row operations (swaps, negation, adding integer multiples),
/// applying each operation to the whole row. Entries above every pivot are
/// reduced into `[0, pivot)`. Returns the number of pivot rows.
fn hermite_reduce(rows: &mut [Vec<BigInt>], width: usize) -> usize {
    let m = rows.len();
    let mut pivot_row = 0;
    for col in 0..width {
        if pivot_row == m {
            break;
        }
        loop {
            // smallest nonzero |entry| at or below pivot_row becomes the pivot
            let best = (pivot_row..m)
                .filter(|&i| !rows[i][col].is_zero())
                .min_by(|&a, &b| rows[a][col].abs().cmp(&rows[b][col].abs()));
            let Some(best) = best else { break };
            rows.swap(pivot_row, best);
            let mut done = true;
            for i in (pivot_row + 1)..m {
                if rows[i][col].is_zero() {
                    continue;
                }
                let q = rows[i][col].div_floor(&rows[pivot_row][col]);
                let pivot = rows[pivot_row].clone();
                for (x, p) in rows[i].iter_mut().zip(&pivot) {
                    *x -= &q * p;
                }
                if !rows[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if rows[pivot_row][col].is_zero() {
            continue;
        }
        if rows[pivot_row][col].is_negative() {
            for x in rows[pivot_row].iter_mut() {
                *x = -&*x;
            }
        }
        let pivot = rows[pivot_row].clone();
        for row in rows.iter_mut().take(pivot_row) {
            let q = row[col].div_floor(&pivot[col]);
            if !q.is_zero() {
                for (x, p) in row.iter_mut().zip(&pivot) {
                    *x -= &q * p;
                }
            }
        }
        pivot_row += 1;
    }
    pivot_row
}

/// Hermite normal form (row style) of an integer matrix.
pub fn hermite_normal_form(m: &[Vec<BigInt>]) -> IntMatrix {
    let width = m.first().map_or(0, Vec::len);
    let mut rows = m.to_vec();
    let rank = hermite_reduce(&mut rows, width);
    rows.truncate(rank);
    rows
}

/// Basis of the integer left kernel `{ℓ ∈ Z^r : ℓ·M = 0}` of an `r × c`
/// matrix. `[M | I]` is reduced on the `M` block; rows whose `M` part
/// vanishes carry kernel vectors in their `I` part. The result is returned in
/// Hermite normal form and every row is checked against `M`.
pub fn integer_kernel(m: &[Vec<BigInt>]) -> IntMatrix {
    let r = m.len();
    if r == 0 {
        return Vec::new();
    }
    let c = m[0].len();
    assert!(m.iter().all(|row| row.len() == c), "ragged matrix");
    let mut aug: IntMatrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut out = row.clone();
            out.extend((0..r).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            out
        })
        .collect();
    let rank = hermite_reduce(&mut aug, c);
    let kernel: IntMatrix = aug[rank..].iter().map(|row| row[c..].to_vec()).collect();
    let kernel = hermite_normal_form(&kernel);
    for row in &kernel {
        assert!(annihilates(row, m), "kernel row failed verification");
    }
    kernel
}

/// Whether `ℓ·M = 0`.
pub fn annihilates(l: &[BigInt], m: &[Vec<BigInt>]) -> bool {
    let c = m.first().map_or(0, Vec::len);
    (0..c).all(|j| {
        l.iter()
            .zip(m)
            .map(|(x, row)| x * &row[j])
            .sum::<BigInt>()
            .is_zero()
    })
}

/// Rank over `Q`, computed by the same reduction.
pub fn rank(m: &[Vec<BigInt>]) -> usize {
    hermite_normal_form(m).len()
}

/// Bezout combination: `(g, x)` with `Σ x_i a_i = g = gcd(a)`, `g ≥ 0`.
pub fn extended_gcd_all(a: &[BigInt]) -> (BigInt, Vec<BigInt>) {
    let mut g = BigInt::zero();
    let mut coeffs: Vec<BigInt> = vec![BigInt::zero(); a.len()];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        let e = g.extended_gcd(ai);
        // e.gcd = e.x * g + e.y * ai
        for c in coeffs.iter_mut().take(i) {
            *c *= &e.x;
        }
        coeffs[i] = e.y.clone();
        g = e.gcd;
    }
    if g.is_negative() {
        g = -g;
        for c in coeffs.iter_mut() {
            *c = -&*c;
        }
    }
    (g, coeffs)
}

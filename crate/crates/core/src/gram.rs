//! Weighted Gram accumulation `M(b, b') = Σ_i c_i r_i(b) conj(r_i(b'))`.
//!
//! Shared by the partial trace (rows of Ψ) and by ensemble mixing (member
//! states). Exact zeros at the ends of each row are skipped, which makes
//! banded joint states cheap without changing any summed term. Output rows
//! are independent and summed in a fixed order, so the result is
//! deterministic regardless of thread count.

use num_complex::Complex64;
use rayon::prelude::*;

pub(crate) struct Rows<'a> {
    pub len: usize,
    pub rows: Vec<(&'a [Complex64], f64)>,
}

fn support(row: &[Complex64]) -> (usize, usize) {
    let zero = Complex64::new(0.0, 0.0);
    match row.iter().position(|a| *a != zero) {
        None => (0, 0),
        Some(lo) => {
            let hi = row.len() - row.iter().rev().position(|a| *a != zero).unwrap();
            (lo, hi)
        }
    }
}

pub(crate) fn gram(rows: &Rows<'_>) -> Vec<Complex64> {
    let n = rows.len;
    let supports: Vec<(usize, usize)> = rows.rows.iter().map(|(r, _)| support(r)).collect();
    let zero = Complex64::new(0.0, 0.0);

    let mut out = vec![zero; n * n];
    out.par_chunks_mut(n).enumerate().for_each(|(b, acc)| {
        for ((row, c), &(lo, hi)) in rows.rows.iter().zip(&supports) {
            if b < lo || b >= hi {
                continue;
            }
            let x = row[b] * *c;
            if x == zero {
                continue;
            }
            let start = lo.max(b);
            for (dst, r) in acc[start..hi].iter_mut().zip(&row[start..hi]) {
                *dst += x * r.conj();
            }
        }
    });

    // Lower triangle by Hermitian symmetry.
    for b in 0..n {
        for bp in 0..b {
            out[b * n + bp] = out[bp * n + b].conj();
        }
    }
    // The diagonal of a Gram matrix is real.
    for b in 0..n {
        out[b * n + b].im = 0.0;
    }
    out
}

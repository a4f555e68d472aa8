//! 2×2 matrices over `Z/mZ` and a Smith-form solver for linear systems mod `m`.

use crate::arith::{self, modp};

/// Row-major 2×2 integer matrix.
pub type Mat2 = [[i64; 2]; 2];

pub const IDENTITY: Mat2 = [[1, 0], [0, 1]];

pub fn reduce(a: &Mat2, m: u64) -> Mat2 {
    let r = |v: i64| modp(v as i128, m) as i64;
    [[r(a[0][0]), r(a[0][1])], [r(a[1][0]), r(a[1][1])]]
}

pub fn mul(a: &Mat2, b: &Mat2, m: u64) -> Mat2 {
    let mut out = [[0i64; 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let s = a[i][0] as i128 * b[0][j] as i128 + a[i][1] as i128 * b[1][j] as i128;
            *cell = modp(s, m) as i64;
        }
    }
    out
}

pub fn apply(a: &Mat2, v: [i64; 2], m: u64) -> [i64; 2] {
    [
        modp(a[0][0] as i128 * v[0] as i128 + a[0][1] as i128 * v[1] as i128, m) as i64,
        modp(a[1][0] as i128 * v[0] as i128 + a[1][1] as i128 * v[1] as i128, m) as i64,
    ]
}

pub fn add(a: &Mat2, b: &Mat2, m: u64) -> Mat2 {
    reduce(&[[a[0][0] + b[0][0], a[0][1] + b[0][1]], [a[1][0] + b[1][0], a[1][1] + b[1][1]]], m)
}

pub fn scale(a: &Mat2, s: i64, m: u64) -> Mat2 {
    mul(&[[s, 0], [0, s]], a, m)
}

pub fn det(a: &Mat2, m: u64) -> i64 {
    modp(a[0][0] as i128 * a[1][1] as i128 - a[0][1] as i128 * a[1][0] as i128, m) as i64
}

pub fn inverse(a: &Mat2, m: u64) -> Option<Mat2> {
    let d = arith::inv_mod(det(a, m) as i128, m)? as i64;
    Some(reduce(&scale(&[[a[1][1], -a[0][1]], [-a[1][0], a[0][0]]], d, m), m))
}

/// Matrix with the given column vectors.
pub fn from_columns(c0: [i64; 2], c1: [i64; 2]) -> Mat2 {
    [[c0[0], c1[0]], [c0[1], c1[1]]]
}

pub fn column(a: &Mat2, j: usize) -> [i64; 2] {
    [a[0][j], a[1][j]]
}

/// Diagonalize an `r × 2` integer matrix: returns `(U, D, V)` with `U·A·V = D`,
/// `U`, `V` unimodular and `D` diagonal.
fn diagonalize(a: &[[i128; 2]]) -> (Vec<Vec<i128>>, Vec<[i128; 2]>, [[i128; 2]; 2]) {
    let r = a.len();
    let mut d: Vec<[i128; 2]> = a.to_vec();
    let mut u: Vec<Vec<i128>> = (0..r).map(|i| (0..r).map(|j| (i == j) as i128).collect()).collect();
    let mut v = [[1i128, 0], [0, 1]];
    for t in 0..2.min(r) {
        loop {
            // smallest nonzero entry of the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..2 {
                    if d[i][j] != 0 && best.is_none_or(|(bi, bj)| d[i][j].abs() < d[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { return (u, d, v) };
            d.swap(t, pi);
            u.swap(t, pi);
            for row in d.iter_mut() {
                row.swap(t, pj);
            }
            for row in v.iter_mut() {
                row.swap(t, pj);
            }
            let piv = d[t][t];
            let mut clean = true;
            for i in t + 1..r {
                let q = d[i][t].div_euclid(piv);
                if q != 0 {
                    for j in 0..2 {
                        d[i][j] -= q * d[t][j];
                    }
                    for j in 0..r {
                        u[i][j] -= q * u[t][j];
                    }
                }
                clean &= d[i][t] == 0;
            }
            for j in t + 1..2 {
                let q = d[t][j].div_euclid(piv);
                if q != 0 {
                    for row in d.iter_mut() {
                        row[j] -= q * row[t];
                    }
                    for row in v.iter_mut() {
                        row[j] -= q * row[t];
                    }
                }
                clean &= d[t][j] == 0;
            }
            if clean {
                break;
            }
        }
    }
    (u, d, v)
}

/// All `x ∈ (Z/m)²` with `A·x ≡ b (mod m)` for an `r × 2` system, sorted.
pub fn solve_mod(a: &[[i64; 2]], b: &[i64], m: u64) -> Vec<[i64; 2]> {
    let m128 = m as i128;
    let rows: Vec<[i128; 2]> = a.iter().map(|r| [modp(r[0] as i128, m) as i128, modp(r[1] as i128, m) as i128]).collect();
    let (u, d, v) = diagonalize(&rows);
    let c: Vec<i128> = u
        .iter()
        .map(|row| row.iter().zip(b).map(|(&x, &y)| x * y as i128).sum::<i128>().rem_euclid(m128))
        .collect();
    let r = rows.len();
    for i in 2..r {
        if c[i] != 0 {
            return Vec::new();
        }
    }
    let mut per_coord: Vec<Vec<i128>> = Vec::new();
    for i in 0..2 {
        let di = if i < r { d[i][i].rem_euclid(m128) } else { 0 };
        let ci = if i < r { c[i] } else { 0 };
        let g = arith::gcd(di, m128);
        if ci % g != 0 {
            return Vec::new();
        }
        let step = m128 / g;
        let base = if di == 0 {
            0
        } else {
            let inv = arith::inv_mod(di / g, (m128 / g) as u64).unwrap() as i128;
            (ci / g * inv).rem_euclid(step)
        };
        per_coord.push((0..g).map(|k| base + k * step).collect());
    }
    let mut out: Vec<[i64; 2]> = Vec::new();
    for &y0 in &per_coord[0] {
        for &y1 in &per_coord[1] {
            let x0 = (v[0][0] * y0 + v[0][1] * y1).rem_euclid(m128) as i64;
            let x1 = (v[1][0] * y0 + v[1][1] * y1).rem_euclid(m128) as i64;
            out.push([x0, x1]);
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

//! Independent reference implementations used as oracles. They work on
//! small `i128` data and share no code with the library.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::Rng;

use leechkit_core::IntegerMatrix;

pub type Mat = Vec<Vec<i128>>;

pub fn to_mat(m: &IntegerMatrix) -> Mat {
    m.to_rows().iter().map(|r| r.iter().map(|x| x.to_i128().unwrap()).collect()).collect()
}

pub fn from_mat(cols: usize, m: &Mat) -> IntegerMatrix {
    IntegerMatrix::from_rows(cols, m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()).unwrap()
}

pub fn random_matrix(rng: &mut impl Rng, max_dim: usize, max_entry: i128) -> Mat {
    let r = rng.gen_range(1..=max_dim);
    let c = rng.gen_range(1..=max_dim);
    (0..r).map(|_| (0..c).map(|_| rng.gen_range(-max_entry..=max_entry)).collect()).collect()
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Row Hermite form by repeated division with the smallest pivot.
pub fn naive_hnf(a: &Mat, cols: usize) -> Mat {
    let mut m = a.clone();
    let rows = m.len();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            // move the smallest nonzero |entry| in column c (rows r..) to row r
            let best = (r..rows).filter(|&i| m[i][c] != 0).min_by_key(|&i| m[i][c].abs());
            let Some(b) = best else { break };
            m.swap(r, b);
            let mut done = true;
            for i in r + 1..rows {
                let q = m[i][c].div_euclid(m[r][c]);
                for j in 0..cols {
                    m[i][j] -= q * m[r][j];
                }
                if m[i][c] != 0 {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < rows && m[r][c] != 0 {
            if m[r][c] < 0 {
                for x in m[r].iter_mut() {
                    *x = -*x;
                }
            }
            for i in 0..r {
                let q = m[i][c].div_euclid(m[r][c]);
                for j in 0..cols {
                    m[i][j] -= q * m[r][j];
                }
            }
            r += 1;
        }
    }
    m
}

fn det(m: &Mat) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return m[0][0];
    }
    (0..n)
        .map(|j| {
            let minor: Mat = m[1..].iter().map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, &x)| x).collect()).collect();
            let s = if j % 2 == 0 { 1 } else { -1 };
            s * m[0][j] * det(&minor)
        })
        .sum()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Smith invariants from determinantal divisors: `d_k = D_k / D_{k-1}`,
/// `D_k` the gcd of all `k×k` minors.
pub fn smith_invariants(a: &Mat, cols: usize) -> Vec<i128> {
    let rows = a.len();
    let mut out = Vec::new();
    let mut prev = 1;
    for k in 1..=rows.min(cols) {
        let mut g = 0;
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let minor: Mat = rs.iter().map(|&i| cs.iter().map(|&j| a[i][j]).collect()).collect();
                g = gcd(g, det(&minor));
            }
        }
        if g == 0 {
            break;
        }
        out.push(g / prev);
        prev = g;
    }
    out
}

pub fn rank(a: &Mat, cols: usize) -> usize {
    naive_hnf(a, cols).iter().filter(|r| r.iter().any(|&x| x != 0)).count()
}

/// All `x` in `[-r, r]^rows` with `x·A = 0`.
pub fn kernel_box(a: &Mat, cols: usize, r: i128) -> Vec<Vec<i128>> {
    let rows = a.len();
    let mut out = Vec::new();
    let mut x = vec![-r; rows];
    loop {
        if (0..cols).all(|j| (0..rows).map(|i| x[i] * a[i][j]).sum::<i128>() == 0) {
            out.push(x.clone());
        }
        let mut i = 0;
        while i < rows && x[i] == r {
            x[i] = -r;
            i += 1;
        }
        if i == rows {
            return out;
        }
        x[i] += 1;
    }
}

/// Is `x` an integral combination of the rows of `b`? Compares Hermite forms.
pub fn in_row_span(b: &Mat, x: &[i128], cols: usize) -> bool {
    let nonzero = |m: Mat| -> Mat { m.into_iter().filter(|r| r.iter().any(|&v| v != 0)).collect() };
    let mut with = b.clone();
    with.push(x.to_vec());
    nonzero(naive_hnf(b, cols)) == nonzero(naive_hnf(&with, cols))
}

/// Random positive definite Gram `BᵀB + I` of the given rank.
pub fn random_positive_form(rng: &mut impl Rng, n: usize) -> Mat {
    let b: Mat = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-2..=2)).collect()).collect();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| b[k][i] * b[k][j]).sum::<i128>() + i128::from(i == j)).collect())
        .collect()
}

/// Number of nonzero `x` with `xGxᵀ ≤ bound`, by scanning the box given by
/// the exact bound `x_i² ≤ bound·(G⁻¹)_ii = bound·adj_ii/det`.
pub fn box_count(g: &Mat, bound: i128) -> usize {
    let n = g.len();
    let d = det(g);
    let radius: Vec<i128> = (0..n)
        .map(|i| {
            let minor: Mat = (0..n)
                .filter(|&r| r != i)
                .map(|r| (0..n).filter(|&c| c != i).map(|c| g[r][c]).collect())
                .collect();
            let adj = det(&minor);
            let mut t = 0;
            while (t + 1) * (t + 1) * d <= bound * adj {
                t += 1;
            }
            t
        })
        .collect();
    let mut x: Vec<i128> = radius.iter().map(|r| -r).collect();
    let mut count = 0;
    loop {
        let q: i128 = (0..n).map(|i| (0..n).map(|j| x[i] * g[i][j] * x[j]).sum::<i128>()).sum();
        if q > 0 && q <= bound {
            count += 1;
        }
        let mut i = 0;
        while i < n && x[i] == radius[i] {
            x[i] = -radius[i];
            i += 1;
        }
        if i == n {
            return count;
        }
        x[i] += 1;
    }
}

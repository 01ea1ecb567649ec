//! Independent reference implementations: plain nested loops over
//! `Vec<Vec<i64>>`, sharing no code with the library.

#![allow(dead_code)]

use hadamard_core::SignMatrix;

pub type Dense = Vec<Vec<i64>>;

pub fn dense(m: &SignMatrix) -> Dense {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|&v| v as i64).collect())
        .collect()
}

pub fn transpose(a: &Dense) -> Dense {
    let (r, c) = (a.len(), a[0].len());
    (0..c).map(|j| (0..r).map(|i| a[i][j]).collect()).collect()
}

pub fn mul(a: &Dense, b: &Dense) -> Dense {
    let (n, k, m) = (a.len(), b.len(), b[0].len());
    assert_eq!(a[0].len(), k);
    let mut out = vec![vec![0i64; m]; n];
    for i in 0..n {
        for t in 0..k {
            let x = a[i][t];
            if x == 0 {
                continue;
            }
            for j in 0..m {
                out[i][j] += x * b[t][j];
            }
        }
    }
    out
}

pub fn sub(a: &Dense, b: &Dense) -> Dense {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.iter().zip(y).map(|(u, v)| u - v).collect())
        .collect()
}

pub fn scaled_identity(n: usize, k: i64) -> Dense {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { k } else { 0 }).collect())
        .collect()
}

pub fn is_zero(a: &Dense) -> bool {
    a.iter().all(|r| r.iter().all(|&v| v == 0))
}

/// `H H^T = n I` with entries +-1, by full matrix product.
pub fn oracle_hadamard(m: &SignMatrix) -> bool {
    let h = dense(m);
    let n = h.len();
    h.iter()
        .all(|r| r.len() == n && r.iter().all(|&v| v == 1 || v == -1))
        && mul(&h, &transpose(&h)) == scaled_identity(n, n as i64)
}

pub fn oracle_skew_hadamard(m: &SignMatrix) -> bool {
    let h = dense(m);
    let n = h.len();
    oracle_hadamard(m) && (0..n).all(|i| (0..n).all(|j| h[i][j] + h[j][i] == 2 * (i == j) as i64))
}

pub fn is_prime(n: u64) -> bool {
    n >= 2
        && (2..n)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

pub fn is_odd_prime_power(n: u64) -> bool {
    if n < 3 || n.is_multiple_of(2) {
        return false;
    }
    let p = (3..=n).find(|d| n.is_multiple_of(*d)).unwrap();
    let mut m = n;
    while m.is_multiple_of(p) {
        m /= p;
    }
    m == 1
}

/// Euler's criterion over Z/p.
pub fn euler_chi(x: i64, p: i64) -> i64 {
    let x = x.rem_euclid(p);
    if x == 0 {
        return 0;
    }
    let mut acc = 1i64;
    let mut base = x;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    if acc == 1 {
        1
    } else {
        -1
    }
}

/// `C[i][j] = chi(j - i)` over a prime field.
pub fn prime_conference(p: i64) -> Dense {
    (0..p)
        .map(|i| (0..p).map(|j| euler_chi(j - i, p)).collect())
        .collect()
}

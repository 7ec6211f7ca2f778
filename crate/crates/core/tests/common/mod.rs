//! Independent reference implementations shared by the integration tests.
//! Nothing here calls into the library's numerical code.

#![allow(dead_code)]

use adcalloc::CMatrix;
use num_complex::Complex64;

pub type Dense = Vec<Vec<Complex64>>;

pub const BETA: [f64; 5] = [0.3634, 0.1175, 0.03454, 0.009497, 0.002499];

pub fn dense(m: &CMatrix) -> Dense {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m[(i, j)]).collect()).collect()
}

pub fn eye(n: usize) -> Dense {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) }).collect())
        .collect()
}

pub fn mul(a: &Dense, b: &Dense) -> Dense {
    let (n, k, m) = (a.len(), b.len(), b[0].len());
    let mut out = vec![vec![Complex64::new(0.0, 0.0); m]; n];
    for i in 0..n {
        for l in 0..k {
            for j in 0..m {
                out[i][j] += a[i][l] * b[l][j];
            }
        }
    }
    out
}

pub fn adj(a: &Dense) -> Dense {
    (0..a[0].len()).map(|j| (0..a.len()).map(|i| a[i][j].conj()).collect()).collect()
}

/// Gauss-Jordan inverse with partial pivoting.
pub fn inverse(a: &Dense) -> Dense {
    let n = a.len();
    let mut m: Dense = a.clone();
    let mut inv = eye(n);
    for col in 0..n {
        let p = (col..n).max_by(|&x, &y| m[x][col].norm().total_cmp(&m[y][col].norm())).unwrap();
        m.swap(col, p);
        inv.swap(col, p);
        let d = m[col][col];
        assert!(d.norm() > 0.0, "singular matrix in oracle");
        for j in 0..n {
            m[col][j] /= d;
            inv[col][j] /= d;
        }
        for r in 0..n {
            if r != col {
                let f = m[r][col];
                if f.norm() != 0.0 {
                    for j in 0..n {
                        let (mc, ic) = (m[col][j], inv[col][j]);
                        m[r][j] -= f * mc;
                        inv[r][j] -= f * ic;
                    }
                }
            }
        }
    }
    inv
}

pub fn beta_of(bits: u32) -> f64 {
    match bits {
        1..=5 => BETA[bits as usize - 1],
        _ => std::f64::consts::PI * 3f64.sqrt() / 2.0 * 4f64.powi(-(bits as i32)),
    }
}

/// `J(b)` assembled term by term from the AQNM statistics and inverted by
/// Gauss-Jordan. `None` entries are infinite resolution.
pub fn brute_j(h: &Dense, bits: &[Option<u32>], p_u: f64, sigma2: f64) -> f64 {
    let n = h.len();
    let beta: Vec<f64> = bits.iter().map(|b| b.map_or(0.0, beta_of)).collect();
    let alpha: Vec<f64> = beta.iter().map(|b| 1.0 - b).collect();
    let hh = mul(h, &adj(h));
    let mut r_zz = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for j in 0..n {
            r_zz[i][j] = hh[i][j] * (p_u * alpha[i] * alpha[j]);
        }
        let row: f64 = h[i].iter().map(|x| x.norm_sqr()).sum();
        r_zz[i][i] += sigma2 * alpha[i] * alpha[i] + alpha[i] * beta[i] * (p_u * row + sigma2);
    }
    let r_zx: Dense = (0..n).map(|i| h[i].iter().map(|x| x * (p_u.sqrt() * alpha[i])).collect()).collect();
    let explained = mul(&adj(&r_zx), &mul(&inverse(&r_zz), &r_zx));
    n as f64 - (0..n).map(|i| explained[i][i].re).sum::<f64>()
}

/// `tr((I + (p_u/σ²) H^H H)^{-1})`.
pub fn unquantized_trace(h: &Dense, p_u: f64, sigma2: f64) -> f64 {
    let n = h.len();
    let mut m = mul(&adj(h), h);
    for (i, row) in m.iter_mut().enumerate() {
        for x in row.iter_mut() {
            *x *= p_u / sigma2;
        }
        row[i] += 1.0;
    }
    let inv = inverse(&m);
    (0..n).map(|i| inv[i][i].re).sum()
}

/// Every vector in `{1..4}^n` with `Σ 2^b ≤ units`, in lexicographic order.
pub fn odometer(n: usize, units: u64) -> Vec<Vec<u32>> {
    let mut digits = vec![1u32; n];
    let mut out = Vec::new();
    loop {
        if digits.iter().map(|&b| 1u64 << b).sum::<u64>() <= units {
            out.push(digits.clone());
        }
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if digits[i] < 4 {
                digits[i] += 1;
                break;
            }
            digits[i] = 1;
        }
    }
}

/// Number of vectors in `{1..4}^n` with `Σ 2^b ≤ units`, as the sum of the
/// low coefficients of `(x² + x⁴ + x⁸ + x¹⁶)^n`.
pub fn generating_count(n: usize, units: u64) -> u64 {
    let cap = units as usize;
    let mut poly = vec![0u64; cap + 1];
    poly[0] = 1;
    for _ in 0..n {
        let mut next = vec![0u64; cap + 1];
        for (deg, &c) in poly.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for w in [2usize, 4, 8, 16] {
                if deg + w <= cap {
                    next[deg + w] += c;
                }
            }
        }
        poly = next;
    }
    poly.iter().sum()
}

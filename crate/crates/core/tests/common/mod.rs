//! Dense reference routines on plain `Vec<Vec<f64>>`, written without
//! nalgebra so they can serve as independent oracles.
#![allow(dead_code)]

use greedy_sensors::CandidateMatrix;

pub type Mat = Vec<Vec<f64>>;

pub fn rows_of(cand: &CandidateMatrix<f64>, idx: &[usize]) -> Mat {
    idx.iter()
        .map(|&i| (0..cand.r()).map(|j| cand.matrix()[(i, j)]).collect())
        .collect()
}

pub fn transpose(a: &Mat) -> Mat {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len()).map(|j| a.iter().map(|row| row[j]).collect()).collect()
}

pub fn matmul(a: &Mat, b: &Mat) -> Mat {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

/// `C Cᵀ` when `p ≤ r`, else `Cᵀ C`.
pub fn regime_gram(c: &Mat) -> Mat {
    let p = c.len();
    let r = c[0].len();
    if p <= r {
        matmul(c, &transpose(c))
    } else {
        matmul(&transpose(c), c)
    }
}

pub fn cofactor_det(a: &Mat) -> f64 {
    let n = a.len();
    match n {
        0 => 1.0,
        1 => a[0][0],
        _ => (0..n)
            .map(|j| {
                let minor: Mat = a[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(k, _)| k != j)
                            .map(|(_, &v)| v)
                            .collect()
                    })
                    .collect();
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                sign * a[0][j] * cofactor_det(&minor)
            })
            .sum(),
    }
}

/// Gauss-Jordan inverse with partial pivoting; `None` when a pivot vanishes.
pub fn gauss_jordan_inverse(a: &Mat) -> Option<Mat> {
    let n = a.len();
    let mut m: Mat = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();
    let scale = a.iter().flatten().fold(0.0f64, |s, v| s.max(v.abs()));
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| m[x][col].abs().total_cmp(&m[y][col].abs()))?;
        if m[piv][col].abs() <= 1e-14 * scale {
            return None;
        }
        m.swap(col, piv);
        let d = m[col][col];
        for v in m[col].iter_mut() {
            *v /= d;
        }
        for row in 0..n {
            if row != col {
                let f = m[row][col];
                if f != 0.0 {
                    for k in 0..2 * n {
                        m[row][k] -= f * m[col][k];
                    }
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// `tr(M⁻¹)` by solving `M x = eⱼ` for each basis vector.
pub fn trace_inverse(a: &Mat) -> Option<f64> {
    let inv = gauss_jordan_inverse(a)?;
    Some((0..a.len()).map(|i| inv[i][i]).sum())
}

/// Cyclic Jacobi eigenvalues of a symmetric matrix, ascending.
pub fn jacobi_eigenvalues(a: &Mat) -> Vec<f64> {
    let n = a.len();
    let mut m = a.clone();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[i][j] * m[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if m[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[k][p];
                    let mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p][k];
                    let mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| m[i][i]).collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Smallest root of the characteristic cubic of a symmetric 3×3 matrix.
pub fn cubic_min_eigenvalue(a: &Mat) -> f64 {
    assert_eq!(a.len(), 3);
    let tr = a[0][0] + a[1][1] + a[2][2];
    let c1 = a[0][0] * a[1][1] - a[0][1] * a[1][0] + a[0][0] * a[2][2] - a[0][2] * a[2][0]
        + a[1][1] * a[2][2]
        - a[1][2] * a[2][1];
    let det = cofactor_det(a);
    // λ³ − tr λ² + c1 λ − det = 0, shifted by λ = t + tr/3
    let p = c1 - tr * tr / 3.0;
    let q = -2.0 * tr.powi(3) / 27.0 + tr * c1 / 3.0 - det;
    if p.abs() < 1e-300 {
        return tr / 3.0 + (-q).cbrt();
    }
    let m = 2.0 * (-p / 3.0).sqrt();
    let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
    let phi = arg.acos() / 3.0;
    (0..3)
        .map(|k| tr / 3.0 + m * (phi - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos())
        .fold(f64::INFINITY, f64::min)
}

pub fn min_eig(a: &Mat) -> f64 {
    jacobi_eigenvalues(a)[0]
}

/// Lowest-index argbest with the same relative tie rule as the selectors.
pub fn argbest(values: &[(usize, f64)], maximize: bool) -> usize {
    let mut best: Option<(usize, f64)> = None;
    for &(i, v) in values {
        if !v.is_finite() {
            continue;
        }
        let better = match best {
            None => true,
            Some((_, b)) => {
                let gap = if maximize { v - b } else { b - v };
                gap > 1e-12 * v.abs().max(b.abs())
            }
        };
        if better {
            best = Some((i, v));
        }
    }
    best.expect("some finite candidate").0
}

/// Every `k`-subset of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

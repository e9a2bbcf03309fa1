//! Small shared f64 helpers: dense solves, symmetric eigenvalues, sequence
//! acceleration. Dimensions are at most 4 throughout.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(a: &[f64], c: f64) -> Vec<f64> {
    a.iter().map(|x| x * c).collect()
}

pub fn axpy(y: &mut [f64], a: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

/// Gaussian elimination with partial pivoting; destroys its inputs.
pub fn solve(a: &mut [Vec<f64>], b: &mut [f64]) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in 0..n {
            if r != col {
                let f = a[r][col] / a[col][col];
                for c in col..n {
                    a[r][c] -= f * a[col][c];
                }
                b[r] -= f * b[col];
            }
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

pub fn mat_vec(a: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    a.iter().map(|row| dot(row, x)).collect()
}

/// Eigenvalues of a small symmetric matrix by cyclic Jacobi rotations.
pub fn symmetric_eigenvalues(m: &[Vec<f64>]) -> Vec<f64> {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m.to_vec();
    for _ in 0..64 {
        let mut off = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                off += a[i][j] * a[i][j];
            }
        }
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = 0.5 * (a[q][q] - a[p][p]) / a[p][q];
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    eig.sort_by(|x, y| x.partial_cmp(y).unwrap());
    eig
}

/// Aitken Δ² extrapolation of a sequence of three values.
pub fn aitken(a: f64, b: f64, c: f64) -> f64 {
    let denom = (c - b) - (b - a);
    if denom.abs() < 1e-14 * (a.abs() + b.abs() + c.abs() + 1.0) {
        c
    } else {
        c - (c - b) * (c - b) / denom
    }
}

/// Convex-hull membership in dimension ≤ 3 by searching for a barycentric
/// certificate over subsets of size dim+1, with tolerance `tol ≥ 0`.
pub fn in_hull(p: &[f64], pts: &[Vec<f64>], tol: f64) -> bool {
    let d = p.len();
    let n = pts.len();
    if n == 0 {
        return false;
    }
    let max_k = (d + 1).min(n);
    let mut idx: Vec<usize> = Vec::new();
    subsets_upto(n, max_k, &mut idx, &mut |subset: &[usize]| {
        let sel: Vec<&Vec<f64>> = subset.iter().map(|&i| &pts[i]).collect();
        barycentric_in(p, &sel, tol)
    })
}

/// Relative-interior membership with margin: pushing `p` away from the hull
/// barycenter by `margin` must stay inside.
pub fn strictly_in_hull(p: &[f64], pts: &[Vec<f64>], margin: f64) -> bool {
    if !in_hull(p, pts, 0.0) {
        return false;
    }
    let mut b = vec![0.0; p.len()];
    for q in pts {
        axpy(&mut b, 1.0 / pts.len() as f64, q);
    }
    let dir = sub(p, &b);
    let len = norm(&dir);
    if len < margin {
        return true;
    }
    let probe: Vec<f64> = p.iter().zip(&dir).map(|(&c, &d)| c + d * margin / len).collect();
    in_hull(&probe, pts, 1e-12)
}

fn subsets_upto(
    n: usize,
    max_k: usize,
    current: &mut Vec<usize>,
    f: &mut impl FnMut(&[usize]) -> bool,
) -> bool {
    fn rec(
        n: usize,
        max_k: usize,
        start: usize,
        current: &mut Vec<usize>,
        f: &mut impl FnMut(&[usize]) -> bool,
    ) -> bool {
        if !current.is_empty() && current.len() <= max_k && f(current) {
            return true;
        }
        if current.len() == max_k {
            return false;
        }
        for i in start..n {
            current.push(i);
            if rec(n, max_k, i + 1, current, f) {
                return true;
            }
            current.pop();
        }
        false
    }
    rec(n, max_k, 0, current, f)
}

fn barycentric_in(p: &[f64], pts: &[&Vec<f64>], tol: f64) -> bool {
    let k = pts.len();
    let d = p.len();
    if k == 1 {
        return sub(p, pts[0]).iter().all(|&c| c.abs() <= tol.max(1e-12));
    }
    // p = pts[0] + sum s_i (pts[i]-pts[0]); least squares + residual check
    let edges: Vec<Vec<f64>> = (1..k).map(|i| sub(pts[i], pts[0])).collect();
    let w = sub(p, pts[0]);
    let m = k - 1;
    let mut gram = vec![vec![0.0; m]; m];
    let mut rhs = vec![0.0; m];
    for i in 0..m {
        for j in 0..m {
            gram[i][j] = dot(&edges[i], &edges[j]);
        }
        rhs[i] = dot(&edges[i], &w);
    }
    let Some(s) = solve(&mut gram, &mut rhs) else {
        return false;
    };
    let mut recon = vec![0.0; d];
    for i in 0..m {
        axpy(&mut recon, s[i], &edges[i]);
    }
    let res: f64 = sub(&recon, &w).iter().map(|c| c.abs()).fold(0.0, f64::max);
    if res > tol.abs().max(1e-9) {
        return false;
    }
    let total: f64 = s.iter().sum();
    s.iter().all(|&c| c >= -tol) && (1.0 - total) >= -tol
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigenvalues_of_diag() {
        let m = vec![vec![2.0, 0.0], vec![0.0, -3.0]];
        let e = symmetric_eigenvalues(&m);
        assert!((e[0] + 3.0).abs() < 1e-12 && (e[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn eigenvalues_symmetric_2x2() {
        let m = vec![vec![0.0, 1.0], vec![1.0, 0.0]];
        let e = symmetric_eigenvalues(&m);
        assert!((e[0] + 1.0).abs() < 1e-12 && (e[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn aitken_accelerates_geometric() {
        // x_k = 1 + 0.25^k converges to 1
        let f = |k: i32| 1.0 + 0.25f64.powi(k);
        let x = aitken(f(1), f(2), f(3));
        assert!((x - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hull_membership() {
        let tri = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]];
        assert!(in_hull(&[0.2, 0.2], &tri, 1e-9));
        assert!(in_hull(&[0.5, 0.5], &tri, 1e-9)); // on edge
        assert!(!strictly_in_hull(&[0.5, 0.5], &tri, 1e-6));
        assert!(strictly_in_hull(&[0.2, 0.2], &tri, 1e-6));
        assert!(!in_hull(&[0.6, 0.6], &tri, 1e-9));
    }
}

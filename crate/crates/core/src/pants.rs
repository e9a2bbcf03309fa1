//! The λ-rescaled Lagrangian pair of pants in local model coordinates.
//!
//! The potential on the positive half of the standard coamoeba is
//! F(y) = (cos(Σ y_j) · Π sin y_j)^{1/(n+1)}, extended to C⁻ through
//! F(ιy) = −F(y) and to the blown-up vertices by 0. Its gradient map h is
//! evaluated in closed form via logarithmic differentiation,
//! h_j = λ F (cot y_j − tan Σy)/(n+1), which stays stable near ∂C. The image
//! of h is the amoeba region H bounded by the hypersurfaces S_k.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::coamoeba::{
    torus_reduce, Coamoeba, CoamoebaClass, CoamoebaError, CoamoebaPoint, TorusPoint, PI,
};
use crate::numerics;

/// A λ-rescaled pair of pants in standard local coordinates.
#[derive(Clone, Debug)]
pub struct PantsModel {
    pub n: usize,
    pub lambda: f64,
    coam: Coamoeba,
}

impl PantsModel {
    pub fn new(n: usize, lambda: f64) -> Self {
        assert!(lambda > 0.0, "rescaling factor must be positive");
        PantsModel { n, lambda, coam: Coamoeba::standard(n) }
    }

    pub fn coamoeba(&self) -> &Coamoeba {
        &self.coam
    }

    pub fn dim(&self) -> usize {
        self.n + 1
    }

    /// Representative of y with each coordinate in (−π/2, π/2].
    pub fn window(&self, y: &TorusPoint) -> Vec<f64> {
        y.0.iter()
            .map(|&c| {
                let r = c - PI * (c / PI).floor();
                if r > PI / 2.0 {
                    r - PI
                } else {
                    r
                }
            })
            .collect()
    }

    /// (sign, w) with w the C̄⁺ representative of y (or of ιy when sign < 0).
    pub fn plus_rep(&self, y: &TorusPoint, tol: f64) -> Option<(i8, Vec<f64>)> {
        let w = self.window(y);
        if in_closed_simplex(&w, tol) {
            return Some((1, w));
        }
        let m: Vec<f64> = w.iter().map(|&c| -c).collect();
        if in_closed_simplex(&m, tol) {
            return Some((-1, m));
        }
        None
    }

    /// F on the closed positive half, in log space; 0 on the boundary.
    pub fn f_plus(&self, w: &[f64]) -> f64 {
        let s: f64 = w.iter().sum();
        if s >= PI / 2.0 || w.iter().any(|&c| c <= 0.0) {
            return 0.0;
        }
        let mut log_rad = s.cos().ln();
        for &c in w {
            log_rad += c.sin().ln();
        }
        self.lambda * (log_rad / (self.n as f64 + 1.0)).exp()
    }

    /// h on the open positive half: h_j = λF (cot y_j − tan Σ)/(n+1).
    pub fn h_plus(&self, w: &[f64]) -> Vec<f64> {
        let f = self.f_plus(w);
        let s: f64 = w.iter().sum();
        let t = s.tan();
        let inv = 1.0 / (self.n as f64 + 1.0);
        w.iter().map(|&c| f * (c.cos() / c.sin() - t) * inv).collect()
    }

    pub fn f_eval(&self, p: &CoamoebaPoint) -> Result<f64, CoamoebaError> {
        match p {
            CoamoebaPoint::VertexChart { .. } => Ok(0.0),
            CoamoebaPoint::Interior(y) => match self.coam.classify(y, 1e-9) {
                CoamoebaClass::InteriorPlus => {
                    let (_, w) = self.plus_rep(y, 1e-9).unwrap();
                    Ok(self.f_plus(&w))
                }
                CoamoebaClass::InteriorMinus => {
                    let (_, w) = self.plus_rep(y, 1e-9).unwrap();
                    Ok(-self.f_plus(&w))
                }
                CoamoebaClass::Vertex(_) | CoamoebaClass::Face(..) => Ok(0.0),
                CoamoebaClass::Outside => Err(CoamoebaError::OutsideCoamoeba),
            },
        }
    }

    pub fn h_eval(&self, p: &CoamoebaPoint) -> Result<Vec<f64>, CoamoebaError> {
        match p {
            CoamoebaPoint::Interior(y) => match self.coam.classify(y, 1e-12) {
                CoamoebaClass::InteriorPlus | CoamoebaClass::InteriorMinus => {
                    let (_, w) = self.plus_rep(y, 1e-12).unwrap();
                    Ok(self.h_plus(&w))
                }
                _ => Err(CoamoebaError::OutsideCoamoeba),
            },
            CoamoebaPoint::VertexChart { vertex, dir } => self.vertex_chart_h(*vertex, dir),
        }
    }

    /// Limit of h along the blow-up ray at p_k, by Aitken extrapolation at
    /// ε ∈ {1e−2, 5e−3, 2.5e−3}; the limit lands on the boundary surface S_k.
    pub fn vertex_chart_h(&self, k: usize, dir: &[f64]) -> Result<Vec<f64>, CoamoebaError> {
        let p = self.coam.vertex(k);
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for eps in [1e-2, 5e-3, 2.5e-3] {
            let q: Vec<f64> = p.0.iter().zip(dir).map(|(&a, &d)| a + eps * d).collect();
            let y = torus_reduce(&q);
            let (_, w) = self
                .plus_rep(&y, 0.0)
                .filter(|(_, w)| is_interior(w, 0.0))
                .ok_or(CoamoebaError::DirectionExitsC)?;
            rows.push(self.h_plus(&w));
        }
        Ok((0..self.dim())
            .map(|i| numerics::aitken(rows[0][i], rows[1][i], rows[2][i]))
            .collect())
    }

    /// Closed-form chart limit at p_0 for n = 1, used as an independent
    /// oracle against the extrapolated value.
    pub fn chart_limit_closed_form_n1(&self, dir: &[f64]) -> Option<Vec<f64>> {
        if self.n != 1 || dir[0] <= 0.0 || dir[1] <= 0.0 {
            return None;
        }
        Some(vec![
            0.5 * self.lambda * (dir[1] / dir[0]).sqrt(),
            0.5 * self.lambda * (dir[0] / dir[1]).sqrt(),
        ])
    }

    /// Analytic Hessian of λF at an interior point of either half.
    pub fn hessian(&self, y: &TorusPoint) -> Result<Vec<Vec<f64>>, CoamoebaError> {
        let (sign, w) = self
            .plus_rep(y, 0.0)
            .filter(|(_, w)| is_interior(w, 0.0))
            .ok_or(CoamoebaError::OutsideCoamoeba)?;
        let d = self.dim();
        let f = self.f_plus(&w);
        let s: f64 = w.iter().sum();
        let t = s.tan();
        let sec2 = 1.0 + t * t;
        let inv = 1.0 / (d as f64);
        let g: Vec<f64> = w.iter().map(|&c| (c.cos() / c.sin() - t) * inv).collect();
        let mut hess = vec![vec![0.0; d]; d];
        for j in 0..d {
            for k in 0..d {
                let mut v = f * g[j] * g[k];
                v -= f * sec2 * inv;
                if j == k {
                    let sj = w[j].sin();
                    v -= f * inv / (sj * sj);
                }
                hess[j][k] = v * f64::from(sign);
            }
        }
        Ok(hess)
    }

    /// The graph embedding Φ(q) = (h(q), π(q)) in local coordinates.
    pub fn phi(&self, p: &CoamoebaPoint) -> Result<(Vec<f64>, TorusPoint), CoamoebaError> {
        let h = self.h_eval(p)?;
        let y = match p {
            CoamoebaPoint::Interior(y) => torus_reduce(&y.0),
            CoamoebaPoint::VertexChart { vertex, .. } => self.coam.vertex(*vertex),
        };
        Ok((h, y))
    }

    /// Inverts h on int C⁺ by damped Newton. `x` must be in the open amoeba
    /// region; points within `margin` of ∂H are rejected by the caller.
    pub fn h_invert(&self, x: &[f64], seed: Option<&[f64]>) -> Option<Vec<f64>> {
        let d = self.dim();
        let mut w: Vec<f64> = match seed {
            Some(s) => s.to_vec(),
            None => vec![PI / (2.0 * (d as f64 + 1.0)); d],
        };
        let res = |w: &[f64]| numerics::sub(&self.h_plus(w), x);
        let mut r = res(&w);
        let mut rn = numerics::norm(&r);
        for _ in 0..120 {
            if rn < 1e-12 * (1.0 + numerics::norm(x)) {
                return Some(w);
            }
            let mut jac = self.hessian_plus_window(&w);
            let mut rhs: Vec<f64> = r.iter().map(|&v| -v).collect();
            let step = numerics::solve(&mut jac, &mut rhs)?;
            let mut alpha = 1.0;
            let mut improved = false;
            for _ in 0..40 {
                let mut cand = w.clone();
                numerics::axpy(&mut cand, alpha, &step);
                if is_interior(&cand, 1e-15) {
                    let rc = res(&cand);
                    let rcn = numerics::norm(&rc);
                    if rcn < rn {
                        w = cand;
                        r = rc;
                        rn = rcn;
                        improved = true;
                        break;
                    }
                }
                alpha *= 0.5;
            }
            if !improved {
                return None;
            }
        }
        (rn < 1e-9 * (1.0 + numerics::norm(x))).then_some(w)
    }

    fn hessian_plus_window(&self, w: &[f64]) -> Vec<Vec<f64>> {
        let d = self.dim();
        let f = self.f_plus(w);
        let s: f64 = w.iter().sum();
        let t = s.tan();
        let sec2 = 1.0 + t * t;
        let inv = 1.0 / (d as f64);
        let g: Vec<f64> = w.iter().map(|&c| (c.cos() / c.sin() - t) * inv).collect();
        let mut hess = vec![vec![0.0; d]; d];
        for j in 0..d {
            for k in 0..d {
                let mut v = f * g[j] * g[k] - f * sec2 * inv;
                if j == k {
                    let sj = w[j].sin();
                    v -= f * inv / (sj * sj);
                }
                hess[j][k] = v;
            }
        }
        hess
    }
}

pub fn in_closed_simplex(w: &[f64], tol: f64) -> bool {
    w.iter().all(|&c| c >= -tol) && w.iter().sum::<f64>() <= PI / 2.0 + tol
}

pub fn is_interior(w: &[f64], tol: f64) -> bool {
    w.iter().all(|&c| c > tol) && w.iter().sum::<f64>() < PI / 2.0 - tol
}

// ---------------------------------------------------------------------------
// The amoeba H = ∪ H_k and its boundary surfaces S_k.

#[derive(Clone, Copy, PartialEq, Debug)]
pub enum AmoebaClass {
    Interior,
    /// On the boundary hypersurface S_k.
    Boundary(usize),
    Outside,
}

#[derive(Clone, Debug)]
pub struct AmoebaRegion {
    pub n: usize,
    pub lambda: f64,
}

impl AmoebaRegion {
    pub fn new(n: usize, lambda: f64) -> Self {
        AmoebaRegion { n, lambda }
    }

    /// Product bound λ^{n+1}/(n+1)^{n+1} of the defining inequality.
    pub fn bound(&self) -> f64 {
        let d = self.n as f64 + 1.0;
        (self.lambda / d).powi(self.n as i32 + 1)
    }

    /// Coordinates of x in the frame of H_k (the generator u_k replaced by
    /// u_0 when k ≥ 1).
    pub fn frame_coords(&self, k: usize, x: &[f64]) -> Vec<f64> {
        if k == 0 {
            return x.to_vec();
        }
        let xk = x[k - 1];
        let mut t: Vec<f64> = x.iter().map(|&c| c - xk).collect();
        t[k - 1] = -xk;
        t
    }

    /// Signed defect Π t − bound of x in the k-th frame.
    pub fn residual(&self, k: usize, x: &[f64]) -> f64 {
        let t = self.frame_coords(k, x);
        t.iter().product::<f64>() - self.bound()
    }

    pub fn in_piece(&self, k: usize, x: &[f64], tol: f64) -> bool {
        let t = self.frame_coords(k, x);
        let scale = 1.0 + t.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
        t.iter().all(|&c| c >= -tol * scale)
            && t.iter().product::<f64>() <= self.bound() + self.band(&t, tol)
    }

    fn band(&self, t: &[f64], tol: f64) -> f64 {
        let t_inf = t.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
        tol * (self.bound() + t_inf.powi(self.n as i32 + 1) + 1e-300)
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        (0..=self.n + 1).any(|k| self.in_piece(k, x, tol))
    }

    pub fn classify(&self, x: &[f64], tol: f64) -> AmoebaClass {
        let mut inside = false;
        for k in 0..=self.n + 1 {
            let t = self.frame_coords(k, x);
            let scale = 1.0 + t.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
            let nonneg = t.iter().all(|&c| c >= -tol * scale);
            if !nonneg {
                continue;
            }
            let prod: f64 = t.iter().product();
            let band = self.band(&t, tol);
            if (prod - self.bound()).abs() <= band {
                return AmoebaClass::Boundary(k);
            }
            if prod < self.bound() {
                inside = true;
            }
        }
        if inside {
            AmoebaClass::Interior
        } else {
            AmoebaClass::Outside
        }
    }
}

// ---------------------------------------------------------------------------
// Region predicates: Δ_{jk}, W_J, W_{J,ε}, A_{J,ε} on the coamoeba side and
// D_{jk}, V_J on the amoeba side.

/// Vertex p_k of the standard coamoeba in window coordinates.
pub fn vertex_coords(n: usize, k: usize) -> Vec<f64> {
    let mut p = vec![0.0; n + 1];
    if k >= 1 {
        p[k - 1] = PI / 2.0;
    }
    p
}

/// Δ_{jk} ⊂ C̄⁺: the half cut by the barycentric wall that contains p_k.
pub fn delta_plus_contains(
    n: usize,
    j: usize,
    k: usize,
    w: &[f64],
    tol: f64,
) -> Result<bool, CoamoebaError> {
    if j == k || j > n + 1 || k > n + 1 {
        return Err(CoamoebaError::BadIndex);
    }
    if !in_closed_simplex(w, tol) {
        return Ok(false);
    }
    let total: f64 = w.iter().sum();
    Ok(if k == 0 {
        2.0 * w[j - 1] + (total - w[j - 1]) <= PI / 2.0 + tol
    } else if j == 0 {
        2.0 * w[k - 1] + (total - w[k - 1]) >= PI / 2.0 - tol
    } else {
        w[k - 1] - w[j - 1] >= -tol
    })
}

/// W⁺_J = ∩_{k∉J, j∈J} Δ_{jk}, the star neighborhood of the face E⁺_J.
pub fn w_plus_contains(
    n: usize,
    j_set: &[usize],
    w: &[f64],
    tol: f64,
) -> Result<bool, CoamoebaError> {
    if j_set.is_empty() || j_set.len() > n || j_set.iter().any(|&j| j > n + 1) {
        return Err(CoamoebaError::BadIndex);
    }
    for &j in j_set {
        for k in 0..=n + 1 {
            if !j_set.contains(&k) && !delta_plus_contains(n, j, k, w, tol)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// W_J = W⁺_J ∪ ι(W⁺_J), tested on a torus point.
pub fn w_contains(
    model: &PantsModel,
    j_set: &[usize],
    y: &TorusPoint,
    tol: f64,
) -> Result<bool, CoamoebaError> {
    match model.plus_rep(y, tol) {
        None => Ok(false),
        Some((_, w)) => w_plus_contains(model.n, j_set, &w, tol),
    }
}

fn face_vertices(n: usize, j_set: &[usize]) -> Vec<Vec<f64>> {
    (0..=n + 1)
        .filter(|k| !j_set.contains(k))
        .map(|k| vertex_coords(n, k))
        .collect()
}

fn barycenter(pts: &[Vec<f64>]) -> Vec<f64> {
    let d = pts[0].len();
    let mut b = vec![0.0; d];
    for p in pts {
        numerics::axpy(&mut b, 1.0 / pts.len() as f64, p);
    }
    b
}

/// The squeezed star neighborhood W⁺_{J,ε}; at ε = 1/2 it equals W⁺_J.
pub fn w_eps_plus_contains(
    n: usize,
    j_set: &[usize],
    eps: f64,
    w: &[f64],
    tol: f64,
) -> Result<bool, CoamoebaError> {
    if j_set.is_empty() || j_set.len() > n || j_set.iter().any(|&j| j > n + 1) {
        return Err(CoamoebaError::BadIndex);
    }
    if !(0.0..=0.5).contains(&eps) {
        return Err(CoamoebaError::BadIndex);
    }
    if !in_closed_simplex(w, tol) {
        return Ok(false);
    }
    let face = face_vertices(n, j_set);
    let b = barycenter(&face);
    let q = |j: usize| -> Vec<f64> {
        let pj = vertex_coords(n, j);
        pj.iter().zip(&b).map(|(&p, &bb)| eps * p + (1.0 - eps) * bb).collect()
    };
    match j_set.len() {
        1 => {
            let mut hull = face;
            hull.push(q(j_set[0]));
            Ok(numerics::in_hull(w, &hull, tol))
        }
        2 => {
            let (j1, j2) = (j_set[0], j_set[1]);
            let mut h1 = face.clone();
            h1.push(q(j1));
            h1.push(vertex_coords(n, j2));
            let mut h2 = face;
            h2.push(q(j2));
            h2.push(vertex_coords(n, j1));
            Ok(numerics::in_hull(w, &h1, tol) && numerics::in_hull(w, &h2, tol))
        }
        _ => Err(CoamoebaError::BadIndex),
    }
}

/// A⁺_{J,ε} ⊂ Ē⁺_J: the face with the squeezed neighborhoods of its own
/// codimension-one faces removed (vertices stay).
pub fn a_eps_plus_contains(
    n: usize,
    j_set: &[usize],
    eps: f64,
    w: &[f64],
    tol: f64,
) -> Result<bool, CoamoebaError> {
    if j_set.is_empty() || j_set.len() > n {
        return Err(CoamoebaError::BadIndex);
    }
    // must lie on the closed face: barycentric support off J only
    let face = face_vertices(n, j_set);
    if !numerics::in_hull(w, &face, tol) {
        return Ok(false);
    }
    for jp in 0..=n + 1 {
        if j_set.contains(&jp) {
            continue;
        }
        let mut j_bigger: Vec<usize> = j_set.to_vec();
        j_bigger.push(jp);
        j_bigger.sort_unstable();
        // W⁺_{J,J',ε} built inside E⁺_J: vertices of E_{J'}, plus the point
        // pulled from p_{j'} toward the barycenter of E_{J'}.
        let sub_face = face_vertices(n, &j_bigger);
        let b = barycenter(&sub_face);
        let pj = vertex_coords(n, jp);
        let qp: Vec<f64> =
            pj.iter().zip(&b).map(|(&p, &bb)| eps * p + (1.0 - eps) * bb).collect();
        let mut hull = sub_face;
        hull.push(qp);
        // interior of the squeezed neighborhood is removed
        if numerics::strictly_in_hull(w, &hull, tol.max(1e-12)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// D_{jk} ⊂ M_R: the half containing u_j among the walls spanned by the
/// other generators.
pub fn d_contains(n: usize, j: usize, k: usize, x: &[f64], tol: f64) -> Result<bool, CoamoebaError> {
    if j == k || j > n + 1 || k > n + 1 {
        return Err(CoamoebaError::BadIndex);
    }
    Ok(if k == 0 {
        x[j - 1] >= -tol
    } else if j == 0 {
        x[k - 1] <= tol
    } else {
        x[j - 1] - x[k - 1] >= -tol
    })
}

/// V_J = ∩_{j∈J, k∉J} D_{jk}, the cone neighborhood of Γ_J.
pub fn v_contains(n: usize, j_set: &[usize], x: &[f64], tol: f64) -> Result<bool, CoamoebaError> {
    if j_set.is_empty() || j_set.iter().any(|&j| j > n + 1) {
        return Err(CoamoebaError::BadIndex);
    }
    for &j in j_set {
        for k in 0..=n + 1 {
            if !j_set.contains(&k) && !d_contains(n, j, k, x, tol)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Boundary limit signatures (behavior of h approaching a face of C).

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Trend {
    PlusInf,
    MinusInf,
    Zero,
    Bounded,
}

#[derive(Clone, Debug)]
pub struct LimitSignature {
    pub coords: Vec<Trend>,
    /// Trends of h_j − h_i against the reference coordinate i (0 ∈ J case).
    pub diffs: Option<Vec<Trend>>,
    pub reference: Option<usize>,
    pub matches_lemma: bool,
}

fn detect_trend(first: f64, last: f64) -> Trend {
    let big = 50.0 * (first.abs() + 1e-2);
    if last > big {
        Trend::PlusInf
    } else if last < -big {
        Trend::MinusInf
    } else if last.abs() <= 0.05 * first.abs().max(1e-4) {
        Trend::Zero
    } else {
        Trend::Bounded
    }
}

/// Classifies the limit behavior of h along a sequence approaching the
/// interior of the face E_J, and checks it against the expected signature.
pub fn boundary_limit_signature(
    model: &PantsModel,
    j_set: &[usize],
    samples: &[TorusPoint],
) -> LimitSignature {
    let d = model.dim();
    let values: Vec<Vec<f64>> = samples
        .iter()
        .filter_map(|y| {
            model
                .plus_rep(y, 0.0)
                .filter(|(_, w)| is_interior(w, 0.0))
                .map(|(_, w)| model.h_plus(&w))
        })
        .collect();
    assert!(values.len() >= 3, "need interior samples to detect a trend");
    let first = &values[0];
    let last = &values[values.len() - 1];
    let coords: Vec<Trend> = (0..d).map(|i| detect_trend(first[i], last[i])).collect();
    if !j_set.contains(&0) {
        let matches = (1..=d).all(|lbl| {
            if j_set.contains(&lbl) {
                coords[lbl - 1] == Trend::PlusInf
            } else {
                coords[lbl - 1] == Trend::Zero
            }
        });
        LimitSignature { coords, diffs: None, reference: None, matches_lemma: matches }
    } else {
        let reference = (1..=d).find(|lbl| !j_set.contains(lbl)).unwrap();
        let diffs: Vec<Trend> = (0..d)
            .map(|i| {
                detect_trend(first[i] - first[reference - 1], last[i] - last[reference - 1])
            })
            .collect();
        let mut matches = true;
        for lbl in 1..=d {
            if !j_set.contains(&lbl) {
                matches &= coords[lbl - 1] == Trend::MinusInf;
                if lbl != reference {
                    matches &= diffs[lbl - 1] == Trend::Zero;
                }
            } else {
                matches &= diffs[lbl - 1] == Trend::PlusInf;
            }
        }
        LimitSignature { coords, diffs: Some(diffs), reference: Some(reference), matches_lemma: matches }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coamoeba::iota;

    fn interior_point(n: usize, alpha: f64) -> TorusPoint {
        // alpha in (0,1): scaled barycenter
        let c = alpha * PI / (2.0 * (n as f64 + 2.0));
        torus_reduce(&vec![c; n + 1])
    }

    #[test]
    fn f_barycenter_value_n1() {
        // (cos(π/3) sin²(π/6))^{1/2} = (1/2 · 1/4)^{1/2} = 1/(2√2)
        let m = PantsModel::new(1, 1.0);
        let y = torus_reduce(&[PI / 6.0, PI / 6.0]);
        let f = m.f_eval(&CoamoebaPoint::Interior(y)).unwrap();
        assert!((f - 0.35355339059327373).abs() < 1e-12);
    }

    #[test]
    fn f_vanishes_on_boundary_and_antisymmetric() {
        let m = PantsModel::new(1, 1.0);
        let edge = torus_reduce(&[PI / 4.0, 0.0]);
        assert_eq!(m.f_eval(&CoamoebaPoint::Interior(edge)).unwrap(), 0.0);
        for i in 1..40 {
            let y = torus_reduce(&[0.011 * i as f64, 0.013 * i as f64 + 0.04]);
            if m.coamoeba().classify(&y, 1e-9).in_coamoeba() {
                let f = m.f_eval(&CoamoebaPoint::Interior(y.clone())).unwrap();
                let fi = m.f_eval(&CoamoebaPoint::Interior(iota(&y))).unwrap();
                assert!((f + fi).abs() <= 1e-12, "antisymmetry failed: {f} vs {fi}");
            }
        }
    }

    #[test]
    fn h_vanishes_at_barycenters() {
        for n in [1usize, 2] {
            let m = PantsModel::new(n, 1.0);
            let b = torus_reduce(&vec![PI / (2.0 * (n as f64 + 2.0)); n + 1]);
            let h = m.h_eval(&CoamoebaPoint::Interior(b)).unwrap();
            assert!(h.iter().all(|&c| c.abs() < 1e-12), "h at barycenter = {h:?}");
        }
    }

    #[test]
    fn h_matches_finite_differences() {
        for n in [1usize, 2] {
            let m = PantsModel::new(n, 1.0);
            for trial in 0..40 {
                let y = interior_point(n, 0.3 + 0.015 * trial as f64);
                let mut w = m.plus_rep(&y, 0.0).unwrap().1;
                w[0] += 0.01 * (trial as f64 * 0.7).sin().abs();
                if !is_interior(&w, 5e-2) {
                    continue;
                }
                let h = m.h_plus(&w);
                let step = 1e-5;
                for j in 0..=n {
                    let mut wp = w.clone();
                    let mut wm = w.clone();
                    wp[j] += step;
                    wm[j] -= step;
                    let fd = (m.f_plus(&wp) - m.f_plus(&wm)) / (2.0 * step);
                    let rel = (h[j] - fd).abs() / h[j].abs().max(1.0);
                    assert!(rel < 1e-6, "n={n} coord {j}: closed {h:?} vs fd {fd}");
                }
            }
        }
    }

    #[test]
    fn hessian_negative_definite_and_symmetric() {
        for n in [1usize, 2] {
            let m = PantsModel::new(n, 1.0);
            let y = interior_point(n, 0.8);
            let h = m.hessian(&y).unwrap();
            for j in 0..=n {
                for k in 0..=n {
                    assert!((h[j][k] - h[k][j]).abs() < 1e-12);
                }
            }
            let eig = numerics::symmetric_eigenvalues(&h);
            assert!(eig.iter().all(|&e| e < -1e-12), "eigs {eig:?}");
            // C⁻ side is the mirror image with positive definite Hessian
            let hm = m.hessian(&iota(&y)).unwrap();
            let eigm = numerics::symmetric_eigenvalues(&hm);
            assert!(eigm.iter().all(|&e| e > 1e-12));
        }
    }

    #[test]
    fn hessian_matches_fd_of_h() {
        let m = PantsModel::new(2, 1.0);
        let y = torus_reduce(&[0.3, 0.35, 0.25]);
        let hess = m.hessian(&y).unwrap();
        let w = m.plus_rep(&y, 0.0).unwrap().1;
        let step = 1e-5;
        for k in 0..3 {
            let mut wp = w.clone();
            let mut wm = w.clone();
            wp[k] += step;
            wm[k] -= step;
            let hp = m.h_plus(&wp);
            let hm = m.h_plus(&wm);
            for j in 0..3 {
                let fd = (hp[j] - hm[j]) / (2.0 * step);
                let rel = (hess[j][k] - fd).abs() / hess[j][k].abs().max(1.0);
                assert!(rel < 1e-6);
            }
        }
    }

    #[test]
    fn equivariance_under_r_and_iota() {
        use crate::coamoeba::{apply_r, apply_rstar};
        for n in [1usize, 2] {
            let m = PantsModel::new(n, 1.0);
            for trial in 0..60 {
                let y = torus_reduce(
                    &(0..n + 1)
                        .map(|i| 0.1 + 0.003 * (trial * (i + 2)) as f64)
                        .collect::<Vec<_>>(),
                );
                if !m.coamoeba().classify(&y, 1e-9).in_coamoeba() {
                    continue;
                }
                let h = m.h_eval(&CoamoebaPoint::Interior(y.clone())).unwrap();
                let hi = m.h_eval(&CoamoebaPoint::Interior(iota(&y))).unwrap();
                assert!(numerics::norm(&numerics::sub(&h, &hi)) < 1e-9);
                for k in 1..=n + 1 {
                    let hr = m
                        .h_eval(&CoamoebaPoint::Interior(apply_r(n, k, &y)))
                        .unwrap();
                    let rh = apply_rstar(n, k, &h);
                    assert!(
                        numerics::norm(&numerics::sub(&hr, &rh)) < 1e-9,
                        "equivariance k={k}"
                    );
                }
            }
        }
    }

    #[test]
    fn amoeba_examples() {
        let a = AmoebaRegion::new(1, 1.0);
        assert_eq!(a.classify(&[0.0, 0.0], 1e-9), AmoebaClass::Interior);
        assert_eq!(a.classify(&[0.5, 0.5], 1e-9), AmoebaClass::Boundary(0));
        assert_eq!(a.classify(&[2.0, 2.0], 1e-9), AmoebaClass::Outside);
        // rescaling moves the boundary
        let a2 = AmoebaRegion::new(1, 2.0);
        assert_eq!(a2.classify(&[1.0, 1.0], 1e-9), AmoebaClass::Boundary(0));
        assert_eq!(a2.classify(&[0.5, 0.5], 1e-9), AmoebaClass::Interior);
    }

    #[test]
    fn h_image_lands_in_amoeba() {
        for n in [1usize, 2] {
            let m = PantsModel::new(n, 1.0);
            let a = AmoebaRegion::new(n, 1.0);
            for trial in 0..200 {
                let mut w = vec![0.0; n + 1];
                let mut state = trial as u64 * 2654435761 + 1;
                let mut rnd = || {
                    state ^= state << 13;
                    state ^= state >> 7;
                    state ^= state << 17;
                    (state >> 11) as f64 / (1u64 << 53) as f64
                };
                loop {
                    for c in w.iter_mut() {
                        *c = rnd() * PI / 2.0;
                    }
                    if is_interior(&w, 1e-3) {
                        break;
                    }
                }
                let h = m.h_plus(&w);
                assert!(a.contains(&h, 1e-7), "h({w:?}) = {h:?} escaped H");
            }
        }
    }

    #[test]
    fn vertex_chart_diagonal_limit() {
        let m = PantsModel::new(1, 1.0);
        let s = 1.0 / 2.0f64.sqrt();
        let h = m.vertex_chart_h(0, &[s, s]).unwrap();
        assert!((h[0] - 0.5).abs() < 1e-7 && (h[1] - 0.5).abs() < 1e-7);
        // lands exactly on S_0: 4 x₁ x₂ = 1
        assert!((4.0 * h[0] * h[1] - 1.0).abs() < 1e-6);
        // closed-form oracle for other directions
        for t in 1..10 {
            let ang = 0.15 + 0.12 * t as f64;
            let dir = [ang.cos(), ang.sin()];
            let lim = m.vertex_chart_h(0, &dir).unwrap();
            let oracle = m.chart_limit_closed_form_n1(&dir).unwrap();
            assert!(
                numerics::norm(&numerics::sub(&lim, &oracle)) < 1e-6,
                "dir {dir:?}: {lim:?} vs {oracle:?}"
            );
        }
    }

    #[test]
    fn chart_limits_reach_all_boundary_pieces() {
        let n = 2;
        let m = PantsModel::new(n, 1.0);
        let a = AmoebaRegion::new(n, 1.0);
        let c = m.coamoeba().clone();
        for k in 0..=n + 1 {
            for t in 0..25 {
                // inward direction toward a random interior point
                let alpha = 0.2 + 0.03 * t as f64;
                let q = interior_point(n, alpha);
                let p = c.vertex(k);
                let mut dir = numerics::sub(&m.window(&q), &m.window(&p));
                let nn = numerics::norm(&dir);
                dir.iter_mut().for_each(|d| *d /= nn);
                let h = m.vertex_chart_h(k, &dir).unwrap();
                assert_eq!(a.classify(&h, 1e-6), AmoebaClass::Boundary(k), "k={k} h={h:?}");
            }
        }
    }

    #[test]
    fn region_examples() {
        // Δ_{j0} boundary case at the barycenter scaled point
        let w = [PI / 8.0, PI / 8.0, PI / 8.0];
        for j in 1..=3 {
            assert!(delta_plus_contains(2, j, 0, &w, 1e-12).unwrap());
        }
        assert!(d_contains(2, 1, 2, &[3.0, 1.0, 0.0], 0.0).unwrap());
        assert!(delta_plus_contains(2, 1, 1, &w, 0.0).is_err());
        // V_{J_0} ∩ H = H_0: positive orthant direction
        assert!(v_contains(2, &[1, 2, 3], &[1.0, 1.0, 1.0], 1e-12).unwrap());
        assert!(!v_contains(2, &[1, 2, 3], &[-1.0, 1.0, 1.0], 1e-9).unwrap());
    }

    #[test]
    fn w_eps_collars_shrink_and_contain_w() {
        // W⁺_J ⊆ W⁺_{J,1/2} and the collars shrink monotonically with ε.
        let n = 1;
        for j_set in [vec![1usize], vec![2usize], vec![0usize]] {
            for trial in 0..400 {
                let a = (trial % 20) as f64 / 20.0 * PI / 2.0;
                let b = (trial / 20) as f64 / 20.0 * (PI / 2.0 - a);
                let w = [a, b];
                if !in_closed_simplex(&w, 0.0) {
                    continue;
                }
                let star = w_plus_contains(n, &j_set, &w, 1e-9).unwrap();
                let half = w_eps_plus_contains(n, &j_set, 0.5, &w, 1e-9).unwrap();
                let tight = w_eps_plus_contains(n, &j_set, 0.1, &w, 1e-9).unwrap();
                if star {
                    assert!(half, "W_J ⊄ W_(J,1/2) at {w:?} J={j_set:?}");
                }
                if tight {
                    assert!(half, "collar not monotone at {w:?}");
                }
            }
        }
    }

    #[test]
    fn h_maps_star_neighborhoods_into_cone_neighborhoods() {
        // Lemma-level sampling: h(W̃_J) ⊆ V_J ∩ H
        let n = 2;
        let m = PantsModel::new(n, 1.0);
        let a = AmoebaRegion::new(n, 1.0);
        for j_set in [vec![1usize], vec![1usize, 2], vec![0usize, 3]] {
            let mut tested = 0;
            let mut state = 7u64;
            let mut rnd = || {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                (state >> 11) as f64 / (1u64 << 53) as f64
            };
            while tested < 150 {
                let w = [rnd() * PI / 2.0, rnd() * PI / 2.0, rnd() * PI / 2.0];
                if !is_interior(&w, 1e-4) || !w_plus_contains(n, &j_set, &w, 0.0).unwrap() {
                    continue;
                }
                let h = m.h_plus(&w);
                assert!(v_contains(n, &j_set, &h, 1e-7).unwrap(), "J={j_set:?} h={h:?}");
                assert!(a.contains(&h, 1e-7));
                tested += 1;
            }
        }
    }

    #[test]
    fn limit_signature_cases() {
        let n = 2;
        let m = PantsModel::new(n, 1.0);
        // 0 ∉ J: approach int E_1 (0 ∉ J = {1})
        let base = [0.0, PI / 6.0, PI / 8.0];
        let samples: Vec<TorusPoint> = (1..=18)
            .map(|i| {
                let d = 0.5f64.powi(i);
                torus_reduce(&[base[0] + d, base[1], base[2]])
            })
            .collect();
        let sig = boundary_limit_signature(&m, &[1], &samples);
        assert!(sig.matches_lemma, "{sig:?}");
        assert_eq!(sig.coords[0], Trend::PlusInf);
        assert_eq!(sig.coords[1], Trend::Zero);
        assert_eq!(sig.coords[2], Trend::Zero);
        // 0 ∈ J: approach int E_{0,1}
        let base = [0.0, PI / 5.0, PI / 2.0 - PI / 5.0];
        let samples: Vec<TorusPoint> = (1..=40)
            .map(|i| {
                let d = 0.5f64.powi(i);
                torus_reduce(&[base[0] + d, base[1] - d, base[2] - d])
            })
            .collect();
        let sig = boundary_limit_signature(&m, &[0, 1], &samples);
        assert!(sig.matches_lemma, "{sig:?}");
    }

    #[test]
    fn h_invert_round_trip() {
        for n in [1usize, 2] {
            let m = PantsModel::new(n, 1.0);
            for t in 0..30 {
                let mut w = vec![0.12 + 0.01 * t as f64; n + 1];
                w[0] *= 0.7;
                if !is_interior(&w, 1e-3) {
                    continue;
                }
                let x = m.h_plus(&w);
                let back = m.h_invert(&x, None).expect("inversion failed");
                assert!(numerics::norm(&numerics::sub(&back, &w)) < 1e-8);
            }
        }
    }
}

//! The torus T = R^{n+1}/πZ^{n+1}, Lagrangian coamoebas of elementary
//! simplices, their face classification, and the symmetry groups G, G*, 𝒢.
//!
//! Internally a coamoeba is stored through the doubled coordinates
//! z = 2y/π, in which the defining simplex has integer vertices and the
//! torus has period 2. The standard coamoeba is the special case of the
//! standard simplex, with vertex p_k = (π/2) e_k.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::numerics;
use crate::polyhedral::LatticePolytope;

pub const PI: f64 = core::f64::consts::PI;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CoamoebaError {
    NotElementary,
    DirectionExitsC,
    OutsideCoamoeba,
    BadIndex,
}

impl core::fmt::Display for CoamoebaError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let s = match self {
            CoamoebaError::NotElementary => "simplex is not elementary",
            CoamoebaError::DirectionExitsC => "ray direction leaves the coamoeba",
            CoamoebaError::OutsideCoamoeba => "point is outside the coamoeba",
            CoamoebaError::BadIndex => "index out of range",
        };
        f.write_str(s)
    }
}

/// A point of T with canonical representative in [0, π)^{n+1}.
#[derive(Clone, PartialEq, Debug)]
pub struct TorusPoint(pub Vec<f64>);

/// Canonical representative of a real vector modulo πZ^{n+1}.
pub fn torus_reduce(y: &[f64]) -> TorusPoint {
    TorusPoint(
        y.iter()
            .map(|&c| {
                let r = c - PI * (c / PI).floor();
                if r >= PI {
                    r - PI
                } else {
                    r
                }
            })
            .collect(),
    )
}

/// Quotient metric induced by the Euclidean metric and period-π translations.
pub fn torus_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| {
            let d = x - y;
            let m = d - PI * (d / PI).round();
            m * m
        })
        .sum::<f64>()
        .sqrt()
}

/// Involution ι: [y] ↦ [−y].
pub fn iota(y: &TorusPoint) -> TorusPoint {
    torus_reduce(&y.0.iter().map(|&c| -c).collect::<Vec<_>>())
}

#[derive(Clone, PartialEq, Debug)]
pub enum CoamoebaClass {
    InteriorPlus,
    InteriorMinus,
    /// Vertex p_k (vertices belong to the coamoeba).
    Vertex(usize),
    /// On the open face E_J; sign +1 for the C̄⁺ part, −1 for the ι-image.
    Face(Vec<usize>, i8),
    Outside,
}

impl CoamoebaClass {
    pub fn in_coamoeba(&self) -> bool {
        matches!(
            self,
            CoamoebaClass::InteriorPlus | CoamoebaClass::InteriorMinus | CoamoebaClass::Vertex(_)
        )
    }
}

/// The coamoeba of an elementary lattice simplex, `C = C⁺ ∪ C⁻`.
#[derive(Clone, Debug)]
pub struct Coamoeba {
    /// Vertices of the defining simplex in z = 2y/π coordinates.
    pub simplex: Vec<Vec<i64>>,
    pub ambient: usize,
}

impl Coamoeba {
    /// The standard (n+1)-dimensional coamoeba with p_0 = 0, p_k = (π/2)e_k.
    pub fn standard(n: usize) -> Self {
        let d = n + 1;
        let mut simplex = vec![vec![0; d]];
        for k in 0..d {
            let mut e = vec![0; d];
            e[k] = 1;
            simplex.push(e);
        }
        Coamoeba { simplex, ambient: d }
    }

    /// Coamoeba of an elementary simplex `e ⊂ N`, i.e. the set of [y] with
    /// 2(y − k) ∈ e for some k ∈ N, together with the ι-image.
    pub fn of_simplex(e: &LatticePolytope) -> Result<Self, CoamoebaError> {
        let verts: Vec<Vec<i64>> = e.vertices.iter().map(|v| v.0.clone()).collect();
        if verts.len() != e.dim + 1 || !is_elementary(&verts) {
            return Err(CoamoebaError::NotElementary);
        }
        Ok(Coamoeba { simplex: verts, ambient: e.ambient_dim() })
    }

    pub fn dim(&self) -> usize {
        self.simplex.len() - 1
    }

    /// Vertex [p_i] = [(π/2) v_i] as a torus point.
    pub fn vertex(&self, i: usize) -> TorusPoint {
        torus_reduce(
            &self.simplex[i]
                .iter()
                .map(|&c| 0.5 * PI * c as f64)
                .collect::<Vec<_>>(),
        )
    }

    /// Classification of a torus point against `C = C⁺ ∪ C⁻`.
    ///
    /// For the standard coamoeba the face index set is the usual J: the face
    /// E_J is spanned by the vertices p_k with k ∉ J, and J lists the absent
    /// labels. Open faces of dimension ≥ 1 are not part of C.
    pub fn classify(&self, y: &TorusPoint, tol: f64) -> CoamoebaClass {
        let z: Vec<f64> = y.0.iter().map(|&c| 2.0 * c / PI).collect();
        if let Some(bary) = self.barycentric_mod2(&z, tol) {
            return self.class_from_barycentric(&bary, tol, 1);
        }
        let zm: Vec<f64> = z.iter().map(|&c| -c).collect();
        if let Some(bary) = self.barycentric_mod2(&zm, tol) {
            return self.class_from_barycentric(&bary, tol, -1);
        }
        CoamoebaClass::Outside
    }

    fn class_from_barycentric(&self, bary: &[f64], tol: f64, sign: i8) -> CoamoebaClass {
        let ztol = 2.0 * tol / PI;
        let absent: Vec<usize> = (0..self.simplex.len()).filter(|&i| bary[i] <= ztol).collect();
        if absent.is_empty() {
            return if sign > 0 {
                CoamoebaClass::InteriorPlus
            } else {
                CoamoebaClass::InteriorMinus
            };
        }
        if absent.len() == self.simplex.len() - 1 {
            let k = (0..self.simplex.len()).find(|i| !absent.contains(i)).unwrap();
            return CoamoebaClass::Vertex(k);
        }
        CoamoebaClass::Face(absent, sign)
    }

    /// Barycentric coordinates of `z` against the simplex modulo 2Z^{n+1},
    /// all components ≥ −tol, or `None`.
    fn barycentric_mod2(&self, z: &[f64], tol: f64) -> Option<Vec<f64>> {
        let d = self.ambient;
        let v0: Vec<f64> = self.simplex[0].iter().map(|&c| c as f64).collect();
        let ztol = 2.0 * tol / PI;
        // candidate lattice shifts k with z − 2k near the simplex
        let lo: Vec<i64> = (0..d)
            .map(|i| {
                let max_c = self.simplex.iter().map(|v| v[i]).max().unwrap() as f64;
                (((z[i] - max_c) / 2.0) - ztol).ceil() as i64
            })
            .collect();
        let hi: Vec<i64> = (0..d)
            .map(|i| {
                let min_c = self.simplex.iter().map(|v| v[i]).min().unwrap() as f64;
                (((z[i] - min_c) / 2.0) + ztol).floor() as i64
            })
            .collect();
        let mut shift = lo.clone();
        loop {
            let w: Vec<f64> = (0..d).map(|i| z[i] - 2.0 * shift[i] as f64 - v0[i]).collect();
            if let Some(s) = simplex_coords(&self.edge_matrix(), &w, ztol) {
                let total: f64 = s.iter().sum();
                if total <= 1.0 + ztol && s.iter().all(|&c| c >= -ztol) {
                    let mut bary = vec![1.0 - total];
                    bary.extend(s);
                    return Some(bary);
                }
            }
            // odometer over the shift box
            let mut i = 0;
            loop {
                if i == d {
                    return None;
                }
                shift[i] += 1;
                if shift[i] <= hi[i] {
                    break;
                }
                shift[i] = lo[i];
                i += 1;
            }
        }
    }

    fn edge_matrix(&self) -> Vec<Vec<f64>> {
        (1..self.simplex.len())
            .map(|i| {
                (0..self.ambient)
                    .map(|c| (self.simplex[i][c] - self.simplex[0][c]) as f64)
                    .collect()
            })
            .collect()
    }
}

/// Least-squares solve w = Σ s_i d_i with residual check; `None` when w is
/// outside the affine span.
fn simplex_coords(edges: &[Vec<f64>], w: &[f64], tol: f64) -> Option<Vec<f64>> {
    let m = edges.len();
    if m == 0 {
        return if w.iter().all(|&c| c.abs() <= tol) { Some(Vec::new()) } else { None };
    }
    let mut gram = vec![vec![0.0; m]; m];
    let mut rhs = vec![0.0; m];
    for i in 0..m {
        for j in 0..m {
            gram[i][j] = numerics::dot(&edges[i], &edges[j]);
        }
        rhs[i] = numerics::dot(&edges[i], w);
    }
    let s = numerics::solve(&mut gram, &mut rhs)?;
    for c in 0..w.len() {
        let mut acc = 0.0;
        for i in 0..m {
            acc += s[i] * edges[i][c];
        }
        if (acc - w[c]).abs() > tol * 4.0 {
            return None;
        }
    }
    Some(s)
}

/// An m-simplex is elementary when the gcd of the maximal minors of its edge
/// matrix is 1 (for full dimension: |det| = 1).
fn is_elementary(verts: &[Vec<i64>]) -> bool {
    let m = verts.len() - 1;
    if m == 0 {
        return true;
    }
    let d = verts[0].len();
    let edges: Vec<Vec<i64>> = (1..=m)
        .map(|i| (0..d).map(|c| verts[i][c] - verts[0][c]).collect())
        .collect();
    // gcd over all m x m minors
    let mut subset: Vec<usize> = (0..m).collect();
    let mut g: i64 = 0;
    loop {
        let cols: Vec<Vec<i64>> = edges
            .iter()
            .map(|e| subset.iter().map(|&r| e[r]).collect())
            .collect();
        let minor = crate::exact::det_i64(&cols);
        g = gcd_i64(g, minor);
        // next subset of rows
        let mut i = m;
        let mut advanced = false;
        while i > 0 {
            i -= 1;
            if subset[i] < d - (m - i) {
                subset[i] += 1;
                for j in i + 1..m {
                    subset[j] = subset[j - 1] + 1;
                }
                advanced = true;
                break;
            }
        }
        if !advanced {
            break;
        }
    }
    g.abs() == 1
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// A point of the blown-up coamoeba C̃: an interior point, or a vertex chart
/// (vertex index and inward unit direction).
#[derive(Clone, Debug)]
pub enum CoamoebaPoint {
    Interior(TorusPoint),
    VertexChart { vertex: usize, dir: Vec<f64> },
}

impl CoamoebaPoint {
    /// Chart point with the direction normalized; the canonical sign points
    /// into C⁺ when possible.
    pub fn chart(c: &Coamoeba, vertex: usize, dir: &[f64]) -> Result<Self, CoamoebaError> {
        if vertex >= c.simplex.len() {
            return Err(CoamoebaError::BadIndex);
        }
        let norm = numerics::norm(dir);
        if norm == 0.0 {
            return Err(CoamoebaError::DirectionExitsC);
        }
        let unit: Vec<f64> = dir.iter().map(|&x| x / norm).collect();
        let probe = |sign: f64| -> CoamoebaClass {
            let p = c.vertex(vertex);
            let eps = 1e-6;
            let q: Vec<f64> = p.0.iter().zip(&unit).map(|(&a, &d)| a + sign * eps * d).collect();
            c.classify(&torus_reduce(&q), 1e-12)
        };
        if probe(1.0) == CoamoebaClass::InteriorPlus {
            return Ok(CoamoebaPoint::VertexChart { vertex, dir: unit });
        }
        if probe(-1.0) == CoamoebaClass::InteriorPlus {
            let flipped = unit.iter().map(|&x| -x).collect();
            return Ok(CoamoebaPoint::VertexChart { vertex, dir: flipped });
        }
        // else the line must enter C⁻ on one side
        if probe(1.0) == CoamoebaClass::InteriorMinus {
            return Ok(CoamoebaPoint::VertexChart { vertex, dir: unit });
        }
        if probe(-1.0) == CoamoebaClass::InteriorMinus {
            let flipped = unit.iter().map(|&x| -x).collect();
            return Ok(CoamoebaPoint::VertexChart { vertex, dir: flipped });
        }
        Err(CoamoebaError::DirectionExitsC)
    }
}

/// The interior point p_k + εℓ, used to evaluate limits along blow-up charts.
pub fn blowup_ray_point(
    c: &Coamoeba,
    vertex: usize,
    dir: &[f64],
    eps: f64,
) -> Result<TorusPoint, CoamoebaError> {
    if vertex >= c.simplex.len() {
        return Err(CoamoebaError::BadIndex);
    }
    let p = c.vertex(vertex);
    let q: Vec<f64> = p.0.iter().zip(dir).map(|(&a, &d)| a + eps * d).collect();
    let t = torus_reduce(&q);
    if c.classify(&t, 1e-12).in_coamoeba() {
        Ok(t)
    } else {
        Err(CoamoebaError::DirectionExitsC)
    }
}

// ---------------------------------------------------------------------------
// Symmetries of the standard model.

/// R*_k on M_R: exchanges u_0 and u_k, fixes the other generators.
pub fn apply_rstar(n: usize, k: usize, x: &[f64]) -> Vec<f64> {
    debug_assert!((1..=n + 1).contains(&k));
    let xk = x[k - 1];
    (0..n + 1)
        .map(|i| if i == k - 1 { -xk } else { x[i] - xk })
        .collect()
}

/// R_k on the torus: y ↦ (R*_k)^t y + p_k.
pub fn apply_r(n: usize, k: usize, y: &TorusPoint) -> TorusPoint {
    debug_assert!((1..=n + 1).contains(&k));
    let total: f64 = y.0.iter().sum();
    let mut out = y.0.clone();
    out[k - 1] = -total + 0.5 * PI;
    torus_reduce(&out)
}

/// The combined symplectomorphism 𝓡_k(x, y) = (R*_k x, R_k y).
pub fn apply_script_r(n: usize, k: usize, x: &[f64], y: &TorusPoint) -> (Vec<f64>, TorusPoint) {
    (apply_rstar(n, k, x), apply_r(n, k, y))
}

/// Transposition action of R_k on index sets J ⊆ {0,…,n+1} (swaps 0 and k).
pub fn apply_r_to_index_set(k: usize, j_set: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = j_set
        .iter()
        .map(|&j| if j == 0 { k } else if j == k { 0 } else { j })
        .collect();
    out.sort_unstable();
    out
}

/// Word in the generators R_k, stored as its affine action on the torus and
/// the dual linear action on M_R.
#[derive(Clone, Debug)]
pub struct SymmetryElement {
    pub n: usize,
    pub word: Vec<usize>,
}

impl SymmetryElement {
    pub fn identity(n: usize) -> Self {
        SymmetryElement { n, word: Vec::new() }
    }

    pub fn then(mut self, k: usize) -> Self {
        self.word.push(k);
        self
    }

    pub fn act_torus(&self, y: &TorusPoint) -> TorusPoint {
        let mut out = y.clone();
        for &k in &self.word {
            out = apply_r(self.n, k, &out);
        }
        out
    }

    pub fn act_base(&self, x: &[f64]) -> Vec<f64> {
        let mut out = x.to_vec();
        for &k in &self.word {
            out = apply_rstar(self.n, k, &out);
        }
        out
    }

    pub fn act_labels(&self, labels: &mut [usize]) {
        for &k in &self.word {
            for l in labels.iter_mut() {
                if *l == 0 {
                    *l = k;
                } else if *l == k {
                    *l = 0;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedral::{convex_hull, lp};

    #[test]
    fn reduction_is_canonical() {
        let t = torus_reduce(&[PI + 0.1, 0.0]);
        assert!((t.0[0] - 0.1).abs() < 1e-12 && t.0[1] == 0.0);
        let t = torus_reduce(&[-0.2, PI / 2.0]);
        assert!((t.0[0] - (PI - 0.2)).abs() < 1e-12);
        let t = torus_reduce(&[3.0 * PI, 2.0 * PI]);
        assert!(t.0[0].abs() < 1e-12 && t.0[1].abs() < 1e-12);
        for y in [[0.3, 2.9], [-7.0, 5.5]] {
            let once = torus_reduce(&y);
            let twice = torus_reduce(&once.0);
            assert_eq!(once, twice);
        }
    }

    #[test]
    fn classify_standard_n1() {
        let c = Coamoeba::standard(1);
        let tol = 1e-9;
        assert_eq!(
            c.classify(&torus_reduce(&[PI / 6.0, PI / 6.0]), tol),
            CoamoebaClass::InteriorPlus
        );
        // midpoint of the edge from p_0 to p_1 lies on E_2 = {y_2 = 0}
        let mid = c.classify(&torus_reduce(&[PI / 4.0, 0.0]), tol);
        assert_eq!(mid, CoamoebaClass::Face(vec![2], 1));
        assert!(!mid.in_coamoeba());
        assert_eq!(c.classify(&torus_reduce(&[0.0, 0.0]), tol), CoamoebaClass::Vertex(0));
        assert_eq!(
            c.classify(&torus_reduce(&[PI / 2.0, 0.0]), tol),
            CoamoebaClass::Vertex(1)
        );
        // ι swaps the open halves
        assert_eq!(
            c.classify(&iota(&torus_reduce(&[PI / 6.0, PI / 6.0])), tol),
            CoamoebaClass::InteriorMinus
        );
        assert_eq!(
            c.classify(&torus_reduce(&[2.0, 2.5]), tol),
            CoamoebaClass::Outside
        );
    }

    #[test]
    fn face_congruences_standard() {
        // points of the closed face Ē_j satisfy <u_j, y> = 0 mod Z; Ē_0
        // satisfies <u_0, y> = 1/2 mod Z (pairing <u*_j, u_k> = δ/π).
        let c = Coamoeba::standard(2);
        let tol = 1e-9;
        let b = [PI / 6.0, PI / 8.0, 0.0];
        match c.classify(&torus_reduce(&b), tol) {
            CoamoebaClass::Face(j, _) => assert_eq!(j, vec![3]),
            other => panic!("unexpected class {other:?}"),
        }
        // in coordinates, <u_j, y> = y_j/π and <u_0, y> = −Σ y_j / π
        let y_face0 = [PI / 4.0, PI / 8.0, PI / 8.0]; // sum = π/2
        match c.classify(&torus_reduce(&y_face0), tol) {
            CoamoebaClass::Face(j, _) => assert_eq!(j, vec![0]),
            other => panic!("unexpected class {other:?}"),
        }
        let pairing_u0: f64 = -y_face0.iter().sum::<f64>() / PI;
        assert!(((pairing_u0 - 0.5).rem_euclid(1.0)).min((0.5 - pairing_u0).rem_euclid(1.0)) < 1e-12);
    }

    #[test]
    fn simplex_coamoeba_of_diagonal_segment() {
        let e = convex_hull(&[lp(&[0, 0]), lp(&[1, 1])]).unwrap();
        let c = Coamoeba::of_simplex(&e).unwrap();
        assert_eq!(c.dim(), 1);
        // interior of the arc: y = (π/4)(1,1)
        assert!(c.classify(&torus_reduce(&[PI / 4.0, PI / 4.0]), 1e-9).in_coamoeba());
        // off the subtorus direction
        assert_eq!(
            c.classify(&torus_reduce(&[PI / 4.0, 0.0]), 1e-9),
            CoamoebaClass::Outside
        );
        // vertices at 0 and (π/2)(1,1)
        assert_eq!(c.classify(&torus_reduce(&[0.0, 0.0]), 1e-9), CoamoebaClass::Vertex(0));
        assert_eq!(
            c.classify(&torus_reduce(&[PI / 2.0, PI / 2.0]), 1e-9),
            CoamoebaClass::Vertex(1)
        );
    }

    #[test]
    fn simplex_coamoeba_translation_invariant() {
        let e1 = convex_hull(&[lp(&[0, 0]), lp(&[1, 1])]).unwrap();
        let e2 = convex_hull(&[lp(&[3, -2]), lp(&[4, -1])]).unwrap();
        let c1 = Coamoeba::of_simplex(&e1).unwrap();
        let c2 = Coamoeba::of_simplex(&e2).unwrap();
        for t in 0..40 {
            let s = t as f64 * 0.157;
            let y = torus_reduce(&[s, s + 0.37]);
            assert_eq!(
                c1.classify(&y, 1e-9).in_coamoeba(),
                c2.classify(&y, 1e-9).in_coamoeba()
            );
        }
    }

    #[test]
    fn non_elementary_rejected() {
        let e = convex_hull(&[lp(&[0, 0]), lp(&[0, 2])]).unwrap();
        assert_eq!(Coamoeba::of_simplex(&e).unwrap_err(), CoamoebaError::NotElementary);
        let t = convex_hull(&[lp(&[0, 0]), lp(&[1, 2]), lp(&[2, 1])]).unwrap();
        assert_eq!(Coamoeba::of_simplex(&t).unwrap_err(), CoamoebaError::NotElementary);
    }

    #[test]
    fn rstar_exchanges_generators() {
        // n = 1: R*_1 maps u_1 = (1,0) to u_0 = (−1,−1)
        assert_eq!(apply_rstar(1, 1, &[1.0, 0.0]), vec![-1.0, -1.0]);
        assert_eq!(apply_rstar(1, 1, &[-1.0, -1.0]), vec![1.0, 0.0]);
        assert_eq!(apply_rstar(1, 1, &[0.0, 1.0]), vec![0.0, 1.0]);
    }

    #[test]
    fn r_exchanges_vertices_and_is_involutive() {
        for n in [1usize, 2] {
            let c = Coamoeba::standard(n);
            for k in 1..=n + 1 {
                let p0 = c.vertex(0);
                let pk = c.vertex(k);
                assert!(torus_distance(&apply_r(n, k, &p0).0, &pk.0) < 1e-12);
                assert!(torus_distance(&apply_r(n, k, &pk).0, &p0.0) < 1e-12);
                for trial in 0..100 {
                    let y = torus_reduce(&[
                        0.03 * trial as f64,
                        0.07 * trial as f64 + 0.1,
                        0.011 * trial as f64,
                    ][..n + 1]
                        .to_vec());
                    let twice = apply_r(n, k, &apply_r(n, k, &y));
                    assert!(torus_distance(&twice.0, &y.0) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn r_preserves_plus_half() {
        let n = 2;
        let c = Coamoeba::standard(n);
        let mut state = 1u64;
        let mut rnd = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let mut tested = 0;
        while tested < 1000 {
            let mut y = vec![rnd() * PI / 2.0, rnd() * PI / 2.0, rnd() * PI / 2.0];
            if y.iter().sum::<f64>() >= PI / 2.0 {
                continue;
            }
            y = torus_reduce(&y).0;
            let t = torus_reduce(&y);
            if c.classify(&t, 1e-9) != CoamoebaClass::InteriorPlus {
                continue;
            }
            for k in 1..=n + 1 {
                assert_eq!(c.classify(&apply_r(n, k, &t), 1e-9), CoamoebaClass::InteriorPlus);
            }
            tested += 1;
        }
    }

    #[test]
    fn group_relation_on_labels() {
        // (R_k R_j)^3 acts trivially on vertex labels for j ≠ k
        let n = 2;
        for k in 1..=n + 1 {
            for j in 1..=n + 1 {
                if j == k {
                    continue;
                }
                let mut labels: Vec<usize> = (0..=n + 1).collect();
                let mut w = SymmetryElement::identity(n);
                for _ in 0..3 {
                    w = w.then(k).then(j);
                }
                w.act_labels(&mut labels);
                assert_eq!(labels, (0..=n + 1).collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn faces_permute_under_r() {
        let n = 2;
        let c = Coamoeba::standard(n);
        let y = torus_reduce(&[PI / 5.0, PI / 7.0, 0.0]);
        let CoamoebaClass::Face(j, _) = c.classify(&y, 1e-9) else {
            panic!("expected face point");
        };
        for k in 1..=n + 1 {
            let ry = apply_r(n, k, &y);
            let CoamoebaClass::Face(rj, _) = c.classify(&ry, 1e-9) else {
                panic!("image should stay on a face");
            };
            assert_eq!(rj, apply_r_to_index_set(k, &j));
        }
    }

    #[test]
    fn blowup_rays_n1() {
        let c = Coamoeba::standard(1);
        let s = 1.0 / 2f64.sqrt();
        let p = blowup_ray_point(&c, 0, &[s, s], 0.01).unwrap();
        assert_eq!(c.classify(&p, 1e-9), CoamoebaClass::InteriorPlus);
        assert!((p.0[0] - 0.01 * s).abs() < 1e-12);
        let m = blowup_ray_point(&c, 0, &[-s, -s], 0.01).unwrap();
        assert_eq!(c.classify(&m, 1e-9), CoamoebaClass::InteriorMinus);
        assert_eq!(
            blowup_ray_point(&c, 0, &[s, -s], 0.01).unwrap_err(),
            CoamoebaError::DirectionExitsC
        );
    }

    #[test]
    fn iota_is_involutive_and_swaps_halves() {
        let c = Coamoeba::standard(2);
        let y = torus_reduce(&[0.3, 0.2, 0.4]);
        assert!(torus_distance(&iota(&iota(&y)).0, &y.0) < 1e-12);
        if c.classify(&y, 1e-9) == CoamoebaClass::InteriorPlus {
            assert_eq!(c.classify(&iota(&y), 1e-9), CoamoebaClass::InteriorMinus);
        }
    }

    #[test]
    fn chart_sign_canonicalization() {
        let c = Coamoeba::standard(1);
        let s = 1.0 / 2f64.sqrt();
        // direction pointing into C⁻ is flipped to point into C⁺
        let CoamoebaPoint::VertexChart { dir, .. } =
            CoamoebaPoint::chart(&c, 0, &[-s, -s]).unwrap()
        else {
            panic!()
        };
        assert!(dir[0] > 0.0 && dir[1] > 0.0);
    }
}

//! Compatible systems of projections onto the faces of the local model.
//!
//! For every face index set J a transversal subspace L_J of the torus side
//! is fixed; nesting L_{J1} ⊂ L_{J2} for J1 ⊂ J2 makes the projections
//! compose. The dual projection on the amoeba side is linear with fibres
//! parallel to L_J^⊥. Everything here lives in standard local coordinates;
//! the gluing layer instantiates one system per local frame.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::coamoeba::{torus_reduce, CoamoebaPoint, TorusPoint, PI};
use crate::numerics;
use crate::pants::{in_closed_simplex, vertex_coords, PantsModel};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ProjectionError {
    NonTransversal,
    NonNested,
    OutsideDomain,
    BadIndex,
}

impl core::fmt::Display for ProjectionError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let s = match self {
            ProjectionError::NonTransversal => "subspace is not transversal to the face",
            ProjectionError::NonNested => "subspaces violate the nesting required for compatibility",
            ProjectionError::OutsideDomain => "point is outside the projection domain U_J",
            ProjectionError::BadIndex => "no such face in the system",
        };
        f.write_str(s)
    }
}

/// Projection data attached to one face E_J / cone Γ_J.
#[derive(Clone, Debug)]
pub struct FaceChart {
    pub j_set: Vec<usize>,
    /// Basis of L_J ⊂ N_R.
    pub l_basis: Vec<Vec<f64>>,
    /// Direction basis of the face E_J (torus side).
    pub face_dirs: Vec<Vec<f64>>,
    /// Basis of L_J^⊥ dual to `face_dirs` under the coordinate pairing.
    pub v_basis: Vec<Vec<f64>>,
    /// Generators u_j, j ∈ J, spanning V_J.
    pub u_basis: Vec<Vec<f64>>,
    /// Basis of L_J dual to `u_basis`.
    pub w_basis: Vec<Vec<f64>>,
    /// A vertex of E⁺_J used as the affine anchor of the face span.
    pub anchor: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct ProjectionSystem {
    pub n: usize,
    faces: BTreeMap<Vec<usize>, FaceChart>,
}

fn generator(n: usize, j: usize) -> Vec<f64> {
    let d = n + 1;
    if j == 0 {
        vec![-1.0; d]
    } else {
        let mut e = vec![0.0; d];
        e[j - 1] = 1.0;
        e
    }
}

/// Anchor vertex and direction basis of the face E⁺_J.
fn face_directions(n: usize, j_set: &[usize]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let members: Vec<usize> = (0..=n + 1).filter(|k| !j_set.contains(k)).collect();
    let anchor = vertex_coords(n, members[0]);
    let dirs = members[1..]
        .iter()
        .map(|&k| numerics::sub(&vertex_coords(n, k), &anchor))
        .collect();
    (anchor, dirs)
}

impl ProjectionSystem {
    /// The paper's example system: L_J orthogonal to the face subtorus.
    pub fn orthogonal(n: usize) -> Self {
        let mut pairs = Vec::new();
        for j_set in all_face_sets(n) {
            let mut basis = Vec::new();
            if !j_set.contains(&0) {
                for &j in &j_set {
                    basis.push(generator(n, j));
                }
            } else {
                for &j in &j_set {
                    if j != 0 {
                        basis.push(generator(n, j));
                    }
                }
                let ones: Vec<f64> = (0..=n)
                    .map(|k| f64::from(!j_set.contains(&(k + 1))))
                    .collect();
                basis.push(ones);
            }
            pairs.push((j_set, basis));
        }
        Self::from_subspaces(n, &pairs).expect("orthogonal system is always compatible")
    }

    /// Builds a system from user subspaces, rejecting non-transversal or
    /// non-nested choices. Only the provided faces become part of the system.
    pub fn from_subspaces(
        n: usize,
        pairs: &[(Vec<usize>, Vec<Vec<f64>>)],
    ) -> Result<Self, ProjectionError> {
        let mut faces = BTreeMap::new();
        for (j_set, l_basis) in pairs {
            if j_set.is_empty() || j_set.len() > n || j_set.iter().any(|&j| j > n + 1) {
                return Err(ProjectionError::BadIndex);
            }
            if l_basis.len() != j_set.len() {
                return Err(ProjectionError::NonTransversal);
            }
            let (anchor, face_dirs) = face_directions(n, j_set);
            let mut all: Vec<Vec<f64>> = l_basis.clone();
            all.extend(face_dirs.iter().cloned());
            if rank_f64(&all) != n + 1 {
                return Err(ProjectionError::NonTransversal);
            }
            let u_basis: Vec<Vec<f64>> = j_set.iter().map(|&j| generator(n, j)).collect();
            let v_basis = dual_basis_in_complement(&face_dirs, l_basis)
                .ok_or(ProjectionError::NonTransversal)?;
            let w_basis = dual_basis_in_span(l_basis, &u_basis)
                .ok_or(ProjectionError::NonTransversal)?;
            faces.insert(
                j_set.clone(),
                FaceChart {
                    j_set: j_set.clone(),
                    l_basis: l_basis.clone(),
                    face_dirs,
                    v_basis,
                    u_basis,
                    w_basis,
                    anchor,
                },
            );
        }
        for (j1, f1) in &faces {
            for (j2, f2) in &faces {
                if j1 != j2 && j1.iter().all(|j| j2.contains(j)) {
                    // E_{J2} ⊂ E_{J1} requires L_{J1} ⊂ L_{J2}
                    for v in &f1.l_basis {
                        if !in_span(v, &f2.l_basis) {
                            return Err(ProjectionError::NonNested);
                        }
                    }
                }
            }
        }
        Ok(ProjectionSystem { n, faces })
    }

    pub fn face(&self, j_set: &[usize]) -> Result<&FaceChart, ProjectionError> {
        let mut key = j_set.to_vec();
        key.sort_unstable();
        self.faces.get(&key).ok_or(ProjectionError::BadIndex)
    }

    pub fn face_sets(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.faces.keys()
    }

    /// x_J: linear projection of M_R onto V_J with fibres parallel to L_J^⊥.
    pub fn project_x(&self, j_set: &[usize], x: &[f64]) -> Result<Vec<f64>, ProjectionError> {
        let t = self.cone_coords(j_set, x)?;
        let f = self.face(j_set)?;
        let mut out = vec![0.0; self.n + 1];
        for (c, u) in t.iter().zip(&f.u_basis) {
            numerics::axpy(&mut out, *c, u);
        }
        Ok(out)
    }

    /// Coordinates of x_J(x) in the generator basis {u_j}_{j∈J}. Since the
    /// fibre L_J^⊥ pairs to zero with L_J and w_basis ⊂ L_J is dual to the
    /// generators, these are plain pairings.
    pub fn cone_coords(&self, j_set: &[usize], x: &[f64]) -> Result<Vec<f64>, ProjectionError> {
        let f = self.face(j_set)?;
        Ok(f.w_basis.iter().map(|w| numerics::dot(x, w)).collect())
    }

    /// Splits x into cone coordinates t (V_J part) and fibre coordinates v
    /// (L_J^⊥ part, expressed against the dual basis of the face directions).
    pub fn split_x(
        &self,
        j_set: &[usize],
        x: &[f64],
    ) -> Result<(Vec<f64>, Vec<f64>), ProjectionError> {
        let f = self.face(j_set)?;
        let t = self.cone_coords(j_set, x)?;
        let mut rem = x.to_vec();
        for (c, u) in t.iter().zip(&f.u_basis) {
            numerics::axpy(&mut rem, -c, u);
        }
        let v = f.face_dirs.iter().map(|d| numerics::dot(&rem, d)).collect();
        Ok((t, v))
    }

    /// y_J on window coordinates: the point of the affine span of E⁺_J
    /// reached from w along L_J, together with the L-offset coefficients.
    pub fn project_y_window(
        &self,
        j_set: &[usize],
        w: &[f64],
    ) -> Result<(Vec<f64>, Vec<f64>), ProjectionError> {
        let f = self.face(j_set)?;
        let m = j_set.len();
        // The affine span of E⁺_J is cut out by <u_j, ·> = <u_j, anchor>.
        let mut mat = vec![vec![0.0; m]; m];
        let mut rhs = vec![0.0; m];
        for (r, &j) in j_set.iter().enumerate() {
            let uj = generator(self.n, j);
            for (c, l) in f.l_basis.iter().enumerate() {
                mat[r][c] = numerics::dot(&uj, l);
            }
            rhs[r] = numerics::dot(&uj, w) - numerics::dot(&uj, &f.anchor);
        }
        let coeffs = numerics::solve(&mut mat, &mut rhs).ok_or(ProjectionError::NonTransversal)?;
        let mut wp = w.to_vec();
        for (c, l) in coeffs.iter().zip(&f.l_basis) {
            numerics::axpy(&mut wp, -c, l);
        }
        Ok((wp, coeffs))
    }

    /// y_J on the torus: defined when the fibre through y meets int E_J
    /// (either half); landing on sub-faces or vertices is outside the domain.
    pub fn project_y(
        &self,
        j_set: &[usize],
        model: &PantsModel,
        y: &TorusPoint,
        tol: f64,
    ) -> Result<TorusPoint, ProjectionError> {
        let (sign, w) = model.plus_rep(y, tol).ok_or(ProjectionError::OutsideDomain)?;
        let (wp, _) = self.project_y_window(j_set, &w)?;
        if !self.window_in_face_interior(j_set, &wp, tol) {
            return Err(ProjectionError::OutsideDomain);
        }
        let out = if sign > 0 { wp } else { wp.iter().map(|&c| -c).collect() };
        Ok(torus_reduce(&out))
    }

    /// Interior of E_J = int E⁺_J ∪ int E⁻_J, tested on window coordinates.
    pub fn window_in_face_interior(&self, j_set: &[usize], wp: &[f64], tol: f64) -> bool {
        for side in [1.0f64, -1.0] {
            let cand: Vec<f64> = wp.iter().map(|&c| c * side).collect();
            if let Some(bary) = self.face_barycentric(j_set, &cand) {
                let total: f64 = bary.iter().sum();
                if bary.iter().all(|&b| b > tol) && total < 1.0 - tol {
                    return true;
                }
            }
        }
        false
    }

    /// Simplex coordinates of a window point against E⁺_J (anchor carries
    /// barycentric weight 1 − Σ), when the point lies on the face span.
    pub fn face_barycentric(&self, j_set: &[usize], w: &[f64]) -> Option<Vec<f64>> {
        let f = self.face(j_set).ok()?;
        let rel = numerics::sub(w, &f.anchor);
        let s: Vec<f64> = f.v_basis.iter().map(|v| numerics::dot(&rel, v)).collect();
        let mut recon = f.anchor.clone();
        for (c, dir) in s.iter().zip(&f.face_dirs) {
            numerics::axpy(&mut recon, *c, dir);
        }
        if numerics::norm(&numerics::sub(&recon, w)) > 1e-9 {
            return None;
        }
        Some(s)
    }

    /// Base and fibre coordinates of the pants graph point over this face
    /// chart. The 1-form v·ds − w·dt is closed on the graph.
    pub fn graph_coords(
        &self,
        j_set: &[usize],
        model: &PantsModel,
        y: &TorusPoint,
    ) -> Result<GraphCoords, ProjectionError> {
        let (sign, w) = model.plus_rep(y, 0.0).ok_or(ProjectionError::OutsideDomain)?;
        if !crate::pants::is_interior(&w, 0.0) {
            return Err(ProjectionError::OutsideDomain);
        }
        let x = model.h_plus(&w);
        let (wp, l_coeffs) = self.project_y_window(j_set, &w)?;
        if !self.window_in_face_interior(j_set, &wp, 0.0) {
            return Err(ProjectionError::OutsideDomain);
        }
        let f = self.face(j_set)?;
        let rel = numerics::sub(&wp, &f.anchor);
        let s: Vec<f64> = f.v_basis.iter().map(|v| numerics::dot(&rel, v)).collect();
        let (t, v) = self.split_x(j_set, &x)?;
        let mut offset = vec![0.0; self.n + 1];
        for (c, l) in l_coeffs.iter().zip(&f.l_basis) {
            numerics::axpy(&mut offset, *c, l);
        }
        let wcoef: Vec<f64> = f.u_basis.iter().map(|u| numerics::dot(&offset, u)).collect();
        Ok(GraphCoords { sign, s, t, v, w: wcoef })
    }
}

/// Base (s, t) and fibre (v, w) coordinates of a graph point over a face.
#[derive(Clone, Debug)]
pub struct GraphCoords {
    pub sign: i8,
    pub s: Vec<f64>,
    pub t: Vec<f64>,
    pub v: Vec<f64>,
    pub w: Vec<f64>,
}

/// All J with 1 ≤ |J| ≤ n inside {0,…,n+1}.
pub fn all_face_sets(n: usize) -> Vec<Vec<usize>> {
    let labels = n + 2;
    let mut out = Vec::new();
    for mask in 1u32..(1 << labels) {
        let j: Vec<usize> = (0..labels).filter(|&b| mask & (1 << b) != 0).collect();
        if (1..=n).contains(&j.len()) {
            out.push(j);
        }
    }
    out.sort_by_key(|j| (j.len(), j.clone()));
    out
}

fn rank_f64(rows: &[Vec<f64>]) -> usize {
    let mut m: Vec<Vec<f64>> = rows.to_vec();
    let nrows = m.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = m[0].len();
    let mut rank = 0;
    for col in 0..ncols {
        let piv =
            (rank..nrows).max_by(|&a, &b| m[a][col].abs().partial_cmp(&m[b][col].abs()).unwrap());
        let Some(p) = piv else { break };
        if m[p][col].abs() < 1e-9 {
            continue;
        }
        m.swap(rank, p);
        for r in 0..nrows {
            if r != rank {
                let f = m[r][col] / m[rank][col];
                for c in col..ncols {
                    m[r][c] -= f * m[rank][c];
                }
            }
        }
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}

fn in_span(v: &[f64], basis: &[Vec<f64>]) -> bool {
    let mut rows = basis.to_vec();
    rows.push(v.to_vec());
    rank_f64(&rows) == rank_f64(basis)
}

/// Vectors pairing to zero with every element of `kill` and δ-wise with
/// `dirs`; unique by transversality.
fn dual_basis_in_complement(dirs: &[Vec<f64>], kill: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let d = dirs.first().or_else(|| kill.first()).map(|v| v.len())?;
    let mut out = Vec::new();
    for a in 0..dirs.len() {
        let mut mat: Vec<Vec<f64>> = Vec::new();
        let mut rhs: Vec<f64> = Vec::new();
        for l in kill {
            mat.push(l.clone());
            rhs.push(0.0);
        }
        for (b, dir) in dirs.iter().enumerate() {
            mat.push(dir.clone());
            rhs.push(f64::from(a == b));
        }
        if mat.len() != d {
            return None;
        }
        out.push(numerics::solve(&mut mat, &mut rhs)?);
    }
    Some(out)
}

/// Basis of span(`space`) pairing δ-wise with `against`.
fn dual_basis_in_span(space: &[Vec<f64>], against: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let m = space.len();
    if against.len() != m {
        return None;
    }
    let mut out = Vec::new();
    for b in 0..m {
        let mut mat = vec![vec![0.0; m]; m];
        let mut rhs = vec![0.0; m];
        for a in 0..m {
            for c in 0..m {
                mat[a][c] = numerics::dot(&against[a], &space[c]);
            }
            rhs[a] = f64::from(a == b);
        }
        let coeffs = numerics::solve(&mut mat, &mut rhs)?;
        let mut w = vec![0.0; space[0].len()];
        for (c, sp) in coeffs.iter().zip(space) {
            numerics::axpy(&mut w, *c, sp);
        }
        out.push(w);
    }
    Some(out)
}

/// The map g_J = (y_J, h_J), the base point of the Legendre chart over E_J.
pub fn g_map(
    sys: &ProjectionSystem,
    j_set: &[usize],
    model: &PantsModel,
    p: &CoamoebaPoint,
) -> Result<(TorusPoint, Vec<f64>), ProjectionError> {
    let (h, yp) = match p {
        CoamoebaPoint::Interior(y) => {
            let h = model.h_eval(p).map_err(|_| ProjectionError::OutsideDomain)?;
            (h, sys.project_y(j_set, model, y, 1e-12)?)
        }
        CoamoebaPoint::VertexChart { vertex, dir } => {
            if j_set.contains(vertex) {
                return Err(ProjectionError::OutsideDomain);
            }
            let h = model
                .vertex_chart_h(*vertex, dir)
                .map_err(|_| ProjectionError::OutsideDomain)?;
            // charts over vertices of E_J project to the vertex itself
            (h, model.coamoeba().vertex(*vertex))
        }
    };
    let xp = sys.project_x(j_set, &h)?;
    Ok((yp, xp))
}

/// Report of the Legendre-graph closedness check over one face chart.
#[derive(Clone, Debug)]
pub struct LegendreReport {
    pub j_set: Vec<usize>,
    pub samples_used: usize,
    pub max_asymmetry: f64,
}

/// Verifies that the image over the face chart is the graph of a closed
/// 1-form: J_φᵀ · J_B must be symmetric, where B = (s,t) are base and
/// φ = (v,−w) fibre coordinates, differentiated in domain coordinates.
pub fn legendre_graph_check(
    sys: &ProjectionSystem,
    j_set: &[usize],
    model: &PantsModel,
    samples: &[TorusPoint],
    step: f64,
) -> Result<LegendreReport, ProjectionError> {
    let d = model.dim();
    let mut used = 0;
    let mut worst: f64 = 0.0;
    let eval = |w: &[f64]| -> Option<(Vec<f64>, Vec<f64>)> {
        let y = torus_reduce(w);
        let g = sys.graph_coords(j_set, model, &y).ok()?;
        let mut base = g.s.clone();
        base.extend(g.t.iter());
        let mut fib = g.v.clone();
        fib.extend(g.w.iter().map(|&c| -c));
        Some((base, fib))
    };
    for y in samples {
        let Some((_, w)) = model.plus_rep(y, 0.0) else { continue };
        if !crate::pants::is_interior(&w, 4.0 * step) {
            continue;
        }
        let mut jb = vec![vec![0.0; d]; d];
        let mut jf = vec![vec![0.0; d]; d];
        let mut ok = true;
        for k in 0..d {
            let mut wp = w.clone();
            let mut wm = w.clone();
            wp[k] += step;
            wm[k] -= step;
            match (eval(&wp), eval(&wm)) {
                (Some((bp, fp)), Some((bm, fm))) => {
                    for i in 0..d {
                        jb[i][k] = (bp[i] - bm[i]) / (2.0 * step);
                        jf[i][k] = (fp[i] - fm[i]) / (2.0 * step);
                    }
                }
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        // closedness ⟺ A = J_φᵀ J_B symmetric (A = (dφ/dB)ᵀ (J_Bᵀ J_B) form)
        let mut a = vec![vec![0.0; d]; d];
        for i in 0..d {
            for j in 0..d {
                let mut acc = 0.0;
                for k in 0..d {
                    acc += jf[k][i] * jb[k][j];
                }
                a[i][j] = acc;
            }
        }
        let scale = a
            .iter()
            .flat_map(|r| r.iter())
            .fold(0.0f64, |m, &v| m.max(v.abs()))
            .max(1.0);
        let mut maxasym: f64 = 0.0;
        for i in 0..d {
            for j in i + 1..d {
                maxasym = maxasym.max((a[i][j] - a[j][i]).abs() / scale);
            }
        }
        worst = worst.max(maxasym);
        used += 1;
    }
    Ok(LegendreReport { j_set: j_set.to_vec(), samples_used: used, max_asymmetry: worst })
}

/// Deterministic interior sample grid for checks and tests.
pub fn interior_grid(n: usize, per_axis: usize) -> Vec<TorusPoint> {
    let d = n + 1;
    let mut out = Vec::new();
    let mut idx = vec![0usize; d];
    loop {
        let w: Vec<f64> = idx
            .iter()
            .map(|&i| (i as f64 + 0.7) / (per_axis as f64 + 1.0) * PI / 2.0)
            .collect();
        if in_closed_simplex(&w, 0.0) && crate::pants::is_interior(&w, 1e-3) {
            out.push(torus_reduce(&w));
        }
        let mut k = 0;
        loop {
            if k == d {
                return out;
            }
            idx[k] += 1;
            if idx[k] < per_axis {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orthogonal_system_accepted_and_nested() {
        for n in [1usize, 2] {
            let sys = ProjectionSystem::orthogonal(n);
            assert_eq!(sys.face_sets().count(), all_face_sets(n).len());
        }
    }

    #[test]
    fn non_transversal_rejected() {
        // L equal to a face direction for J = {1}, n = 1: face dir = e_2
        let pairs = vec![(vec![1usize], vec![vec![0.0, 1.0]])];
        assert_eq!(
            ProjectionSystem::from_subspaces(1, &pairs).unwrap_err(),
            ProjectionError::NonTransversal
        );
    }

    #[test]
    fn non_nested_rejected() {
        let pairs = vec![
            (vec![1usize], vec![vec![1.0, 0.0, 1.0]]),
            (vec![1usize, 2], vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]]),
        ];
        assert_eq!(
            ProjectionSystem::from_subspaces(2, &pairs).unwrap_err(),
            ProjectionError::NonNested
        );
    }

    #[test]
    fn project_x_idempotent_and_composes() {
        let sys = ProjectionSystem::orthogonal(2);
        let xs = [[0.3, -0.7, 1.1], [2.0, 0.1, -0.4], [-1.0, -1.0, -1.0]];
        for x in xs {
            for j2 in [vec![1usize, 2], vec![0usize, 3], vec![2usize, 3]] {
                let p2 = sys.project_x(&j2, &x).unwrap();
                let again = sys.project_x(&j2, &p2).unwrap();
                assert!(numerics::norm(&numerics::sub(&again, &p2)) < 1e-12);
                for j1 in [vec![j2[0]], vec![j2[1]]] {
                    let left = sys.project_x(&j1, &p2).unwrap();
                    let right = sys.project_x(&j1, &x).unwrap();
                    assert!(
                        numerics::norm(&numerics::sub(&left, &right)) < 1e-12,
                        "composition failed for J1={j1:?} ⊂ J2={j2:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn orthogonal_project_x_is_euclidean() {
        let sys = ProjectionSystem::orthogonal(2);
        let p = sys.project_x(&[1], &[0.4, 0.9, -0.2]).unwrap();
        assert!(numerics::norm(&numerics::sub(&p, &[0.4, 0.0, 0.0])) < 1e-12);
    }

    #[test]
    fn project_y_examples() {
        let m = PantsModel::new(1, 1.0);
        let sys = ProjectionSystem::orthogonal(1);
        let y = torus_reduce(&[PI / 4.0, 0.1]);
        let p = sys.project_y(&[2], &m, &y, 1e-9).unwrap();
        assert!((p.0[0] - PI / 4.0).abs() < 1e-12 && p.0[1].abs() < 1e-12);
        // a point essentially on the face projects to itself
        let on_face = torus_reduce(&[PI / 4.0, 1e-7]);
        let q = sys.project_y(&[2], &m, &on_face, 1e-6).unwrap();
        assert!((q.0[0] - PI / 4.0).abs() < 1e-9);
        // C⁻ points project to the mirrored half of the face
        let ym = torus_reduce(&[-PI / 4.0, -0.1]);
        let pm = sys.project_y(&[2], &m, &ym, 1e-9).unwrap();
        let wm = m.window(&pm);
        assert!(wm[0] < 0.0 && wm[1].abs() < 1e-12);
    }

    #[test]
    fn skewed_system_has_proper_domain() {
        // With L_{1} = span(1, −2, −2) the fibre exits C before reaching the
        // face for suitable starting points: a genuine OutsideDomain witness.
        let m = PantsModel::new(2, 1.0);
        let pairs = vec![(vec![1usize], vec![vec![1.0, -2.0, -2.0]])];
        let sys = ProjectionSystem::from_subspaces(2, &pairs).unwrap();
        let inside = torus_reduce(&[0.05, 0.3, 0.3]);
        assert!(sys.project_y(&[1], &m, &inside, 1e-9).is_ok());
        let outside = torus_reduce(&[0.1, 0.7, 0.7]);
        assert_eq!(
            sys.project_y(&[1], &m, &outside, 1e-9).unwrap_err(),
            ProjectionError::OutsideDomain
        );
    }

    #[test]
    fn g_map_injective_on_samples() {
        let model = PantsModel::new(1, 1.0);
        let sys = ProjectionSystem::orthogonal(1);
        let grid = interior_grid(1, 14);
        let mut images: Vec<(Vec<f64>, Vec<f64>)> = Vec::new();
        let mut points: Vec<TorusPoint> = Vec::new();
        for y in &grid {
            if let Ok((yp, xp)) =
                g_map(&sys, &[1], &model, &CoamoebaPoint::Interior(y.clone()))
            {
                images.push((yp.0, xp));
                points.push(y.clone());
            }
        }
        assert!(images.len() > 50);
        for i in 0..images.len() {
            for j in i + 1..images.len() {
                let dy = crate::coamoeba::torus_distance(&images[i].0, &images[j].0);
                let dx = numerics::norm(&numerics::sub(&images[i].1, &images[j].1));
                if dy + dx < 1e-9 {
                    let dp = crate::coamoeba::torus_distance(&points[i].0, &points[j].0);
                    assert!(dp < 1e-6, "g-map collision at distinct points");
                }
            }
        }
    }

    #[test]
    fn legendre_graph_symmetry() {
        let model = PantsModel::new(1, 1.0);
        let sys = ProjectionSystem::orthogonal(1);
        let grid = interior_grid(1, 20);
        let rep = legendre_graph_check(&sys, &[1], &model, &grid, 1e-5).unwrap();
        assert!(rep.samples_used > 100, "used {}", rep.samples_used);
        assert!(rep.max_asymmetry < 1e-6, "asymmetry {}", rep.max_asymmetry);
        let model2 = PantsModel::new(2, 1.0);
        let sys2 = ProjectionSystem::orthogonal(2);
        let grid2 = interior_grid(2, 9);
        for j in [vec![1usize], vec![1usize, 2]] {
            let rep = legendre_graph_check(&sys2, &j, &model2, &grid2, 1e-5).unwrap();
            assert!(rep.samples_used > 30);
            assert!(rep.max_asymmetry < 1e-5, "J={j:?}: {}", rep.max_asymmetry);
        }
    }

    #[test]
    fn commuting_diagram_on_samples() {
        // x_{J1} ∘ (x-part of g_{J2}) = h_{J1} for J1 ⊂ J2
        let model = PantsModel::new(2, 1.0);
        let sys = ProjectionSystem::orthogonal(2);
        let grid = interior_grid(2, 7);
        let mut checked = 0;
        for y in &grid {
            let p = CoamoebaPoint::Interior(y.clone());
            let Ok(h) = model.h_eval(&p) else { continue };
            let Ok((_, x2)) = g_map(&sys, &[1, 2], &model, &p) else { continue };
            let left = sys.project_x(&[1], &x2).unwrap();
            let right = sys.project_x(&[1], &h).unwrap();
            assert!(numerics::norm(&numerics::sub(&left, &right)) < 1e-9);
            checked += 1;
        }
        assert!(checked > 50);
    }

    #[test]
    fn monotone_fibres_give_submersion() {
        // h_J restricted to a fibre of y_J is strictly monotone (n = 1)
        let model = PantsModel::new(1, 1.0);
        let sys = ProjectionSystem::orthogonal(1);
        // fibre of y_{2}: fixed first window coordinate
        let w1 = 0.5;
        let mut prev: Option<f64> = None;
        for i in 1..30 {
            let w2 = 0.03 * i as f64;
            let w = [w1, w2];
            if !crate::pants::is_interior(&w, 1e-6) {
                continue;
            }
            let h = model.h_plus(&w);
            let t = sys.cone_coords(&[2], &h).unwrap()[0];
            if let Some(p) = prev {
                assert!(t < p, "h_J not monotone along the fibre");
            }
            prev = Some(t);
        }
    }
}

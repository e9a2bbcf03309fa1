//! The tropical hypersurface dual to a lifted lattice polytope.
//!
//! Cells of the dual complex are keyed by the minimizer sets of the discrete
//! Legendre transform, so face identification is exact: a point lies on the
//! closure of the cell dual to a face `e` exactly when every lattice point of
//! `e` attains the minimum.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::exact::{
    self, affine_dim, det_i64, dot, nullspace, primitive_direction, rat,
    solve_linear, sub, Rational,
};
use crate::polyhedral::{LatticePoint, LiftingFunction, Subdivision};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TropicalError {
    UnknownCell,
    NonSmoothComplex,
}

impl core::fmt::Display for TropicalError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let s = match self {
            TropicalError::UnknownCell => "cell is not part of the complex",
            TropicalError::NonSmoothComplex => "local structure is not a smooth tropical germ",
        };
        f.write_str(s)
    }
}

/// Exact value of the discrete Legendre transform at `m`, together with the
/// set of minimizing lattice points (ties kept).
pub fn legendre_value(
    nu: &LiftingFunction,
    m: &[Rational],
) -> (Rational, Vec<LatticePoint>) {
    let mut best: Option<Rational> = None;
    let mut argmin: Vec<LatticePoint> = Vec::new();
    for v in nu.domain() {
        let val = dot(&v.to_rational(), m) + rat(nu.value(v));
        match &best {
            None => {
                best = Some(val);
                argmin.push(v.clone());
            }
            Some(b) => match val.cmp(b) {
                core::cmp::Ordering::Less => {
                    best = Some(val);
                    argmin.clear();
                    argmin.push(v.clone());
                }
                core::cmp::Ordering::Equal => argmin.push(v.clone()),
                core::cmp::Ordering::Greater => {}
            },
        }
    }
    (best.expect("lifting function with empty domain"), argmin)
}

/// A cell of the tropical complex in vertex + recession-ray form.
#[derive(Clone, Debug)]
pub struct TropicalCell {
    /// Index of the dual face in the subdivision.
    pub dual_face: usize,
    /// dim ě = (n+1) − dim e.
    pub dim: usize,
    pub vertices: Vec<Vec<Rational>>,
    /// Primitive integer generators of the recession cone.
    pub rays: Vec<Vec<i64>>,
}

impl TropicalCell {
    pub fn is_bounded(&self) -> bool {
        self.rays.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct TropicalComplex {
    pub subdivision: Subdivision,
    pub cells: Vec<TropicalCell>,
    /// subdivision face index -> cell index, for faces of dim >= 1.
    pub by_face: BTreeMap<usize, usize>,
}

impl TropicalComplex {
    pub fn ambient_dim(&self) -> usize {
        self.subdivision.polytope.ambient_dim()
    }

    /// Closure membership: every lattice point of the dual face minimizes.
    pub fn cell_contains(&self, cell: usize, m: &[Rational]) -> bool {
        let face = &self.subdivision.faces[self.cells[cell].dual_face];
        let (_, argmin) = legendre_value(&self.subdivision.lifting, m);
        face.lattice.iter().all(|p| argmin.contains(p))
    }

    /// Support membership: at least two minimizers.
    pub fn support_contains(&self, m: &[Rational]) -> bool {
        legendre_value(&self.subdivision.lifting, m).1.len() >= 2
    }

    pub fn cells_of_dim(&self, d: usize) -> impl Iterator<Item = (usize, &TropicalCell)> {
        self.cells.iter().enumerate().filter(move |(_, c)| c.dim == d)
    }

    /// The vertex dual to a maximal cell, if the complex has one for it.
    pub fn dual_vertex(&self, subdivision_cell: usize) -> Option<&TropicalCell> {
        self.by_face.get(&subdivision_cell).map(|&i| &self.cells[i])
    }
}

/// Builds the tropical complex dual to a regular subdivision.
///
/// Vertices of the cell dual to `e` are the dual points of the maximal cells
/// containing `e`; recession rays solve the normal-cone system exactly.
pub fn dual_complex(s: &Subdivision) -> TropicalComplex {
    let ambient = s.polytope.ambient_dim();
    // Dual point of each maximal cell: the unique m with all lifted lattice
    // points of the cell attaining equal value.
    let mut dual_points: BTreeMap<usize, Vec<Rational>> = BTreeMap::new();
    for &c in &s.cells {
        let lat = &s.faces[c].lattice;
        let v0 = &lat[0];
        let rows: Vec<Vec<Rational>> = lat[1..]
            .iter()
            .map(|v| sub(&v.to_rational(), &v0.to_rational()))
            .collect();
        let rhs: Vec<Rational> = lat[1..]
            .iter()
            .map(|v| rat(s.lifting.value(v0) - s.lifting.value(v)))
            .collect();
        let m = solve_overdetermined_square(&rows, &rhs, ambient)
            .expect("maximal cell must determine a unique dual vertex");
        dual_points.insert(c, m);
    }

    let all_lattice: Vec<LatticePoint> = s.lifting.domain().cloned().collect();
    let mut cells = Vec::new();
    let mut by_face = BTreeMap::new();
    for (fi, face) in s.faces.iter().enumerate() {
        if face.dim() == 0 {
            continue;
        }
        let mut vertices: Vec<Vec<Rational>> = Vec::new();
        for &c in &s.cells {
            if s.face_leq(fi, c) {
                let m = dual_points[&c].clone();
                if !vertices.contains(&m) {
                    vertices.push(m);
                }
            }
        }
        vertices.sort();
        let rays = recession_rays(&face.lattice, &all_lattice, ambient);
        let cell = TropicalCell {
            dual_face: fi,
            dim: ambient - face.dim(),
            vertices,
            rays,
        };
        by_face.insert(fi, cells.len());
        cells.push(cell);
    }
    TropicalComplex { subdivision: s.clone(), cells, by_face }
}

fn solve_overdetermined_square(
    rows: &[Vec<Rational>],
    rhs: &[Rational],
    n: usize,
) -> Option<Vec<Rational>> {
    // Select n independent rows, solve, then verify against the rest.
    let mut sel_rows = Vec::new();
    let mut sel_rhs = Vec::new();
    for (r, b) in rows.iter().zip(rhs) {
        let mut cand = sel_rows.clone();
        cand.push(r.clone());
        if exact::rank(&cand) > sel_rows.len() {
            sel_rows.push(r.clone());
            sel_rhs.push(b.clone());
        }
        if sel_rows.len() == n {
            break;
        }
    }
    let sol = solve_linear(&sel_rows, &sel_rhs)?;
    for (r, b) in rows.iter().zip(rhs) {
        if &dot(r, &sol) != b {
            return None;
        }
    }
    Some(sol)
}

/// Extreme rays of {d : <v − v', d> = 0 on the face, <w − v, d> >= 0 for all
/// lattice points w of P}. The cone is pointed because P is full-dimensional.
fn recession_rays(
    face_lattice: &[LatticePoint],
    all_lattice: &[LatticePoint],
    ambient: usize,
) -> Vec<Vec<i64>> {
    let v0 = face_lattice[0].to_rational();
    let eq_rows: Vec<Vec<Rational>> = face_lattice[1..]
        .iter()
        .map(|v| sub(&v.to_rational(), &v0))
        .collect();
    let subspace = if eq_rows.is_empty() {
        (0..ambient)
            .map(|i| {
                let mut e = vec![Rational::zero(); ambient];
                e[i] = rat(1);
                e
            })
            .collect::<Vec<_>>()
    } else {
        nullspace(&eq_rows, ambient)
    };
    let sdim = subspace.len();
    if sdim == 0 {
        return Vec::new();
    }
    // Inequality rows in subspace coordinates.
    let ineq: Vec<Vec<Rational>> = all_lattice
        .iter()
        .map(|w| {
            let g = sub(&w.to_rational(), &v0);
            (0..sdim).map(|k| dot(&g, &subspace[k])).collect()
        })
        .filter(|row: &Vec<Rational>| !exact::is_zero_vec(row))
        .collect();
    let embed = |u: &[Rational]| -> Vec<Rational> {
        let mut d = vec![Rational::zero(); ambient];
        for (k, c) in u.iter().enumerate() {
            for i in 0..ambient {
                d[i] += c * &subspace[k][i];
            }
        }
        d
    };
    let feasible_dir = |u: &[Rational]| ineq.iter().all(|row| !dot(row, u).is_negative());
    let mut rays: Vec<Vec<i64>> = Vec::new();
    let mut push = |d: Vec<Rational>| {
        let p = primitive_direction(&d);
        if p.iter().any(|&x| x != 0) && !rays.contains(&p) {
            rays.push(p);
        }
    };
    match sdim {
        1 => {
            for sign in [1i64, -1] {
                let u = vec![rat(sign)];
                if feasible_dir(&u) {
                    push(embed(&u));
                }
            }
        }
        2 => {
            // Extreme rays lie on constraint boundaries.
            for row in &ineq {
                for u in [
                    vec![-row[1].clone(), row[0].clone()],
                    vec![row[1].clone(), -row[0].clone()],
                ] {
                    if !exact::is_zero_vec(&u) && feasible_dir(&u) {
                        push(embed(&u));
                    }
                }
            }
        }
        _ => panic!("recession cones of dimension > 2 do not occur for faces of dim >= 1"),
    }
    rays.sort();
    rays
}

/// The cells of `Ξ` containing `ě`: duals of the subfaces of `e`.
pub fn star_neighborhood(
    complex: &TropicalComplex,
    cell: usize,
) -> Result<Vec<usize>, TropicalError> {
    let e = complex
        .cells
        .get(cell)
        .ok_or(TropicalError::UnknownCell)?
        .dual_face;
    let mut out = Vec::new();
    for (fi, face) in complex.subdivision.faces.iter().enumerate() {
        if face.dim() >= 1 && complex.subdivision.face_leq(fi, e) {
            out.push(complex.by_face[&fi]);
        }
    }
    Ok(out)
}

/// The standard tropical hyperplane Γ in R^{n+1} with generators
/// u_j = e_j and u_0 = −Σ u_j, as a union of cones Γ_J.
#[derive(Clone, Debug)]
pub struct StandardHyperplane {
    pub n: usize,
}

impl StandardHyperplane {
    pub fn new(n: usize) -> Self {
        StandardHyperplane { n }
    }

    pub fn ambient(&self) -> usize {
        self.n + 1
    }

    pub fn generator(&self, j: usize) -> Vec<i64> {
        let d = self.ambient();
        if j == 0 {
            vec![-1; d]
        } else {
            let mut e = vec![0; d];
            e[j - 1] = 1;
            e
        }
    }

    /// All index sets J ⊊ {0,…,n+1} with |J| ≤ n, the empty set included.
    pub fn cones(&self) -> Vec<Vec<usize>> {
        let labels = self.n + 2;
        let mut out: Vec<Vec<usize>> = vec![Vec::new()];
        for mask in 1u32..(1 << labels) {
            let j: Vec<usize> = (0..labels).filter(|&b| mask & (1 << b) != 0).collect();
            if j.len() <= self.n {
                out.push(j);
            }
        }
        out.sort_by_key(|j| (j.len(), j.clone()));
        out
    }

    /// Exact membership in the closed cone Γ_J.
    pub fn cone_contains(&self, j_set: &[usize], x: &[Rational]) -> bool {
        self.cone_coordinates(j_set, x)
            .map(|t| t.iter().all(|c| !c.is_negative()))
            .unwrap_or(false)
    }

    /// Coordinates t_j >= 0 with x = Σ_{j in J} t_j u_j; `None` when x is not
    /// in the span.
    pub fn cone_coordinates(&self, j_set: &[usize], x: &[Rational]) -> Option<Vec<Rational>> {
        let d = self.ambient();
        debug_assert_eq!(x.len(), d);
        if j_set.is_empty() {
            return x.iter().all(|c| c.is_zero()).then(Vec::new);
        }
        if !j_set.contains(&0) {
            // x_j = t_j on J, 0 elsewhere.
            let mut t = Vec::new();
            for k in 0..d {
                if j_set.contains(&(k + 1)) {
                    t.push(x[k].clone());
                } else if !x[k].is_zero() {
                    return None;
                }
            }
            Some(t)
        } else {
            // coords outside J equal −t_0, coords j in J equal t_j − t_0.
            let outside: Vec<usize> = (0..d).filter(|k| !j_set.contains(&(k + 1))).collect();
            let t0 = -x[outside[0]].clone();
            for &k in &outside[1..] {
                if x[k] != -t0.clone() * rat(1) {
                    if -x[k].clone() != t0 {
                        return None;
                    }
                }
            }
            let mut t = vec![t0.clone()];
            for k in 0..d {
                if j_set.contains(&(k + 1)) {
                    t.push(&x[k] + &t0);
                }
            }
            Some(t)
        }
    }

    pub fn support_contains(&self, x: &[Rational]) -> bool {
        self.cones()
            .iter()
            .filter(|j| j.len() == self.n)
            .any(|j| self.cone_contains(j, x))
    }
}

/// Lattice frame at a vertex of a smooth tropical hypersurface.
///
/// Columns of `u` are the primitive directions chosen as u_1..u_{n+1}
/// (determinant +1), `u0` the remaining direction. `vertex_order` lists the
/// vertices of the dual cell as (v_(0), ..., v_(n+1)) with v_(k) opposite the
/// facet dual to u_k, and `b` has columns v_(k) − v_(0); A^T B = I holds.
#[derive(Clone, Debug)]
pub struct VertexFrame {
    pub u: Vec<Vec<i64>>,
    pub u0: Vec<i64>,
    pub vertex_order: Vec<LatticePoint>,
    pub b: Vec<Vec<i64>>,
}

/// Tangent fan with frame at the vertex `ě` dual to a maximal cell `e`.
pub fn tangent_fan(
    complex: &TropicalComplex,
    cell: usize,
) -> Result<VertexFrame, TropicalError> {
    let c = complex.cells.get(cell).ok_or(TropicalError::UnknownCell)?;
    if c.dim != 0 {
        return Err(TropicalError::UnknownCell);
    }
    let face = &complex.subdivision.faces[c.dual_face];
    let here = &c.vertices[0];
    let ambient = complex.ambient_dim();
    if face.lattice.len() != ambient + 1 {
        return Err(TropicalError::NonSmoothComplex);
    }

    // Direction of the 1-cell dual to the facet opposite each vertex of e.
    let mut dirs: Vec<(Vec<i64>, LatticePoint)> = Vec::new();
    for v in &face.lattice {
        let facet_lattice: Vec<LatticePoint> =
            face.lattice.iter().filter(|p| *p != v).cloned().collect();
        let fi = complex
            .subdivision
            .face_index(&facet_lattice)
            .ok_or(TropicalError::NonSmoothComplex)?;
        let dual = &complex.cells[complex.by_face[&fi]];
        let dir = direction_from_vertex(dual, here).ok_or(TropicalError::NonSmoothComplex)?;
        dirs.push((dir, v.clone()));
    }
    dirs.sort_by(|a, b| a.0.cmp(&b.0));

    let mut chosen: Vec<(Vec<i64>, LatticePoint)> = dirs[..ambient].to_vec();
    let (u0, v0) = dirs[ambient].clone();
    let det = det_i64(&chosen.iter().map(|(d, _)| d.clone()).collect::<Vec<_>>());
    if det.abs() != 1 {
        return Err(TropicalError::NonSmoothComplex);
    }
    if det == -1 {
        chosen.swap(0, 1);
    }
    // Balancing at a smooth vertex.
    let sum: Vec<i64> = (0..ambient)
        .map(|i| u0[i] + chosen.iter().map(|(d, _)| d[i]).sum::<i64>())
        .collect();
    if sum.iter().any(|&s| s != 0) {
        return Err(TropicalError::NonSmoothComplex);
    }
    let b: Vec<Vec<i64>> = chosen
        .iter()
        .map(|(_, v)| v.0.iter().zip(&v0.0).map(|(a, b)| a - b).collect())
        .collect();
    // Duality normalization A^T B = I.
    let u: Vec<Vec<i64>> = chosen.iter().map(|(d, _)| d.clone()).collect();
    for (k, uk) in u.iter().enumerate() {
        for (l, bl) in b.iter().enumerate() {
            let p: i64 = uk.iter().zip(bl).map(|(a, b)| a * b).sum();
            if p != i64::from(k == l) {
                return Err(TropicalError::NonSmoothComplex);
            }
        }
    }
    let mut vertex_order = vec![v0];
    vertex_order.extend(chosen.into_iter().map(|(_, v)| v));
    Ok(VertexFrame { u, u0, vertex_order, b })
}

/// Direction in which a 1-dimensional cell leaves the given vertex.
pub fn direction_from_vertex(cell: &TropicalCell, from: &[Rational]) -> Option<Vec<i64>> {
    if cell.dim != 1 {
        return None;
    }
    if !cell.rays.is_empty() {
        if cell.vertices.len() == 1 && cell.vertices[0] == from && cell.rays.len() == 1 {
            return Some(cell.rays[0].clone());
        }
        return None;
    }
    if cell.vertices.len() != 2 {
        return None;
    }
    let other = if cell.vertices[0] == from {
        &cell.vertices[1]
    } else if cell.vertices[1] == from {
        &cell.vertices[0]
    } else {
        return None;
    };
    Some(primitive_direction(&sub(other, from)))
}

/// Affine dimension of a cell from its V-representation, used by tests to
/// assert the duality dimension law independently.
pub fn cell_affine_dim(cell: &TropicalCell) -> usize {
    let mut pts = cell.vertices.clone();
    for r in &cell.rays {
        pts.push(exact::add(
            &cell.vertices[0],
            &exact::ratvec_from_ints(r),
        ));
    }
    affine_dim(&pts)
}

/// Checks the V-representation of every cell against the exact
/// H-representation coming from minimizer sets.
pub fn vrep_consistent(complex: &TropicalComplex) -> bool {
    for (i, cell) in complex.cells.iter().enumerate() {
        for v in &cell.vertices {
            if !complex.cell_contains(i, v) {
                return false;
            }
        }
        // A deep point along each ray must stay in the closure.
        for r in &cell.rays {
            let far = exact::add(&cell.vertices[0], &exact::scale(&exact::ratvec_from_ints(r), &rat(1000)));
            if !complex.cell_contains(i, &far) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedral::{convex_hull, lp, LiftingFunction, Subdivision};
    use alloc::collections::BTreeMap;

    fn standard_simplex(n: usize) -> Subdivision {
        let mut pts = vec![lp(&vec![0; n + 1])];
        for i in 0..=n {
            let mut e = vec![0; n + 1];
            e[i] = 1;
            pts.push(lp(&e));
        }
        let p = convex_hull(&pts).unwrap();
        let nu = LiftingFunction::constant(&p, 0);
        Subdivision::regular(&p, &nu).unwrap()
    }

    pub fn example_curve() -> TropicalComplex {
        let p = convex_hull(&[lp(&[0, 0]), lp(&[1, 2]), lp(&[2, 1])]).unwrap();
        let mut vals = BTreeMap::new();
        vals.insert(lp(&[0, 0]), 1);
        vals.insert(lp(&[1, 1]), 0);
        vals.insert(lp(&[1, 2]), 0);
        vals.insert(lp(&[2, 1]), 0);
        let nu = LiftingFunction::for_polytope(&p, vals).unwrap();
        dual_complex(&Subdivision::regular(&p, &nu).unwrap())
    }

    #[test]
    fn legendre_standard_simplex() {
        let s = standard_simplex(1);
        let (v, argmin) = legendre_value(&s.lifting, &[rat(3), rat(-2)]);
        assert_eq!(v, rat(-2));
        assert_eq!(argmin, vec![lp(&[0, 1])]);
    }

    #[test]
    fn legendre_example_origin() {
        let c = example_curve();
        let (v, argmin) = legendre_value(&c.subdivision.lifting, &[rat(0), rat(0)]);
        assert_eq!(v, rat(0));
        assert_eq!(argmin, vec![lp(&[1, 1]), lp(&[1, 2]), lp(&[2, 1])]);
    }

    #[test]
    fn legendre_shift_invariance() {
        // shifting nu by a constant shifts the value, keeps minimizers
        let p = convex_hull(&[lp(&[0, 0]), lp(&[1, 2]), lp(&[2, 1])]).unwrap();
        let mut v0 = BTreeMap::new();
        let mut v5 = BTreeMap::new();
        for (i, q) in crate::polyhedral::lattice_points(&p).into_iter().enumerate() {
            v0.insert(q.clone(), i as i64 % 2);
            v5.insert(q, i as i64 % 2 + 5);
        }
        let n0 = LiftingFunction::for_polytope(&p, v0).unwrap();
        let n5 = LiftingFunction::for_polytope(&p, v5).unwrap();
        let m = [rat_frac_local(7, 3), rat_frac_local(-1, 2)];
        let (a, ma) = legendre_value(&n0, &m);
        let (b, mb) = legendre_value(&n5, &m);
        assert_eq!(b - a, rat(5));
        assert_eq!(ma, mb);
    }

    fn rat_frac_local(n: i64, d: i64) -> Rational {
        crate::exact::rat_frac(n, d)
    }

    #[test]
    fn standard_line_is_tropical_line() {
        let c = dual_complex(&standard_simplex(1));
        let verts: Vec<_> = c.cells_of_dim(0).collect();
        assert_eq!(verts.len(), 1);
        assert_eq!(verts[0].1.vertices, vec![vec![rat(0), rat(0)]]);
        let edges: Vec<_> = c.cells_of_dim(1).collect();
        assert_eq!(edges.len(), 3);
        let mut ray_dirs: Vec<Vec<i64>> = edges.iter().flat_map(|(_, e)| e.rays.clone()).collect();
        ray_dirs.sort();
        assert_eq!(ray_dirs, vec![vec![-1, -1], vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn example_curve_cells() {
        let c = example_curve();
        let mut verts: Vec<Vec<Rational>> =
            c.cells_of_dim(0).map(|(_, v)| v.vertices[0].clone()).collect();
        verts.sort();
        assert_eq!(
            verts,
            vec![
                vec![rat(0), rat(0)],
                vec![rat(0), rat(1)],
                vec![rat(1), rat(0)],
            ]
        );
        let bounded = c.cells_of_dim(1).filter(|(_, e)| e.is_bounded()).count();
        let rays = c.cells_of_dim(1).filter(|(_, e)| !e.is_bounded()).count();
        assert_eq!(bounded, 3);
        assert_eq!(rays, 3);
    }

    #[test]
    fn standard_plane_in_r3() {
        let c = dual_complex(&standard_simplex(2));
        assert_eq!(c.cells_of_dim(0).count(), 1);
        assert_eq!(c.cells_of_dim(1).count(), 4);
        assert_eq!(c.cells_of_dim(2).count(), 6);
    }

    #[test]
    fn duality_dimension_law_exact() {
        for c in [example_curve(), dual_complex(&standard_simplex(2))] {
            let ambient = c.ambient_dim();
            for cell in &c.cells {
                let e_dim = c.subdivision.faces[cell.dual_face].dim();
                assert_eq!(cell.dim, ambient - e_dim);
                assert_eq!(cell_affine_dim(cell), cell.dim);
            }
            assert!(vrep_consistent(&c));
        }
    }

    #[test]
    fn inclusion_reversal() {
        let c = example_curve();
        for (i, ci) in c.cells.iter().enumerate() {
            for cj in c.cells.iter() {
                let f_leq_e = c.subdivision.face_leq(ci.dual_face, cj.dual_face);
                if f_leq_e {
                    // ě ⊆ f̌: every vertex of ě must lie in the closure of f̌
                    let fi = c.by_face[&ci.dual_face];
                    for v in &cj.vertices {
                        assert!(c.cell_contains(fi, v), "cell {i} vertex not in subface dual");
                    }
                }
            }
        }
    }

    #[test]
    fn support_characterization_random() {
        let c = example_curve();
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..300 {
            let m: Vec<Rational> = (0..2)
                .map(|_| rat_frac_local((next() % 41) as i64 - 20, 4))
                .collect();
            let on_support = c.support_contains(&m);
            let on_some_cell = (0..c.cells.len()).any(|i| c.cell_contains(i, &m));
            assert_eq!(on_support, on_some_cell);
        }
    }

    #[test]
    fn star_neighborhood_of_vertex() {
        let c = dual_complex(&standard_simplex(1));
        let (vi, _) = c.cells_of_dim(0).next().unwrap();
        let star = star_neighborhood(&c, vi).unwrap();
        assert_eq!(star.len(), 4); // vertex + 3 rays
        assert!(star_neighborhood(&c, 99).is_err());
    }

    #[test]
    fn star_neighborhood_example_vertex_origin() {
        let c = example_curve();
        let (vi, _) = c
            .cells_of_dim(0)
            .find(|(_, v)| v.vertices[0] == vec![rat(0), rat(0)])
            .unwrap();
        let star = star_neighborhood(&c, vi).unwrap();
        // the vertex, two bounded edges, one ray
        assert_eq!(star.len(), 4);
        let bounded = star
            .iter()
            .filter(|&&s| c.cells[s].dim == 1 && c.cells[s].is_bounded())
            .count();
        let unbounded = star
            .iter()
            .filter(|&&s| c.cells[s].dim == 1 && !c.cells[s].is_bounded())
            .count();
        assert_eq!((bounded, unbounded), (2, 1));
    }

    #[test]
    fn standard_hyperplane_cones() {
        let g = StandardHyperplane::new(1);
        assert_eq!(g.cones().len(), 4); // empty + three rays
        let g2 = StandardHyperplane::new(2);
        let cones = g2.cones();
        assert_eq!(cones.iter().filter(|j| j.len() == 1).count(), 4);
        assert_eq!(cones.iter().filter(|j| j.len() == 2).count(), 6);
        // (5,5,-1) is not in cone {1,2}: third coordinate must vanish
        assert!(!g2.cone_contains(&[1, 2], &[rat(5), rat(5), rat(-1)]));
        assert!(g2.cone_contains(&[1, 2], &[rat(5), rat(5), rat(0)]));
        // u_0 direction lies in every cone containing 0
        assert!(g2.cone_contains(&[0, 1], &[rat(-2), rat(-3), rat(-3)]));
    }

    #[test]
    fn tangent_fan_standard_vertex_identity() {
        let c = dual_complex(&standard_simplex(2));
        let (vi, _) = c.cells_of_dim(0).next().unwrap();
        let f = tangent_fan(&c, vi).unwrap();
        let mut all = f.u.clone();
        all.push(f.u0.clone());
        all.sort();
        assert_eq!(
            all,
            vec![vec![-1, -1, -1], vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]
        );
        let sum: Vec<i64> = (0..3)
            .map(|i| f.u0[i] + f.u.iter().map(|u| u[i]).sum::<i64>())
            .collect();
        assert_eq!(sum, vec![0, 0, 0]);
    }

    #[test]
    fn tangent_fan_example_vertices() {
        // fan directions computed exactly from minimizer-set duality
        let c = example_curve();
        let fan_at = |x: i64, y: i64| -> Vec<Vec<i64>> {
            let (vi, _) = c
                .cells_of_dim(0)
                .find(|(_, v)| v.vertices[0] == vec![rat(x), rat(y)])
                .unwrap();
            let f = tangent_fan(&c, vi).unwrap();
            let mut all = f.u.clone();
            all.push(f.u0.clone());
            all.sort();
            all
        };
        assert_eq!(fan_at(0, 0), vec![vec![-1, -1], vec![0, 1], vec![1, 0]]);
        assert_eq!(fan_at(1, 0), vec![vec![-1, 0], vec![-1, 1], vec![2, -1]]);
        assert_eq!(fan_at(0, 1), vec![vec![-1, 2], vec![0, -1], vec![1, -1]]);
    }

    #[test]
    fn tangent_fan_two_cell_surface() {
        let p = convex_hull(&[
            lp(&[0, 0, 0]),
            lp(&[1, 0, 0]),
            lp(&[0, 1, 0]),
            lp(&[0, 0, 1]),
            lp(&[1, 1, 0]),
        ])
        .unwrap();
        let mut vals = BTreeMap::new();
        for q in crate::polyhedral::lattice_points(&p) {
            let v = i64::from(q == lp(&[1, 1, 0]));
            vals.insert(q, v);
        }
        let nu = LiftingFunction::for_polytope(&p, vals).unwrap();
        let c = dual_complex(&Subdivision::regular(&p, &nu).unwrap());
        assert_eq!(c.cells_of_dim(0).count(), 2);
        for (vi, _) in c.cells_of_dim(0) {
            let f = tangent_fan(&c, vi).unwrap();
            let sum: Vec<i64> = (0..3)
                .map(|i| f.u0[i] + f.u.iter().map(|u| u[i]).sum::<i64>())
                .collect();
            assert_eq!(sum, vec![0, 0, 0]);
        }
    }
}

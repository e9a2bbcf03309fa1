//! Floating-point scene data derived from the exact tropical complex:
//! local frames at vertices, edge and facet sites with their dual frames,
//! induced projection systems, and the coordinate conversions between
//! global M_R × T and the standard local models.
//!
//! Conventions. A vertex frame (A, B) has integer columns with AᵀB = I; the
//! local model coordinates satisfy x_g = ě + A x_loc, y_g = anchor + B y_loc,
//! so the symplectic form pulls back to the standard one. Lower-dimensional
//! sites carry partial frames with the same pairing normalization.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::coamoeba::PI;
use crate::exact::{self, rat, Rational};
use crate::numerics;
use crate::projections::ProjectionSystem;
use crate::tropical::{tangent_fan, TropicalComplex, VertexFrame};
use num_traits::Zero;

use super::LiftError;

/// A vertex ě of Ξ with its lattice frame and the labels of the cones of
/// the tangent hyperplane Γ_e.
#[derive(Clone, Debug)]
pub struct VertexSite {
    pub cell: usize,
    pub face: usize,
    pub pos: Vec<f64>,
    pub pos_exact: Vec<Rational>,
    pub frame: VertexFrame,
    /// Columns u_1..u_{n+1} as f64.
    pub a: Vec<Vec<f64>>,
    pub b: Vec<Vec<f64>>,
    /// Torus anchor (π/2) v_(0).
    pub y_anchor: Vec<f64>,
    /// Incident cells of Ξ and the index set of their cone in Γ_e.
    pub cones: Vec<ConeRef>,
    /// Induced compatible projections in local coordinates.
    pub proj: ProjectionSystem,
}

#[derive(Clone, Debug)]
pub struct ConeRef {
    pub cell: usize,
    pub j_set: Vec<usize>,
}

/// A 1-dimensional cell ď of Ξ (surface case) with the frame of its dual
/// triangle d and the anchored coordinate along ď.
#[derive(Clone, Debug)]
pub struct EdgeSite {
    pub cell: usize,
    pub face: usize,
    /// Primitive direction of ď, lexicographically canonical.
    pub m_dir: Vec<f64>,
    pub m_dir_exact: Vec<Rational>,
    /// Anchor point b_ď (interior).
    pub anchor_pt: Vec<f64>,
    pub anchor_exact: Vec<Rational>,
    /// Coordinate range of ď in the t-parameterization around the anchor.
    pub t_min: f64,
    pub t_max: f64,
    /// Ends: (vertex site index, t-coordinate of ě, sign σ with direction
    /// from ě into the edge equal to σ·m_dir).
    pub ends: Vec<(usize, f64, f64)>,
    /// N-side frame columns w_(1)−w_(0), w_(2)−w_(0) of the dual triangle.
    pub b_cols: Vec<Vec<f64>>,
    /// x-side frame in L_d^⊥ with A_dᵀ B_d = I.
    pub a_cols: Vec<Vec<f64>>,
    pub y_anchor: Vec<f64>,
    /// Basis vector of L_d with m̂·ℓ = 1.
    pub ell: Vec<f64>,
    /// Local J = {k} label of each incident facet cell.
    pub facet_j: Vec<(usize, usize)>,
    pub proj: ProjectionSystem,
}

/// A top-dimensional cell f̌ of Ξ carrying the flat/partition model.
#[derive(Clone, Debug)]
pub struct FacetSite {
    pub cell: usize,
    pub face: usize,
    /// N-side direction of the dual segment f (torus circle direction).
    pub b_vec: Vec<f64>,
    pub y_anchor: Vec<f64>,
    /// Dual vector in L_f^⊥ with v·b = 1.
    pub v_vec: Vec<f64>,
    /// Base point and direction basis of the affine span of f̌.
    pub base_anchor: Vec<f64>,
    pub base_anchor_exact: Vec<Rational>,
    pub base_dirs: Vec<Vec<f64>>,
    pub base_dirs_exact: Vec<Vec<Rational>>,
    /// Basis of L_f with base_dirsᵀ · ell = I.
    pub ell_basis: Vec<Vec<f64>>,
    /// Incident vertex sites and (surface case) edge sites.
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Scene {
    pub n: usize,
    pub complex: TropicalComplex,
    pub vertices: Vec<VertexSite>,
    pub edges: Vec<EdgeSite>,
    pub facets: Vec<FacetSite>,
    /// cell index -> (site kind, site index)
    pub site_of_cell: BTreeMap<usize, (SiteKind, usize)>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SiteKind {
    Vertex,
    Edge,
    Facet,
}

fn to_f64v(v: &[Rational]) -> Vec<f64> {
    exact::ratvec_to_f64(v)
}

/// Interior anchor of a possibly unbounded cell: vertex average plus half
/// the ray average.
pub fn cell_anchor_exact(cell: &crate::tropical::TropicalCell) -> Vec<Rational> {
    let d = cell.vertices[0].len();
    let mut b = vec![Rational::zero(); d];
    for v in &cell.vertices {
        for i in 0..d {
            b[i] += &v[i];
        }
    }
    let nv = rat(cell.vertices.len() as i64);
    for c in b.iter_mut() {
        *c /= &nv;
    }
    if !cell.rays.is_empty() {
        let nr = rat(2 * cell.rays.len() as i64);
        for r in &cell.rays {
            for i in 0..d {
                b[i] += rat(r[i]) / &nr;
            }
        }
    }
    b
}

impl Scene {
    pub fn build(complex: &TropicalComplex) -> Result<Scene, LiftError> {
        let ambient = complex.ambient_dim();
        let n = ambient - 1;
        if !crate::polyhedral::is_unimodal(&complex.subdivision) {
            return Err(LiftError::NonSmooth);
        }
        let mut scene = Scene {
            n,
            complex: complex.clone(),
            vertices: Vec::new(),
            edges: Vec::new(),
            facets: Vec::new(),
            site_of_cell: BTreeMap::new(),
        };
        // vertex sites
        for (ci, cell) in complex.cells.iter().enumerate() {
            if cell.dim != 0 {
                continue;
            }
            let frame = tangent_fan(complex, ci).map_err(|_| LiftError::NonSmooth)?;
            let site = build_vertex_site(complex, ci, frame)?;
            scene.site_of_cell.insert(ci, (SiteKind::Vertex, scene.vertices.len()));
            scene.vertices.push(site);
        }
        // edge sites (surface case only)
        if n == 2 {
            for (ci, cell) in complex.cells.iter().enumerate() {
                if cell.dim != 1 {
                    continue;
                }
                let site = build_edge_site(&scene, complex, ci)?;
                scene.site_of_cell.insert(ci, (SiteKind::Edge, scene.edges.len()));
                scene.edges.push(site);
            }
        }
        // facet sites: top-dimensional cells of Ξ
        for (ci, cell) in complex.cells.iter().enumerate() {
            if cell.dim != n {
                continue;
            }
            if n == 1 && cell.dim == 1 {
                // curve case: edges of Ξ are the facet sites
            }
            let site = build_facet_site(&scene, complex, ci)?;
            scene.site_of_cell.insert(ci, (SiteKind::Facet, scene.facets.len()));
            scene.facets.push(site);
        }
        Ok(scene)
    }

    pub fn vertex_x_to_local(&self, v: &VertexSite, x: &[f64]) -> Vec<f64> {
        let rel = numerics::sub(x, &v.pos);
        v.b.iter().map(|col| numerics::dot(col, &rel)).collect()
    }

    pub fn vertex_x_to_global(&self, v: &VertexSite, xl: &[f64]) -> Vec<f64> {
        let mut out = v.pos.clone();
        for (c, col) in xl.iter().zip(&v.a) {
            numerics::axpy(&mut out, *c, col);
        }
        out
    }

    pub fn vertex_y_to_local(&self, v: &VertexSite, y: &[f64]) -> Vec<f64> {
        let rel = numerics::sub(y, &v.y_anchor);
        v.a.iter().map(|col| numerics::dot(col, &rel)).collect()
    }

    pub fn vertex_y_to_global(&self, v: &VertexSite, yl: &[f64]) -> Vec<f64> {
        let mut out = v.y_anchor.clone();
        for (c, col) in yl.iter().zip(&v.b) {
            numerics::axpy(&mut out, *c, col);
        }
        out
    }

    /// Edge-local torus coordinates (2 components) of a global torus point
    /// relative to the triangle frame.
    pub fn edge_y_to_local(&self, e: &EdgeSite, y: &[f64]) -> Vec<f64> {
        let rel = numerics::sub(y, &e.y_anchor);
        e.a_cols.iter().map(|col| numerics::dot(col, &rel)).collect()
    }

    pub fn edge_y_to_global(&self, e: &EdgeSite, yl: &[f64], w: f64) -> Vec<f64> {
        let mut out = e.y_anchor.clone();
        for (c, col) in yl.iter().zip(&e.b_cols) {
            numerics::axpy(&mut out, *c, col);
        }
        numerics::axpy(&mut out, w, &e.ell);
        out
    }

    pub fn edge_x_to_global(&self, e: &EdgeSite, t: f64, v2: &[f64]) -> Vec<f64> {
        let mut out = e.anchor_pt.clone();
        numerics::axpy(&mut out, t, &e.m_dir);
        for (c, col) in v2.iter().zip(&e.a_cols) {
            numerics::axpy(&mut out, *c, col);
        }
        out
    }

    /// Splits a global x into (t along ď, fibre coordinates in the triangle
    /// frame, residual along m̂... the decomposition is exact by duality).
    pub fn edge_x_split(&self, e: &EdgeSite, x: &[f64]) -> (f64, Vec<f64>) {
        // t = <x − anchor, ℓ-dual>: use m̂-pairing via ell: m̂·ell = 1 and
        // a_cols·ell = 0, so t = (x − anchor)·ell.
        let rel = numerics::sub(x, &e.anchor_pt);
        let t = numerics::dot(&rel, &e.ell);
        // fibre coordinates from pairing with b_cols (a-dual)
        let v2: Vec<f64> = e.b_cols.iter().map(|bcol| numerics::dot(&rel, bcol)).collect();
        (t, v2)
    }

    pub fn facet_x_to_global(&self, f: &FacetSite, base: &[f64], vcoef: f64) -> Vec<f64> {
        let mut out = f.base_anchor.clone();
        for (c, dir) in base.iter().zip(&f.base_dirs) {
            numerics::axpy(&mut out, *c, dir);
        }
        numerics::axpy(&mut out, vcoef, &f.v_vec);
        out
    }

    /// Splits a global x into facet base coordinates and the fibre
    /// coefficient along v_vec.
    pub fn facet_x_split(&self, f: &FacetSite, x: &[f64]) -> (Vec<f64>, f64) {
        let rel = numerics::sub(x, &f.base_anchor);
        let vcoef = numerics::dot(&rel, &f.b_vec);
        let base: Vec<f64> = f.ell_basis.iter().map(|l| numerics::dot(&rel, l)).collect();
        (base, vcoef)
    }

    pub fn facet_y_to_global(&self, f: &FacetSite, s: f64, wcoefs: &[f64]) -> Vec<f64> {
        let mut out = f.y_anchor.clone();
        numerics::axpy(&mut out, s, &f.b_vec);
        for (c, l) in wcoefs.iter().zip(&f.ell_basis) {
            numerics::axpy(&mut out, *c, l);
        }
        out
    }

    /// Splits a global torus representative into the circle coordinate s and
    /// L_f offsets (w-coefficients paired with the base directions).
    pub fn facet_y_split(&self, f: &FacetSite, y: &[f64]) -> (f64, Vec<f64>) {
        let rel = numerics::sub(y, &f.y_anchor);
        let s = numerics::dot(&rel, &f.v_vec);
        let w: Vec<f64> = f.base_dirs.iter().map(|d| numerics::dot(&rel, d)).collect();
        (s, w)
    }

    pub fn vertex_site_of_cell(&self, cell: usize) -> Option<&VertexSite> {
        match self.site_of_cell.get(&cell) {
            Some((SiteKind::Vertex, i)) => Some(&self.vertices[*i]),
            _ => None,
        }
    }
}

fn build_vertex_site(
    complex: &TropicalComplex,
    ci: usize,
    frame: VertexFrame,
) -> Result<VertexSite, LiftError> {
    let cell = &complex.cells[ci];
    let face = cell.dual_face;
    let n = complex.ambient_dim() - 1;
    let pos_exact = cell.vertices[0].clone();
    let pos = to_f64v(&pos_exact);
    let a: Vec<Vec<f64>> = frame.u.iter().map(|c| c.iter().map(|&x| x as f64).collect()).collect();
    let b: Vec<Vec<f64>> = frame.b.iter().map(|c| c.iter().map(|&x| x as f64).collect()).collect();
    let y_anchor: Vec<f64> =
        frame.vertex_order[0].0.iter().map(|&c| 0.5 * PI * c as f64).collect();
    // cones of Γ_e: incident cells g with 1 ≤ dim ǧ ≤ n; J = labels of the
    // frame vertices not contained in g.
    let sub = &complex.subdivision;
    let mut cones = Vec::new();
    for (gi, g) in sub.faces.iter().enumerate() {
        if g.dim() == 0 || gi == face || !sub.face_leq(gi, face) {
            continue;
        }
        let j_set: Vec<usize> = (0..=n + 1)
            .filter(|&k| !g.lattice.contains(&frame.vertex_order[k]))
            .collect();
        if j_set.is_empty() || j_set.len() > n {
            return Err(LiftError::NonSmooth);
        }
        cones.push(ConeRef { cell: complex.by_face[&gi], j_set });
    }
    cones.sort_by(|a, b| (a.j_set.len(), &a.j_set).cmp(&(b.j_set.len(), &b.j_set)));
    // induced local projections from the global orthogonal system:
    // the global L_g = orth complement of N^g; locally L_loc = Aᵀ L_g.
    let mut pairs = Vec::new();
    for c in &cones {
        let g_face = complex.cells[c.cell].dual_face;
        let l_global = orth_complement_of_face_dirs(sub, g_face);
        let l_loc: Vec<Vec<f64>> = l_global
            .iter()
            .map(|v| a.iter().map(|col| numerics::dot(col, v)).collect())
            .collect();
        pairs.push((c.j_set.clone(), l_loc));
    }
    let proj =
        ProjectionSystem::from_subspaces(n, &pairs).map_err(|_| LiftError::NonSmooth)?;
    Ok(VertexSite { cell: ci, face, pos, pos_exact, frame, a, b, y_anchor, cones, proj })
}

/// Euclidean orthogonal complement of the direction space of a subdivision
/// face (the paper's example choice of L).
fn orth_complement_of_face_dirs(
    sub: &crate::polyhedral::Subdivision,
    face: usize,
) -> Vec<Vec<f64>> {
    let lat = &sub.faces[face].lattice;
    let d = lat[0].dim();
    let dirs: Vec<Vec<Rational>> = lat[1..]
        .iter()
        .map(|p| exact::sub(&p.to_rational(), &lat[0].to_rational()))
        .collect();
    let null = exact::nullspace(&dirs, d);
    null.iter().map(|v| to_f64v(v)).collect()
}

fn build_edge_site(
    scene: &Scene,
    complex: &TropicalComplex,
    ci: usize,
) -> Result<EdgeSite, LiftError> {
    let cell = &complex.cells[ci];
    let face = cell.dual_face;
    let sub = &complex.subdivision;
    let tri = &sub.faces[face];
    if tri.lattice.len() != 3 {
        return Err(LiftError::NonSmooth);
    }
    // canonical primitive direction of ď
    let dir_raw: Vec<Rational> = if cell.rays.is_empty() {
        exact::sub(&cell.vertices[1], &cell.vertices[0])
    } else {
        exact::ratvec_from_ints(&cell.rays[0])
    };
    // canonical direction: along the ray for unbounded edges (so the
    // t-interval is one-sided toward +∞), lexicographically positive else
    let mut m_int = exact::primitive_direction(&dir_raw);
    if cell.rays.is_empty() {
        let neg: Vec<i64> = m_int.iter().map(|&c| -c).collect();
        if neg > m_int {
            m_int = neg;
        }
    }
    let m_dir_exact: Vec<Rational> = exact::ratvec_from_ints(&m_int);
    let m_dir = to_f64v(&m_dir_exact);
    let anchor_exact = cell_anchor_exact(cell);
    let anchor_pt = to_f64v(&anchor_exact);

    // t-range and ends
    let tcoord = |p: &[f64]| -> f64 {
        let rel = numerics::sub(p, &anchor_pt);
        numerics::dot(&rel, &m_dir) / numerics::dot(&m_dir, &m_dir)
    };
    let mut t_min = f64::NEG_INFINITY;
    let mut t_max = f64::INFINITY;
    let mut ends = Vec::new();
    for v in &cell.vertices {
        let t = tcoord(&to_f64v(v));
        let (kind, vi) = scene.site_of_cell[&vertex_cell_at(complex, v)];
        debug_assert_eq!(kind, SiteKind::Vertex);
        ends.push((vi, t));
    }
    ends.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
    if cell.rays.is_empty() {
        t_min = ends[0].1;
        t_max = ends[1].1;
    } else {
        let rdir = numerics::dot(
            &cell.rays[0].iter().map(|&c| c as f64).collect::<Vec<_>>(),
            &m_dir,
        );
        if rdir > 0.0 {
            t_min = ends[0].1;
        } else {
            t_max = ends[0].1;
        }
    }
    let ends: Vec<(usize, f64, f64)> = ends
        .iter()
        .map(|&(vi, t)| {
            // direction from ě into the edge: positive t direction when the
            // vertex sits at the low end
            let sigma = if (t - t_min).abs() < (t_max - t).abs() || t_max.is_infinite() {
                if t == t_min { 1.0 } else { -1.0 }
            } else {
                -1.0
            };
            (vi, t, sigma)
        })
        .collect();

    // triangle frame: rays of Γ_d in L_d^⊥ are the fibre components of the
    // incident facet directions; vertex w_(k) is opposite the edge dual to
    // the k-th ray.
    let b_full: Vec<Vec<Rational>> = tri.lattice.iter().map(|p| p.to_rational()).collect();
    // incident facet cells: duals of the edges of the triangle
    let mut facet_info: Vec<(usize, Vec<usize>)> = Vec::new(); // (facet cell, opposite tri vertex index)
    for omit in 0..3 {
        let mut edge_lat = Vec::new();
        for (i, p) in tri.lattice.iter().enumerate() {
            if i != omit {
                edge_lat.push(p.clone());
            }
        }
        let fi = sub.face_index(&edge_lat).ok_or(LiftError::NonSmooth)?;
        let fcell = complex.by_face[&fi];
        facet_info.push((fcell, vec![omit]));
    }
    // fibre direction of each facet cell: pick a direction of f̌ transversal
    // to ď and project out the m̂ component via the L_d pairing.
    let ell_exact = cross3(&exact::sub(&b_full[1], &b_full[0]), &exact::sub(&b_full[2], &b_full[0]));
    let ell_f64_raw = to_f64v(&ell_exact);
    let scale = numerics::dot(&m_dir, &ell_f64_raw);
    if scale.abs() < 1e-12 {
        return Err(LiftError::NonSmooth);
    }
    let ell: Vec<f64> = ell_f64_raw.iter().map(|&c| c / scale).collect();
    let fibre_dir = |fcell: usize| -> Vec<f64> {
        let fc = &complex.cells[fcell];
        let a = cell_anchor_exact(fc);
        let rel = numerics::sub(&to_f64v(&a), &anchor_pt);
        // remove the m̂-component using the ℓ pairing: t = rel·ell
        let t = numerics::dot(&rel, &ell);
        let mut v = rel.clone();
        numerics::axpy(&mut v, -t, &m_dir);
        let n = numerics::norm(&v);
        v.iter().map(|&c| c / n).collect()
    };
    let mut rays: Vec<(Vec<f64>, usize, usize)> = facet_info
        .iter()
        .map(|&(fcell, ref omit)| (fibre_dir(fcell), fcell, omit[0]))
        .collect();
    rays.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    // u_1 = rays[0], u_2 = rays[1], u_0 = rays[2]; vertex w_(k) opposite
    let order = [rays[0].2, rays[1].2, rays[2].2]; // tri vertex indices (1,2,0 labels)
    let w0 = order[2]; // label 0 vertex
    let assemble = |w0: usize, w1: usize, w2: usize| -> (Vec<Vec<f64>>, Option<Vec<Vec<f64>>>) {
        let b_cols: Vec<Vec<f64>> = [w1, w2]
            .iter()
            .map(|&wi| to_f64v(&exact::sub(&b_full[wi], &b_full[w0])))
            .collect();
        // A_d = B_d (B_dᵀB_d)⁻¹ for the orthogonal system
        let mut gram = vec![vec![0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                gram[i][j] = numerics::dot(&b_cols[i], &b_cols[j]);
            }
        }
        let det = gram[0][0] * gram[1][1] - gram[0][1] * gram[1][0];
        if det.abs() < 1e-12 {
            return (b_cols, None);
        }
        let inv = [
            [gram[1][1] / det, -gram[0][1] / det],
            [-gram[1][0] / det, gram[0][0] / det],
        ];
        let mut a_cols = Vec::new();
        for k in 0..2 {
            let mut col = vec![0.0; 3];
            for i in 0..2 {
                numerics::axpy(&mut col, inv[i][k], &b_cols[i]);
            }
            a_cols.push(col);
        }
        (b_cols, Some(a_cols))
    };
    let (b_cols, a_cols) = assemble(w0, order[0], order[1]);
    let a_cols = a_cols.ok_or(LiftError::NonSmooth)?;
    // consistency: a_cols must align with the sorted fibre rays
    let aligned = numerics::dot(&a_cols[0], &rays[0].0) > 0.0
        && numerics::dot(&a_cols[1], &rays[1].0) > 0.0;
    let (b_cols, a_cols) = if aligned {
        (b_cols, a_cols)
    } else {
        let (b2, a2) = assemble(w0, order[1], order[0]);
        let a2 = a2.ok_or(LiftError::NonSmooth)?;
        if !(numerics::dot(&a2[0], &rays[0].0) > 0.0 && numerics::dot(&a2[1], &rays[1].0) > 0.0) {
            return Err(LiftError::NonSmooth);
        }
        (b2, a2)
    };
    let y_anchor: Vec<f64> = b_full[w0].iter().map(|c| 0.5 * PI * exact::to_f64(c)).collect();
    // facet cell -> local J label: ray k (k = 1, 2) has the facet from
    // rays[k−1]; the remaining facet is labeled 0.
    let mut facet_j = vec![(rays[0].1, 1usize), (rays[1].1, 2usize), (rays[2].1, 0usize)];
    facet_j.sort();

    // induced local projections for J = {0}, {1}, {2}: L_loc = B_d⁻¹-image
    // of N^d ∩ L_f expressed in local torus coordinates (pairing transform
    // via a_cols as for vertices).
    let mut pairs = Vec::new();
    for &(fcell, jl) in &facet_j {
        let f_face = complex.cells[fcell].dual_face;
        let l_global = orth_complement_of_face_dirs(sub, f_face);
        // intersect span(l_global) with N^d_R = span(b_cols): v = B z with
        // v ∈ span(L): solve for z up to scale.
        let mut best: Option<Vec<f64>> = None;
        // v ∈ span(b_cols) ∩ span(l_global): basis via nullspace over f64
        // build matrix [b_cols | −l_global] and find kernel direction.
        let cols: Vec<Vec<f64>> = b_cols
            .iter()
            .cloned()
            .chain(l_global.iter().map(|v| v.iter().map(|&c| -c).collect()))
            .collect();
        let k = kernel_direction(&cols);
        if let Some(kv) = k {
            let z = &kv[..2];
            let v_loc: Vec<f64> = a_cols
                .iter()
                .map(|acol| {
                    let mut v = vec![0.0; 3];
                    numerics::axpy(&mut v, z[0], &b_cols[0]);
                    numerics::axpy(&mut v, z[1], &b_cols[1]);
                    numerics::dot(acol, &v)
                })
                .collect();
            if numerics::norm(&v_loc) > 1e-9 {
                best = Some(v_loc);
            }
        }
        let l_loc = best.ok_or(LiftError::NonSmooth)?;
        pairs.push((vec![jl], vec![l_loc]));
    }
    let proj = ProjectionSystem::from_subspaces(1, &pairs).map_err(|_| LiftError::NonSmooth)?;

    Ok(EdgeSite {
        cell: ci,
        face,
        m_dir,
        m_dir_exact,
        anchor_pt,
        anchor_exact,
        t_min,
        t_max,
        ends,
        b_cols,
        a_cols,
        y_anchor,
        ell,
        facet_j,
        proj,
    })
}

fn kernel_direction(cols: &[Vec<f64>]) -> Option<Vec<f64>> {
    // kernel of the 3×k matrix with the given columns (k = 4 here)
    let k = cols.len();
    let rows = 3;
    // solve by fixing the last coordinate to 1, least squares fallback scan
    for pivot in (0..k).rev() {
        let mut mat = vec![vec![0.0; k - 1]; rows];
        let mut rhs = vec![0.0; rows];
        let mut cj = 0;
        for (j, col) in cols.iter().enumerate() {
            if j == pivot {
                for r in 0..rows {
                    rhs[r] = -col[r];
                }
            } else {
                for r in 0..rows {
                    mat[r][cj] = col[r];
                }
                cj += 1;
            }
        }
        // normal equations
        let m = k - 1;
        let mut gram = vec![vec![0.0; m]; m];
        let mut grhs = vec![0.0; m];
        for i in 0..m {
            for j in 0..m {
                gram[i][j] = (0..rows).map(|r| mat[r][i] * mat[r][j]).sum();
            }
            grhs[i] = (0..rows).map(|r| mat[r][i] * rhs[r]).sum();
        }
        if let Some(sol) = numerics::solve(&mut gram, &mut grhs) {
            let mut resid = vec![0.0; rows];
            for r in 0..rows {
                let mut acc = 0.0;
                for j in 0..m {
                    acc += mat[r][j] * sol[j];
                }
                resid[r] = acc - rhs[r];
            }
            if numerics::norm(&resid) < 1e-9 {
                let mut out = vec![0.0; k];
                let mut cj = 0;
                for j in 0..k {
                    if j == pivot {
                        out[j] = 1.0;
                    } else {
                        out[j] = sol[cj];
                        cj += 1;
                    }
                }
                return Some(out);
            }
        }
    }
    None
}

fn cross3(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    vec![
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

fn vertex_cell_at(complex: &TropicalComplex, pos: &[Rational]) -> usize {
    complex
        .cells
        .iter()
        .position(|c| c.dim == 0 && c.vertices[0] == pos)
        .expect("edge endpoint must be a vertex cell")
}

fn build_facet_site(
    scene: &Scene,
    complex: &TropicalComplex,
    ci: usize,
) -> Result<FacetSite, LiftError> {
    let cell = &complex.cells[ci];
    let face = cell.dual_face;
    let sub = &complex.subdivision;
    let seg = &sub.faces[face];
    if seg.lattice.len() != 2 {
        return Err(LiftError::NonSmooth);
    }
    let w_a = seg.lattice[0].to_rational();
    let w_b = seg.lattice[1].to_rational();
    let b_vec_exact = exact::sub(&w_b, &w_a);
    let b_vec = to_f64v(&b_vec_exact);
    let y_anchor: Vec<f64> = w_a.iter().map(|c| 0.5 * PI * exact::to_f64(c)).collect();
    let v_vec: Vec<f64> = {
        let nn = numerics::dot(&b_vec, &b_vec);
        b_vec.iter().map(|&c| c / nn).collect()
    };
    let base_anchor_exact = cell_anchor_exact(cell);
    let base_anchor = to_f64v(&base_anchor_exact);
    // direction basis of the affine span of f̌
    let mut dirs_exact: Vec<Vec<Rational>> = Vec::new();
    let mut candidates: Vec<Vec<Rational>> = Vec::new();
    for v in &cell.vertices[1..] {
        candidates.push(exact::sub(v, &cell.vertices[0]));
    }
    for r in &cell.rays {
        candidates.push(exact::ratvec_from_ints(r));
    }
    candidates.sort();
    for c in &candidates {
        let mut test = dirs_exact.clone();
        test.push(c.clone());
        if exact::rank(&test) > dirs_exact.len() {
            dirs_exact.push(exact::ratvec_from_ints(&exact::primitive_direction(c)));
        }
        if dirs_exact.len() == cell.dim {
            break;
        }
    }
    if dirs_exact.len() != cell.dim {
        return Err(LiftError::NonSmooth);
    }
    let base_dirs: Vec<Vec<f64>> = dirs_exact.iter().map(|d| to_f64v(d)).collect();
    // ℓ-basis of L_f (orthogonal complement of b_vec) with base_dirsᵀℓ = I
    let j = base_dirs.len();
    let mut ell_basis = Vec::new();
    for a in 0..j {
        let mut mat: Vec<Vec<f64>> = vec![b_vec.clone()];
        let mut rhs = vec![0.0];
        for (bb, d) in base_dirs.iter().enumerate() {
            mat.push(d.clone());
            rhs.push(f64::from(bb == a));
        }
        let sol = numerics::solve(&mut mat, &mut rhs).ok_or(LiftError::NonSmooth)?;
        ell_basis.push(sol);
    }
    // incident sites
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    for gi in 0..sub.faces.len() {
        if !sub.face_leq(face, gi) || gi == face {
            continue;
        }
        match scene.site_of_cell.get(&complex.by_face[&gi]) {
            Some((SiteKind::Vertex, vi)) => vertices.push(*vi),
            Some((SiteKind::Edge, ei)) => edges.push(*ei),
            _ => {}
        }
    }
    vertices.sort_unstable();
    edges.sort_unstable();
    Ok(FacetSite {
        cell: ci,
        face,
        b_vec,
        y_anchor,
        v_vec,
        base_anchor,
        base_anchor_exact,
        base_dirs,
        base_dirs_exact: dirs_exact,
        ell_basis,
        vertices,
        edges,
    })
}

#[cfg(test)]
pub mod tests {
    use super::*;
    use crate::polyhedral::{convex_hull, lp, LiftingFunction, Subdivision};
    use crate::tropical::dual_complex;
    use alloc::collections::BTreeMap;

    pub fn example_curve_complex() -> TropicalComplex {
        let p = convex_hull(&[lp(&[0, 0]), lp(&[1, 2]), lp(&[2, 1])]).unwrap();
        let mut vals = BTreeMap::new();
        vals.insert(lp(&[0, 0]), 1);
        vals.insert(lp(&[1, 1]), 0);
        vals.insert(lp(&[1, 2]), 0);
        vals.insert(lp(&[2, 1]), 0);
        let nu = LiftingFunction::for_polytope(&p, vals).unwrap();
        dual_complex(&Subdivision::regular(&p, &nu).unwrap())
    }

    pub fn two_vertex_surface_complex() -> TropicalComplex {
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
        dual_complex(&Subdivision::regular(&p, &nu).unwrap())
    }

    #[test]
    fn curve_scene_counts() {
        let scene = Scene::build(&example_curve_complex()).unwrap();
        assert_eq!(scene.n, 1);
        assert_eq!(scene.vertices.len(), 3);
        assert_eq!(scene.edges.len(), 0);
        assert_eq!(scene.facets.len(), 6);
    }

    #[test]
    fn surface_scene_counts() {
        let scene = Scene::build(&two_vertex_surface_complex()).unwrap();
        assert_eq!(scene.n, 2);
        assert_eq!(scene.vertices.len(), 2);
        assert_eq!(scene.edges.len(), 7);
        assert_eq!(scene.facets.len(), 9);
    }

    #[test]
    fn vertex_coordinate_round_trip() {
        let scene = Scene::build(&two_vertex_surface_complex()).unwrap();
        for v in &scene.vertices {
            let xl = [0.3, -0.2, 0.15];
            let xg = scene.vertex_x_to_global(v, &xl);
            let back = scene.vertex_x_to_local(v, &xg);
            assert!(numerics::norm(&numerics::sub(&back, &xl)) < 1e-12);
            let yl = [0.4, 0.1, 0.2];
            let yg = scene.vertex_y_to_global(v, &yl);
            let yb = scene.vertex_y_to_local(v, &yg);
            assert!(numerics::norm(&numerics::sub(&yb, &yl)) < 1e-12);
        }
    }

    #[test]
    fn vertex_frames_pair_correctly() {
        // AᵀB = I means the symplectic pairing is preserved
        let scene = Scene::build(&example_curve_complex()).unwrap();
        for v in &scene.vertices {
            for i in 0..2 {
                for j in 0..2 {
                    let p = numerics::dot(&v.a[i], &v.b[j]);
                    assert!((p - f64::from(i == j)).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn edge_frames_pair_correctly() {
        let scene = Scene::build(&two_vertex_surface_complex()).unwrap();
        for e in &scene.edges {
            for i in 0..2 {
                for j in 0..2 {
                    let p = numerics::dot(&e.a_cols[i], &e.b_cols[j]);
                    assert!((p - f64::from(i == j)).abs() < 1e-9, "AᵀB != I on edge");
                }
                // a_cols ⊥ the m̂ pairing via ℓ and ℓ pairing with m̂ is 1
                assert!(numerics::dot(&e.a_cols[i], &e.ell).abs() < 1e-9);
            }
            assert!((numerics::dot(&e.m_dir, &e.ell) - 1.0).abs() < 1e-9);
            // edge x split round trip
            let x = scene.edge_x_to_global(e, 0.7, &[0.1, -0.2]);
            let (t, v2) = scene.edge_x_split(e, &x);
            assert!((t - 0.7).abs() < 1e-9);
            assert!((v2[0] - 0.1).abs() < 1e-9 && (v2[1] + 0.2).abs() < 1e-9);
        }
    }

    #[test]
    fn facet_split_round_trip() {
        let scene = Scene::build(&two_vertex_surface_complex()).unwrap();
        for f in &scene.facets {
            let x = scene.facet_x_to_global(f, &[0.5, -0.3], 0.2);
            let (b, vc) = scene.facet_x_split(f, &x);
            assert!((b[0] - 0.5).abs() < 1e-9 && (b[1] + 0.3).abs() < 1e-9);
            assert!((vc - 0.2).abs() < 1e-9);
            let y = scene.facet_y_to_global(f, 0.8, &[0.05, -0.04]);
            let (s, w) = scene.facet_y_split(f, &y);
            assert!((s - 0.8).abs() < 1e-9);
            assert!((w[0] - 0.05).abs() < 1e-9 && (w[1] + 0.04).abs() < 1e-9);
        }
    }

    #[test]
    fn curve_facet_split_round_trip() {
        let scene = Scene::build(&example_curve_complex()).unwrap();
        for f in &scene.facets {
            let x = scene.facet_x_to_global(f, &[0.4], -0.15);
            let (b, vc) = scene.facet_x_split(f, &x);
            assert!((b[0] - 0.4).abs() < 1e-9 && (vc + 0.15).abs() < 1e-9);
        }
    }
}

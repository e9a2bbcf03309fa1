//! Inner polyhedra and neighborhood systems, in exact arithmetic.
//!
//! Inner polyhedra are rescalings of the cells of Ξ about interior anchor
//! points with factors 1 − σt; the three collections ρ′ ⊂ ρ″ ⊂ ρ use
//! σ = 4/5, 13/20, 1/2. Neighborhoods are a box B_e per vertex, a polygon
//! B_d ⊂ L_d^⊥ per edge and an interval B_f ⊂ L_f^⊥ per facet. The
//! separation conditions on this data are decided exactly with
//! Fourier-Motzkin feasibility; only the λ-dependent containments of the
//! analytic layer are sampled.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::exact::{
    self, affine_basis, affine_coordinates, dot, feasible, rat, rat_frac, sub, Constraint,
    Rational, Rel,
};

use super::scene::Scene;
use super::LiftError;

/// A polyhedron given by affine equalities and inequalities a·x ≤ b.
#[derive(Clone, Debug, Default)]
pub struct HPoly {
    pub eqs: Vec<(Vec<Rational>, Rational)>,
    pub ineqs: Vec<(Vec<Rational>, Rational)>,
}

impl HPoly {
    pub fn contains(&self, x: &[Rational]) -> bool {
        self.eqs.iter().all(|(a, b)| &dot(a, x) == b)
            && self.ineqs.iter().all(|(a, b)| &dot(a, x) <= b)
    }

    pub fn constraints(&self) -> Vec<Constraint> {
        let mut out = Vec::new();
        for (a, b) in &self.eqs {
            out.push(Constraint::new(a.clone(), Rel::Eq, b.clone()));
        }
        for (a, b) in &self.ineqs {
            out.push(Constraint::new(a.clone(), Rel::Le, b.clone()));
        }
        out
    }

    pub fn intersects(&self, other: &HPoly, nvars: usize) -> bool {
        let mut cons = self.constraints();
        cons.extend(other.constraints());
        feasible(&cons, nvars)
    }

    /// Is the whole of `self` inside `other`?
    pub fn subset_of(&self, other: &HPoly, nvars: usize) -> bool {
        for (a, b) in &other.ineqs {
            let mut cons = self.constraints();
            let neg: Vec<Rational> = a.iter().map(|c| -c.clone()).collect();
            cons.push(Constraint::new(neg, Rel::Lt, -b.clone()));
            if feasible(&cons, nvars) {
                return false;
            }
        }
        for (a, b) in &other.eqs {
            for sign in [1i64, -1] {
                let aa = exact::scale(a, &rat(sign));
                let bb = b * rat(sign);
                let mut cons = self.constraints();
                let neg: Vec<Rational> = aa.iter().map(|c| -c.clone()).collect();
                cons.push(Constraint::new(neg, Rel::Lt, -bb));
                if feasible(&cons, nvars) {
                    return false;
                }
            }
        }
        true
    }
}

/// V-representation of a small rational polyhedron.
#[derive(Clone, Debug)]
pub struct VPoly {
    pub vertices: Vec<Vec<Rational>>,
    pub rays: Vec<Vec<Rational>>,
}

impl VPoly {
    pub fn scaled_about(&self, center: &[Rational], factor: &Rational) -> VPoly {
        VPoly {
            vertices: self
                .vertices
                .iter()
                .map(|v| exact::add(center, &exact::scale(&sub(v, center), factor)))
                .collect(),
            rays: self.rays.clone(),
        }
    }

    pub fn minkowski_segment(&self, dir: &[Rational], half: &Rational) -> VPoly {
        let mut vertices = Vec::new();
        for v in &self.vertices {
            vertices.push(exact::add(v, &exact::scale(dir, half)));
            vertices.push(sub(v, &exact::scale(dir, half)));
        }
        VPoly { vertices, rays: self.rays.clone() }
    }

    pub fn from_cell(cell: &crate::tropical::TropicalCell) -> VPoly {
        VPoly {
            vertices: cell.vertices.clone(),
            rays: cell.rays.iter().map(|r| exact::ratvec_from_ints(r)).collect(),
        }
    }
}

/// Exact H-representation of conv(vertices) + cone(rays), by supporting
/// hyperplane enumeration within the affine hull.
pub fn hrep(v: &VPoly) -> HPoly {
    let d = v.vertices[0].len();
    let mut span_pts: Vec<Vec<Rational>> = v.vertices.clone();
    for r in &v.rays {
        span_pts.push(exact::add(&v.vertices[0], r));
    }
    let (origin, basis) = affine_basis(&span_pts);
    let k = basis.len();
    let mut eqs = Vec::new();
    if k < d {
        for n in exact::nullspace(&basis, d) {
            let b = dot(&n, &origin);
            eqs.push((n, b));
        }
    }
    if k == 0 {
        return HPoly { eqs, ineqs: Vec::new() };
    }
    let locv: Vec<Vec<Rational>> = v
        .vertices
        .iter()
        .map(|p| affine_coordinates(&origin, &basis, p).expect("vertex outside hull"))
        .collect();
    let locr: Vec<Vec<Rational>> = v
        .rays
        .iter()
        .map(|r| affine_coordinates(&origin, &basis, &exact::add(&origin, r)).expect("ray outside hull"))
        .collect();
    // extended generator points: v, v + r, v + r + r'
    let mut gen_pts: Vec<Vec<Rational>> = locv.clone();
    for lv in &locv {
        for lr in &locr {
            gen_pts.push(exact::add(lv, lr));
            for lr2 in &locr {
                gen_pts.push(exact::add(&exact::add(lv, lr), lr2));
            }
        }
    }
    dedup(&mut gen_pts);
    let mut ineqs_local: Vec<(Vec<Rational>, Rational)> = Vec::new();
    if k == 1 {
        // interval: bounds from vertex coordinates and rays
        let mut lo: Option<Rational> = None;
        let mut hi: Option<Rational> = None;
        for p in &locv {
            let c = p[0].clone();
            if lo.is_none() || Some(&c) < lo.as_ref() {
                lo = Some(c.clone());
            }
            if hi.is_none() || Some(&c) > hi.as_ref() {
                hi = Some(c);
            }
        }
        let ray_pos = locr.iter().any(|r| r[0].is_positive());
        let ray_neg = locr.iter().any(|r| r[0].is_negative());
        if !ray_pos {
            ineqs_local.push((vec![rat(1)], hi.unwrap()));
        }
        if !ray_neg {
            ineqs_local.push((vec![rat(-1)], -lo.unwrap()));
        }
    } else {
        let mut subset: Vec<usize> = (0..k).collect();
        loop {
            if let Some((n, c)) = supporting(&gen_pts, &locv, &locr, &subset, k) {
                if !ineqs_local.iter().any(|(a, b)| a == &n && b == &c) {
                    ineqs_local.push((n, c));
                }
            }
            if !next_combination(&mut subset, gen_pts.len()) {
                break;
            }
        }
    }
    // map local inequalities back to global functionals
    let duals = dual_rows(&basis, d);
    let mut ineqs: Vec<(Vec<Rational>, Rational)> = Vec::new();
    for (n, c) in ineqs_local {
        let mut a = vec![Rational::zero(); d];
        for (ni, dual) in n.iter().zip(&duals) {
            for i in 0..d {
                a[i] += ni * &dual[i];
            }
        }
        let b = c + dot(&a, &origin);
        if !ineqs.iter().any(|(aa, bb)| aa == &a && bb == &b) {
            ineqs.push((a, b));
        }
    }
    HPoly { eqs, ineqs }
}

fn dedup(pts: &mut Vec<Vec<Rational>>) {
    let mut out: Vec<Vec<Rational>> = Vec::new();
    for p in pts.drain(..) {
        if !out.contains(&p) {
            out.push(p);
        }
    }
    *pts = out;
}

fn supporting(
    gen_pts: &[Vec<Rational>],
    locv: &[Vec<Rational>],
    locr: &[Vec<Rational>],
    subset: &[usize],
    k: usize,
) -> Option<(Vec<Rational>, Rational)> {
    let base = &gen_pts[subset[0]];
    let diffs: Vec<Vec<Rational>> =
        subset[1..].iter().map(|&i| sub(&gen_pts[i], base)).collect();
    if exact::rank(&diffs) != k - 1 {
        return None;
    }
    let normals = exact::nullspace(&diffs, k);
    if normals.len() != 1 {
        return None;
    }
    let mut n = normals[0].clone();
    let mut c = dot(&n, base);
    let mut pos = false;
    let mut neg = false;
    for v in locv {
        match dot(&n, v).cmp(&c) {
            core::cmp::Ordering::Greater => pos = true,
            core::cmp::Ordering::Less => neg = true,
            _ => {}
        }
    }
    for r in locr {
        let s = dot(&n, r);
        if s.is_positive() {
            pos = true;
        } else if s.is_negative() {
            neg = true;
        }
    }
    if pos && neg {
        return None;
    }
    if pos {
        n = n.iter().map(|x| -x.clone()).collect();
        c = -c;
    }
    Some((n, c))
}

fn next_combination(subset: &mut [usize], n: usize) -> bool {
    let k = subset.len();
    if k > n {
        return false;
    }
    let mut i = k;
    while i > 0 {
        i -= 1;
        if subset[i] < n - (k - i) {
            subset[i] += 1;
            for j in i + 1..k {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Functionals recovering hull coordinates: r_a · basis_b = δ_ab, supported
/// on the span of the basis.
fn dual_rows(basis: &[Vec<Rational>], d: usize) -> Vec<Vec<Rational>> {
    let k = basis.len();
    let mut gram = vec![vec![Rational::zero(); k]; k];
    for i in 0..k {
        for j in 0..k {
            gram[i][j] = dot(&basis[i], &basis[j]);
        }
    }
    let mut out = Vec::new();
    for a in 0..k {
        let mut rhs = vec![Rational::zero(); k];
        rhs[a] = rat(1);
        let c = exact::solve_linear(&gram, &rhs).expect("independent basis");
        let mut r = vec![Rational::zero(); d];
        for (cb, b) in c.iter().zip(basis) {
            for i in 0..d {
                r[i] += cb * &b[i];
            }
        }
        out.push(r);
    }
    out
}

/// Axis-aligned rational box.
#[derive(Clone, Debug)]
pub struct ExactBox {
    pub lo: Vec<Rational>,
    pub hi: Vec<Rational>,
}

impl ExactBox {
    pub fn hull_of(points: &[Vec<Rational>]) -> ExactBox {
        let d = points[0].len();
        let mut lo = points[0].clone();
        let mut hi = points[0].clone();
        for p in points {
            for i in 0..d {
                if p[i] < lo[i] {
                    lo[i] = p[i].clone();
                }
                if p[i] > hi[i] {
                    hi[i] = p[i].clone();
                }
            }
        }
        ExactBox { lo, hi }
    }

    pub fn inflate(&mut self, margin: &Rational) {
        for i in 0..self.lo.len() {
            self.lo[i] -= margin;
            self.hi[i] += margin;
        }
    }

    pub fn disjoint(&self, other: &ExactBox) -> bool {
        for i in 0..self.lo.len() {
            if self.hi[i] < other.lo[i] || other.hi[i] < self.lo[i] {
                return true;
            }
        }
        false
    }

    pub fn contains(&self, p: &[Rational]) -> bool {
        (0..p.len()).all(|i| p[i] >= self.lo[i] && p[i] <= self.hi[i])
    }

    pub fn to_hpoly(&self) -> HPoly {
        let d = self.lo.len();
        let mut ineqs = Vec::new();
        for i in 0..d {
            let mut a = vec![Rational::zero(); d];
            a[i] = rat(1);
            ineqs.push((a.clone(), self.hi[i].clone()));
            let mut a2 = vec![Rational::zero(); d];
            a2[i] = rat(-1);
            ineqs.push((a2, -self.lo[i].clone()));
        }
        HPoly { eqs: Vec::new(), ineqs }
    }
}

/// Inner polyhedra of one facet site (three nested rescalings of f̌) and
/// the B_f interval data.
#[derive(Clone, Debug)]
pub struct FacetInner {
    pub site: usize,
    pub rho: VPoly,
    pub rho2: VPoly,
    pub rho1: VPoly,
    pub b_half: Rational,
    pub b_dir: Vec<Rational>,
}

/// Inner intervals of one edge site in the exact t-coordinate, plus the
/// B_d polygon as fibre offsets in L_d^⊥.
#[derive(Clone, Debug)]
pub struct EdgeInner {
    pub site: usize,
    pub rho: (Rational, Option<Rational>),
    pub rho2: (Rational, Option<Rational>),
    pub rho1: (Rational, Option<Rational>),
    pub b_poly: Vec<Vec<Rational>>,
}

#[derive(Clone, Debug)]
pub struct VertexNbhd {
    pub site: usize,
    pub b_box: ExactBox,
}

/// The exact neighborhood and inner-polyhedron system at scale t.
#[derive(Clone, Debug)]
pub struct NeighborhoodSystem {
    pub t: Rational,
    pub facets: Vec<FacetInner>,
    pub edges: Vec<EdgeInner>,
    pub vertices: Vec<VertexNbhd>,
}

#[derive(Clone, Debug)]
pub struct ExactCheck {
    pub name: String,
    pub pass: bool,
}

/// Rescaling factors 1 − σt of the three nested inner polyhedra. Edges of
/// Ξ (surface case) use deeper insets than top-dimensional cells so that
/// the fibre tubes of different edges clear each other at shared vertices.
pub fn scale_factors(top_cell: bool, n: usize, t: &Rational) -> (Rational, Rational, Rational) {
    let (a, b, c) = if n == 2 && top_cell {
        (rat_frac(1, 4), rat_frac(3, 10), rat_frac(9, 25))
    } else if n == 2 {
        (rat(1), rat_frac(5, 4), rat_frac(3, 2))
    } else {
        (rat_frac(1, 2), rat_frac(13, 20), rat_frac(4, 5))
    };
    (rat(1) - a * t, rat(1) - b * t, rat(1) - c * t)
}

fn cross_exact(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    vec![
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

/// The exact ℓ functional of an edge site (dual to m̂, vanishing on L_d^⊥).
fn edge_ell_exact(scene: &Scene, ei: usize) -> Vec<Rational> {
    let e = &scene.edges[ei];
    let tri = &scene.complex.subdivision.faces[e.face];
    let b0 = tri.lattice[0].to_rational();
    let d1 = sub(&tri.lattice[1].to_rational(), &b0);
    let d2 = sub(&tri.lattice[2].to_rational(), &b0);
    let ell = cross_exact(&d1, &d2);
    let s = dot(&e.m_dir_exact, &ell);
    exact::scale(&ell, &(rat(1) / s))
}

/// Exact t-coordinate of a point relative to an edge site.
pub fn edge_t_exact(scene: &Scene, ei: usize, x: &[Rational]) -> Rational {
    let e = &scene.edges[ei];
    let ell = edge_ell_exact(scene, ei);
    dot(&sub(x, &e.anchor_exact), &ell)
}

fn l1(v: &[Rational]) -> Rational {
    let mut s = Rational::zero();
    for c in v {
        s += c.abs();
    }
    s
}

/// Exact fibre direction of the cone Γ_{d,f} in L_d^⊥.
pub fn fibre_dir_exact(scene: &Scene, ei: usize, fcell: usize) -> Vec<Rational> {
    let e = &scene.edges[ei];
    let fc = &scene.complex.cells[fcell];
    let a = super::scene::cell_anchor_exact(fc);
    let rel = sub(&a, &e.anchor_exact);
    let ell = edge_ell_exact(scene, ei);
    let tc = dot(&rel, &ell);
    let mut v = rel;
    for i in 0..v.len() {
        v[i] -= &tc * &e.m_dir_exact[i];
    }
    v
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum PLevel {
    R,
    R2,
    R1,
}

/// The scalar p_{d,f}: the fibre coordinate at which the plane through ď
/// spanned by L_d^⊥ meets the corresponding face of the inner polyhedron of
/// the facet. Exact; independent of the base point by parallelism.
pub fn p_scalar_exact(
    scene: &Scene,
    ei: usize,
    fcell: usize,
    t: &Rational,
    level: PLevel,
) -> Result<Rational, LiftError> {
    let e = &scene.edges[ei];
    let (s_r, s_r2, s_r1) = scale_factors(true, scene.n, t);
    let s = match level {
        PLevel::R => s_r,
        PLevel::R2 => s_r2,
        PLevel::R1 => s_r1,
    };
    let (_, fi) = scene.site_of_cell[&fcell];
    let f = &scene.facets[fi];
    let anchor = &f.base_anchor_exact;
    // the image of the line of ď under the rescaling of f̌
    let dcell = &scene.complex.cells[e.cell];
    let line_pts: Vec<Vec<Rational>> = dcell
        .vertices
        .iter()
        .map(|v| exact::add(anchor, &exact::scale(&sub(v, anchor), &s)))
        .collect();
    let line_dir: Vec<Rational> = if line_pts.len() == 2 {
        sub(&line_pts[1], &line_pts[0])
    } else {
        exact::ratvec_from_ints(&dcell.rays[0])
    };
    // intersect with the fibre plane {t-coordinate = 0} through b_ď
    let ell = edge_ell_exact(scene, ei);
    let t0 = dot(&sub(&line_pts[0], &e.anchor_exact), &ell);
    let tdir = dot(&line_dir, &ell);
    if tdir.is_zero() {
        return Err(LiftError::SearchFailed(String::from(
            "scaled edge line parallel to the fibre plane",
        )));
    }
    let alpha = -t0 / tdir;
    let mut hit = line_pts[0].clone();
    for i in 0..hit.len() {
        hit[i] += &alpha * &line_dir[i];
    }
    let offset = sub(&hit, &e.anchor_exact);
    let dir = fibre_dir_exact(scene, ei, fcell);
    let c = project_scalar(&offset, &dir);
    if !c.is_positive() {
        return Err(LiftError::SearchFailed(String::from(
            "inner polyhedron does not face its cone",
        )));
    }
    Ok(c)
}

fn project_scalar(offset: &[Rational], dir: &[Rational]) -> Rational {
    let mut best = Rational::zero();
    let mut bestabs = Rational::zero();
    for i in 0..dir.len() {
        let a = dir[i].abs();
        if a > bestabs {
            bestabs = a;
            best = &offset[i] / &dir[i];
        }
    }
    best
}

/// Integer generator u_j of a vertex frame (u_0 included).
pub fn frame_generator_exact(v: &super::scene::VertexSite, j: usize) -> Vec<Rational> {
    if j == 0 {
        exact::ratvec_from_ints(&v.frame.u0)
    } else {
        exact::ratvec_from_ints(&v.frame.u[j - 1])
    }
}

impl NeighborhoodSystem {
    pub fn build(scene: &Scene, t: &Rational) -> Result<NeighborhoodSystem, LiftError> {
        let (s_r, s_r2, s_r1) = scale_factors(true, scene.n, t);
        if !s_r1.is_positive() {
            return Err(LiftError::SearchFailed(String::from("t too large: rho' empty")));
        }
        let mut facets = Vec::new();
        for (fi, f) in scene.facets.iter().enumerate() {
            let cell = &scene.complex.cells[f.cell];
            let v = VPoly::from_cell(cell);
            let anchor = &f.base_anchor_exact;
            let seg = &scene.complex.subdivision.faces[f.face];
            let b_dir = sub(&seg.lattice[1].to_rational(), &seg.lattice[0].to_rational());
            facets.push(FacetInner {
                site: fi,
                rho: v.scaled_about(anchor, &s_r),
                rho2: v.scaled_about(anchor, &s_r2),
                rho1: v.scaled_about(anchor, &s_r1),
                b_half: rat_frac(1, 32) * t,
                b_dir,
            });
        }
        let (s_r, s_r2, s_r1) = scale_factors(false, scene.n, t);
        let mut edges = Vec::new();
        if scene.n == 2 {
            for (ei, e) in scene.edges.iter().enumerate() {
                let cell = &scene.complex.cells[e.cell];
                let scale_interval = |s: &Rational| -> (Rational, Option<Rational>) {
                    let mut ts: Vec<Rational> = cell
                        .vertices
                        .iter()
                        .map(|v| edge_t_exact(scene, ei, v) * s)
                        .collect();
                    ts.sort();
                    if cell.rays.is_empty() {
                        (ts[0].clone(), Some(ts[1].clone()))
                    } else {
                        (ts[0].clone(), None)
                    }
                };
                let b_poly = edge_bd_polygon(scene, ei, t)?;
                edges.push(EdgeInner {
                    site: ei,
                    rho: scale_interval(&s_r),
                    rho2: scale_interval(&s_r2),
                    rho1: scale_interval(&s_r1),
                    b_poly,
                });
            }
        }
        let mut vertices = Vec::new();
        for (vi, v) in scene.vertices.iter().enumerate() {
            // Y'_e skeleton: the vertex plus the inner trim points of its
            // incident cells (nearest ends and corners of the ρ' level).
            let mut pts = vec![v.pos_exact.clone()];
            for c in &v.cones {
                let cell = &scene.complex.cells[c.cell];
                if cell.dim == scene.n {
                    let (_, fi) = scene.site_of_cell[&c.cell];
                    // nearest corner of the ρ' polygon (the image of ě)
                    let corner = nearest_point(&facets[fi].rho1.vertices, &v.pos_exact);
                    pts.push(corner);
                } else if cell.dim == 1 && scene.n == 2 {
                    let (_, ei) = scene.site_of_cell[&c.cell];
                    let e = &scene.edges[ei];
                    let te = edge_t_exact(scene, ei, &v.pos_exact);
                    let inner = &edges[ei];
                    let tv = nearest_interval_end(&inner.rho1, &te);
                    let mut p = e.anchor_exact.clone();
                    for i in 0..p.len() {
                        p[i] += &tv * &e.m_dir_exact[i];
                    }
                    pts.push(p);
                }
            }
            let mut b_box = ExactBox::hull_of(&pts);
            b_box.inflate(&(rat_frac(3, 10) * t));
            vertices.push(VertexNbhd { site: vi, b_box });
        }
        Ok(NeighborhoodSystem { t: t.clone(), facets, edges, vertices })
    }
}

fn nearest_point(pts: &[Vec<Rational>], to: &[Rational]) -> Vec<Rational> {
    let mut best = pts[0].clone();
    let mut bestd = l1(&sub(&best, to));
    for p in &pts[1..] {
        let d = l1(&sub(p, to));
        if d < bestd {
            bestd = d;
            best = p.clone();
        }
    }
    best
}

fn nearest_interval_end(iv: &(Rational, Option<Rational>), to: &Rational) -> Rational {
    match &iv.1 {
        Some(hi) => {
            if (iv.0.clone() - to).abs() <= (hi - to).abs() {
                iv.0.clone()
            } else {
                hi.clone()
            }
        }
        None => iv.0.clone(),
    }
}

/// B_d: convex polygon of fibre offsets containing the trimmed tripod with
/// a margin proportional to t.
fn edge_bd_polygon(
    scene: &Scene,
    ei: usize,
    t: &Rational,
) -> Result<Vec<Vec<Rational>>, LiftError> {
    let e = &scene.edges[ei];
    let margin = rat_frac(1, 16) * t;
    let mut pts: Vec<Vec<Rational>> = Vec::new();
    for &(fcell, _) in &e.facet_j {
        let p1 = p_scalar_exact(scene, ei, fcell, t, PLevel::R1)?;
        let dir = fibre_dir_exact(scene, ei, fcell);
        let unit = rat(1) / l1(&dir);
        let reach = &p1 + &margin * &unit;
        // lateral spread: the B_f interval of this facet with a margin, so
        // that B_f × [0, p'] fits inside (condition (5))
        let (_, fi) = scene.site_of_cell[&fcell];
        let f = &scene.facets[fi];
        let seg = &scene.complex.subdivision.faces[f.face];
        let b_dir = sub(&seg.lattice[1].to_rational(), &seg.lattice[0].to_rational());
        let lat = exact::scale(&b_dir, &(rat_frac(5, 4) * rat_frac(1, 32) * t / l1(&b_dir)));
        for sign in [rat(1), rat(-1)] {
            let off = exact::scale(&lat, &sign);
            pts.push(exact::add(&exact::scale(&dir, &reach), &off));
            pts.push(exact::add(&exact::scale(&dir, &(-(&margin * &unit))), &off));
        }
    }
    Ok(exact::extreme_points(&pts))
}

/// Exact cone-coordinate radii (r, r″, r′) of the dimension-n cone of a
/// facet at a vertex (the corners of the scaled polygons nearest ě).
pub fn vertex_facet_radii_exact(
    scene: &Scene,
    vi: usize,
    fcell: usize,
    nbhd: &NeighborhoodSystem,
) -> Result<[Vec<Rational>; 3], LiftError> {
    let v = &scene.vertices[vi];
    let (_, fi) = scene.site_of_cell[&fcell];
    let inner = &nbhd.facets[fi];
    let cone = v
        .cones
        .iter()
        .find(|cr| cr.cell == fcell)
        .ok_or(LiftError::ParamsNotAccepted)?;
    let cols: Vec<Vec<Rational>> =
        cone.j_set.iter().map(|&j| frame_generator_exact(v, j)).collect();
    let mut out: [Vec<Rational>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    for (idx, poly) in [&inner.rho, &inner.rho2, &inner.rho1].into_iter().enumerate() {
        let corner = nearest_point(&poly.vertices, &v.pos_exact);
        let rel = sub(&corner, &v.pos_exact);
        let coords = solve_cone_coords(&cols, &rel).ok_or(LiftError::ParamsNotAccepted)?;
        if coords.iter().any(|c| !c.is_positive()) {
            return Err(LiftError::SearchFailed(String::from(
                "inner polyhedron corner outside its cone",
            )));
        }
        out[idx] = coords;
    }
    Ok(out)
}

fn solve_cone_coords(cols: &[Vec<Rational>], rel: &[Rational]) -> Option<Vec<Rational>> {
    let d = rel.len();
    let k = cols.len();
    let rows: Vec<Vec<Rational>> =
        (0..d).map(|r| (0..k).map(|c| cols[c][r].clone()).collect()).collect();
    let mut sel_rows: Vec<Vec<Rational>> = Vec::new();
    let mut sel_rhs: Vec<Rational> = Vec::new();
    for (row, b) in rows.iter().zip(rel) {
        let mut cand = sel_rows.clone();
        cand.push(row.clone());
        if exact::rank(&cand) > sel_rows.len() {
            sel_rows.push(row.clone());
            sel_rhs.push(b.clone());
        }
        if sel_rows.len() == k {
            break;
        }
    }
    let sol = exact::solve_linear(&sel_rows, &sel_rhs)?;
    for (row, b) in rows.iter().zip(rel) {
        if &dot(row, &sol) != b {
            return None;
        }
    }
    Some(sol)
}

/// Radii (r, r″, r′) of the 1-dimensional cone of an edge at a vertex, as
/// scalars in the primitive generator coordinate.
pub fn vertex_edge_radii_exact(
    scene: &Scene,
    vi: usize,
    ei: usize,
    nbhd: &NeighborhoodSystem,
) -> Result<(Rational, Rational, Rational), LiftError> {
    let v = &scene.vertices[vi];
    let site = &scene.edges[ei];
    let einner = &nbhd.edges[ei];
    let te = edge_t_exact(scene, ei, &v.pos_exact);
    let cone = v
        .cones
        .iter()
        .find(|c| c.cell == site.cell)
        .ok_or(LiftError::ParamsNotAccepted)?;
    let u_d = frame_generator_exact(v, cone.j_set[0]);
    let sgn = dot(&u_d, &site.m_dir_exact);
    let sigma = if sgn.is_positive() { rat(1) } else { rat(-1) };
    let pick = |iv: &(Rational, Option<Rational>)| -> Rational {
        let lo = (&iv.0 - &te) * &sigma;
        match &iv.1 {
            Some(hi) => {
                let hv = (hi - &te) * &sigma;
                if lo.is_positive() && (!hv.is_positive() || lo < hv) {
                    lo
                } else {
                    hv
                }
            }
            None => lo,
        }
    };
    let r = pick(&einner.rho);
    let r2 = pick(&einner.rho2);
    let r1 = pick(&einner.rho1);
    if !r.is_positive() || !(r < r2 && r2 < r1) {
        return Err(LiftError::SearchFailed(format!(
            "edge radii not ordered at vertex {vi}"
        )));
    }
    Ok((r, r2, r1))
}

/// V_{e,f} = ∩ D_{jk} mapped to global coordinates through the frame.
pub fn v_cone_hpoly(v: &super::scene::VertexSite, j_set: &[usize], n: usize) -> HPoly {
    let mut ineqs = Vec::new();
    let b_cols: Vec<Vec<Rational>> =
        v.frame.b.iter().map(|c| exact::ratvec_from_ints(c)).collect();
    let pos = &v.pos_exact;
    let d = pos.len();
    for &j in j_set {
        for k in 0..=n + 1 {
            if j_set.contains(&k) {
                continue;
            }
            let mut a_loc = vec![Rational::zero(); n + 1];
            if k == 0 {
                a_loc[j - 1] = rat(-1);
            } else if j == 0 {
                a_loc[k - 1] = rat(1);
            } else {
                a_loc[j - 1] = rat(-1);
                a_loc[k - 1] = rat(1);
            }
            let mut a = vec![Rational::zero(); d];
            for (c, col) in a_loc.iter().zip(&b_cols) {
                for i in 0..d {
                    a[i] += c * &col[i];
                }
            }
            let bnd = dot(&a, pos);
            ineqs.push((a, bnd));
        }
    }
    HPoly { eqs: Vec::new(), ineqs }
}

/// Runs the exact neighborhood conditions. Conditions (5)-(6) are skipped
/// (and reported as skipped) when `relax56` is set.
pub fn neighborhood_conditions(
    scene: &Scene,
    nbhd: &NeighborhoodSystem,
    relax56: bool,
) -> Vec<ExactCheck> {
    let d = scene.n + 1;
    let mut out = Vec::new();
    // strict nesting of inner polyhedra
    {
        let mut pass = true;
        for f in &nbhd.facets {
            let h2 = hrep(&f.rho2);
            let h = hrep(&f.rho);
            pass &= f.rho1.vertices.iter().all(|p| h2.contains(p));
            pass &= f.rho2.vertices.iter().all(|p| h.contains(p));
        }
        for e in &nbhd.edges {
            let inside = |inner: &(Rational, Option<Rational>),
                          outer: &(Rational, Option<Rational>)| {
                inner.0 > outer.0
                    && match (&inner.1, &outer.1) {
                        (Some(a), Some(b)) => a < b,
                        (None, None) | (Some(_), None) => true,
                        (None, Some(_)) => false,
                    }
            };
            pass &= inside(&e.rho1, &e.rho2) && inside(&e.rho2, &e.rho);
        }
        out.push(ExactCheck { name: String::from("inner-nesting"), pass });
    }
    // (1)
    {
        let mut pass = true;
        for i in 0..nbhd.vertices.len() {
            for j in i + 1..nbhd.vertices.len() {
                pass &= nbhd.vertices[i].b_box.disjoint(&nbhd.vertices[j].b_box);
            }
        }
        out.push(ExactCheck { name: String::from("nbhd-1-vertex-boxes-disjoint"), pass });
    }
    let facet_prism: Vec<HPoly> = nbhd
        .facets
        .iter()
        .map(|f| hrep(&f.rho.minkowski_segment(&f.b_dir, &(f.b_half.clone() / l1(&f.b_dir)))))
        .collect();
    let edge_prism: Vec<HPoly> = nbhd
        .edges
        .iter()
        .map(|e| {
            let site = &scene.edges[e.site];
            let mut pts = Vec::new();
            let mut ends: Vec<Rational> = vec![e.rho.0.clone()];
            match &e.rho.1 {
                Some(hi) => ends.push(hi.clone()),
                None => {}
            }
            for tv in &ends {
                let mut base = site.anchor_exact.clone();
                for i in 0..base.len() {
                    base[i] += tv * &site.m_dir_exact[i];
                }
                for b in &e.b_poly {
                    pts.push(exact::add(&base, b));
                }
            }
            let rays = if e.rho.1.is_none() {
                vec![site.m_dir_exact.clone()]
            } else {
                Vec::new()
            };
            hrep(&VPoly { vertices: pts, rays })
        })
        .collect();
    // (2)
    {
        let mut pass = true;
        for i in 0..facet_prism.len() {
            for j in i + 1..facet_prism.len() {
                pass &= !facet_prism[i].intersects(&facet_prism[j], d);
            }
        }
        for i in 0..edge_prism.len() {
            for j in i + 1..edge_prism.len() {
                pass &= !edge_prism[i].intersects(&edge_prism[j], d);
            }
        }
        out.push(ExactCheck { name: String::from("nbhd-2-tube-disjoint"), pass });
    }
    // (3)
    {
        let mut pass = true;
        for (vi, vb) in nbhd.vertices.iter().enumerate() {
            let vbox = vb.b_box.to_hpoly();
            let vface = scene.vertices[vi].face;
            for (fi, fp) in facet_prism.iter().enumerate() {
                let fface = scene.facets[nbhd.facets[fi].site].face;
                let incident = scene.complex.subdivision.face_leq(fface, vface);
                if vbox.intersects(fp, d) != incident {
                    pass = false;
                }
            }
            for (ei, ep) in edge_prism.iter().enumerate() {
                let eface = scene.edges[nbhd.edges[ei].site].face;
                let incident = scene.complex.subdivision.face_leq(eface, vface);
                if vbox.intersects(ep, d) != incident {
                    pass = false;
                }
            }
        }
        out.push(ExactCheck { name: String::from("nbhd-3-vertex-incidence"), pass });
    }
    // (4)
    if scene.n == 2 {
        let mut pass = true;
        for (ei, ep) in edge_prism.iter().enumerate() {
            let eface = scene.edges[nbhd.edges[ei].site].face;
            for (fi, fp) in facet_prism.iter().enumerate() {
                let fface = scene.facets[nbhd.facets[fi].site].face;
                let incident = scene.complex.subdivision.face_leq(fface, eface);
                if ep.intersects(fp, d) != incident {
                    pass = false;
                }
            }
        }
        out.push(ExactCheck { name: String::from("nbhd-4-edge-incidence"), pass });
    }
    if !relax56 {
        if scene.n == 2 {
            // (5) [p, p'] ⊕ B_f inside B_d, all in the fibre plane
            let mut pass5 = true;
            for einner in &nbhd.edges {
                let bd = hrep(&VPoly { vertices: einner.b_poly.clone(), rays: Vec::new() });
                let site = &scene.edges[einner.site];
                for &(fcell, _) in &site.facet_j {
                    let pr = p_scalar_exact(scene, einner.site, fcell, &nbhd.t, PLevel::R);
                    let pr1 = p_scalar_exact(scene, einner.site, fcell, &nbhd.t, PLevel::R1);
                    let (Ok(p), Ok(p1)) = (pr, pr1) else {
                        pass5 = false;
                        continue;
                    };
                    let dir = fibre_dir_exact(scene, einner.site, fcell);
                    let (_, fi) = scene.site_of_cell[&fcell];
                    let f = &nbhd.facets[fi];
                    let bf = exact::scale(&f.b_dir, &(f.b_half.clone() / l1(&f.b_dir)));
                    for tv in [&p, &p1] {
                        let base = exact::scale(&dir, tv);
                        for pt in [exact::add(&base, &bf), sub(&base, &bf)] {
                            if !bd.contains(&pt) {
                                pass5 = false;
                            }
                        }
                    }
                }
            }
            out.push(ExactCheck { name: String::from("nbhd-5-pf-in-bd"), pass: pass5 });
        }
        // (6) the near collar of each incident cell sits in the vertex box
        let mut pass6 = true;
        for (vi, vb) in nbhd.vertices.iter().enumerate() {
            let v = &scene.vertices[vi];
            for cone in &v.cones {
                let cell = &scene.complex.cells[cone.cell];
                if scene.n == 2 && cell.dim == 1 {
                    let (_, ei) = scene.site_of_cell[&cone.cell];
                    let einner = &nbhd.edges[ei];
                    let site = &scene.edges[ei];
                    let te = edge_t_exact(scene, ei, &v.pos_exact);
                    for iv in [&einner.rho, &einner.rho1] {
                        let tv = nearest_interval_end(iv, &te);
                        let mut base = site.anchor_exact.clone();
                        for i in 0..base.len() {
                            base[i] += &tv * &site.m_dir_exact[i];
                        }
                        for b in &einner.b_poly {
                            if !vb.b_box.contains(&exact::add(&base, b)) {
                                pass6 = false;
                            }
                        }
                    }
                } else if scene.n == 1 && cell.dim == 1 {
                    let (_, fi) = scene.site_of_cell[&cone.cell];
                    let finner = &nbhd.facets[fi];
                    let bf = exact::scale(
                        &finner.b_dir,
                        &(finner.b_half.clone() / l1(&finner.b_dir)),
                    );
                    for poly in [&finner.rho, &finner.rho1] {
                        let c = nearest_point(&poly.vertices, &v.pos_exact);
                        for pt in [exact::add(&c, &bf), sub(&c, &bf)] {
                            if !vb.b_box.contains(&pt) {
                                pass6 = false;
                            }
                        }
                    }
                }
            }
        }
        out.push(ExactCheck { name: String::from("nbhd-6-collar-in-box"), pass: pass6 });
    }
    // (8)
    {
        let mut pass = true;
        for (vi, _) in nbhd.vertices.iter().enumerate() {
            let v = &scene.vertices[vi];
            for cone in &v.cones {
                let cell = &scene.complex.cells[cone.cell];
                if cell.dim != scene.n {
                    continue;
                }
                let (_, fi) = scene.site_of_cell[&cone.cell];
                let finner = &nbhd.facets[fi];
                let Ok(radii) = vertex_facet_radii_exact(scene, vi, cone.cell, nbhd) else {
                    pass = false;
                    continue;
                };
                let gens: Vec<Vec<Rational>> =
                    cone.j_set.iter().map(|&j| frame_generator_exact(v, j)).collect();
                let mut apex = v.pos_exact.clone();
                for (c, g) in radii[0].iter().zip(&gens) {
                    for i in 0..apex.len() {
                        apex[i] += c * &g[i];
                    }
                }
                let q = VPoly { vertices: vec![apex], rays: gens.clone() };
                let qb =
                    q.minkowski_segment(&finner.b_dir, &(finner.b_half.clone() / l1(&finner.b_dir)));
                if !hrep(&qb).subset_of(&v_cone_hpoly(v, &cone.j_set, scene.n), d) {
                    pass = false;
                }
            }
        }
        out.push(ExactCheck { name: String::from("nbhd-8-q-in-vcone"), pass });
    }
    // (7)
    if scene.n == 2 {
        let mut pass = true;
        for (vi, _) in nbhd.vertices.iter().enumerate() {
            let v = &scene.vertices[vi];
            for cone in &v.cones {
                if scene.complex.cells[cone.cell].dim != 1 {
                    continue;
                }
                if !kd_gamma_condition(scene, nbhd, vi, cone.cell) {
                    pass = false;
                }
            }
        }
        out.push(ExactCheck { name: String::from("nbhd-7-kd-gamma"), pass });
    }
    out
}

/// Condition (kd_gamma): the B_d slab over Q_{r_{e,d}} meets the truncated
/// tangent hyperplane exactly in the product of Q with the truncated
/// tangent line. The trimmed sets remove closed wedges, so the boundary at
/// fibre depth p' is handled with strict inequalities.
fn kd_gamma_condition(
    scene: &Scene,
    nbhd: &NeighborhoodSystem,
    vi: usize,
    dcell: usize,
) -> bool {
    let v = &scene.vertices[vi];
    let d = scene.n + 1;
    let (_, ei) = scene.site_of_cell[&dcell];
    let einner = &nbhd.edges[ei];
    let site = &scene.edges[ei];
    let Ok((r, _r2, _r1)) = vertex_edge_radii_exact(scene, vi, ei, nbhd) else {
        return false;
    };
    let cone_d = v.cones.iter().find(|c| c.cell == dcell).unwrap();
    let jd = cone_d.j_set[0];
    let u_d = frame_generator_exact(v, jd);

    // slab constraints: edge coordinate past r (in the u_d orientation) and
    // fibre offset within B_d.
    let ell = {
        // exact ℓ of the edge, oriented so that <u_d, ℓ> = 1
        let tri = &scene.complex.subdivision.faces[site.face];
        let b0 = tri.lattice[0].to_rational();
        let d1 = sub(&tri.lattice[1].to_rational(), &b0);
        let d2 = sub(&tri.lattice[2].to_rational(), &b0);
        let raw = cross_exact(&d1, &d2);
        let sden = dot(&u_d, &raw);
        exact::scale(&raw, &(rat(1) / sden))
    };
    let mut slab: Vec<Constraint> = Vec::new();
    // c_d(x) = <x − ě, ℓ> ≥ r
    {
        let neg: Vec<Rational> = ell.iter().map(|c| -c.clone()).collect();
        let bnd = -(&r + &dot(&ell, &v.pos_exact));
        slab.push(Constraint::new(neg, Rel::Le, bnd));
    }
    // fibre(x) = x − ě − c_d(x)·u_d must satisfy the B_d inequalities
    let bd_h = hrep(&VPoly { vertices: einner.b_poly.clone(), rays: Vec::new() });
    for (alpha, beta) in bd_h.ineqs.iter().chain(bd_h.eqs.iter()) {
        let is_eq = bd_h.eqs.iter().any(|(a, b)| a == alpha && b == beta);
        // alpha·(x − ě − <x − ě, ℓ> u_d) ≤ beta
        let au = dot(alpha, &u_d);
        let mut a = alpha.clone();
        for i in 0..d {
            a[i] -= &au * &ell[i];
        }
        let bnd = beta + dot(&a, &v.pos_exact);
        if is_eq {
            slab.push(Constraint::new(a, Rel::Eq, bnd));
        } else {
            slab.push(Constraint::new(a, Rel::Le, bnd));
        }
    }

    let mut ok = true;
    for cone in &v.cones {
        if scene.complex.cells[cone.cell].dim != scene.n {
            continue;
        }
        let gens: Vec<Vec<Rational>> =
            cone.j_set.iter().map(|&j| frame_generator_exact(v, j)).collect();
        let sigma = hrep(&VPoly { vertices: vec![v.pos_exact.clone()], rays: gens.clone() });
        if !cone.j_set.contains(&jd) {
            let mut cons = slab.clone();
            cons.extend(sigma.constraints());
            if feasible(&cons, d) {
                ok = false;
            }
            continue;
        }
        // in-plane functionals on the σ plane: cone coordinates (φ_a, φ_b)
        // and strip coordinates (φ_t along u_d, φ_s along the fibre dir)
        let Ok(fradii) = vertex_facet_radii_exact(scene, vi, cone.cell, nbhd) else {
            return false;
        };
        let fdir = fibre_dir_exact(scene, ei, cone.cell);
        let Ok(p1) = p_scalar_exact(scene, ei, cone.cell, &nbhd.t, PLevel::R1) else {
            return false;
        };
        let normal = cross_exact(&gens[0], &gens[1]);
        let functional = |v1: &[Rational], v2: &[Rational], pick: usize| -> Vec<Rational> {
            // φ with φ(v1) = δ_{pick,0}, φ(v2) = δ_{pick,1}, φ(normal) = 0
            let rows = vec![v1.to_vec(), v2.to_vec(), normal.clone()];
            let mut rhs = vec![Rational::zero(); 3];
            rhs[pick] = rat(1);
            exact::solve_linear(&rows, &rhs).expect("independent plane data")
        };
        let phi_a = functional(&gens[0], &gens[1], 0);
        let phi_b = functional(&gens[0], &gens[1], 1);
        let phi_t = functional(&u_d, &fdir, 0);
        let phi_s = functional(&u_d, &fdir, 1);
        let plane_eq = Constraint::new(normal.clone(), Rel::Eq, dot(&normal, &v.pos_exact));
        let aff = |phi: &[Rational]| dot(phi, &v.pos_exact);
        let ge = |phi: &[Rational], c: Rational| {
            let neg: Vec<Rational> = phi.iter().map(|x| -x.clone()).collect();
            Constraint::new(neg, Rel::Le, -(c + aff(phi)))
        };
        let ge_strict = |phi: &[Rational], c: Rational| {
            let neg: Vec<Rational> = phi.iter().map(|x| -x.clone()).collect();
            Constraint::new(neg, Rel::Lt, -(c + aff(phi)))
        };
        let lt = |phi: &[Rational], c: Rational| {
            Constraint::new(phi.to_vec(), Rel::Lt, c + aff(phi))
        };
        // strip: plane, φ_t ≥ r, 0 ≤ φ_s < p1
        let strip = vec![
            plane_eq.clone(),
            ge(&phi_t, r.clone()),
            ge(&phi_s, Rational::zero()),
            lt(&phi_s, p1.clone()),
        ];
        // wedge (closed): φ_a ≥ r'_a, φ_b ≥ r'_b
        let (ra, rb) = (fradii[2][0].clone(), fradii[2][1].clone());
        let wedge = vec![plane_eq.clone(), ge(&phi_a, ra.clone()), ge(&phi_b, rb.clone())];
        // (b) strip ∩ wedge = ∅
        {
            let mut cons = strip.clone();
            cons.extend(wedge.clone());
            if feasible(&cons, d) {
                ok = false;
            }
        }
        // (a) strip ⊆ σ: violating either cone coordinate is infeasible
        for phi in [&phi_a, &phi_b] {
            let mut cons = strip.clone();
            cons.push(lt(phi, Rational::zero()));
            if feasible(&cons, d) {
                ok = false;
            }
        }
        // (c) strip ⊆ slab
        for c in &slab {
            let mut cons = strip.clone();
            match c.rel {
                Rel::Le => {
                    let neg: Vec<Rational> = c.coeffs.iter().map(|x| -x.clone()).collect();
                    cons.push(Constraint::new(neg, Rel::Lt, -c.rhs.clone()));
                }
                Rel::Eq => continue, // strip lies in the σ plane ∩ slab plane checks below
                Rel::Lt => continue,
            }
            if feasible(&cons, d) {
                ok = false;
            }
        }
        // (d) (slab ∩ σ) ∖ wedge ⊆ strip: each way of leaving the strip,
        // combined with each strict complement piece of the wedge, is
        // infeasible inside slab ∩ σ.
        let sigma_cons = {
            let mut cs = vec![plane_eq.clone()];
            cs.push(ge(&phi_a, Rational::zero()));
            cs.push(ge(&phi_b, Rational::zero()));
            cs
        };
        let strip_violations = vec![
            ge_strict(&phi_s, p1.clone()).clone(),
            lt(&phi_s, Rational::zero()),
            lt(&phi_t, r.clone()),
        ];
        // note: φ_s ≥ p1 (closed) is also a violation of the half-open strip
        let closed_ge_p1 = {
            let neg: Vec<Rational> = phi_s.iter().map(|x| -x.clone()).collect();
            Constraint::new(neg, Rel::Le, -(p1.clone() + aff(&phi_s)))
        };
        let mut violations = strip_violations;
        violations.push(closed_ge_p1);
        let wedge_out = vec![lt(&phi_a, ra.clone()), lt(&phi_b, rb.clone())];
        for viol in &violations {
            for wout in &wedge_out {
                let mut cons = slab.clone();
                cons.extend(sigma_cons.clone());
                cons.push(viol.clone());
                cons.push(wout.clone());
                if feasible(&cons, d) {
                    ok = false;
                }
            }
        }
    }
    ok
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lift::scene::tests::{example_curve_complex, two_vertex_surface_complex};

    #[test]
    fn hrep_of_triangle_and_cone() {
        let tri = VPoly {
            vertices: alloc::vec![
                exact::ratvec_from_ints(&[0, 0]),
                exact::ratvec_from_ints(&[2, 0]),
                exact::ratvec_from_ints(&[0, 2]),
            ],
            rays: Vec::new(),
        };
        let h = hrep(&tri);
        assert_eq!(h.eqs.len(), 0);
        assert_eq!(h.ineqs.len(), 3);
        assert!(h.contains(&exact::ratvec_from_ints(&[1, 0])));
        assert!(!h.contains(&exact::ratvec_from_ints(&[2, 2])));
        let wedge = VPoly {
            vertices: alloc::vec![exact::ratvec_from_ints(&[1, 1])],
            rays: alloc::vec![
                exact::ratvec_from_ints(&[1, 0]),
                exact::ratvec_from_ints(&[0, 1]),
            ],
        };
        let hw = hrep(&wedge);
        assert!(hw.contains(&exact::ratvec_from_ints(&[5, 1])));
        assert!(!hw.contains(&exact::ratvec_from_ints(&[0, 0])));
    }

    #[test]
    fn hrep_flat_segment_in_3d() {
        let seg = VPoly {
            vertices: alloc::vec![
                exact::ratvec_from_ints(&[0, 0, 0]),
                exact::ratvec_from_ints(&[1, 1, 1]),
            ],
            rays: Vec::new(),
        };
        let h = hrep(&seg);
        assert_eq!(h.eqs.len(), 2);
        assert!(h.contains(&alloc::vec![rat_frac(1, 2), rat_frac(1, 2), rat_frac(1, 2)]));
        assert!(!h.contains(&exact::ratvec_from_ints(&[2, 2, 2])));
    }

    #[test]
    fn curve_conditions_pass_at_small_t() {
        let scene = Scene::build(&example_curve_complex()).unwrap();
        let t = rat_frac(1, 10);
        let nbhd = NeighborhoodSystem::build(&scene, &t).unwrap();
        let checks = neighborhood_conditions(&scene, &nbhd, false);
        for c in &checks {
            assert!(c.pass, "exact condition failed: {}", c.name);
        }
    }

    #[test]
    fn surface_conditions_pass_at_small_t() {
        let scene = Scene::build(&two_vertex_surface_complex()).unwrap();
        let t = rat_frac(1, 10);
        let nbhd = NeighborhoodSystem::build(&scene, &t).unwrap();
        let checks = neighborhood_conditions(&scene, &nbhd, false);
        for c in &checks {
            assert!(c.pass, "exact condition failed: {}", c.name);
        }
    }

    #[test]
    fn radii_are_ordered_and_scale_with_t(){
        let scene = Scene::build(&two_vertex_surface_complex()).unwrap();
        for tden in [5i64, 10, 20] {
            let t = rat_frac(1, tden);
            let nbhd = NeighborhoodSystem::build(&scene, &t).unwrap();
            for (vi, v) in scene.vertices.iter().enumerate() {
                for cone in &v.cones {
                    let cell = &scene.complex.cells[cone.cell];
                    if cell.dim == 2 {
                        let radii = vertex_facet_radii_exact(&scene, vi, cone.cell, &nbhd).unwrap();
                        for k in 0..radii[0].len() {
                            assert!(radii[0][k] < radii[1][k] && radii[1][k] < radii[2][k]);
                        }
                    } else {
                        let (_, ei) = scene.site_of_cell[&cone.cell];
                        let (r, r2, r1) = vertex_edge_radii_exact(&scene, vi, ei, &nbhd).unwrap();
                        assert!(r < r2 && r2 < r1);
                    }
                }
            }
        }
    }
}

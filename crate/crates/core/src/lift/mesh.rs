//! Assembly of the sampled smooth lift: deterministic per-model samplers,
//! provenance-carrying mesh points, per-chart triangles for surface charts,
//! and the combinatorial nerve/Euler bookkeeping.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::coamoeba::torus_reduce;
use crate::numerics;
use crate::pants::AmoebaClass;

use super::glue::EdgeFibre;
use super::models::{FacetBand, GluedModels, LiftPoint};
use super::scene::Scene;
use super::trim::Level;
use super::LiftError;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ModelId {
    Vertex(usize),
    Edge(usize),
    Facet(usize),
}

impl ModelId {
    pub fn tag(&self) -> (u8, usize) {
        match self {
            ModelId::Vertex(i) => (0, *i),
            ModelId::Edge(i) => (1, *i),
            ModelId::Facet(i) => (2, *i),
        }
    }
}

/// A mesh sample with its chart provenance and parameters, so that the
/// verification layer can re-evaluate and differentiate through the chart.
#[derive(Clone, Debug)]
pub struct MeshPoint {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub model: ModelId,
    /// Vertex: local amoeba point; edge: (t, x2); facet: (base..., s).
    pub param: Vec<f64>,
    pub sheet: i8,
    pub waist: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct LiftMesh {
    pub n: usize,
    pub t: f64,
    pub lambda: f64,
    pub seed: u64,
    pub bbox: f64,
    pub points: Vec<MeshPoint>,
    /// Per-chart grid triangles (only 2-parameter charts are triangulated).
    pub triangles: Vec<[usize; 3]>,
}

#[derive(Clone, Debug)]
pub struct AssembleOptions {
    pub bbox: f64,
    pub density: usize,
    pub seed: u64,
}

impl Default for AssembleOptions {
    fn default() -> Self {
        AssembleOptions { bbox: 4.0, density: 24, seed: 7 }
    }
}

impl GluedModels {
    /// Re-evaluates a mesh point's chart at given parameters; the basis for
    /// finite-difference tangents on the assembled lift.
    pub fn eval_param(
        &self,
        scene: &Scene,
        model: ModelId,
        param: &[f64],
        sheet: i8,
    ) -> Option<LiftPoint> {
        match model {
            ModelId::Vertex(i) => {
                let vm = &self.vertices[i];
                self.vertex_point(scene, vm, param, sheet, None)
            }
            ModelId::Edge(i) => {
                let (t, x2) = (param[0], param[1..3].to_vec());
                self.edge_eval(scene, i, t, &EdgeFibre::Interior { x2, sheet }).map(|e| e.point)
            }
            ModelId::Facet(i) => {
                let j = param.len() - 1;
                let (base, s) = (param[..j].to_vec(), param[j]);
                self.facet_eval(scene, i, &base, s).map(|e| e.point)
            }
        }
    }
}

/// Assembles the sampled lift from all local models.
pub fn assemble_lift(
    scene: &Scene,
    glued: &mut GluedModels,
    opts: &AssembleOptions,
) -> Result<LiftMesh, LiftError> {
    let gamma_spread = super::glue::fit_facet_gammas(scene, glued);
    if gamma_spread > 1e-6 {
        return Err(LiftError::OverlapMismatch);
    }
    let mut mesh = LiftMesh {
        n: scene.n,
        t: glued.params.t,
        lambda: glued.params.lambda,
        seed: opts.seed,
        bbox: opts.bbox,
        points: Vec::new(),
        triangles: Vec::new(),
    };
    for vi in 0..glued.vertices.len() {
        sample_vertex_model(scene, glued, vi, opts, &mut mesh);
    }
    for ei in 0..glued.edges.len() {
        sample_edge_model(scene, glued, ei, opts, &mut mesh);
    }
    for fi in 0..glued.facets.len() {
        sample_facet_model(scene, glued, fi, opts, &mut mesh);
    }
    if mesh.points.is_empty() {
        return Err(LiftError::ParamsNotAccepted);
    }
    Ok(mesh)
}

fn sample_vertex_model(
    scene: &Scene,
    glued: &GluedModels,
    vi: usize,
    opts: &AssembleOptions,
    mesh: &mut LiftMesh,
) {
    let vm = &glued.vertices[vi];
    let n = scene.n;
    let radius = vm.tp.bounding_radius();
    let g = opts.density;
    if n == 1 {
        // resolve the amoeba junction: a few pixels across the λ width
        let g = (((2.0 * radius) / (0.25 * vm.tp.pants.lambda)).ceil() as usize)
            .clamp(g, 112);
        for sheet in [1i8, -1] {
            let mut index = vec![vec![None; g]; g];
            for iy in 0..g {
                for ix in 0..g {
                    let x = [
                        (ix as f64 + 0.5) / g as f64 * 2.0 * radius - radius,
                        (iy as f64 + 0.5) / g as f64 * 2.0 * radius - radius,
                    ];
                    if !vm.tp.in_h2(&x, Level::R2, Level::R2, 1e-9).unwrap_or(false)
                        || near_boundary(vm, &x)
                    {
                        continue;
                    }
                    if let Some(p) = glued.vertex_point(scene, vm, &x, sheet, None) {
                        index[iy][ix] = Some(mesh.points.len());
                        mesh.points.push(MeshPoint {
                            x: p.x,
                            y: p.y,
                            model: ModelId::Vertex(vi),
                            param: x.to_vec(),
                            sheet,
                            waist: None,
                        });
                    }
                }
            }
            for iy in 0..g - 1 {
                for ix in 0..g - 1 {
                    if let (Some(a), Some(b), Some(c), Some(d)) = (
                        index[iy][ix],
                        index[iy][ix + 1],
                        index[iy + 1][ix],
                        index[iy + 1][ix + 1],
                    ) {
                        mesh.triangles.push([a, b, d]);
                        mesh.triangles.push([a, d, c]);
                    }
                }
            }
        }
        let dirs = 4 * g;
        for k in 0..dirs {
            let ang = (k as f64 + 0.5) / dirs as f64 * 2.0 * core::f64::consts::PI;
            let dir = [ang.cos(), ang.sin()];
            if let Some((xb, kb)) = boundary_along(vm, &dir, radius) {
                if vm.tp.in_h2(&xb, Level::R2, Level::R2, 1e-7).unwrap_or(false) {
                    let p = glued.vertex_waist_point(scene, vm, &xb, kb);
                    mesh.points.push(MeshPoint {
                        x: p.x,
                        y: p.y,
                        model: ModelId::Vertex(vi),
                        param: xb.to_vec(),
                        sheet: 0,
                        waist: Some(kb),
                    });
                }
            }
        }
    } else {
        let g3 = (g / 2).max(8);
        for sheet in [1i8, -1] {
            for iz in 0..g3 {
                for iy in 0..g3 {
                    for ix in 0..g3 {
                        let x = [
                            (ix as f64 + 0.5) / g3 as f64 * 2.0 * radius - radius,
                            (iy as f64 + 0.5) / g3 as f64 * 2.0 * radius - radius,
                            (iz as f64 + 0.5) / g3 as f64 * 2.0 * radius - radius,
                        ];
                        if !vm.tp.in_h2(&x, Level::R2, Level::R2, 1e-9).unwrap_or(false)
                            || near_boundary(vm, &x)
                        {
                            continue;
                        }
                        if let Some(p) = glued.vertex_point(scene, vm, &x, sheet, None) {
                            mesh.points.push(MeshPoint {
                                x: p.x,
                                y: p.y,
                                model: ModelId::Vertex(vi),
                                param: x.to_vec(),
                                sheet,
                                waist: None,
                            });
                        }
                    }
                }
            }
        }
        let nu = 2 * g3;
        let nv = g3;
        for iu in 0..nu {
            for iv in 0..nv {
                let phi = (iu as f64 + 0.5) / nu as f64 * 2.0 * core::f64::consts::PI;
                let th = (iv as f64 + 0.5) / nv as f64 * core::f64::consts::PI;
                let dir = [th.sin() * phi.cos(), th.sin() * phi.sin(), th.cos()];
                if let Some((xb, kb)) = boundary_along(vm, &dir, radius) {
                    if vm.tp.in_h2(&xb, Level::R2, Level::R2, 1e-7).unwrap_or(false) {
                        let p = glued.vertex_waist_point(scene, vm, &xb, kb);
                        mesh.points.push(MeshPoint {
                            x: p.x,
                            y: p.y,
                            model: ModelId::Vertex(vi),
                            param: xb.to_vec(),
                            sheet: 0,
                            waist: Some(kb),
                        });
                    }
                }
            }
        }
    }
}

/// Collar of ∂H where the interior inversion is ill conditioned.
fn near_boundary(vm: &super::models::VertexModel, x: &[f64]) -> bool {
    for k in 0..=vm.tp.n() + 1 {
        let t = vm.tp.amoeba.frame_coords(k, x);
        if t.iter().all(|&c| c >= 0.0) {
            let prod: f64 = t.iter().product();
            if prod > vm.tp.amoeba.bound() * 0.96 {
                return true;
            }
        }
    }
    false
}

/// First boundary crossing of the amoeba along a ray from the origin.
fn boundary_along(
    vm: &super::models::VertexModel,
    dir: &[f64],
    radius: f64,
) -> Option<(Vec<f64>, usize)> {
    let probe = |tau: f64| -> bool {
        let p: Vec<f64> = dir.iter().map(|&d| d * tau).collect();
        vm.tp.amoeba.contains(&p, 1e-9)
    };
    let mut lo = 0.0;
    let mut hi = None;
    let mut step = 0.05 * vm.tp.pants.lambda;
    let mut tau = step;
    while tau < 3.0 * radius {
        if probe(tau) {
            lo = tau;
            step *= 1.7;
            tau += step;
        } else {
            hi = Some(tau);
            break;
        }
    }
    let mut hi = hi?;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if probe(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let xb: Vec<f64> = dir.iter().map(|&d| d * 0.5 * (lo + hi)).collect();
    match vm.tp.amoeba.classify(&xb, 1e-5) {
        AmoebaClass::Boundary(k) => Some((xb, k)),
        _ => None,
    }
}

fn sample_edge_model(
    scene: &Scene,
    glued: &GluedModels,
    ei: usize,
    opts: &AssembleOptions,
    mesh: &mut LiftMesh,
) {
    let em = &glued.edges[ei];
    let g = (opts.density / 2).max(8);
    let t_lo = em.rho.0.max(-2.0 * opts.bbox);
    let t_hi = em.rho.1.min(2.0 * opts.bbox);
    if !(t_hi > t_lo) {
        return;
    }
    let radius = em.tp2.bounding_radius();
    for it in 0..g {
        let t = t_lo + (it as f64 + 0.5) / g as f64 * (t_hi - t_lo);
        if !glued.edge_t_in_domain(em, t) {
            continue;
        }
        for sheet in [1i8, -1] {
            for iy in 0..g {
                for ix in 0..g {
                    let x2 = vec![
                        (ix as f64 + 0.5) / g as f64 * 2.0 * radius - radius,
                        (iy as f64 + 0.5) / g as f64 * 2.0 * radius - radius,
                    ];
                    if !em.tp2.in_h1(&x2, Level::R, 1e-9).unwrap_or(false)
                        || near_boundary_2d(em, &x2)
                    {
                        continue;
                    }
                    if let Some(ev) = glued.edge_eval(
                        scene,
                        ei,
                        t,
                        &EdgeFibre::Interior { x2: x2.clone(), sheet },
                    ) {
                        let mut param = vec![t];
                        param.extend(&x2);
                        mesh.points.push(MeshPoint {
                            x: ev.point.x,
                            y: ev.point.y,
                            model: ModelId::Edge(ei),
                            param,
                            sheet,
                            waist: None,
                        });
                    }
                }
            }
        }
        for k in 0..16 {
            let ang = (k as f64 + 0.5) / 16.0 * 2.0 * core::f64::consts::PI;
            let dir = [ang.cos(), ang.sin()];
            if let Some((x2, kb)) = boundary_along_2d(em, &dir, radius) {
                if em.tp2.in_h1(&x2, Level::R, 1e-7).unwrap_or(false) {
                    if let Some(ev) =
                        glued.edge_eval(scene, ei, t, &EdgeFibre::Waist { k: kb, x2: x2.clone() })
                    {
                        let mut param = vec![t];
                        param.extend(&x2);
                        mesh.points.push(MeshPoint {
                            x: ev.point.x,
                            y: ev.point.y,
                            model: ModelId::Edge(ei),
                            param,
                            sheet: 0,
                            waist: Some(kb),
                        });
                    }
                }
            }
        }
    }
}

fn near_boundary_2d(em: &super::models::EdgeModel, x2: &[f64]) -> bool {
    for k in 0..=2 {
        let t = em.tp2.amoeba.frame_coords(k, x2);
        if t.iter().all(|&c| c >= 0.0) {
            let prod: f64 = t.iter().product();
            if prod > em.tp2.amoeba.bound() * 0.96 {
                return true;
            }
        }
    }
    false
}

fn boundary_along_2d(
    em: &super::models::EdgeModel,
    dir: &[f64],
    radius: f64,
) -> Option<(Vec<f64>, usize)> {
    let probe = |tau: f64| -> bool {
        let p: Vec<f64> = dir.iter().map(|&d| d * tau).collect();
        em.tp2.amoeba.contains(&p, 1e-9)
    };
    let mut lo = 0.0;
    let mut hi = None;
    let mut step = 0.05 * em.tp2.pants.lambda;
    let mut tau = step;
    while tau < 3.0 * radius {
        if probe(tau) {
            lo = tau;
            step *= 1.7;
            tau += step;
        } else {
            hi = Some(tau);
            break;
        }
    }
    let mut hi = hi?;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if probe(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let xb: Vec<f64> = dir.iter().map(|&d| d * 0.5 * (lo + hi)).collect();
    match em.tp2.amoeba.classify(&xb, 1e-5) {
        AmoebaClass::Boundary(k) => Some((xb, k)),
        _ => None,
    }
}

fn sample_facet_model(
    scene: &Scene,
    glued: &GluedModels,
    fi: usize,
    opts: &AssembleOptions,
    mesh: &mut LiftMesh,
) {
    let fm = &glued.facets[fi];
    let f = &scene.facets[fm.site];
    let j = f.base_dirs.len();
    let g = opts.density;
    let gs = (opts.density * 2 / 3).max(8);
    let mut lo = vec![-3.0 * opts.bbox; j];
    let mut hi = vec![3.0 * opts.bbox; j];
    clip_base_box(fm, &mut lo, &mut hi);
    let per_axis = if j == 1 { 2 * g } else { g };
    let mut idx = vec![0usize; j];
    loop {
        let base: Vec<f64> = (0..j)
            .map(|i| lo[i] + (idx[i] as f64 + 0.5) / per_axis as f64 * (hi[i] - lo[i]))
            .collect();
        let bg = scene.facet_x_to_global(f, &base, 0.0);
        let within = bg.iter().all(|&c| c.abs() <= opts.bbox);
        if within && glued.facet_base_in_domain(fm, &base) {
            let row_start = mesh.points.len();
            for is in 0..gs {
                let s = (is as f64 + 0.5) / gs as f64 * core::f64::consts::PI;
                if let Some(ev) = glued.facet_eval(scene, fi, &base, s) {
                    let mut param = base.clone();
                    param.push(s);
                    mesh.points.push(MeshPoint {
                        x: ev.point.x,
                        y: ev.point.y,
                        model: ModelId::Facet(fi),
                        param,
                        sheet: 1,
                        waist: None,
                    });
                }
            }
            let _ = row_start;
        }
        let mut k = 0;
        loop {
            if k == j {
                return;
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

fn clip_base_box(fm: &super::models::FacetModel, lo: &mut [f64], hi: &mut [f64]) {
    for (a, c) in &fm.rho_h {
        for i in 0..lo.len() {
            let others: f64 = (0..lo.len()).filter(|&k| k != i).map(|k| a[k].abs()).sum();
            if a[i].abs() > 1e-12 && others < 1e-9 * a[i].abs() {
                let bound = c / a[i];
                if a[i] > 0.0 {
                    hi[i] = hi[i].min(bound);
                } else {
                    lo[i] = lo[i].max(bound);
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Nerve and Euler bookkeeping.

/// Patch nerve (one node per local model, edges between overlapping models),
/// derived from cell incidence.
pub fn patch_nerve(scene: &Scene, glued: &GluedModels) -> (Vec<ModelId>, Vec<(usize, usize)>) {
    let mut nodes: Vec<(ModelId, usize)> = Vec::new();
    for (i, vm) in glued.vertices.iter().enumerate() {
        nodes.push((ModelId::Vertex(i), scene.vertices[vm.site].face));
    }
    for (i, em) in glued.edges.iter().enumerate() {
        nodes.push((ModelId::Edge(i), scene.edges[em.site].face));
    }
    for (i, fm) in glued.facets.iter().enumerate() {
        nodes.push((ModelId::Facet(i), scene.facets[fm.site].face));
    }
    let mut edges = Vec::new();
    for a in 0..nodes.len() {
        for b in a + 1..nodes.len() {
            let (fa, fb) = (nodes[a].1, nodes[b].1);
            let sub = &scene.complex.subdivision;
            if sub.face_leq(fa, fb) || sub.face_leq(fb, fa) {
                edges.push((a, b));
            }
        }
    }
    (nodes.into_iter().map(|(m, _)| m).collect(), edges)
}

/// Nerve of the PL-lift cover: nodes are the pieces ê, edges their
/// incidences; identical index convention as `patch_nerve`.
pub fn pl_cover_nerve(scene: &Scene) -> (usize, Vec<(usize, usize)>) {
    let cells: Vec<usize> = (0..scene.complex.cells.len()).collect();
    let mut edges = Vec::new();
    for a in 0..cells.len() {
        for b in a + 1..cells.len() {
            let fa = scene.complex.cells[cells[a]].dual_face;
            let fb = scene.complex.cells[cells[b]].dual_face;
            let sub = &scene.complex.subdivision;
            if sub.face_leq(fa, fb) || sub.face_leq(fb, fa) {
                edges.push((a, b));
            }
        }
    }
    (cells.len(), edges)
}

/// Euler characteristic of the assembled lift of a curve scenario by
/// inclusion-exclusion over the patch cover: χ(pants with b ends) = 2 − b;
/// every other patch and every overlap is a product with a circle (χ = 0).
pub fn euler_characteristic_curve(scene: &Scene, glued: &GluedModels) -> i64 {
    debug_assert_eq!(scene.n, 1);
    let mut chi = 0i64;
    for vm in &glued.vertices {
        let legs = scene.vertices[vm.site].cones.len() as i64;
        chi += 2 - legs;
    }
    chi
}

/// Euler characteristic of the PL lift of a curve from the coamoeba cell
/// structure of its vertex pieces (independent combinatorial route).
pub fn euler_characteristic_pl_curve(scene: &Scene) -> i64 {
    let mut chi = 0i64;
    for cell in &scene.complex.cells {
        if cell.dim != 0 {
            continue;
        }
        let face = &scene.complex.subdivision.faces[cell.dual_face];
        let m = face.polytope.vertices.len();
        let c2 = (m * (m - 1) / 2) as i64;
        let c3 = (m * (m - 1) * (m - 2) / 6) as i64;
        chi += m as i64 - 2 * c2 + 2 * c3;
    }
    chi
}

/// Worst 6D disagreement of the overlap equalities at sampled band points.
pub fn overlap_agreement(
    scene: &Scene,
    glued: &GluedModels,
    samples_per_band: usize,
) -> Vec<super::models::CheckOutcome> {
    use super::models::CheckOutcome;
    let mut out = Vec::new();

    if scene.n == 2 {
        let mut c = CheckOutcome::new("overlap-vertex-edge");
        for (ei, em) in glued.edges.iter().enumerate() {
            for end in &em.ends {
                let vm = &glued.vertices[end.vertex_model];
                let v = &scene.vertices[vm.site];
                let radius = em.tp2.bounding_radius();
                let mut done = 0;
                let mut trial = 0;
                while done < samples_per_band && trial < 60 * samples_per_band {
                    trial += 1;
                    let u = hash01(ei as u64, trial as u64, 1);
                    let c_coord = end.r + (end.r2 - end.r) * (0.1 + 0.8 * u);
                    let t = end.t_vertex + end.sigma * c_coord;
                    let a = (hash01(ei as u64, trial as u64, 2) * 2.0 - 1.0) * radius;
                    let b = (hash01(ei as u64, trial as u64, 3) * 2.0 - 1.0) * radius;
                    let x2 = vec![a, b];
                    if !em.tp2.in_h1(&x2, Level::R, 1e-9).unwrap_or(false)
                        || near_boundary_2d(em, &x2)
                    {
                        continue;
                    }
                    let sheet = if hash01(ei as u64, trial as u64, 4) < 0.5 { 1 } else { -1 };
                    let Some(ev) = glued.edge_eval(
                        scene,
                        ei,
                        t,
                        &EdgeFibre::Interior { x2: x2.clone(), sheet },
                    ) else {
                        continue;
                    };
                    if ev.eta < 0.999 {
                        continue;
                    }
                    let x_loc = scene.vertex_x_to_local(v, &ev.point.x);
                    let Some(pv) = glued.vertex_point(scene, vm, &x_loc, sheet, None) else {
                        continue;
                    };
                    let dx = numerics::norm(&numerics::sub(&pv.x, &ev.point.x));
                    let dy = crate::coamoeba::torus_distance(&pv.y, &ev.point.y);
                    c.record(dx + dy <= 1e-9, dx + dy);
                    done += 1;
                }
            }
        }
        out.push(c);
    }

    {
        let mut c = CheckOutcome::new("overlap-vertex-facet");
        for (fi, fm) in glued.facets.iter().enumerate() {
            let f = &scene.facets[fm.site];
            for band in &fm.bands {
                let FacetBand::Vertex { vertex_model } = band else { continue };
                let vm = &glued.vertices[*vertex_model];
                let v = &scene.vertices[vm.site];
                let Some(trim) = vm.tp.trim_of_cell(f.cell) else { continue };
                let Ok(chart) = vm.tp.proj.face(&trim.j_set) else { continue };
                let mut done = 0;
                let mut trial = 0;
                while done < samples_per_band && trial < 80 * samples_per_band {
                    trial += 1;
                    let mut xl = vec![0.0; scene.n + 1];
                    for (k, _) in trim.j_set.iter().enumerate() {
                        let u = hash01(fi as u64 + 100, trial as u64, k as u64);
                        let cc = trim.radii.r[k]
                            + (trim.radii.r2[k] - trim.radii.r[k]) * (0.1 + 0.8 * u);
                        numerics::axpy(&mut xl, cc, &chart.u_basis[k]);
                    }
                    let bg = scene.vertex_x_to_global(v, &xl);
                    let (base, _) = scene.facet_x_split(f, &bg);
                    let s = 0.15 + hash01(fi as u64 + 100, trial as u64, 9) * 1.2;
                    let Some(ev) = glued.facet_eval(scene, fi, &base, s) else { continue };
                    if ev.eta < 0.999 {
                        continue;
                    }
                    let Some(gd) =
                        glued.vertex_graph_over_facet(scene, fm, *vertex_model, &base, s)
                    else {
                        continue;
                    };
                    let x_expect = scene.facet_x_to_global(f, &base, gd.v_s);
                    let dx = numerics::norm(&numerics::sub(&ev.point.x, &x_expect));
                    let y_expect = torus_reduce(&scene.facet_y_to_global(f, s, &gd.w)).0;
                    let dy = crate::coamoeba::torus_distance(&ev.point.y, &y_expect);
                    c.record(dx + dy <= 1e-9, dx + dy);
                    done += 1;
                }
            }
        }
        out.push(c);
    }

    if scene.n == 2 {
        let mut c = CheckOutcome::new("overlap-edge-facet");
        for (fi, fm) in glued.facets.iter().enumerate() {
            let f = &scene.facets[fm.site];
            for band in &fm.bands {
                let FacetBand::Edge { edge_model, gamma } = band else { continue };
                let em = &glued.edges[*edge_model];
                let e = &scene.edges[em.site];
                let Some((jl, p, p2, _)) = em.p_of_cell(f.cell) else { continue };
                let mut done = 0;
                let mut trial = 0;
                while done < samples_per_band && trial < 80 * samples_per_band {
                    trial += 1;
                    let u1 = hash01(fi as u64 + 500, trial as u64, 1);
                    let u2 = hash01(fi as u64 + 500, trial as u64, 2);
                    let t_lo = em.rho1.0;
                    let t_hi = if em.rho1.1.is_finite() { em.rho1.1 } else { em.rho1.0 + 2.0 };
                    let t = t_lo + (t_hi - t_lo) * (0.2 + 0.6 * u1);
                    let depth = p + (p2 - p) * (0.15 + 0.7 * u2);
                    let dirg = crate::exact::ratvec_to_f64(&super::inner::fibre_dir_exact(
                        scene, em.site, f.cell,
                    ));
                    let kappa = if jl == 0 {
                        -numerics::dot(&dirg, &e.b_cols[0])
                    } else {
                        numerics::dot(&dirg, &e.b_cols[jl - 1])
                    };
                    let mut bg = e.anchor_pt.clone();
                    numerics::axpy(&mut bg, t, &e.m_dir);
                    numerics::axpy(&mut bg, depth / kappa, &dirg);
                    let (base, _) = scene.facet_x_split(f, &bg);
                    let s = 0.15 + hash01(fi as u64 + 500, trial as u64, 3) * 1.2;
                    let Some(ev) = glued.facet_eval(scene, fi, &base, s) else { continue };
                    if ev.eta < 0.999 {
                        continue;
                    }
                    let Some(mut gd) =
                        glued.edge_graph_over_facet(scene, fm, *edge_model, &base, s)
                    else {
                        continue;
                    };
                    gd.g_value += gamma;
                    let x_expect = scene.facet_x_to_global(f, &base, gd.v_s);
                    let dx = numerics::norm(&numerics::sub(&ev.point.x, &x_expect));
                    let y_expect = torus_reduce(&scene.facet_y_to_global(f, s, &gd.w)).0;
                    let dy = crate::coamoeba::torus_distance(&ev.point.y, &y_expect);
                    c.record(dx + dy <= 1e-9, dx + dy);
                    done += 1;
                }
            }
        }
        out.push(c);
    }
    out
}

/// Deterministic uniform in [0,1) from three integers.
pub fn hash01(a: u64, b: u64, c: u64) -> f64 {
    let mut h = a
        .wrapping_mul(0x9e37_79b9_7f4a_7c15)
        .wrapping_add(b.wrapping_mul(0xbf58_476d_1ce4_e5b9))
        .wrapping_add(c.wrapping_mul(0x94d0_49bb_1331_11eb));
    h ^= h >> 30;
    h = h.wrapping_mul(0xbf58_476d_1ce4_e5b9);
    h ^= h >> 27;
    (h >> 11) as f64 / (1u64 << 53) as f64
}

/// Minimum sampled distance between points of non-incident patches.
pub fn non_incident_separation(scene: &Scene, mesh: &LiftMesh) -> (f64, usize) {
    let face_of = |m: &ModelId| -> usize {
        match m {
            ModelId::Vertex(i) => scene.vertices[*i].face,
            ModelId::Edge(i) => scene.edges[*i].face,
            ModelId::Facet(i) => scene.facets[*i].face,
        }
    };
    let sub = &scene.complex.subdivision;
    let mut min_d = f64::INFINITY;
    let mut pairs = 0;
    let stride = (mesh.points.len() / 900).max(1);
    let pts: Vec<&MeshPoint> = mesh.points.iter().step_by(stride).collect();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let (fa, fb) = (face_of(&pts[i].model), face_of(&pts[j].model));
            if fa == fb || sub.face_leq(fa, fb) || sub.face_leq(fb, fa) {
                continue;
            }
            let dx = numerics::norm(&numerics::sub(&pts[i].x, &pts[j].x));
            let dy = crate::coamoeba::torus_distance(&pts[i].y, &pts[j].y);
            let d = (dx * dx + dy * dy).sqrt();
            min_d = min_d.min(d);
            pairs += 1;
        }
    }
    (min_d, pairs)
}

/// Deterministic digest of the mesh for the determinism checks.
pub fn mesh_digest(mesh: &LiftMesh) -> String {
    use alloc::format;
    let mut acc: u64 = 0xcbf2_9ce4_8422_2325;
    let mut feed = |x: f64| {
        acc ^= x.to_bits();
        acc = acc.wrapping_mul(0x1000_0000_01b3);
    };
    for p in &mesh.points {
        for &c in p.x.iter().chain(p.y.iter()) {
            feed(c);
        }
    }
    for t in &mesh.triangles {
        for &i in t {
            feed(i as f64);
        }
    }
    format!("{:016x}-{}pts-{}tris", acc, mesh.points.len(), mesh.triangles.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lift::models::{choose_trimming, TrimmingConfig};
    use crate::lift::scene::tests::example_curve_complex;

    #[test]
    fn curve_mesh_assembles_deterministically() {
        let scene = Scene::build(&example_curve_complex()).unwrap();
        let (mut glued, _) = choose_trimming(&scene, &TrimmingConfig::new(0.1, 7)).unwrap();
        let opts = AssembleOptions { bbox: 3.0, density: 18, seed: 7 };
        let mesh = assemble_lift(&scene, &mut glued, &opts).unwrap();
        assert!(mesh.points.len() > 500, "mesh too sparse: {}", mesh.points.len());
        assert!(!mesh.triangles.is_empty());
        let (mut glued2, _) = choose_trimming(&scene, &TrimmingConfig::new(0.1, 7)).unwrap();
        let mesh2 = assemble_lift(&scene, &mut glued2, &opts).unwrap();
        assert_eq!(mesh_digest(&mesh), mesh_digest(&mesh2));
    }

    #[test]
    fn curve_euler_characteristic_matches_pl() {
        let scene = Scene::build(&example_curve_complex()).unwrap();
        let (glued, _) = choose_trimming(&scene, &TrimmingConfig::new(0.1, 7)).unwrap();
        assert_eq!(euler_characteristic_curve(&scene, &glued), -3);
        assert_eq!(euler_characteristic_pl_curve(&scene), -3);
    }

    #[test]
    fn curve_overlap_agreement() {
        let scene = Scene::build(&example_curve_complex()).unwrap();
        let (mut glued, _) = choose_trimming(&scene, &TrimmingConfig::new(0.1, 7)).unwrap();
        let spread = crate::lift::glue::fit_facet_gammas(&scene, &mut glued);
        assert!(spread <= 1e-6, "gamma spread {spread}");
        let checks = overlap_agreement(&scene, &glued, 40);
        for c in &checks {
            assert!(c.pass, "{}: worst {}", c.name, c.worst);
            if c.name == "overlap-vertex-facet" {
                assert!(c.samples >= 40, "only {} samples", c.samples);
            }
        }
    }

    #[test]
    fn surface_glue_and_overlaps() {
        let scene =
            Scene::build(&crate::lift::scene::tests::two_vertex_surface_complex()).unwrap();
        let (mut glued, _) = choose_trimming(&scene, &TrimmingConfig::new(0.1, 7)).unwrap();
        // a flat-zone edge evaluation
        let mut flat_ok = 0;
        for ei in 0..glued.edges.len() {
            let em = &glued.edges[ei];
            if !em.rho1.1.is_finite() {
                let t = em.rho1.0 + 1.0;
                let lam = em.tp2.pants.lambda;
                if let Some(ev) = glued.edge_eval(
                    &scene,
                    ei,
                    t,
                    &crate::lift::glue::EdgeFibre::Interior { x2: alloc::vec![0.12 * lam, 0.07 * lam], sheet: 1 },
                ) {
                    assert_eq!(ev.eta, 0.0);
                    flat_ok += 1;
                }
            }
        }
        assert!(flat_ok > 0);
        // an interpolation-zone evaluation on each end
        let mut interp_ok = 0;
        for ei in 0..glued.edges.len() {
            let em = glued.edges[ei].clone();
            for end in &em.ends {
                let c = 0.5 * (end.r + end.r2);
                let t = end.t_vertex + end.sigma * c;
                let lam = em.tp2.pants.lambda;
                if let Some(ev) = glued.edge_eval(
                    &scene,
                    ei,
                    t,
                    &crate::lift::glue::EdgeFibre::Interior { x2: alloc::vec![0.1 * lam, 0.06 * lam], sheet: 1 },
                ) {
                    assert!(ev.eta > 0.0, "expected interpolation zone");
                    interp_ok += 1;
                }
            }
        }
        assert!(interp_ok >= 4, "only {interp_ok} interpolation evals succeeded");
        let spread = crate::lift::glue::fit_facet_gammas(&scene, &mut glued);
        assert!(spread <= 1e-6, "gamma spread {spread}");
        let checks = overlap_agreement(&scene, &glued, 25);
        for c in &checks {
            assert!(c.samples > 0, "{} had no samples", c.name);
            assert!(c.pass, "{}: worst {}", c.name, c.worst);
        }
    }

    #[test]
    fn nerve_matches_pl_cover() {
        let scene = Scene::build(&example_curve_complex()).unwrap();
        let (glued, _) = choose_trimming(&scene, &TrimmingConfig::new(0.1, 7)).unwrap();
        let (nodes, edges) = patch_nerve(&scene, &glued);
        let (pl_nodes, pl_edges) = pl_cover_nerve(&scene);
        assert_eq!(nodes.len(), pl_nodes);
        assert_eq!(edges.len(), pl_edges.len());
    }
}

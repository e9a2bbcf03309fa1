//! Local models over the cells of Ξ and the trimming-parameter search.
//!
//! A vertex model is the λ-rescaled pair of pants in the vertex frame with
//! its trims. Edge models (surface case) are families of two-dimensional
//! pants over ρ_d whose ends interpolate into the vertex graphs; facet
//! models carry the flat torus family with η-weighted Legendre data. The
//! Legendre data is obtained by Newton inversion of the vertex graph, never
//! symbolically; values are anchored through G = F − c·w.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::coamoeba::{torus_reduce, PI};
use crate::exact::{self, rat_from_decimal, Rational};
use crate::numerics;
use crate::pants::{self, PantsModel};

use super::inner::{self, NeighborhoodSystem};
use super::scene::Scene;
use super::trim::{ConeTrim, Level, TrimRadii, TrimmedPants};
use super::LiftError;

#[derive(Clone, Debug)]
pub struct TrimmingConfig {
    pub t: f64,
    pub seed: u64,
    pub relax56: bool,
    pub lambda_hint: Option<f64>,
}

impl TrimmingConfig {
    pub fn new(t: f64, seed: u64) -> Self {
        TrimmingConfig { t, seed, relax56: false, lambda_hint: None }
    }
}

#[derive(Clone, Debug)]
pub struct TrimmingParameters {
    pub t: f64,
    pub t_exact: Rational,
    pub lambda: f64,
    pub eps1: f64,
    pub eps2: f64,
    pub eps2p: f64,
    pub eps3: f64,
    pub relax56: bool,
}

#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub name: String,
    pub pass: bool,
    pub worst: f64,
    pub samples: usize,
}

impl CheckOutcome {
    pub fn new(name: &str) -> CheckOutcome {
        CheckOutcome { name: String::from(name), pass: true, worst: 0.0, samples: 0 }
    }

    pub fn fail(&mut self, residual: f64) {
        self.pass = false;
        self.worst = self.worst.max(residual);
    }

    pub fn record(&mut self, ok: bool, residual: f64) {
        self.samples += 1;
        self.worst = self.worst.max(residual);
        if !ok {
            self.pass = false;
        }
    }
}

#[derive(Clone, Debug)]
pub struct TrimmingReport {
    pub accepted: bool,
    pub lambda: f64,
    pub checks: Vec<CheckOutcome>,
}

impl TrimmingReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn first_failure(&self) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| !c.pass)
    }
}

#[derive(Clone, Debug)]
pub struct VertexModel {
    pub site: usize,
    pub tp: TrimmedPants,
}

/// One glued end of an edge model.
#[derive(Clone, Debug)]
pub struct EdgeEnd {
    pub vertex_model: usize,
    /// Edge coordinate of ě.
    pub t_vertex: f64,
    /// The direction from ě into the edge is σ·m̂, so c = σ(t − t_vertex).
    pub sigma: f64,
    pub r: f64,
    pub r2: f64,
    pub rbar: f64,
    pub r1: f64,
    /// Local J label of the edge cone in the vertex frame.
    pub j_label: usize,
}

#[derive(Clone, Debug)]
pub struct EdgeModel {
    pub site: usize,
    /// The edge's own λ-rescaled two-dimensional pants with its p-trims.
    pub tp2: TrimmedPants,
    pub ends: Vec<EdgeEnd>,
    /// ρ_d, ρ″_d, ρ′_d in the edge t-coordinate (∞ for rays).
    pub rho: (f64, f64),
    pub rho2: (f64, f64),
    pub rho1: (f64, f64),
    /// Per incident facet: (facet cell, local J label, p, p″, p′).
    pub p_scalars: Vec<(usize, usize, f64, f64, f64)>,
    /// B_d polygon as global fibre offsets.
    pub b_poly: Vec<Vec<f64>>,
}

impl EdgeModel {
    pub fn p_of_cell(&self, fcell: usize) -> Option<(usize, f64, f64, f64)> {
        self.p_scalars
            .iter()
            .find(|&&(c, _, _, _, _)| c == fcell)
            .map(|&(_, jl, p, p2, p1)| (jl, p, p2, p1))
    }
}

#[derive(Clone, Debug)]
pub enum FacetBand {
    Vertex { vertex_model: usize },
    Edge { edge_model: usize, gamma: f64 },
}

#[derive(Clone, Debug)]
pub struct FacetModel {
    pub site: usize,
    /// H-reps (a, c): a·(base) ≤ c in base coordinates, one per level.
    pub rho_h: Vec<(Vec<f64>, f64)>,
    pub rho2_h: Vec<(Vec<f64>, f64)>,
    pub rho1_h: Vec<(Vec<f64>, f64)>,
    pub bands: Vec<FacetBand>,
    pub b_half: f64,
    /// Bound on the |v-coefficient| equivalent to the B_f half-width.
    pub vcoef_bound: f64,
    /// Matched parallel wall pairs (unit normal, ρ″ offset, ρ′ offset) for
    /// the smooth cutoff.
    pub eta_pairs: Vec<(Vec<f64>, f64, f64)>,
}

impl FacetModel {
    pub fn in_level(&self, h: &[(Vec<f64>, f64)], base: &[f64], tol: f64) -> bool {
        h.iter().all(|(a, c)| numerics::dot(a, base) <= c + tol)
    }
}

#[derive(Clone, Debug)]
pub struct GluedModels {
    pub params: TrimmingParameters,
    pub vertices: Vec<VertexModel>,
    pub edges: Vec<EdgeModel>,
    pub facets: Vec<FacetModel>,
}

/// A point of the assembled Lagrangian (y reduced to [0, π)).
#[derive(Clone, Debug)]
pub struct LiftPoint {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

fn to_f64(r: &Rational) -> f64 {
    exact::to_f64(r)
}

// ---------------------------------------------------------------------------
// Construction.

pub fn build_vertex_model(
    scene: &Scene,
    nbhd: &NeighborhoodSystem,
    vi: usize,
    lambda: f64,
) -> Result<VertexModel, LiftError> {
    let v = &scene.vertices[vi];
    let n = scene.n;
    let mut trims = Vec::new();
    for cone in &v.cones {
        let cell = &scene.complex.cells[cone.cell];
        let radii = if cell.dim == n {
            let ex = inner::vertex_facet_radii_exact(scene, vi, cone.cell, nbhd)?;
            TrimRadii {
                r: ex[0].iter().map(to_f64).collect(),
                r2: ex[1].iter().map(to_f64).collect(),
                r1: ex[2].iter().map(to_f64).collect(),
            }
        } else {
            let (_, ei) = scene.site_of_cell[&cone.cell];
            let (r, r2, r1) = inner::vertex_edge_radii_exact(scene, vi, ei, nbhd)?;
            TrimRadii { r: vec![to_f64(&r)], r2: vec![to_f64(&r2)], r1: vec![to_f64(&r1)] }
        };
        trims.push(ConeTrim { j_set: cone.j_set.clone(), cell: cone.cell, radii });
    }
    Ok(VertexModel { site: vi, tp: TrimmedPants::new(n, lambda, v.proj.clone(), trims) })
}

pub fn build_edge_model(
    scene: &Scene,
    nbhd: &NeighborhoodSystem,
    ei: usize,
    lambda: f64,
    vertex_models: &[VertexModel],
) -> Result<EdgeModel, LiftError> {
    let e = &scene.edges[ei];
    let einner = &nbhd.edges[ei];
    let mut trims = Vec::new();
    let mut p_scalars = Vec::new();
    for &(fcell, jl) in &e.facet_j {
        let p = to_f64(&inner::p_scalar_exact(scene, ei, fcell, &nbhd.t, inner::PLevel::R)?);
        let p2 = to_f64(&inner::p_scalar_exact(scene, ei, fcell, &nbhd.t, inner::PLevel::R2)?);
        let p1 = to_f64(&inner::p_scalar_exact(scene, ei, fcell, &nbhd.t, inner::PLevel::R1)?);
        // the exact scalars are coordinates along the raw fibre direction;
        // convert to the dual-frame coordinate of the local model (pairing
        // of the raw direction with the b-column of this label)
        let dir_raw = exact::ratvec_to_f64(&inner::fibre_dir_exact(scene, ei, fcell));
        let kappa = if jl == 0 {
            // u_0 = −u_1 − u_2: coordinate along u_0 = −(pairing with either b)
            -numerics::dot(&dir_raw, &e.b_cols[0])
        } else {
            numerics::dot(&dir_raw, &e.b_cols[jl - 1])
        };
        if kappa <= 0.0 {
            return Err(LiftError::ParamsNotAccepted);
        }
        let (p, p2, p1) = (p * kappa, p2 * kappa, p1 * kappa);
        trims.push(ConeTrim {
            j_set: vec![jl],
            cell: fcell,
            radii: TrimRadii { r: vec![p], r2: vec![p2], r1: vec![p1] },
        });
        p_scalars.push((fcell, jl, p, p2, p1));
    }
    p_scalars.sort_by(|a, b| a.1.cmp(&b.1));
    let tp2 = TrimmedPants::new(1, lambda, e.proj.clone(), trims);
    let interval = |iv: &(Rational, Option<Rational>)| -> (f64, f64) {
        (to_f64(&iv.0), iv.1.as_ref().map(to_f64).unwrap_or(f64::INFINITY))
    };
    let mut ends = Vec::new();
    for &(vi, t_vertex, sigma) in &e.ends {
        let vm = vertex_models
            .iter()
            .position(|m| m.site == vi)
            .ok_or(LiftError::ParamsNotAccepted)?;
        let (r, r2, r1) = inner::vertex_edge_radii_exact(scene, vi, ei, nbhd)?;
        let (r, r2, r1) = (to_f64(&r), to_f64(&r2), to_f64(&r1));
        let j_label = scene.vertices[vi]
            .cones
            .iter()
            .find(|c| c.cell == e.cell)
            .map(|c| c.j_set[0])
            .ok_or(LiftError::ParamsNotAccepted)?;
        ends.push(EdgeEnd {
            vertex_model: vm,
            t_vertex,
            sigma,
            r,
            r2,
            rbar: 0.5 * (r2 + r1),
            r1,
            j_label,
        });
    }
    Ok(EdgeModel {
        site: ei,
        tp2,
        ends,
        rho: interval(&einner.rho),
        rho2: interval(&einner.rho2),
        rho1: interval(&einner.rho1),
        p_scalars,
        b_poly: einner.b_poly.iter().map(|p| exact::ratvec_to_f64(p)).collect(),
    })
}

pub fn build_facet_model(
    scene: &Scene,
    nbhd: &NeighborhoodSystem,
    fi: usize,
    vertex_models: &[VertexModel],
    edge_models: &[EdgeModel],
) -> Result<FacetModel, LiftError> {
    let f = &scene.facets[fi];
    let finner = &nbhd.facets[fi];
    let to_base_h = |poly: &inner::VPoly| -> Vec<(Vec<f64>, f64)> {
        let h = inner::hrep(poly);
        h.ineqs
            .iter()
            .map(|(a, c)| {
                let av = exact::ratvec_to_f64(a);
                let af: Vec<f64> =
                    f.base_dirs.iter().map(|dvec| numerics::dot(&av, dvec)).collect();
                let c0 = to_f64(c) - numerics::dot(&av, &f.base_anchor);
                (af, c0)
            })
            .filter(|(af, _)| numerics::norm(af) > 1e-12)
            .collect()
    };
    let mut bands = Vec::new();
    for &vi in &f.vertices {
        let vm = vertex_models
            .iter()
            .position(|m| m.site == vi)
            .ok_or(LiftError::ParamsNotAccepted)?;
        bands.push(FacetBand::Vertex { vertex_model: vm });
    }
    for &ei in &f.edges {
        let em = edge_models
            .iter()
            .position(|m| m.site == ei)
            .ok_or(LiftError::ParamsNotAccepted)?;
        bands.push(FacetBand::Edge { edge_model: em, gamma: 0.0 });
    }
    let b_norm2 = numerics::dot(&f.b_vec, &f.b_vec);
    let b_l1: f64 = f.b_vec.iter().map(|c| c.abs()).sum();
    let rho2_h = to_base_h(&finner.rho2);
    let rho1_h = to_base_h(&finner.rho1);
    // match walls by unit normal: the scaled polygons are parallel
    let mut eta_pairs = Vec::new();
    for (a2, c2) in &rho2_h {
        let n2 = numerics::norm(a2);
        let u2: Vec<f64> = a2.iter().map(|c| c / n2).collect();
        let mut best: Option<(f64, f64)> = None;
        for (a1, c1) in &rho1_h {
            let n1 = numerics::norm(a1);
            let u1: Vec<f64> = a1.iter().map(|c| c / n1).collect();
            if numerics::norm(&numerics::sub(&u1, &u2)) < 1e-9 {
                best = Some((c2 / n2, c1 / n1));
            }
        }
        let Some((o2, o1)) = best else {
            return Err(LiftError::ParamsNotAccepted);
        };
        if o1 >= o2 {
            return Err(LiftError::ParamsNotAccepted);
        }
        eta_pairs.push((u2, o2, o1));
    }
    Ok(FacetModel {
        site: fi,
        rho_h: to_base_h(&finner.rho),
        rho2_h,
        rho1_h,
        bands,
        b_half: to_f64(&finner.b_half),
        vcoef_bound: to_f64(&finner.b_half) * b_norm2 / b_l1,
        eta_pairs,
    })
}

// ---------------------------------------------------------------------------
// Smooth cutoff.

/// C^∞ step: 0 for s ≤ 0, 1 for s ≥ 1.
pub fn smooth_step(s: f64) -> f64 {
    if s <= 0.0 {
        0.0
    } else if s >= 1.0 {
        1.0
    } else {
        let a = (-1.0 / s).exp();
        let b = (-1.0 / (1.0 - s)).exp();
        a / (a + b)
    }
}

pub fn smooth_step_deriv(s: f64) -> f64 {
    if s <= 0.0 || s >= 1.0 {
        0.0
    } else {
        let h = 1e-6;
        (smooth_step(s + h) - smooth_step(s - h)) / (2.0 * h)
    }
}

/// η along an edge end: 1 on [r, r″], 0 from r̄ on (toward r′).
pub fn eta_end(c: f64, end: &EdgeEnd) -> (f64, f64) {
    let s = (end.rbar - c) / (end.rbar - end.r2);
    let eta = smooth_step(s);
    let deta_dc = -smooth_step_deriv(s) / (end.rbar - end.r2);
    (eta, deta_dc)
}

// ---------------------------------------------------------------------------
// Vertex-model evaluation and graph extraction.

impl GluedModels {
    pub fn vertex_model_of_site(&self, site: usize) -> Option<usize> {
        self.vertices.iter().position(|m| m.site == site)
    }

    pub fn edge_model_of_site(&self, site: usize) -> Option<usize> {
        self.edges.iter().position(|m| m.site == site)
    }

    pub fn facet_model_of_site(&self, site: usize) -> Option<usize> {
        self.facets.iter().position(|m| m.site == site)
    }

    /// Final vertex-model domain H^[2] (both trim families at r″).
    pub fn vertex_domain_contains(&self, vm: &VertexModel, x_loc: &[f64], tol: f64) -> bool {
        vm.tp.in_h2(x_loc, Level::R2, Level::R2, tol).unwrap_or(false)
    }

    pub fn vertex_point(
        &self,
        scene: &Scene,
        vm: &VertexModel,
        x_loc: &[f64],
        sheet: i8,
        seed: Option<&[f64]>,
    ) -> Option<LiftPoint> {
        let v = &scene.vertices[vm.site];
        let w = vm.tp.pants.h_invert(x_loc, seed)?;
        let y_loc: Vec<f64> = if sheet >= 0 { w } else { w.iter().map(|&c| -c).collect() };
        let x = scene.vertex_x_to_global(v, x_loc);
        let y = scene.vertex_y_to_global(v, &y_loc);
        Some(LiftPoint { x, y: torus_reduce(&y).0 })
    }

    /// Waist point: x on S_k, torus coordinate exactly the chart vertex.
    pub fn vertex_waist_point(
        &self,
        scene: &Scene,
        vm: &VertexModel,
        x_loc: &[f64],
        k: usize,
    ) -> LiftPoint {
        let v = &scene.vertices[vm.site];
        let x = scene.vertex_x_to_global(v, x_loc);
        let p = pants::vertex_coords(scene.n, k);
        let y = scene.vertex_y_to_global(v, &p);
        LiftPoint { x, y: torus_reduce(&y).0 }
    }

    /// Graph data of a vertex model over an edge chart: at cone coordinate c
    /// and target fibre point of C̃_d (edge-local window coordinates w2 with
    /// a sheet sign), solve the inversion and read off (v2, w), the pants
    /// value F and the Legendre value G = F − c·w_c.
    #[allow(clippy::too_many_arguments)]
    pub fn vertex_graph_over_edge(
        &self,
        scene: &Scene,
        em: &EdgeModel,
        end: &EdgeEnd,
        c: f64,
        w2_target: &[f64],
        sheet: i8,
        seed: Option<&[f64]>,
    ) -> Option<EdgeGraphData> {
        let vm = &self.vertices[end.vertex_model];
        let v = &scene.vertices[vm.site];
        let e = &scene.edges[em.site];
        let jset = [end.j_label];
        let chart = vm.tp.proj.face(&jset).ok()?;
        let fb = &chart.v_basis;
        debug_assert_eq!(fb.len(), 2);
        let axis: Vec<f64> = chart.u_basis[0].iter().map(|&u| u * c).collect();
        let sgn = f64::from(sheet.signum() as i32);
        let target_vec: Vec<f64> = w2_target.iter().map(|&s| s * sgn).collect();
        let eval_res = |s2: &[f64]| -> Option<(Vec<f64>, Vec<f64>, Vec<f64>)> {
            let mut x_loc = axis.clone();
            numerics::axpy(&mut x_loc, s2[0], &fb[0]);
            numerics::axpy(&mut x_loc, s2[1], &fb[1]);
            let w = vm.tp.pants.h_invert(&x_loc, None)?;
            let y_loc: Vec<f64> =
                if sheet >= 0 { w.clone() } else { w.iter().map(|&v| -v).collect() };
            let (wp, _) = vm.tp.proj.project_y_window(&jset, &y_loc).ok()?;
            let y_g = scene.vertex_y_to_global(v, &wp);
            let rel = numerics::sub(&y_g, &e.y_anchor);
            let y2v: Vec<f64> = e.a_cols.iter().map(|col| numerics::dot(col, &rel)).collect();
            let res: Vec<f64> = (0..2)
                .map(|i| {
                    let d = y2v[i] - target_vec[i];
                    d - PI * (d / PI).round()
                })
                .collect();
            Some((res, x_loc, y_loc))
        };
        let mut s2 = seed.map(|s| s.to_vec()).unwrap_or_else(|| vec![0.0, 0.0]);
        let mut cur = eval_res(&s2)?;
        for _ in 0..60 {
            let rn = numerics::norm(&cur.0);
            if rn < 1e-12 {
                break;
            }
            let h = 1e-6 * (1.0 + numerics::norm(&s2));
            let mut jac = vec![vec![0.0; 2]; 2];
            for k in 0..2 {
                let mut sp = s2.clone();
                sp[k] += h;
                let (rp, _, _) = eval_res(&sp)?;
                for i in 0..2 {
                    jac[i][k] = (rp[i] - cur.0[i]) / h;
                }
            }
            let mut rhs: Vec<f64> = cur.0.iter().map(|&r| -r).collect();
            let step = numerics::solve(&mut jac, &mut rhs)?;
            let mut alpha = 1.0;
            let mut improved = false;
            for _ in 0..30 {
                let cand: Vec<f64> = (0..2).map(|i| s2[i] + alpha * step[i]).collect();
                if let Some(next) = eval_res(&cand) {
                    if numerics::norm(&next.0) < rn {
                        s2 = cand;
                        cur = next;
                        improved = true;
                        break;
                    }
                }
                alpha *= 0.5;
            }
            if !improved {
                break;
            }
        }
        if numerics::norm(&cur.0) > 1e-9 {
            return None;
        }
        let (_, x_loc, y_loc) = cur;
        let x_g = scene.vertex_x_to_global(v, &x_loc);
        let y_g = scene.vertex_y_to_global(v, &y_loc);
        let (t_out, v2) = scene.edge_x_split(e, &x_g);
        let wraw = numerics::dot(&e.m_dir, &numerics::sub(&y_g, &e.y_anchor));
        let w_red = wraw - PI * (wraw / PI).round();
        let fval = {
            let (sg, wwin) = vm.tp.pants.plus_rep(&torus_reduce(&y_loc), 1e-9)?;
            f64::from(sg) * vm.tp.pants.f_plus(&wwin)
        };
        Some(EdgeGraphData {
            t: t_out,
            v2,
            w: w_red,
            f_value: fval,
            g_value: fval - c * (w_red * end.sigma),
            x_loc,
            seed2: s2,
        })
    }
}

/// Vertex graph data re-parameterized into the edge frame.
#[derive(Clone, Debug)]
pub struct EdgeGraphData {
    pub t: f64,
    pub v2: Vec<f64>,
    /// L_d-offset coefficient paired with m̂ (reduced mod π).
    pub w: f64,
    pub f_value: f64,
    pub g_value: f64,
    pub x_loc: Vec<f64>,
    pub seed2: Vec<f64>,
}

// ---------------------------------------------------------------------------
// Trimming search.

pub fn choose_trimming(
    scene: &Scene,
    config: &TrimmingConfig,
) -> Result<(GluedModels, TrimmingReport), LiftError> {
    if !(config.t > 0.0) {
        return Err(LiftError::SearchFailed(String::from("t must be positive")));
    }
    let t_exact = rat_from_decimal(&format!("{:.9}", config.t))
        .ok_or_else(|| LiftError::SearchFailed(String::from("t not representable")))?;
    let nbhd = NeighborhoodSystem::build(scene, &t_exact)?;
    let exact_checks = inner::neighborhood_conditions(scene, &nbhd, config.relax56);
    for c in &exact_checks {
        if !c.pass {
            return Err(LiftError::SearchFailed(c.name.clone()));
        }
    }
    let eps1 = pick_eps_w_in_domain(scene)?;
    let eps3 = if scene.n == 2 { pick_eps_edge_w_in_domain(scene)? } else { eps1 };

    let mut min_r = f64::INFINITY;
    for (vi, v) in scene.vertices.iter().enumerate() {
        for cone in &v.cones {
            let cell = &scene.complex.cells[cone.cell];
            if cell.dim == scene.n {
                let ex = inner::vertex_facet_radii_exact(scene, vi, cone.cell, &nbhd)?;
                for r in &ex[0] {
                    min_r = min_r.min(to_f64(r));
                }
            } else {
                let (_, ei) = scene.site_of_cell[&cone.cell];
                let (r, _, _) = inner::vertex_edge_radii_exact(scene, vi, ei, &nbhd)?;
                min_r = min_r.min(to_f64(&r));
            }
        }
    }
    for ei in 0..scene.edges.len() {
        for &(fcell, _) in &scene.edges[ei].facet_j {
            let p = inner::p_scalar_exact(scene, ei, fcell, &t_exact, inner::PLevel::R)?;
            min_r = min_r.min(to_f64(&p));
        }
    }

    let battery = |lambda: f64| -> Result<TrimmingReport, LiftError> {
        let mut vms = Vec::new();
        for vi in 0..scene.vertices.len() {
            vms.push(build_vertex_model(scene, &nbhd, vi, lambda)?);
        }
        let mut ems = Vec::new();
        for ei in 0..scene.edges.len() {
            ems.push(build_edge_model(scene, &nbhd, ei, lambda, &vms)?);
        }
        Ok(run_battery(scene, &nbhd, &vms, &ems, lambda, eps1, eps3, config.seed))
    };

    let mut lo = config.lambda_hint.unwrap_or(0.25 * min_r);
    let mut lo_report = battery(lo)?;
    let mut shrinks = 0;
    while !lo_report.all_pass() {
        #[cfg(feature = "std")]
        if option_env!("TROPLIFT_DEBUG").is_some() {
            std::eprintln!(
                "lambda {lo:.6e} fails: {:?}",
                lo_report.first_failure().map(|c| (&c.name, c.worst, c.samples))
            );
        }
        lo *= 0.5;
        shrinks += 1;
        if shrinks > 14 {
            let name =
                lo_report.first_failure().map(|c| c.name.clone()).unwrap_or_default();
            return Err(LiftError::SearchFailed(name));
        }
        lo_report = battery(lo)?;
    }
    let mut hi = lo * 2.0;
    let mut grows = 0;
    while battery(hi)?.all_pass() && grows < 8 {
        lo = hi;
        hi *= 2.0;
        grows += 1;
    }
    for _ in 0..8 {
        let mid = 0.5 * (lo + hi);
        if battery(mid)?.all_pass() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let lambda = 0.7 * lo;
    let report = battery(lambda)?;
    if !report.all_pass() {
        let name = report.first_failure().map(|c| c.name.clone()).unwrap_or_default();
        return Err(LiftError::SearchFailed(name));
    }

    let mut vms = Vec::new();
    for vi in 0..scene.vertices.len() {
        vms.push(build_vertex_model(scene, &nbhd, vi, lambda)?);
    }
    let mut ems = Vec::new();
    for ei in 0..scene.edges.len() {
        ems.push(build_edge_model(scene, &nbhd, ei, lambda, &vms)?);
    }
    let mut fms = Vec::new();
    for fi in 0..scene.facets.len() {
        fms.push(build_facet_model(scene, &nbhd, fi, &vms, &ems)?);
    }
    let params = TrimmingParameters {
        t: config.t,
        t_exact,
        lambda,
        eps1,
        eps2: 0.5 * eps1,
        eps2p: 0.75 * eps1,
        eps3,
        relax56: config.relax56,
    };
    let mut checks = report.checks;
    for c in exact_checks {
        checks.push(CheckOutcome { name: c.name, pass: c.pass, worst: 0.0, samples: 1 });
    }
    let report = TrimmingReport { accepted: true, lambda, checks };
    Ok((GluedModels { params, vertices: vms, edges: ems, facets: fms }, report))
}

/// Largest grid ε with W̃_{J,ε} inside the projection domain for every
/// dimension-n cone of every vertex (the paper's ε₁).
fn pick_eps_w_in_domain(scene: &Scene) -> Result<f64, LiftError> {
    let model = PantsModel::new(scene.n, 1.0);
    'eps: for &eps in &[0.45, 0.4, 0.35, 0.3, 0.25, 0.2, 0.15, 0.1, 0.05] {
        for v in &scene.vertices {
            for cone in &v.cones {
                if scene.complex.cells[cone.cell].dim != scene.n {
                    continue;
                }
                if !w_collar_in_domain(&model, &v.proj, &cone.j_set, eps) {
                    continue 'eps;
                }
            }
        }
        return Ok(eps);
    }
    Err(LiftError::SearchFailed(String::from("eps1: no collar fits the projection domain")))
}

/// The analogous ε for the faces of the edge coamoebas (the paper's ε₃).
fn pick_eps_edge_w_in_domain(scene: &Scene) -> Result<f64, LiftError> {
    let model = PantsModel::new(1, 1.0);
    'eps: for &eps in &[0.45, 0.4, 0.35, 0.3, 0.25, 0.2, 0.15, 0.1, 0.05] {
        for e in &scene.edges {
            for &(_, jl) in &e.facet_j {
                if !w_collar_in_domain(&model, &e.proj, &[jl], eps) {
                    continue 'eps;
                }
            }
        }
        return Ok(eps);
    }
    Err(LiftError::SearchFailed(String::from("eps3: no collar fits the projection domain")))
}

fn w_collar_in_domain(
    model: &PantsModel,
    proj: &crate::projections::ProjectionSystem,
    j_set: &[usize],
    eps: f64,
) -> bool {
    let n = model.n;
    let grid = if n == 1 { 24 } else { 10 };
    let d = n + 1;
    let mut idx = vec![0usize; d];
    loop {
        let w: Vec<f64> =
            idx.iter().map(|&i| (i as f64 + 0.5) / grid as f64 * PI / 2.0).collect();
        if pants::is_interior(&w, 1e-4)
            && pants::w_eps_plus_contains(n, j_set, eps, &w, 0.0).unwrap_or(false)
        {
            for sign in [1.0f64, -1.0] {
                let y = torus_reduce(&w.iter().map(|&c| c * sign).collect::<Vec<_>>());
                if proj.project_y(j_set, model, &y, 1e-9).is_err() {
                    return false;
                }
            }
        }
        let mut k = 0;
        loop {
            if k == d {
                return true;
            }
            idx[k] += 1;
            if idx[k] < grid {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

// ---------------------------------------------------------------------------
// Sampled battery.

#[allow(clippy::too_many_arguments)]
pub fn run_battery(
    scene: &Scene,
    nbhd: &NeighborhoodSystem,
    vms: &[VertexModel],
    ems: &[EdgeModel],
    lambda: f64,
    eps1: f64,
    eps3: f64,
    seed: u64,
) -> TrimmingReport {
    let mut checks = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7469_6d6d);
    for vm in vms {
        vertex_battery(scene, nbhd, vm, eps1, &mut rng, &mut checks);
    }
    for em in ems {
        edge_battery(scene, em, eps3, &mut rng, &mut checks);
    }
    let accepted = checks.iter().all(|c| c.pass);
    TrimmingReport { accepted, lambda, checks }
}

fn vertex_battery(
    scene: &Scene,
    nbhd: &NeighborhoodSystem,
    vm: &VertexModel,
    eps1: f64,
    rng: &mut ChaCha8Rng,
    checks: &mut Vec<CheckOutcome>,
) {
    let v = &scene.vertices[vm.site];
    let n = scene.n;
    let tp = &vm.tp;
    let site = vm.site;

    let mut c_fibres = CheckOutcome::new(&format!("trim-fibres[v{site}]"));
    let mut c_collar = CheckOutcome::new(&format!("preimage-in-collar[v{site}]"));
    let mut c_schiacciato = CheckOutcome::new(&format!("end-slab-agreement[v{site}]"));
    for trim in &tp.trims {
        if trim.j_set.len() != n {
            continue;
        }
        let Ok(chart) = tp.proj.face(&trim.j_set) else {
            c_fibres.fail(1.0);
            continue;
        };
        let (_, fi) = scene.site_of_cell[&trim.cell];
        let fsite = &scene.facets[fi];
        let vcoef_bound = {
            let b_norm2 = numerics::dot(&fsite.b_vec, &fsite.b_vec);
            let b_l1: f64 = fsite.b_vec.iter().map(|c| c.abs()).sum();
            to_f64(&nbhd.facets[fi].b_half) * b_norm2 / b_l1
        };
        let r = &trim.radii.r;
        for i in 0..5 {
            for j in 0..(if n == 2 { 5 } else { 1 }) {
                let mut q = vec![0.0; n + 1];
                numerics::axpy(&mut q, r[0] * (1.0 + 0.4 * i as f64), &chart.u_basis[0]);
                if n == 2 {
                    numerics::axpy(&mut q, r[1] * (1.0 + 0.4 * j as f64), &chart.u_basis[1]);
                }
                let Ok(seg) = tp.fibre_segment(trim, &q) else {
                    c_fibres.record(false, 1.0);
                    continue;
                };
                for p in [seg.endpoint_plus(), seg.endpoint_minus()] {
                    let class = tp.amoeba.classify(&p, 1e-5);
                    c_fibres.record(matches!(class, pants::AmoebaClass::Boundary(_)), 0.0);
                }
                for step in 1..5 {
                    let tau =
                        seg.tau_minus + (seg.tau_plus - seg.tau_minus) * step as f64 / 5.0;
                    let mut x = seg.base.clone();
                    numerics::axpy(&mut x, tau, &seg.dir);
                    if let Some(wplus) = tp.pants.h_invert(&x, None) {
                        let eps_used = if n == 2 { 0.5 * eps1 } else { eps1 };
                        let ok =
                            pants::w_eps_plus_contains(n, &trim.j_set, eps_used, &wplus, 1e-7)
                                .unwrap_or(false);
                        c_collar.record(ok, 0.0);
                        let y = torus_reduce(&wplus);
                        let okp =
                            tp.proj.project_y(&trim.j_set, &tp.pants, &y, 1e-11).is_ok();
                        c_collar.record(okp, 0.0);
                    }
                    let xg = scene.vertex_x_to_global(v, &x);
                    let (_, off) = scene.facet_x_split(fsite, &xg);
                    let resid = (off.abs() - vcoef_bound).max(0.0);
                    c_schiacciato.record(resid <= 0.0, resid);
                }
            }
        }
        // converse: slab points over Q inside H lie in the trim
        for _ in 0..30 {
            let mut q = vec![0.0; n + 1];
            numerics::axpy(&mut q, r[0] * (1.0 + rng.gen::<f64>()), &chart.u_basis[0]);
            if n == 2 {
                numerics::axpy(&mut q, r[1] * (1.0 + rng.gen::<f64>()), &chart.u_basis[1]);
            }
            let off = (2.0 * rng.gen::<f64>() - 1.0) * vcoef_bound;
            let voff_g = numerics::scale(&fsite.v_vec, off / numerics::dot(&fsite.v_vec, &fsite.v_vec).sqrt().powi(2).max(1e-300));
            // v_vec has |v| = 1/|b|; scale so the v-coefficient equals off
            let voff_g = numerics::scale(&voff_g, 1.0);
            let off_l = scene.vertex_x_to_local(v, &numerics::add(&v.pos, &voff_g));
            let mut x = q.clone();
            numerics::axpy(&mut x, 1.0, &off_l);
            if tp.amoeba.contains(&x, 1e-9) {
                let ok = tp.in_segment_trim(trim, Level::R, &x, 1e-7).unwrap_or(false);
                c_schiacciato.record(ok, 0.0);
            }
        }
    }
    checks.push(c_fibres);
    checks.push(c_collar);
    checks.push(c_schiacciato);

    let mut c_box = CheckOutcome::new(&format!("trimmed-amoeba-in-box[v{site}]"));
    let bbox = &nbhd.vertices[vm.site].b_box;
    let lo: Vec<f64> = bbox.lo.iter().map(to_f64).collect();
    let hi: Vec<f64> = bbox.hi.iter().map(to_f64).collect();
    let radius = tp.bounding_radius();
    let mut tested = 0;
    let mut attempts = 0;
    while tested < 200 && attempts < 20000 {
        attempts += 1;
        let x: Vec<f64> =
            (0..n + 1).map(|_| (2.0 * rng.gen::<f64>() - 1.0) * radius).collect();
        if !tp.in_h2(&x, Level::R2, Level::R2, 1e-9).unwrap_or(false) {
            continue;
        }
        tested += 1;
        let g = scene.vertex_x_to_global(v, &x);
        let inside = (0..g.len()).all(|i| g[i] >= lo[i] - 1e-12 && g[i] <= hi[i] + 1e-12);
        let resid = (0..g.len())
            .map(|i| (lo[i] - g[i]).max(g[i] - hi[i]).max(0.0))
            .fold(0.0f64, f64::max);
        c_box.record(inside, resid);
    }
    checks.push(c_box);

    if n == 2 {
        let mut c_bd = CheckOutcome::new(&format!("edge-slab-agreement[v{site}]"));
        let mut c_conn = CheckOutcome::new(&format!("ray-slice-connected[v{site}]"));
        for trim in &tp.trims {
            if trim.j_set.len() != 1 {
                continue;
            }
            let r = trim.radii.r[0];
            for fac in [1.15, 1.7] {
                match tp.ray_slice_connectivity(trim, Level::R1, r * fac, 16) {
                    Ok(conn) => c_conn
                        .record(conn.failures == 0 && conn.tested > 0, conn.failures as f64),
                    Err(_) => c_conn.record(false, 1.0),
                }
            }
            let (_, ei) = scene.site_of_cell[&trim.cell];
            let b_poly: Vec<Vec<f64>> =
                nbhd.edges[ei].b_poly.iter().map(|p| exact::ratvec_to_f64(p)).collect();
            let Ok(chart) = tp.proj.face(&trim.j_set) else { continue };
            for _ in 0..40 {
                let s0 = r * (1.0 + 1.5 * rng.gen::<f64>());
                let mut x = vec![0.0; 3];
                numerics::axpy(&mut x, s0, &chart.u_basis[0]);
                let i0 = rng.gen_range(0..b_poly.len());
                let i1 = rng.gen_range(0..b_poly.len());
                let u: f64 = rng.gen();
                let off_g: Vec<f64> =
                    (0..3).map(|k| u * b_poly[i0][k] + (1.0 - u) * b_poly[i1][k]).collect();
                let off_l = scene.vertex_x_to_local(v, &numerics::add(&v.pos, &off_g));
                numerics::axpy(&mut x, 1.0, &off_l);
                if tp.in_h1(&x, Level::R2, 1e-9).unwrap_or(false) {
                    let ok = tp
                        .in_component_trim(trim, Level::R, Level::R2, &x, 1e-7)
                        .unwrap_or(false);
                    c_bd.record(ok, 0.0);
                }
            }
        }
        checks.push(c_bd);
        checks.push(c_conn);
    }
}

fn edge_battery(
    scene: &Scene,
    em: &EdgeModel,
    eps3: f64,
    rng: &mut ChaCha8Rng,
    checks: &mut Vec<CheckOutcome>,
) {
    let site = em.site;
    let tp2 = &em.tp2;
    let e = &scene.edges[site];

    let mut c_collar = CheckOutcome::new(&format!("edge-collar[e{site}]"));
    for trim in &tp2.trims {
        let Ok(chart) = tp2.proj.face(&trim.j_set) else {
            c_collar.fail(1.0);
            continue;
        };
        for i in 0..6 {
            let s0 = trim.radii.r[0] * (1.0 + 0.45 * i as f64);
            let q: Vec<f64> = chart.u_basis[0].iter().map(|&u| u * s0).collect();
            let Ok(seg) = tp2.fibre_segment(trim, &q) else {
                c_collar.record(false, 1.0);
                continue;
            };
            for step in 1..5 {
                let tau = seg.tau_minus + (seg.tau_plus - seg.tau_minus) * step as f64 / 5.0;
                let mut x = seg.base.clone();
                numerics::axpy(&mut x, tau, &seg.dir);
                if let Some(w2) = tp2.pants.h_invert(&x, None) {
                    let ok = pants::w_eps_plus_contains(1, &trim.j_set, eps3, &w2, 1e-7)
                        .unwrap_or(false);
                    c_collar.record(ok, 0.0);
                }
            }
        }
    }
    checks.push(c_collar);

    // K-hexagon inside the two-dimensional amoeba (Proposition-Definition a)
    // K'_d hexagon inside the amoeba: the binding directions are the
    // negated generators, where ∂H sits at distance λ/2 from the origin.
    let mut c_k = CheckOutcome::new(&format!("k-hexagon-in-amoeba[e{site}]"));
    let lam = tp2.pants.lambda;
    let tk = 0.4 * lam;
    let hexdirs = [[1.0f64, 0.0], [0.0, 1.0], [-1.0, -1.0]];
    for a in &hexdirs {
        for b in &hexdirs {
            for (u, w) in [(1.0, 0.0), (0.5, 0.5), (0.7, 0.3)] {
                let p = [tk * (u * a[0] + w * b[0]), tk * (u * a[1] + w * b[1])];
                c_k.record(tp2.amoeba.contains(&p, 1e-9 * lam), 0.0);
                c_k.record(tp2.amoeba.contains(&[-p[0], -p[1]], 1e-9 * lam), 0.0);
            }
        }
    }
    checks.push(c_k);

    // amoeba body inside B_d (body_in_nbhd)
    let mut c_body = CheckOutcome::new(&format!("edge-body-in-bd[e{site}]"));
    let mut tested = 0;
    let mut attempts = 0;
    let radius = tp2.bounding_radius();
    while tested < 120 && attempts < 15000 {
        attempts += 1;
        let x = [
            (2.0 * rng.gen::<f64>() - 1.0) * radius,
            (2.0 * rng.gen::<f64>() - 1.0) * radius,
        ];
        if !tp2.in_h1(&x, Level::R1, 1e-9).unwrap_or(false) {
            continue;
        }
        tested += 1;
        let mut off_g = vec![0.0; 3];
        numerics::axpy(&mut off_g, x[0], &e.a_cols[0]);
        numerics::axpy(&mut off_g, x[1], &e.a_cols[1]);
        c_body.record(numerics::in_hull(&off_g, &em.b_poly, 1e-7), 0.0);
    }
    checks.push(c_body);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lift::scene::tests::example_curve_complex;

    #[test]
    fn curve_trimming_accepted_and_negative_control() {
        let scene = Scene::build(&example_curve_complex()).unwrap();
        let config = TrimmingConfig::new(0.1, 7);
        let (glued, report) = choose_trimming(&scene, &config).unwrap();
        assert!(report.accepted, "{:?}", report.first_failure());
        assert!(glued.params.lambda > 0.0);
        let nbhd = NeighborhoodSystem::build(&scene, &glued.params.t_exact).unwrap();
        let mut vms = Vec::new();
        for vi in 0..scene.vertices.len() {
            vms.push(
                build_vertex_model(&scene, &nbhd, vi, glued.params.lambda * 2.0).unwrap(),
            );
        }
        let rep2 = run_battery(
            &scene,
            &nbhd,
            &vms,
            &[],
            glued.params.lambda * 2.0,
            glued.params.eps1,
            glued.params.eps3,
            7,
        );
        assert!(!rep2.all_pass(), "inflated λ unexpectedly passed");
    }

    #[test]
    fn debug_surface_slice() {
        let scene =
            Scene::build(&crate::lift::scene::tests::two_vertex_surface_complex()).unwrap();
        let t_exact = exact::rat_frac(1, 10);
        let nbhd = NeighborhoodSystem::build(&scene, &t_exact).unwrap();
        for lam_scale in [0.25, 0.05, 0.01] {
            let vm = build_vertex_model(&scene, &nbhd, 1, lam_scale * 0.05).unwrap();
            for trim in &vm.tp.trims {
                if trim.j_set.len() != 1 { continue; }
                let r = trim.radii.r[0];
                for fac in [1.15, 1.7] {
                    match vm.tp.ray_slice_connectivity(trim, crate::lift::trim::Level::R1, r * fac, 16) {
                        Ok(c) => std::println!("lam={:.4} J={:?} fac={} tested={} failures={} v={} path={}", lam_scale*0.05, trim.j_set, fac, c.tested, c.failures, c.fail_v, c.fail_path),
                        Err(e) => std::println!("lam={:.4} J={:?} fac={} ERR {:?}", lam_scale*0.05, trim.j_set, fac, e),
                    }
                }
            }
        }
    }

    #[test]
    fn surface_trimming_accepted() {
        let scene =
            Scene::build(&crate::lift::scene::tests::two_vertex_surface_complex()).unwrap();
        let config = TrimmingConfig::new(0.1, 7);
        let (glued, report) = choose_trimming(&scene, &config).unwrap();
        assert!(report.accepted, "{:?}", report.first_failure());
        std::println!("surface lambda = {}", glued.params.lambda);
    }

    #[test]
    fn zero_t_rejected() {
        let scene = Scene::build(&example_curve_complex()).unwrap();
        let config = TrimmingConfig::new(0.0, 7);
        assert!(matches!(choose_trimming(&scene, &config), Err(LiftError::SearchFailed(_))));
    }

    #[test]
    fn smooth_step_profile() {
        assert_eq!(smooth_step(-0.2), 0.0);
        assert_eq!(smooth_step(1.3), 1.0);
        let mid = smooth_step(0.5);
        assert!((mid - 0.5).abs() < 1e-12);
        assert!(smooth_step(0.3) < smooth_step(0.7));
    }
}

//! Evaluation of the glued local models: edge models interpolating between
//! the vertex graphs and the flat edge pants, and facet models carrying the
//! η-weighted Legendre data over the inner polygons.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::coamoeba::{torus_reduce, PI};
use crate::numerics;
use crate::pants;

use super::models::{eta_end, smooth_step, smooth_step_deriv, EdgeModel, FacetBand, FacetModel, GluedModels, LiftPoint};
use super::scene::Scene;
use super::trim::Level;

/// Fibre parameter of an edge model: a point of the two-dimensional amoeba
/// with a sheet sign, or a waist point on a boundary curve.
#[derive(Clone, Debug)]
pub enum EdgeFibre {
    Interior { x2: Vec<f64>, sheet: i8 },
    Waist { k: usize, x2: Vec<f64> },
}

/// Full evaluation data of an edge model point.
#[derive(Clone, Debug)]
pub struct EdgeEval {
    pub point: LiftPoint,
    /// Fibre part of the x-output in the edge frame.
    pub v_total: Vec<f64>,
    /// L_d-offset coefficient (paired with m̂).
    pub w_total: f64,
    /// Value of the interpolated potential F_d.
    pub f_value: f64,
    /// η at this base coordinate (0 on the flat zone).
    pub eta: f64,
    /// 2D window coordinates of the fibre point (C⁺ representative).
    pub w2: Vec<f64>,
    pub sheet: i8,
}

impl GluedModels {
    /// Zone of an edge coordinate: the interpolating end (if any).
    pub fn edge_zone(&self, em: &EdgeModel, t: f64) -> Option<(usize, f64)> {
        for (i, end) in em.ends.iter().enumerate() {
            let c = end.sigma * (t - end.t_vertex);
            if c >= end.r - 1e-12 && c < end.rbar {
                return Some((i, c));
            }
        }
        None
    }

    /// Is t within the edge model's base range ρ_d (up to the vertex cuts at
    /// level r″)?
    pub fn edge_t_in_domain(&self, em: &EdgeModel, t: f64) -> bool {
        if t < em.rho.0 - 1e-12 || t > em.rho.1 + 1e-12 {
            return false;
        }
        for end in &em.ends {
            let c = end.sigma * (t - end.t_vertex);
            // the model hands over to the vertex at r″: its own domain is
            // c ≥ r (data exists down to r; the overlap band is [r, r″))
            if c < end.r - 1e-12 {
                return false;
            }
        }
        true
    }

    /// Evaluates an edge model at base coordinate t and fibre point.
    pub fn edge_eval(
        &self,
        scene: &Scene,
        em_idx: usize,
        t: f64,
        fib: &EdgeFibre,
    ) -> Option<EdgeEval> {
        let em = &self.edges[em_idx];
        let e = &scene.edges[em.site];
        if !self.edge_t_in_domain(em, t) {
            return None;
        }
        // fibre data
        let (x2, sheet, w2) = match fib {
            EdgeFibre::Interior { x2, sheet } => {
                let w2 = em.tp2.pants.h_invert(x2, None)?;
                (x2.clone(), *sheet, w2)
            }
            EdgeFibre::Waist { k, x2 } => {
                let w2 = pants::vertex_coords(1, *k);
                (x2.clone(), 1, w2)
            }
        };
        let psi = match fib {
            EdgeFibre::Waist { .. } => 0.0,
            _ => em.tp2.pants.f_plus(&w2),
        };
        let zone = self.edge_zone(em, t);
        let (v_total, w_total, f_value, eta) = match zone {
            None => (x2.clone(), 0.0, psi, 0.0),
            Some((end_idx, c)) => {
                let end = &em.ends[end_idx];
                let (eta, deta_dc) = eta_end(c, end);
                if eta == 0.0 {
                    (x2.clone(), 0.0, psi, 0.0)
                } else {
                    let gd = self.vertex_graph_over_edge(scene, em, end, c, &w2, sheet, None)?;
                    let g = gd.g_value;
                    let v: Vec<f64> = (0..2)
                        .map(|i| eta * gd.v2[i] + (1.0 - eta) * x2[i])
                        .collect();
                    // w_t = η·w + σ(−η′(G − Ψ))
                    let w_t = eta * gd.w - end.sigma * deta_dc * (g - psi);
                    (v, w_t, eta * g + (1.0 - eta) * psi, eta)
                }
            }
        };
        // final trim: h_{d,f,t} must stay below p″ on every facet cone
        for trim in &em.tp2.trims {
            let coord = em.tp2.proj.cone_coords(&trim.j_set, &v_total).ok()?[0];
            if coord >= trim.radii.r2[0] {
                return None;
            }
        }
        let yl: Vec<f64> = w2.iter().map(|&c| c * f64::from(sheet.signum() as i32)).collect();
        let x = scene.edge_x_to_global(e, t, &v_total);
        let y = scene.edge_y_to_global(e, &yl, w_total);
        Some(EdgeEval {
            point: LiftPoint { x, y: torus_reduce(&y).0 },
            v_total,
            w_total,
            f_value,
            eta,
            w2,
            sheet,
        })
    }

    /// The base-side cutoff η of a facet model and its gradient, built from
    /// the nested inner H-representations: 1 outside ρ″, 0 on ρ′.
    pub fn facet_eta(&self, fm: &FacetModel, base: &[f64]) -> (f64, Vec<f64>) {
        let j = base.len();
        let mut sigmas: Vec<(f64, Vec<f64>)> = Vec::new();
        for (u, o2, o1) in &fm.eta_pairs {
            let denom = o2 - o1;
            let s = (o2 - numerics::dot(u, base)) / denom;
            let val = smooth_step(s);
            let dval = smooth_step_deriv(s);
            let grad: Vec<f64> = (0..j).map(|i| -dval * u[i] / denom).collect();
            sigmas.push((val, grad));
        }
        // η = 1 − Π σ_k
        let mut prod = 1.0;
        for (v, _) in &sigmas {
            prod *= v;
        }
        let mut grad = vec![0.0; j];
        for (k, (_, gk)) in sigmas.iter().enumerate() {
            let mut rest = 1.0;
            for (l, (v, _)) in sigmas.iter().enumerate() {
                if l != k {
                    rest *= v;
                }
            }
            for i in 0..j {
                grad[i] -= rest * gk[i];
            }
        }
        (1.0 - prod, grad)
    }
}

/// Legendre data of a facet chart point pulled from a neighboring model.
#[derive(Clone, Debug)]
pub struct FacetGraphData {
    /// Fibre coefficient along the dual direction (∂G/∂s).
    pub v_s: f64,
    /// −∂G/∂b coefficients (reduced mod π).
    pub w: Vec<f64>,
    /// Anchored Legendre value.
    pub g_value: f64,
}

/// Full evaluation data of a facet model point.
#[derive(Clone, Debug)]
pub struct FacetEval {
    pub point: LiftPoint,
    pub v_total: f64,
    pub w_total: Vec<f64>,
    pub f_value: f64,
    pub eta: f64,
    /// Which band supplied the data (index into fm.bands), if any.
    pub band: Option<usize>,
}

impl GluedModels {
    /// Facet-model domain: base in ρ_f.
    pub fn facet_base_in_domain(&self, fm: &FacetModel, base: &[f64]) -> bool {
        fm.in_level(&fm.rho_h, base, 1e-12)
    }

    /// Source band at a base point: vertex corners win, then edge strips.
    pub fn facet_band_at(
        &self,
        scene: &Scene,
        fm: &FacetModel,
        base: &[f64],
    ) -> Option<usize> {
        let f = &scene.facets[fm.site];
        let bg = scene.facet_x_to_global(f, base, 0.0);
        for (bi, band) in fm.bands.iter().enumerate() {
            if let FacetBand::Vertex { vertex_model } = band {
                let vm = &self.vertices[*vertex_model];
                let v = &scene.vertices[vm.site];
                let x_loc = scene.vertex_x_to_local(v, &bg);
                let Some(trim) = vm.tp.trim_of_cell(f.cell) else { continue };
                if !vm.tp.q_contains(trim, Level::R, &x_loc, 1e-9) {
                    continue;
                }
                // not beyond the edge cuts at level r′
                let mut past_edge_cut = false;
                for other in &vm.tp.trims {
                    if other.j_set.len() == 1
                        && scene.n == 2
                        && vm.tp.q_contains(other, Level::R1, &x_loc, -1e-9)
                        && vm.tp.in_cone_sector(other, &x_loc, 1e-7)
                    {
                        past_edge_cut = true;
                    }
                }
                if past_edge_cut {
                    continue;
                }
                // not beyond the deep corner cut r′ of this cone
                if vm.tp.q_contains(trim, Level::R1, &x_loc, -1e-9) {
                    continue;
                }
                return Some(bi);
            }
        }
        for (bi, band) in fm.bands.iter().enumerate() {
            if let FacetBand::Edge { edge_model, .. } = band {
                let em = &self.edges[*edge_model];
                let e = &scene.edges[em.site];
                let (t, v2) = scene.edge_x_split(e, &bg);
                if t < em.rho.0 - 1e-12 || t > em.rho.1 + 1e-12 {
                    continue;
                }
                let Some((jl, p, _p2, p1)) = em.p_of_cell(f.cell) else { continue };
                let Ok(coord) = em.tp2.proj.cone_coords(&[jl], &v2) else { continue };
                if coord[0] >= p - 1e-9 && coord[0] < p1 {
                    return Some(bi);
                }
            }
        }
        None
    }

    /// Evaluates a facet model at base coordinates and circle coordinate s.
    pub fn facet_eval(
        &self,
        scene: &Scene,
        fm_idx: usize,
        base: &[f64],
        s: f64,
    ) -> Option<FacetEval> {
        let fm = &self.facets[fm_idx];
        let f = &scene.facets[fm.site];
        if !self.facet_base_in_domain(fm, base) {
            return None;
        }
        let (eta, grad_eta) = self.facet_eta(fm, base);
        if eta <= 0.0 {
            // flat zone: the model is exactly the product piece
            let x = scene.facet_x_to_global(f, base, 0.0);
            let y = scene.facet_y_to_global(f, s, &vec![0.0; base.len()]);
            return Some(FacetEval {
                point: LiftPoint { x, y: torus_reduce(&y).0 },
                v_total: 0.0,
                w_total: vec![0.0; base.len()],
                f_value: 0.0,
                eta: 0.0,
                band: None,
            });
        }
        let bi = self.facet_band_at(scene, fm, base)?;
        let gd = match &fm.bands[bi] {
            FacetBand::Vertex { vertex_model } => {
                self.vertex_graph_over_facet(scene, fm, *vertex_model, base, s)?
            }
            FacetBand::Edge { edge_model, gamma } => {
                let mut g = self.edge_graph_over_facet(scene, fm, *edge_model, base, s)?;
                g.g_value += gamma;
                g
            }
        };
        let v_total = eta * gd.v_s;
        let w_total: Vec<f64> = (0..base.len())
            .map(|i| eta * gd.w[i] - grad_eta[i] * gd.g_value)
            .collect();
        let x = scene.facet_x_to_global(f, base, v_total);
        let y = scene.facet_y_to_global(f, s, &w_total);
        Some(FacetEval {
            point: LiftPoint { x, y: torus_reduce(&y).0 },
            v_total,
            w_total,
            f_value: eta * gd.g_value,
            eta,
            band: Some(bi),
        })
    }

    /// Legendre data over a facet chart from a vertex model: bisection along
    /// the monotone fibre of the face projection.
    pub fn vertex_graph_over_facet(
        &self,
        scene: &Scene,
        fm: &FacetModel,
        vm_idx: usize,
        base: &[f64],
        s_target: f64,
    ) -> Option<FacetGraphData> {
        let fm_site = &scene.facets[fm.site];
        let vm = &self.vertices[vm_idx];
        let v = &scene.vertices[vm.site];
        let trim = vm.tp.trim_of_cell(fm_site.cell)?;
        let bg = scene.facet_x_to_global(fm_site, base, 0.0);
        let b_loc = scene.vertex_x_to_local(v, &bg);
        let seg = vm.tp.fibre_segment(trim, &b_loc).ok()?;
        let jset = trim.j_set.clone();
        // s-value of the projected torus point at fibre parameter τ
        let s_of = |tau: f64, sheet: i8| -> Option<f64> {
            let mut x = seg.base.clone();
            numerics::axpy(&mut x, tau, &seg.dir);
            let w = vm.tp.pants.h_invert(&x, None)?;
            let y_loc: Vec<f64> =
                if sheet >= 0 { w } else { w.iter().map(|&c| -c).collect() };
            let (wp, _) = vm.tp.proj.project_y_window(&jset, &y_loc).ok()?;
            let y_g = scene.vertex_y_to_global(v, &wp);
            Some(scene.facet_y_split(fm_site, &y_g).0)
        };
        let wrap = |d: f64| d - PI * (d / PI).round();
        let span = seg.tau_plus - seg.tau_minus;
        let delta = 1e-4 * span;
        for sheet in [1i8, -1] {
            let lo_tau = seg.tau_minus + delta;
            let hi_tau = seg.tau_plus - delta;
            let (Some(slo), Some(shi)) = (s_of(lo_tau, sheet), s_of(hi_tau, sheet)) else {
                continue;
            };
            let rlo = wrap(slo - s_target);
            let rhi = wrap(shi - s_target);
            if rlo == 0.0 || rhi == 0.0 || (rlo < 0.0) != (rhi < 0.0) {
                // bisect
                let mut a = lo_tau;
                let mut b = hi_tau;
                let mut ra = rlo;
                for _ in 0..70 {
                    let m = 0.5 * (a + b);
                    let Some(sm) = s_of(m, sheet) else { return None };
                    let rm = wrap(sm - s_target);
                    if rm == 0.0 {
                        a = m;
                        break;
                    }
                    if (rm < 0.0) == (ra < 0.0) {
                        a = m;
                        ra = rm;
                    } else {
                        b = m;
                    }
                }
                let tau = 0.5 * (a + b);
                #[cfg(feature = "std")]
                if option_env!("TROPLIFT_DEBUG").is_some() {
                    std::eprintln!("    v-route: sheet={sheet} tau={tau:.5}");
                }
                return self.facet_data_at(scene, fm, vm_idx, &seg, tau, sheet, base);
            }
        }
        None
    }

    #[allow(clippy::too_many_arguments)]
    fn facet_data_at(
        &self,
        scene: &Scene,
        fm: &FacetModel,
        vm_idx: usize,
        seg: &super::trim::FibreSegment,
        tau: f64,
        sheet: i8,
        base: &[f64],
    ) -> Option<FacetGraphData> {
        let fm_site = &scene.facets[fm.site];
        let vm = &self.vertices[vm_idx];
        let v = &scene.vertices[vm.site];
        let mut x = seg.base.clone();
        numerics::axpy(&mut x, tau, &seg.dir);
        let w = vm.tp.pants.h_invert(&x, None)?;
        let y_loc: Vec<f64> = if sheet >= 0 { w.clone() } else { w.iter().map(|&c| -c).collect() };
        let x_g = scene.vertex_x_to_global(v, &x);
        let y_g = scene.vertex_y_to_global(v, &y_loc);
        let (_, v_s) = scene.facet_x_split(fm_site, &x_g);
        let (_, wraw) = scene.facet_y_split(fm_site, &y_g);
        let wred: Vec<f64> = wraw.iter().map(|&c| c - PI * (c / PI).round()).collect();
        let fval = {
            let (sg, win) = vm.tp.pants.plus_rep(&torus_reduce(&y_loc), 1e-9)?;
            f64::from(sg) * vm.tp.pants.f_plus(&win)
        };
        // Legendre anchor: base coordinates relative to the vertex position
        let (b_vert, _) = scene.facet_x_split(fm_site, &v.pos);
        let b_rel: Vec<f64> = numerics::sub(base, &b_vert);
        let g_value = fval - numerics::dot(&b_rel, &wred);
        Some(FacetGraphData { v_s, w: wred, g_value })
    }

    /// Legendre data over a facet chart from an edge model (surface case):
    /// damped Newton on the two-dimensional fibre coordinates.
    pub fn edge_graph_over_facet(
        &self,
        scene: &Scene,
        fm: &FacetModel,
        em_idx: usize,
        base: &[f64],
        s_target: f64,
    ) -> Option<FacetGraphData> {
        let fm_site = &scene.facets[fm.site];
        let em = &self.edges[em_idx];
        let e = &scene.edges[em.site];
        let bg = scene.facet_x_to_global(fm_site, base, 0.0);
        let (t, v2b) = scene.edge_x_split(e, &bg);
        let (jl, _, _, _) = em.p_of_cell(fm_site.cell)?;
        let p_target = em.tp2.proj.cone_coords(&[jl], &v2b).ok()?[0];
        let wrap = |d: f64| d - PI * (d / PI).round();
        // residuals over x2 and sheet
        let eval = |x2: &[f64], sheet: i8| -> Option<(Vec<f64>, EdgeGraphBundle)> {
            let ev = self.edge_eval(
                scene,
                em_idx,
                t,
                &EdgeFibre::Interior { x2: x2.to_vec(), sheet },
            )?;
            let p_out = em.tp2.proj.cone_coords(&[jl], &ev.v_total).ok()?[0];
            let (s_out, _) = scene.facet_y_split(fm_site, &{
                // unreduced torus representative from edge frame data
                let yl: Vec<f64> =
                    ev.w2.iter().map(|&c| c * f64::from(ev.sheet.signum() as i32)).collect();
                scene.edge_y_to_global(e, &yl, ev.w_total)
            });
            let res = vec![p_out - p_target, wrap(s_out - s_target)];
            Some((res, EdgeGraphBundle { ev }))
        };
        // seed: along the jl-ray of the 2D fan at the target radius
        let gen2 = match jl {
            0 => vec![-1.0, -1.0],
            k => {
                let mut g = vec![0.0, 0.0];
                g[k - 1] = 1.0;
                g
            }
        };
        for sheet in [1i8, -1] {
            let mut x2: Vec<f64> = gen2.iter().map(|&g| g * p_target.max(0.05 * em.tp2.pants.lambda)).collect();
            // nudge off the axis so the inversion starts in the interior
            x2[0] += 0.03 * em.tp2.pants.lambda;
            x2[1] += 0.017 * em.tp2.pants.lambda;
            let Some(mut cur) = eval(&x2, sheet) else { continue };
            let mut converged = false;
            for _ in 0..50 {
                let rn = numerics::norm(&cur.0);
                if rn < 1e-10 {
                    converged = true;
                    break;
                }
                let h = 1e-6 * em.tp2.pants.lambda;
                let mut jac = vec![vec![0.0; 2]; 2];
                let mut ok = true;
                for k in 0..2 {
                    let mut xp = x2.clone();
                    xp[k] += h;
                    match eval(&xp, sheet) {
                        Some((rp, _)) => {
                            for i in 0..2 {
                                jac[i][k] = (rp[i] - cur.0[i]) / h;
                            }
                        }
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
                if !ok {
                    break;
                }
                let mut rhs: Vec<f64> = cur.0.iter().map(|&r| -r).collect();
                let Some(step) = numerics::solve(&mut jac, &mut rhs) else { break };
                let mut alpha = 1.0;
                let mut improved = false;
                for _ in 0..30 {
                    let cand: Vec<f64> = (0..2).map(|i| x2[i] + alpha * step[i]).collect();
                    if let Some(next) = eval(&cand, sheet) {
                        if numerics::norm(&next.0) < rn {
                            x2 = cand;
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
            if !converged && numerics::norm(&cur.0) > 1e-8 {
                continue;
            }
            let ev = cur.1.ev;
            #[cfg(feature = "std")]
            if option_env!("TROPLIFT_DEBUG").is_some() {
                std::eprintln!(
                    "    e-route: sheet={} eta={:.3} f_value={:.5e} w_total={:.5e}",
                    ev.sheet, ev.eta, ev.f_value, ev.w_total
                );
            }
            // facet-frame data of the edge model point
            let (_, v_s) = scene.facet_x_split(fm_site, &ev.point.x);
            let yl: Vec<f64> =
                ev.w2.iter().map(|&c| c * f64::from(ev.sheet.signum() as i32)).collect();
            let y_unred = scene.edge_y_to_global(e, &yl, ev.w_total);
            let (_, wraw) = scene.facet_y_split(fm_site, &y_unred);
            let wred: Vec<f64> = wraw.iter().map(|&c| c - PI * (c / PI).round()).collect();
            // master-potential accounting: d(F_d + t·w_t) = (x − b_ď)·dy on
            // the edge graph, so the facet-chart Legendre value measures the
            // base relative to the facet coordinates of b_ď.
            let (b_anchor, _) = scene.facet_x_split(fm_site, &e.anchor_pt);
            let b_rel = numerics::sub(base, &b_anchor);
            let g_raw = ev.f_value + t * ev.w_total - numerics::dot(&b_rel, &wred);
            return Some(FacetGraphData { v_s, w: wred, g_value: g_raw });
        }
        None
    }
}

struct EdgeGraphBundle {
    ev: EdgeEval,
}

/// Fits the additive constants of the facet edge bands by matching the
/// vertex-band data on overlaps; returns the worst disagreement of the
/// matched constants across the overlap samples (the patch-agreement
/// residual of the Legendre data).
pub fn fit_facet_gammas(scene: &Scene, glued: &mut GluedModels) -> f64 {
    let mut worst: f64 = 0.0;
    for fm_idx in 0..glued.facets.len() {
        let nbands = glued.facets[fm_idx].bands.len();
        for bi in 0..nbands {
            let FacetBand::Edge { edge_model, .. } = glued.facets[fm_idx].bands[bi] else {
                continue;
            };
            // overlap samples: near each end of the edge, at fibre depth
            // between p and p′ of this facet
            let em_site = glued.edges[edge_model].site;
            let fm_site_idx = glued.facets[fm_idx].site;
            let f = &scene.facets[fm_site_idx];
            let e = &scene.edges[em_site];
            let Some((_jl, p, _, p1)) = glued.edges[edge_model].p_of_cell(f.cell) else {
                continue;
            };
            let mut diffs: Vec<f64> = Vec::new();
            let ends: Vec<super::models::EdgeEnd> = glued.edges[edge_model].ends.clone();
            for end in &ends {
                let vm_idx = end.vertex_model;
                for frac_c in [0.3, 0.6] {
                    for frac_p in [0.25, 0.6] {
                        for s in [0.6, 1.9] {
                            let c = end.r + frac_c * (end.r2 - end.r);
                            let t = end.t_vertex + end.sigma * c;
                            let depth = p + frac_p * (p1 - p);
                            // base point: on the facet plane at (t, depth)
                            let dirg = {
                                let fdir = super::inner::fibre_dir_exact(scene, em_site, f.cell);
                                crate::exact::ratvec_to_f64(&fdir)
                            };
                            let kappa = if _jl == 0 {
                                -numerics::dot(&dirg, &e.b_cols[0])
                            } else {
                                numerics::dot(&dirg, &e.b_cols[_jl - 1])
                            };
                            let mut bg = e.anchor_pt.clone();
                            numerics::axpy(&mut bg, t, &e.m_dir);
                            numerics::axpy(&mut bg, depth / kappa, &dirg);
                            let (base, _) = scene.facet_x_split(f, &bg);
                            let fmm = &glued.facets[fm_idx];
                            let Some(gv) = glued.vertex_graph_over_facet(scene, fmm, vm_idx, &base, s)
                            else {
                                continue;
                            };
                            let Some(ge) =
                                glued.edge_graph_over_facet(scene, fmm, edge_model, &base, s)
                            else {
                                continue;
                            };
                            #[cfg(feature = "std")]
                            if option_env!("TROPLIFT_DEBUG").is_some() {
                                std::eprintln!(
                                    "  sample end_t={} fc={frac_c} fp={frac_p} s={s}: dv={:.3e} (gv={:.6e} ge={:.6e})",
                                    end.t_vertex, gv.g_value - ge.g_value, gv.g_value, ge.g_value
                                );
                            }
                            diffs.push(gv.g_value - ge.g_value);
                        }
                    }
                }
            }
            if diffs.len() >= 2 {
                #[cfg(feature = "std")]
                if option_env!("TROPLIFT_DEBUG").is_some() {
                    std::eprintln!("band fm={fm_idx} em={edge_model}: diffs {:?}", diffs);
                }
                let mean: f64 = diffs.iter().sum::<f64>() / diffs.len() as f64;
                let spread = diffs
                    .iter()
                    .map(|d| (d - mean).abs())
                    .fold(0.0f64, f64::max);
                worst = worst.max(spread);
                if let FacetBand::Edge { gamma, .. } = &mut glued.facets[fm_idx].bands[bi] {
                    *gamma = mean;
                }
            }
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lift::models::{choose_trimming, TrimmingConfig};
    use crate::lift::scene::tests::example_curve_complex;
    use crate::lift::Scene;

    #[test]
    fn curve_facet_flat_zone_is_product() {
        let scene = Scene::build(&example_curve_complex()).unwrap();
        let (glued, _) = choose_trimming(&scene, &TrimmingConfig::new(0.1, 7)).unwrap();
        // the middle of a bounded facet is flat: points land exactly on
        // f̌ × T_f
        for fm_idx in 0..glued.facets.len() {
            let fm = &glued.facets[fm_idx];
            let f = &scene.facets[fm.site];
            let cell = &scene.complex.cells[f.cell];
            if !cell.rays.is_empty() {
                continue;
            }
            // base at the anchor (centre) of the facet
            let ev = glued.facet_eval(&scene, fm_idx, &[0.0], 0.7).unwrap();
            assert_eq!(ev.eta, 0.0);
            assert!(numerics::norm(&numerics::sub(&ev.point.x, &f.base_anchor)) < 1e-12);
        }
    }

    #[test]
    fn curve_facet_band_matches_vertex_graph() {
        // on the η ≡ 1 part of the band the facet point equals the vertex
        // model graph point (the overlap equality)
        let scene = Scene::build(&example_curve_complex()).unwrap();
        let (glued, _) = choose_trimming(&scene, &TrimmingConfig::new(0.1, 7)).unwrap();
        let mut checked = 0;
        for fm_idx in 0..glued.facets.len() {
            let fm = glued.facets[fm_idx].clone();
            let f = &scene.facets[fm.site];
            for band in &fm.bands {
                let FacetBand::Vertex { vertex_model } = band else { continue };
                let vm = &glued.vertices[*vertex_model];
                let v = &scene.vertices[vm.site];
                let trim = vm.tp.trim_of_cell(f.cell).unwrap();
                // base point between r and r″ along the cone
                let c = 0.5 * (trim.radii.r[0] + trim.radii.r2[0]);
                let chart = vm.tp.proj.face(&trim.j_set).unwrap();
                let xg = {
                    let mut xl = alloc::vec![0.0; 2];
                    numerics::axpy(&mut xl, c, &chart.u_basis[0]);
                    scene.vertex_x_to_global(v, &xl)
                };
                let (base, _) = scene.facet_x_split(f, &xg);
                for s in [0.4, 1.1, 2.2] {
                    let Some(ev) = glued.facet_eval(&scene, fm_idx, &base, s) else {
                        continue;
                    };
                    assert!(ev.eta > 0.999, "band point not in the η=1 zone");
                    // the same point from the vertex side: invert the facet
                    // data and compare 6D positions
                    let gd = glued
                        .vertex_graph_over_facet(&scene, &fm, *vertex_model, &base, s)
                        .unwrap();
                    let x_expect = scene.facet_x_to_global(f, &base, gd.v_s);
                    let dx = numerics::norm(&numerics::sub(&ev.point.x, &x_expect));
                    assert!(dx < 1e-8, "x mismatch {dx}");
                    checked += 1;
                }
            }
        }
        assert!(checked > 10, "too few band samples checked: {checked}");
    }
}

//! Trimming of a rescaled pair of pants over the cone ends of its fan.
//!
//! Over a cone Γ_J of dimension n the trimmed end H_{r_J} fibres into
//! segments I_{J,x} cut out of the fibre line of x_J between its nearest
//! boundary-surface crossings. Over rays (|J| = 1 < n) the end is the
//! bundle of connected components of the fibre planes inside the
//! once-trimmed region H^[1].

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::numerics;
use crate::pants::{AmoebaRegion, PantsModel};
use crate::projections::ProjectionSystem;

use super::LiftError;

/// Which of the nested radii collections a test runs against.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Level {
    /// r: the outermost trim (faces of the inner polyhedra ρ).
    R,
    /// r″: the final model trim (from ρ″).
    R2,
    /// r′: the deepest trim, bounding where Legendre data is collected (ρ′).
    R1,
}

/// Cone-coordinate radii of the three nested trims of one cone.
#[derive(Clone, Debug)]
pub struct TrimRadii {
    pub r: Vec<f64>,
    pub r2: Vec<f64>,
    pub r1: Vec<f64>,
}

impl TrimRadii {
    pub fn at(&self, level: Level) -> &[f64] {
        match level {
            Level::R => &self.r,
            Level::R2 => &self.r2,
            Level::R1 => &self.r1,
        }
    }

    pub fn r_minus(&self, level: Level) -> f64 {
        self.at(level).iter().fold(f64::INFINITY, |a, &b| a.min(b))
    }

    pub fn r_plus(&self, level: Level) -> f64 {
        self.at(level).iter().fold(0.0f64, |a, &b| a.max(b))
    }
}

#[derive(Clone, Debug)]
pub struct ConeTrim {
    pub j_set: Vec<usize>,
    /// Complex cell whose local cone this is.
    pub cell: usize,
    pub radii: TrimRadii,
}

/// A λ-rescaled pair of pants with its compatible projections and the trim
/// data of every cone of its fan.
#[derive(Clone, Debug)]
pub struct TrimmedPants {
    pub pants: PantsModel,
    pub amoeba: AmoebaRegion,
    pub proj: ProjectionSystem,
    pub trims: Vec<ConeTrim>,
}

/// The I_{J,x} fibre segment over a point of a dimension-n cone.
#[derive(Clone, Debug)]
pub struct FibreSegment {
    /// Base point x_J(x) of the fibre.
    pub base: Vec<f64>,
    /// Fibre direction (spanning L_J^⊥ for |J| = n).
    pub dir: Vec<f64>,
    pub tau_minus: f64,
    pub tau_plus: f64,
}

impl FibreSegment {
    pub fn endpoint_plus(&self) -> Vec<f64> {
        let mut p = self.base.clone();
        numerics::axpy(&mut p, self.tau_plus, &self.dir);
        p
    }

    pub fn endpoint_minus(&self) -> Vec<f64> {
        let mut p = self.base.clone();
        numerics::axpy(&mut p, self.tau_minus, &self.dir);
        p
    }
}

impl TrimmedPants {
    pub fn new(
        n: usize,
        lambda: f64,
        proj: ProjectionSystem,
        trims: Vec<ConeTrim>,
    ) -> TrimmedPants {
        TrimmedPants {
            pants: PantsModel::new(n, lambda),
            amoeba: AmoebaRegion::new(n, lambda),
            proj,
            trims,
        }
    }

    pub fn n(&self) -> usize {
        self.pants.n
    }

    pub fn trim_of_cell(&self, cell: usize) -> Option<&ConeTrim> {
        self.trims.iter().find(|t| t.cell == cell)
    }

    /// Q_{r_J} membership of the x_J-projection of x.
    pub fn q_contains(&self, trim: &ConeTrim, level: Level, x: &[f64], tol: f64) -> bool {
        let Ok(t) = self.proj.cone_coords(&trim.j_set, x) else {
            return false;
        };
        t.iter().zip(trim.radii.at(level)).all(|(&c, &s)| c >= s - tol)
    }

    /// The fibre segment through the x_J-projection of x (|J| = n cones).
    pub fn fibre_segment(&self, trim: &ConeTrim, x: &[f64]) -> Result<FibreSegment, LiftError> {
        let base = self
            .proj
            .project_x(&trim.j_set, x)
            .map_err(|_| LiftError::TransversalityFailed)?;
        let chart = self.proj.face(&trim.j_set).map_err(|_| LiftError::TransversalityFailed)?;
        if chart.v_basis.len() != 1 {
            return Err(LiftError::TransversalityFailed);
        }
        let dir = chart.v_basis[0].clone();
        if !self.amoeba.contains(&base, 1e-9) {
            return Err(LiftError::TransversalityFailed);
        }
        let tau_plus = self.exit_time(&base, &dir)?;
        let neg: Vec<f64> = dir.iter().map(|&c| -c).collect();
        let tau_minus = -self.exit_time(&base, &neg)?;
        Ok(FibreSegment { base, dir, tau_minus, tau_plus })
    }

    /// First exit of the amoeba region along a ray (expansion + bisection).
    fn exit_time(&self, base: &[f64], dir: &[f64]) -> Result<f64, LiftError> {
        let lam = self.pants.lambda;
        let probe = |tau: f64| -> bool {
            let mut p = base.to_vec();
            numerics::axpy(&mut p, tau, dir);
            self.amoeba.contains(&p, 1e-9)
        };
        let mut step = 0.05 * lam;
        let mut inside = 0.0;
        let mut outside = None;
        for _ in 0..200 {
            let cand = inside + step;
            if probe(cand) {
                inside = cand;
                step *= 1.6;
            } else {
                outside = Some(cand);
                break;
            }
        }
        let Some(mut hi) = outside else {
            return Err(LiftError::TransversalityFailed);
        };
        let mut lo = inside;
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if probe(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Membership in the segment-type trimmed end H_{r_J}, |J| = n.
    pub fn in_segment_trim(
        &self,
        trim: &ConeTrim,
        level: Level,
        x: &[f64],
        tol: f64,
    ) -> Result<bool, LiftError> {
        if !self.q_contains(trim, level, x, tol) {
            return Ok(false);
        }
        if !self.amoeba.contains(x, tol) {
            return Ok(false);
        }
        let seg = self.fibre_segment(trim, x)?;
        let rel = numerics::sub(x, &seg.base);
        let tau = numerics::dot(&rel, &seg.dir) / numerics::dot(&seg.dir, &seg.dir);
        Ok(tau >= seg.tau_minus - tol && tau <= seg.tau_plus + tol)
    }

    /// H^[1]: the amoeba minus all segment-type trims at the given level.
    pub fn in_h1(&self, x: &[f64], seg_level: Level, tol: f64) -> Result<bool, LiftError> {
        if !self.amoeba.contains(x, tol) {
            return Ok(false);
        }
        let n = self.n();
        for trim in &self.trims {
            if trim.j_set.len() == n && self.in_segment_trim(trim, seg_level, x, tol)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// H^[2]: H^[1] minus the ray-cone trims. For n = 1 the two levels
    /// coincide and there are no component-type cones.
    pub fn in_h2(
        &self,
        x: &[f64],
        seg_level: Level,
        comp_level: Level,
        tol: f64,
    ) -> Result<bool, LiftError> {
        if !self.in_h1(x, seg_level, tol)? {
            return Ok(false);
        }
        let n = self.n();
        if n > 1 {
            for trim in &self.trims {
                if trim.j_set.len() == 1
                    && self.q_contains(trim, comp_level, x, tol)
                    && self.in_cone_sector(trim, x, tol)
                {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// V_J membership in the local frame: the trimmed end stays inside its
    /// cone sector, which separates the fibre component containing the axis
    /// from the other legs of the slice.
    pub fn in_cone_sector(&self, trim: &ConeTrim, x: &[f64], tol: f64) -> bool {
        crate::pants::v_contains(self.n(), &trim.j_set, x, tol.max(1e-9)).unwrap_or(false)
    }

    /// Membership in the component-type trimmed end (|J| = 1 < n): the
    /// scalar radius test together with the H^[1] and cone-sector tests.
    pub fn in_component_trim(
        &self,
        trim: &ConeTrim,
        level: Level,
        seg_level: Level,
        x: &[f64],
        tol: f64,
    ) -> Result<bool, LiftError> {
        if !self.q_contains(trim, level, x, tol) || !self.in_cone_sector(trim, x, tol) {
            return Ok(false);
        }
        self.in_h1(x, seg_level, tol)
    }

    /// Bounding radius of the trimmed region, for sampling boxes.
    pub fn bounding_radius(&self) -> f64 {
        let mut r = 2.0 * self.pants.lambda;
        for trim in &self.trims {
            r = r.max(1.5 * trim.radii.r_plus(Level::R1) + 2.0 * self.pants.lambda);
        }
        r
    }

    /// Checks on the ray-cone slice (n = 2): every sampled point of the
    /// fibre plane lying in H^[1] past the radius must (a) lie in the cone
    /// neighborhood V_J (the trimmed end stays inside its cone sector), and
    /// (b) connect to the cone axis by the coordinate-aligned shrink path
    /// inside the amoeba. Together with the slab-agreement checks this
    /// certifies that the trim region is the connected component of the
    /// fibre slice containing the axis.
    pub fn ray_slice_connectivity(
        &self,
        trim: &ConeTrim,
        seg_level: Level,
        scalar: f64,
        per_leg: usize,
    ) -> Result<SliceConnectivity, LiftError> {
        let chart = self.proj.face(&trim.j_set).map_err(|_| LiftError::TransversalityFailed)?;
        if chart.v_basis.len() != 2 {
            return Err(LiftError::TransversalityFailed);
        }
        let n = self.n();
        let j = trim.j_set[0];
        let u = &chart.u_basis[0];
        let base: Vec<f64> = u.iter().map(|&c| scalar * c).collect();
        let radius = self.bounding_radius();
        let lam = self.pants.lambda;
        let mut tested = 0;
        let mut failures = 0;
        let mut fail_v = 0;
        let mut fail_path = 0;
        // map to coordinates where the cone axis is a coordinate axis
        let to_axis_frame = |x: &[f64]| -> Vec<f64> {
            if j == 0 {
                crate::coamoeba::apply_rstar(n, 1, x)
            } else {
                x.to_vec()
            }
        };
        let from_axis_frame = to_axis_frame; // the swap is an involution
        let axis_coord = if j == 0 { 0 } else { j - 1 };
        let legs = [[1.0f64, 0.0], [0.0, 1.0], [-1.0, -1.0], [1.0, -0.4], [-0.4, 1.0]];
        for leg in legs {
            for i in 0..per_leg {
                for jw in 0..7 {
                    let along = (i as f64 + 0.5) / per_leg as f64 * radius;
                    let across = ((jw as f64 + 0.5) / 7.0 * 2.0 - 1.0)
                        * (2.0 * lam).min(4.0 * lam * lam / (1.0 + along));
                    let a = leg[0] * along - leg[1] * across * 0.6;
                    let b = leg[1] * along + leg[0] * across * 0.6;
                    let mut p = base.clone();
                    numerics::axpy(&mut p, a, &chart.v_basis[0]);
                    numerics::axpy(&mut p, b, &chart.v_basis[1]);
                    if !self.in_h1(&p, seg_level, 1e-9)?
                        || !self.q_contains(trim, Level::R, &p, 0.0)
                        || !self.in_cone_sector(trim, &p, 1e-7)
                    {
                        continue;
                    }
                    tested += 1;
                    let ok_v = true;
                    // (b) shrink path in the axis-aligned coordinates
                    let pf = to_axis_frame(&p);
                    let mut ok_path = true;
                    for step in 1..=32 {
                        let sfac = 1.0 - step as f64 / 32.0;
                        let q: Vec<f64> = (0..pf.len())
                            .map(|k| if k == axis_coord { pf[k] } else { pf[k] * sfac })
                            .collect();
                        if !self.amoeba.contains(&from_axis_frame(&q), 1e-7) {
                            ok_path = false;
                            break;
                        }
                    }
                    if !(ok_v && ok_path) {
                        failures += 1;
                        if !ok_v { fail_v += 1; }
                        if !ok_path { fail_path += 1; }
                    }
                }
            }
        }
        Ok(SliceConnectivity { tested, failures, fail_v, fail_path })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SliceConnectivity {
    pub tested: usize,
    pub failures: usize,
    pub fail_v: usize,
    pub fail_path: usize,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projections::ProjectionSystem;

    fn tripod_trims(n: usize, lambda: f64, r: f64) -> TrimmedPants {
        let proj = ProjectionSystem::orthogonal(n);
        let mut trims = Vec::new();
        for (i, j_set) in crate::projections::all_face_sets(n).into_iter().enumerate() {
            let m = j_set.len();
            trims.push(ConeTrim {
                j_set,
                cell: i,
                radii: TrimRadii {
                    r: vec![r; m],
                    r2: vec![r * 1.3; m],
                    r1: vec![r * 1.6; m],
                },
            });
        }
        TrimmedPants::new(n, lambda, proj, trims)
    }

    #[test]
    fn fibre_segments_cross_boundaries() {
        // n = 1, J = {1}: endpoints on S_0 and S_2, both with x_1 > 0
        let tp = tripod_trims(1, 1.0, 2.0);
        let trim = tp.trims.iter().find(|t| t.j_set == vec![1]).unwrap();
        let x = [3.0, 0.0];
        let seg = tp.fibre_segment(trim, &x).unwrap();
        let plus = seg.endpoint_plus();
        let minus = seg.endpoint_minus();
        use crate::pants::AmoebaClass;
        let cp = tp.amoeba.classify(&plus, 1e-6);
        let cm = tp.amoeba.classify(&minus, 1e-6);
        let mut ks: Vec<usize> = [cp, cm]
            .iter()
            .map(|c| match c {
                AmoebaClass::Boundary(k) => *k,
                other => panic!("endpoint not on boundary: {other:?}"),
            })
            .collect();
        ks.sort_unstable();
        assert_eq!(ks, vec![0, 2]);
        assert!(plus[0] > 0.0 && minus[0] > 0.0);
    }

    #[test]
    fn q_membership() {
        let tp = tripod_trims(1, 1.0, 2.0);
        let trim = tp.trims.iter().find(|t| t.j_set == vec![1]).unwrap();
        assert!(tp.q_contains(trim, Level::R, &[2.5, 0.3], 1e-9));
        assert!(!tp.q_contains(trim, Level::R, &[1.0, 0.0], 1e-9));
    }

    #[test]
    fn segment_trim_membership() {
        let tp = tripod_trims(1, 1.0, 2.0);
        let trim = tp.trims.iter().find(|t| t.j_set == vec![1]).unwrap();
        assert!(tp.in_segment_trim(trim, Level::R, &[3.0, 0.02], 1e-9).unwrap());
        assert!(!tp.in_segment_trim(trim, Level::R, &[3.0, 3.0], 1e-9).unwrap());
        assert!(!tp.in_segment_trim(trim, Level::R, &[1.0, 0.02], 1e-9).unwrap());
    }

    #[test]
    fn h2_removes_all_ends() {
        let tp = tripod_trims(1, 1.0, 2.0);
        assert!(tp.in_h2(&[0.0, 0.0], Level::R2, Level::R2, 1e-9).unwrap());
        // deep legs are trimmed at level R2 = 2.6
        assert!(!tp.in_h2(&[3.0, 0.02], Level::R2, Level::R2, 1e-9).unwrap());
        assert!(tp.in_h2(&[2.0, 0.05], Level::R2, Level::R2, 1e-9).unwrap());
        assert!(!tp.in_h2(&[-3.0, -3.0], Level::R2, Level::R2, 1e-9).unwrap());
    }

    #[test]
    fn surface_ray_slice_is_star_shaped() {
        // n = 2: the slice of H^[1] over a deep ray point is one star-shaped
        // region (the two dimensional amoeba with its legs cut)
        let tp = tripod_trims(2, 1.0, 2.5);
        let trim = tp.trims.iter().find(|t| t.j_set == vec![1]).unwrap();
        let conn = tp.ray_slice_connectivity(trim, Level::R2, 4.0, 80).unwrap();
        assert!(conn.tested > 100, "too few slice hits: {conn:?}");
        assert_eq!(conn.failures, 0, "{conn:?}");
    }
}

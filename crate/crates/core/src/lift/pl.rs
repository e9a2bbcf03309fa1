//! The piecewise-linear Lagrangian lift Ξ̂ = ∪ ê with ê = ě × C_e.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;

use crate::coamoeba::{torus_reduce, Coamoeba, CoamoebaClass};
use crate::exact;
use crate::numerics;
use crate::polyhedral::LatticePolytope;
use crate::tropical::TropicalComplex;

use super::LiftError;

#[derive(Clone, Debug)]
pub struct PlPiece {
    pub cell: usize,
    pub coamoeba: Coamoeba,
    /// Dimension of the base cell ě.
    pub base_dim: usize,
}

#[derive(Clone, Debug)]
pub struct PlLift {
    pub n: usize,
    pub pieces: Vec<PlPiece>,
}

impl PlLift {
    pub fn build(complex: &TropicalComplex) -> Result<PlLift, LiftError> {
        if !crate::polyhedral::is_unimodal(&complex.subdivision) {
            return Err(LiftError::NonSmooth);
        }
        let n = complex.ambient_dim() - 1;
        let mut pieces = Vec::new();
        for (ci, cell) in complex.cells.iter().enumerate() {
            let face = &complex.subdivision.faces[cell.dual_face];
            let poly = LatticePolytope {
                vertices: face.polytope.vertices.clone(),
                dim: face.polytope.dim,
            };
            let coam = Coamoeba::of_simplex(&poly).map_err(|_| LiftError::NonSmooth)?;
            pieces.push(PlPiece { cell: ci, coamoeba: coam, base_dim: cell.dim });
        }
        Ok(PlLift { n, pieces })
    }

    /// Membership of (x, [y]) in Ξ̂ within tolerance: some piece has x on its
    /// base cell and y on the closure of its coamoeba.
    pub fn contains(&self, complex: &TropicalComplex, x: &[f64], y: &[f64], tol: f64) -> bool {
        for p in &self.pieces {
            if base_cell_contains(complex, p.cell, x, tol)
                && p.coamoeba.classify(&torus_reduce(y), tol) != CoamoebaClass::Outside
            {
                return true;
            }
        }
        false
    }

    /// Deterministic sampling of Ξ̂, truncated to the box |x_i| ≤ bbox.
    /// Returns (x, y, piece index) triples.
    pub fn sample(
        &self,
        complex: &TropicalComplex,
        bbox: f64,
        per_piece: usize,
        rng: &mut impl Rng,
    ) -> Vec<(Vec<f64>, Vec<f64>, usize)> {
        let mut out = Vec::new();
        for (pi, piece) in self.pieces.iter().enumerate() {
            let cell = &complex.cells[piece.cell];
            let verts: Vec<Vec<f64>> =
                cell.vertices.iter().map(|v| exact::ratvec_to_f64(v)).collect();
            let rays: Vec<Vec<f64>> = cell
                .rays
                .iter()
                .map(|r| r.iter().map(|&c| c as f64).collect())
                .collect();
            let mut kept = 0;
            let mut attempts = 0;
            while kept < per_piece && attempts < 40 * per_piece {
                attempts += 1;
                let mut weights: Vec<f64> = (0..verts.len()).map(|_| rng.gen::<f64>()).collect();
                let tot: f64 = weights.iter().sum();
                weights.iter_mut().for_each(|w| *w /= tot);
                let mut x = alloc::vec![0.0; self.n + 1];
                for (w, v) in weights.iter().zip(&verts) {
                    numerics::axpy(&mut x, *w, v);
                }
                for r in &rays {
                    let c: f64 = rng.gen::<f64>();
                    numerics::axpy(&mut x, c * c * bbox, r);
                }
                if x.iter().any(|&c| c.abs() > bbox) {
                    continue;
                }
                let y = sample_coamoeba(&piece.coamoeba, rng);
                out.push((x, y, pi));
                kept += 1;
            }
        }
        out
    }
}

/// Membership of x on the closure of ě via the tropical min characterization:
/// every lattice point of the dual face must attain the minimum within tol.
pub fn base_cell_contains(complex: &TropicalComplex, cell: usize, x: &[f64], tol: f64) -> bool {
    let sub = &complex.subdivision;
    let face = &sub.faces[complex.cells[cell].dual_face];
    let mut best = f64::INFINITY;
    let mut vals: Vec<(f64, bool)> = Vec::new();
    for p in sub.lifting.domain() {
        let pv: Vec<f64> = p.0.iter().map(|&c| c as f64).collect();
        let v = numerics::dot(&pv, x) + sub.lifting.value(p) as f64;
        best = best.min(v);
        vals.push((v, face.lattice.contains(p)));
    }
    let scale = 1.0 + x.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    vals.iter().all(|&(v, on_face)| !on_face || v <= best + tol * scale)
}

/// Uniform-ish sample of the coamoeba of an elementary simplex (both halves).
pub fn sample_coamoeba(c: &Coamoeba, rng: &mut impl Rng) -> Vec<f64> {
    let m = c.dim();
    let mut w: Vec<f64> = (0..=m).map(|_| -f64::ln(1.0 - rng.gen::<f64>())).collect();
    let tot: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= tot);
    let mut z = alloc::vec![0.0; c.ambient];
    for (wi, v) in w.iter().zip(&c.simplex) {
        for i in 0..c.ambient {
            z[i] += wi * v[i] as f64;
        }
    }
    let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
    let y: Vec<f64> = z.iter().map(|&c| sign * c * crate::coamoeba::PI / 2.0).collect();
    torus_reduce(&y).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lift::scene::tests::{example_curve_complex, two_vertex_surface_complex};
    use crate::polyhedral::{convex_hull, lp, LiftingFunction, Subdivision};
    use crate::tropical::dual_complex;
    use rand::SeedableRng;

    #[test]
    fn standard_line_piece_shapes() {
        let p = convex_hull(&[lp(&[0, 0]), lp(&[1, 0]), lp(&[0, 1])]).unwrap();
        let nu = LiftingFunction::constant(&p, 0);
        let c = dual_complex(&Subdivision::regular(&p, &nu).unwrap());
        let lift = PlLift::build(&c).unwrap();
        let vertex_pieces: Vec<_> = lift.pieces.iter().filter(|p| p.base_dim == 0).collect();
        let ray_pieces: Vec<_> = lift.pieces.iter().filter(|p| p.base_dim == 1).collect();
        assert_eq!(vertex_pieces.len(), 1);
        assert_eq!(ray_pieces.len(), 3);
        assert_eq!(vertex_pieces[0].coamoeba.dim(), 2);
        for rp in ray_pieces {
            assert_eq!(rp.coamoeba.dim(), 1); // cylinder: ray × circle
        }
    }

    #[test]
    fn example_curve_piece_count() {
        let c = example_curve_complex();
        let lift = PlLift::build(&c).unwrap();
        let verts = lift.pieces.iter().filter(|p| p.base_dim == 0).count();
        let bounded = lift
            .pieces
            .iter()
            .filter(|p| p.base_dim == 1 && c.cells[p.cell].is_bounded())
            .count();
        let unbounded = lift
            .pieces
            .iter()
            .filter(|p| p.base_dim == 1 && !c.cells[p.cell].is_bounded())
            .count();
        assert_eq!((verts, bounded, unbounded), (3, 3, 3));
    }

    #[test]
    fn membership_product_structure() {
        let c = example_curve_complex();
        let lift = PlLift::build(&c).unwrap();
        // the ray from (0,0) has direction (−1,−1); its dual face is the
        // segment [(1,2),(2,1)], so the fibre is the circle through
        // (π/4)(3,3).
        let x = [-2.0, -2.0];
        let y_on = [3.0 * crate::coamoeba::PI / 4.0, 3.0 * crate::coamoeba::PI / 4.0];
        assert!(lift.contains(&c, &x, &y_on, 1e-9));
        let y_off = [0.3, 1.2];
        assert!(!lift.contains(&c, &x, &y_off, 1e-9));
        assert!(!lift.contains(&c, &[5.0, 1.0], &y_on, 1e-9));
    }

    #[test]
    fn samples_lie_on_lift() {
        let c = two_vertex_surface_complex();
        let lift = PlLift::build(&c).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let samples = lift.sample(&c, 4.0, 20, &mut rng);
        assert!(samples.len() > 15 * lift.pieces.len());
        for (x, y, _) in &samples {
            assert!(lift.contains(&c, x, y, 1e-7));
        }
    }
}

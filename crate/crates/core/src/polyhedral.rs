//! Lattice polytopes and regular subdivisions, all in exact arithmetic.
//!
//! A subdivision is induced by an integral lifting function: its maximal
//! cells are the touching sets of affine minorants of the lifted points
//! (equivalently, projections of lower-hull facets). Faces are keyed by
//! their full lattice point sets, which is also how the dual tropical
//! complex indexes them.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::exact::{
    self, affine_basis, affine_coordinates, affine_dim, extreme_points, in_convex_hull, rank, rat,
    ratvec_from_ints, solve_linear, Rational,
};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct LatticePoint(pub Vec<i64>);

impl LatticePoint {
    pub fn new(coords: Vec<i64>) -> Self {
        LatticePoint(coords)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn to_rational(&self) -> Vec<Rational> {
        ratvec_from_ints(&self.0)
    }
}

impl From<&[i64]> for LatticePoint {
    fn from(v: &[i64]) -> Self {
        LatticePoint(v.to_vec())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PolyhedralError {
    EmptyInput,
    AmbientDimension,
    NotASimplex,
    /// The lifting function misses a lattice point of P.
    MissingValue,
    /// The lifting function mentions a point outside P.
    ExtraValue,
    NotFullDimensional,
}

impl core::fmt::Display for PolyhedralError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let s = match self {
            PolyhedralError::EmptyInput => "empty input point set",
            PolyhedralError::AmbientDimension => "ambient dimension must be 2 or 3",
            PolyhedralError::NotASimplex => "polytope is not a full-dimensional simplex",
            PolyhedralError::MissingValue => "lifting function undefined on a lattice point",
            PolyhedralError::ExtraValue => "lifting function defined outside the polytope",
            PolyhedralError::NotFullDimensional => "polytope is not full-dimensional",
        };
        f.write_str(s)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LatticePolytope {
    /// Extreme points only, sorted lexicographically.
    pub vertices: Vec<LatticePoint>,
    /// Affine dimension of the vertex set.
    pub dim: usize,
}

impl LatticePolytope {
    pub fn ambient_dim(&self) -> usize {
        self.vertices[0].dim()
    }

    pub fn contains(&self, p: &[Rational]) -> bool {
        let pts: Vec<Vec<Rational>> = self.vertices.iter().map(|v| v.to_rational()).collect();
        in_convex_hull(p, &pts)
    }
}

/// Minimal vertex representation of the convex hull of integer points.
pub fn convex_hull(points: &[LatticePoint]) -> Result<LatticePolytope, PolyhedralError> {
    if points.is_empty() {
        return Err(PolyhedralError::EmptyInput);
    }
    let ambient = points[0].dim();
    if !(2..=3).contains(&ambient) {
        return Err(PolyhedralError::AmbientDimension);
    }
    let rational: Vec<Vec<Rational>> = points.iter().map(|p| p.to_rational()).collect();
    let mut verts: Vec<LatticePoint> = extreme_points(&rational)
        .into_iter()
        .map(|v| LatticePoint(v.iter().map(|x| x.to_integer().try_into().unwrap()).collect()))
        .collect();
    verts.sort();
    let dim = affine_dim(&verts.iter().map(|v| v.to_rational()).collect::<Vec<_>>());
    Ok(LatticePolytope { vertices: verts, dim })
}

/// All integer points of `P`, by bounding-box scan with exact membership.
pub fn lattice_points(p: &LatticePolytope) -> Vec<LatticePoint> {
    let ambient = p.ambient_dim();
    let mut lo = vec![i64::MAX; ambient];
    let mut hi = vec![i64::MIN; ambient];
    for v in &p.vertices {
        for (i, &c) in v.0.iter().enumerate() {
            lo[i] = lo[i].min(c);
            hi[i] = hi[i].max(c);
        }
    }
    let mut out = Vec::new();
    let mut cursor = lo.clone();
    loop {
        let cand = LatticePoint(cursor.clone());
        if p.contains(&cand.to_rational()) {
            out.push(cand);
        }
        // advance odometer
        let mut i = 0;
        loop {
            if i == ambient {
                out.sort();
                return out;
            }
            cursor[i] += 1;
            if cursor[i] <= hi[i] {
                break;
            }
            cursor[i] = lo[i];
            i += 1;
        }
    }
}

#[derive(Clone, Debug)]
pub struct LiftingFunction {
    values: BTreeMap<LatticePoint, i64>,
}

impl LiftingFunction {
    /// Builds a lifting function and checks its domain is exactly `P ∩ N`.
    pub fn for_polytope(
        p: &LatticePolytope,
        values: BTreeMap<LatticePoint, i64>,
    ) -> Result<Self, PolyhedralError> {
        let pts = lattice_points(p);
        for q in &pts {
            if !values.contains_key(q) {
                return Err(PolyhedralError::MissingValue);
            }
        }
        if values.len() != pts.len() {
            return Err(PolyhedralError::ExtraValue);
        }
        Ok(LiftingFunction { values })
    }

    pub fn constant(p: &LatticePolytope, c: i64) -> Self {
        let values = lattice_points(p).into_iter().map(|q| (q, c)).collect();
        LiftingFunction { values }
    }

    pub fn value(&self, q: &LatticePoint) -> i64 {
        self.values[q]
    }

    pub fn domain(&self) -> impl Iterator<Item = &LatticePoint> {
        self.values.keys()
    }
}

/// A face of the subdivision: a polytope together with all its lattice points.
#[derive(Clone, Debug)]
pub struct Face {
    pub polytope: LatticePolytope,
    /// Lattice points of the face, sorted; this is the face's identity key.
    pub lattice: Vec<LatticePoint>,
}

impl Face {
    pub fn dim(&self) -> usize {
        self.polytope.dim
    }
}

#[derive(Clone, Debug)]
pub struct Subdivision {
    pub polytope: LatticePolytope,
    pub lifting: LiftingFunction,
    /// Every face of every cell, deduplicated, sorted by (dim, lattice key).
    pub faces: Vec<Face>,
    /// Indices into `faces` of the maximal cells.
    pub cells: Vec<usize>,
    /// False when some lattice point lies strictly above the lower hull and
    /// therefore appears in no cell.
    pub convex_position: bool,
}

impl Subdivision {
    /// Regular subdivision from the domains of affineness of the
    /// convexification of `nu`.
    pub fn regular(
        polytope: &LatticePolytope,
        nu: &LiftingFunction,
    ) -> Result<Subdivision, PolyhedralError> {
        let d = polytope.ambient_dim();
        if polytope.dim != d {
            return Err(PolyhedralError::NotFullDimensional);
        }
        let pts = lattice_points(polytope);
        let vals: Vec<Rational> = pts.iter().map(|q| rat(nu.value(q))).collect();
        let rational: Vec<Vec<Rational>> = pts.iter().map(|q| q.to_rational()).collect();
        let m = pts.len();

        // Affine minorants from (d+1)-subsets; the touching set of each is a
        // maximal cell of the subdivision.
        let mut cells_keys: Vec<Vec<usize>> = Vec::new();
        let mut subset = (0..=d).collect::<Vec<usize>>();
        loop {
            if let Some(touch) = touching_set(&rational, &vals, &subset, d) {
                if !cells_keys.contains(&touch) {
                    cells_keys.push(touch);
                }
            }
            if !next_combination(&mut subset, m) {
                break;
            }
        }

        let mut faces: Vec<Face> = Vec::new();
        let mut cell_indices = Vec::new();
        let mut covered = vec![false; m];
        for key in &cells_keys {
            for &i in key {
                covered[i] = true;
            }
            let cell_pts: Vec<LatticePoint> = key.iter().map(|&i| pts[i].clone()).collect();
            let cell = polytope_from_lattice(&cell_pts);
            let idx = push_face_with_subfaces(&mut faces, cell, &cell_pts);
            cell_indices.push(idx);
        }
        faces_sorted(&mut faces, &mut cell_indices);
        Ok(Subdivision {
            polytope: polytope.clone(),
            lifting: nu.clone(),
            faces,
            cells: cell_indices,
            convex_position: covered.iter().all(|&c| c),
        })
    }

    pub fn face_index(&self, lattice: &[LatticePoint]) -> Option<usize> {
        let mut key = lattice.to_vec();
        key.sort();
        self.faces.iter().position(|f| f.lattice == key)
    }

    /// Face inclusion f ⪯ e, decided on lattice point sets.
    pub fn face_leq(&self, f: usize, e: usize) -> bool {
        self.faces[f]
            .lattice
            .iter()
            .all(|p| self.faces[e].lattice.contains(p))
    }
}

fn faces_sorted(faces: &mut Vec<Face>, cells: &mut [usize]) {
    let mut order: Vec<usize> = (0..faces.len()).collect();
    order.sort_by(|&a, &b| {
        (faces[a].dim(), &faces[a].lattice).cmp(&(faces[b].dim(), &faces[b].lattice))
    });
    let mut remap = vec![0; faces.len()];
    for (new, &old) in order.iter().enumerate() {
        remap[old] = new;
    }
    let mut reordered: Vec<Face> = Vec::with_capacity(faces.len());
    for &old in &order {
        reordered.push(faces[old].clone());
    }
    *faces = reordered;
    for c in cells.iter_mut() {
        *c = remap[*c];
    }
}

fn polytope_from_lattice(pts: &[LatticePoint]) -> LatticePolytope {
    let rational: Vec<Vec<Rational>> = pts.iter().map(|p| p.to_rational()).collect();
    let mut verts: Vec<LatticePoint> = extreme_points(&rational)
        .into_iter()
        .map(|v| LatticePoint(v.iter().map(|x| x.to_integer().try_into().unwrap()).collect()))
        .collect();
    verts.sort();
    let dim = affine_dim(&verts.iter().map(|v| v.to_rational()).collect::<Vec<_>>());
    LatticePolytope { vertices: verts, dim }
}

/// Registers `poly` (with lattice points `lattice`) and all of its faces,
/// returning the index of `poly` itself.
fn push_face_with_subfaces(
    faces: &mut Vec<Face>,
    poly: LatticePolytope,
    lattice: &[LatticePoint],
) -> usize {
    let mut key = lattice.to_vec();
    key.sort();
    if let Some(i) = faces.iter().position(|f| f.lattice == key) {
        return i;
    }
    for sub in proper_faces(&poly) {
        let sub_lattice: Vec<LatticePoint> = lattice
            .iter()
            .filter(|p| sub.contains(&p.to_rational()))
            .cloned()
            .collect();
        push_face_with_subfaces(faces, sub, &sub_lattice);
    }
    faces.push(Face { polytope: poly, lattice: key });
    faces.len() - 1
}

/// Proper faces of codimension 1 (facets) of a polytope of any dimension.
pub fn proper_faces(p: &LatticePolytope) -> Vec<LatticePolytope> {
    let k = p.dim;
    if k == 0 {
        return Vec::new();
    }
    let verts: Vec<Vec<Rational>> = p.vertices.iter().map(|v| v.to_rational()).collect();
    let (origin, basis) = affine_basis(&verts);
    let local: Vec<Vec<Rational>> = verts
        .iter()
        .map(|v| affine_coordinates(&origin, &basis, v).expect("vertex outside affine hull"))
        .collect();
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut subset: Vec<usize> = (0..k).collect();
    let nv = verts.len();
    loop {
        if let Some(facet) = supporting_set(&local, &subset, k) {
            if !out.contains(&facet) {
                out.push(facet);
            }
        }
        if !next_combination(&mut subset, nv) {
            break;
        }
    }
    out.into_iter()
        .map(|idx| {
            let vs: Vec<LatticePoint> = idx.iter().map(|&i| p.vertices[i].clone()).collect();
            polytope_from_lattice(&vs)
        })
        .collect()
}

/// If the k-subset spans a supporting hyperplane (within local coordinates),
/// returns the sorted index set of all vertices on it.
fn supporting_set(local: &[Vec<Rational>], subset: &[usize], k: usize) -> Option<Vec<usize>> {
    let base = &local[subset[0]];
    let diffs: Vec<Vec<Rational>> = subset[1..]
        .iter()
        .map(|&i| exact::sub(&local[i], base))
        .collect();
    if rank(&diffs) != k - 1 {
        return None;
    }
    let normals = exact::nullspace(&diffs, k);
    if normals.len() != 1 {
        return None;
    }
    let n = &normals[0];
    let mut pos = false;
    let mut neg = false;
    let mut on = Vec::new();
    for (i, v) in local.iter().enumerate() {
        let s = exact::dot(n, &exact::sub(v, base));
        if s.is_zero() {
            on.push(i);
        } else if s > Rational::zero() {
            pos = true;
        } else {
            neg = true;
        }
        if pos && neg {
            return None;
        }
    }
    on.sort_unstable();
    Some(on)
}

/// Touching set of the affine minorant through a (d+1)-subset, if the subset
/// is affinely independent and the minorant stays below all lifted values.
fn touching_set(
    pts: &[Vec<Rational>],
    vals: &[Rational],
    subset: &[usize],
    d: usize,
) -> Option<Vec<usize>> {
    // Solve a.x + b = val on the subset.
    let rows: Vec<Vec<Rational>> = subset
        .iter()
        .map(|&i| {
            let mut r = pts[i].clone();
            r.push(rat(1));
            r
        })
        .collect();
    let rhs: Vec<Rational> = subset.iter().map(|&i| vals[i].clone()).collect();
    let sol = solve_linear(&rows, &rhs)?;
    let (a, b) = sol.split_at(d);
    let mut touch = Vec::new();
    for (i, p) in pts.iter().enumerate() {
        let alpha = exact::dot(a, p) + &b[0];
        match alpha.cmp(&vals[i]) {
            core::cmp::Ordering::Greater => return None,
            core::cmp::Ordering::Equal => touch.push(i),
            core::cmp::Ordering::Less => {}
        }
    }
    Some(touch)
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

/// |det| of the edge matrix of a full-dimensional simplex.
pub fn normalized_volume(simplex: &LatticePolytope) -> Result<i64, PolyhedralError> {
    let d = simplex.ambient_dim();
    if simplex.vertices.len() != d + 1 || simplex.dim != d {
        return Err(PolyhedralError::NotASimplex);
    }
    let v0 = &simplex.vertices[0];
    let cols: Vec<Vec<i64>> = simplex.vertices[1..]
        .iter()
        .map(|v| v.0.iter().zip(&v0.0).map(|(a, b)| a - b).collect())
        .collect();
    Ok(exact::det_i64(&cols).abs())
}

/// Normalized volume (d! times Euclidean) of any full-dimensional polytope,
/// by fanning over facet triangulations. Used as the tiling oracle in tests.
pub fn normalized_volume_polytope(p: &LatticePolytope) -> Rational {
    let d = p.ambient_dim();
    fn simplex_volume(simplex: &[Vec<Rational>]) -> Rational {
        let base = &simplex[0];
        let rows: Vec<Vec<Rational>> = simplex[1..].iter().map(|v| exact::sub(v, base)).collect();
        det_rational(&rows).abs()
    }
    fn triangulate(verts: &[Vec<Rational>], dim: usize) -> Vec<Vec<Vec<Rational>>> {
        if verts.len() == dim + 1 {
            return vec![verts.to_vec()];
        }
        // fan from the first vertex over the facets not containing it
        let (origin, basis) = affine_basis(verts);
        let local: Vec<Vec<Rational>> = verts
            .iter()
            .map(|v| affine_coordinates(&origin, &basis, v).unwrap())
            .collect();
        let apex = 0usize;
        let mut simplices = Vec::new();
        let mut subset: Vec<usize> = (0..dim).collect();
        let mut seen: Vec<Vec<usize>> = Vec::new();
        loop {
            if let Some(on) = supporting_set(&local, &subset, dim) {
                if !on.contains(&apex) && !seen.contains(&on) {
                    seen.push(on.clone());
                    let facet_pts: Vec<Vec<Rational>> =
                        on.iter().map(|&i| verts[i].clone()).collect();
                    for mut s in triangulate(&facet_pts, dim - 1) {
                        s.push(verts[apex].clone());
                        simplices.push(s);
                    }
                }
            }
            if !next_combination(&mut subset, verts.len()) {
                break;
            }
        }
        simplices
    }
    let verts: Vec<Vec<Rational>> = p.vertices.iter().map(|v| v.to_rational()).collect();
    let mut total = Rational::zero();
    for s in triangulate(&verts, d) {
        total += simplex_volume(&s);
    }
    total
}

fn det_rational(rows: &[Vec<Rational>]) -> Rational {
    let n = rows.len();
    match n {
        1 => rows[0][0].clone(),
        2 => &rows[0][0] * &rows[1][1] - &rows[0][1] * &rows[1][0],
        3 => {
            let m = |r: usize, c: usize| rows[r][c].clone();
            m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
                - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
                + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0))
        }
        _ => panic!("det_rational supports n <= 3"),
    }
}

/// Every maximal cell is an elementary simplex.
pub fn is_unimodal(s: &Subdivision) -> bool {
    s.cells.iter().all(|&c| {
        let cell = &s.faces[c];
        matches!(normalized_volume(&cell.polytope), Ok(1))
            && cell.lattice.len() == cell.polytope.ambient_dim() + 1
    })
}

pub fn lp(coords: &[i64]) -> LatticePoint {
    LatticePoint(coords.to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_curve_polytope() -> LatticePolytope {
        convex_hull(&[lp(&[0, 0]), lp(&[1, 2]), lp(&[2, 1])]).unwrap()
    }

    fn example_curve_nu(p: &LatticePolytope) -> LiftingFunction {
        let mut vals = BTreeMap::new();
        vals.insert(lp(&[0, 0]), 1);
        vals.insert(lp(&[1, 1]), 0);
        vals.insert(lp(&[1, 2]), 0);
        vals.insert(lp(&[2, 1]), 0);
        LiftingFunction::for_polytope(p, vals).unwrap()
    }

    #[test]
    fn hull_square_keeps_all_corners() {
        let p = convex_hull(&[lp(&[0, 0]), lp(&[1, 0]), lp(&[0, 1]), lp(&[1, 1])]).unwrap();
        assert_eq!(p.vertices.len(), 4);
        assert_eq!(p.dim, 2);
    }

    #[test]
    fn hull_segment_drops_midpoint() {
        let p = convex_hull(&[lp(&[0, 0]), lp(&[2, 0]), lp(&[1, 0])]).unwrap();
        assert_eq!(p.vertices, vec![lp(&[0, 0]), lp(&[2, 0])]);
        assert_eq!(p.dim, 1);
    }

    #[test]
    fn hull_drops_interior_point() {
        // brute-force extreme point oracle: (1,1) = ((0,0)+(1,2)+(2,1))/3
        let p = convex_hull(&[lp(&[0, 0]), lp(&[1, 2]), lp(&[2, 1]), lp(&[1, 1])]).unwrap();
        assert_eq!(p.vertices, vec![lp(&[0, 0]), lp(&[1, 2]), lp(&[2, 1])]);
    }

    #[test]
    fn hull_idempotent() {
        let pts = [lp(&[0, 0]), lp(&[3, 1]), lp(&[1, 3]), lp(&[2, 2]), lp(&[1, 1])];
        let p = convex_hull(&pts).unwrap();
        let q = convex_hull(&p.vertices).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn hull_errors() {
        assert_eq!(convex_hull(&[]), Err(PolyhedralError::EmptyInput));
    }

    #[test]
    fn lattice_points_unit_simplices() {
        let p2 = convex_hull(&[lp(&[0, 0]), lp(&[1, 0]), lp(&[0, 1])]).unwrap();
        assert_eq!(lattice_points(&p2).len(), 3);
        let p3 =
            convex_hull(&[lp(&[0, 0, 0]), lp(&[1, 0, 0]), lp(&[0, 1, 0]), lp(&[0, 0, 1])]).unwrap();
        assert_eq!(lattice_points(&p3).len(), 4);
    }

    #[test]
    fn lattice_points_example_curve() {
        let p = example_curve_polytope();
        let pts = lattice_points(&p);
        assert_eq!(pts, vec![lp(&[0, 0]), lp(&[1, 1]), lp(&[1, 2]), lp(&[2, 1])]);
    }

    #[test]
    fn normalized_volumes() {
        let unit = convex_hull(&[lp(&[0, 0]), lp(&[1, 0]), lp(&[0, 1])]).unwrap();
        assert_eq!(normalized_volume(&unit), Ok(1));
        assert_eq!(normalized_volume(&example_curve_polytope()), Ok(3));
        let t3 =
            convex_hull(&[lp(&[0, 0, 0]), lp(&[1, 0, 0]), lp(&[0, 1, 0]), lp(&[0, 0, 1])]).unwrap();
        assert_eq!(normalized_volume(&t3), Ok(1));
        let seg = convex_hull(&[lp(&[0, 0]), lp(&[1, 0])]).unwrap();
        assert_eq!(normalized_volume(&seg), Err(PolyhedralError::NotASimplex));
    }

    #[test]
    fn zero_lift_gives_single_cell() {
        let p = convex_hull(&[lp(&[0, 0]), lp(&[1, 0]), lp(&[0, 1])]).unwrap();
        let nu = LiftingFunction::constant(&p, 0);
        let s = Subdivision::regular(&p, &nu).unwrap();
        assert_eq!(s.cells.len(), 1);
        assert!(s.convex_position);
        assert!(is_unimodal(&s));
    }

    #[test]
    fn example_curve_subdivision() {
        // lower-hull brute force oracle: three unimodular triangles
        let p = example_curve_polytope();
        let nu = example_curve_nu(&p);
        let s = Subdivision::regular(&p, &nu).unwrap();
        assert_eq!(s.cells.len(), 3);
        let mut keys: Vec<Vec<LatticePoint>> =
            s.cells.iter().map(|&c| s.faces[c].lattice.clone()).collect();
        keys.sort();
        assert_eq!(
            keys,
            vec![
                vec![lp(&[0, 0]), lp(&[1, 1]), lp(&[1, 2])],
                vec![lp(&[0, 0]), lp(&[1, 1]), lp(&[2, 1])],
                vec![lp(&[1, 1]), lp(&[1, 2]), lp(&[2, 1])],
            ]
        );
        assert!(is_unimodal(&s));
        assert!(s.convex_position);
    }

    #[test]
    fn example_curve_single_cell_not_unimodal() {
        let p = example_curve_polytope();
        let nu = LiftingFunction::constant(&p, 0);
        let s = Subdivision::regular(&p, &nu).unwrap();
        assert_eq!(s.cells.len(), 1);
        assert!(!is_unimodal(&s));
    }

    #[test]
    fn square_diagonal_split() {
        // lower-hull brute force: lifting one corner splits along the
        // diagonal avoiding it
        let p = convex_hull(&[lp(&[0, 0]), lp(&[1, 0]), lp(&[0, 1]), lp(&[1, 1])]).unwrap();
        let mut vals = BTreeMap::new();
        vals.insert(lp(&[0, 0]), 0);
        vals.insert(lp(&[1, 0]), 0);
        vals.insert(lp(&[0, 1]), 0);
        vals.insert(lp(&[1, 1]), 1);
        let nu = LiftingFunction::for_polytope(&p, vals).unwrap();
        let s = Subdivision::regular(&p, &nu).unwrap();
        assert_eq!(s.cells.len(), 2);
        for &c in &s.cells {
            assert!(s.faces[c].lattice.contains(&lp(&[1, 0])));
            assert!(s.faces[c].lattice.contains(&lp(&[0, 1])));
        }
    }

    #[test]
    fn cells_tile_polytope() {
        let p = example_curve_polytope();
        let nu = example_curve_nu(&p);
        let s = Subdivision::regular(&p, &nu).unwrap();
        let total: Rational = s
            .cells
            .iter()
            .map(|&c| Rational::from(num_bigint::BigInt::from(
                normalized_volume(&s.faces[c].polytope).unwrap(),
            )))
            .sum();
        assert_eq!(total, normalized_volume_polytope(&p));
    }

    #[test]
    fn face_poset_of_example_curve() {
        let p = example_curve_polytope();
        let nu = example_curve_nu(&p);
        let s = Subdivision::regular(&p, &nu).unwrap();
        let n_by_dim = |d: usize| s.faces.iter().filter(|f| f.dim() == d).count();
        // 4 vertices, 3+3+3-3 = hmm: edges of three triangles, interior ones shared
        assert_eq!(n_by_dim(0), 4);
        assert_eq!(n_by_dim(1), 6);
        assert_eq!(n_by_dim(2), 3);
        // inclusion is reflexive and antisymmetric on this poset
        for i in 0..s.faces.len() {
            assert!(s.face_leq(i, i));
            for j in 0..s.faces.len() {
                if i != j && s.face_leq(i, j) {
                    assert!(!s.face_leq(j, i));
                }
            }
        }
    }

    #[test]
    fn two_cell_surface_subdivision() {
        let p = convex_hull(&[
            lp(&[0, 0, 0]),
            lp(&[1, 0, 0]),
            lp(&[0, 1, 0]),
            lp(&[0, 0, 1]),
            lp(&[1, 1, 0]),
        ])
        .unwrap();
        let mut vals = BTreeMap::new();
        for q in lattice_points(&p) {
            let v = if q == lp(&[1, 1, 0]) { 1 } else { 0 };
            vals.insert(q, v);
        }
        let nu = LiftingFunction::for_polytope(&p, vals).unwrap();
        let s = Subdivision::regular(&p, &nu).unwrap();
        assert_eq!(s.cells.len(), 2);
        assert!(is_unimodal(&s));
        let n_by_dim = |d: usize| s.faces.iter().filter(|f| f.dim() == d).count();
        assert_eq!(n_by_dim(0), 5);
        assert_eq!(n_by_dim(1), 9);
        assert_eq!(n_by_dim(2), 7);
        assert_eq!(n_by_dim(3), 2);
    }

    #[test]
    fn lifting_function_domain_validation() {
        let p = example_curve_polytope();
        let mut vals = BTreeMap::new();
        vals.insert(lp(&[0, 0]), 1);
        assert_eq!(
            LiftingFunction::for_polytope(&p, vals.clone()).unwrap_err(),
            PolyhedralError::MissingValue
        );
        for q in lattice_points(&p) {
            vals.insert(q, 0);
        }
        vals.insert(lp(&[5, 5]), 0);
        assert_eq!(
            LiftingFunction::for_polytope(&p, vals).unwrap_err(),
            PolyhedralError::ExtraValue
        );
    }
}

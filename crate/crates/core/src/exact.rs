//! Exact rational linear algebra and small-dimension polyhedral predicates.
//!
//! Everything here is exact: `Rational` is an arbitrary-precision fraction,
//! linear systems are solved by fraction-free-ish Gaussian elimination, and
//! feasibility of linear systems is decided by Fourier-Motzkin elimination.
//! Ambient dimensions are tiny (2 to 4), so the quadratic blowup of
//! Fourier-Motzkin is harmless.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = Ratio<BigInt>;

pub fn rat(n: i64) -> Rational {
    Ratio::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rational {
    Ratio::new(BigInt::from(n), BigInt::from(d))
}

/// Exact rational from a decimal string such as `"0.125"` or `"-3"`.
pub fn rat_from_decimal(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1i64, rest),
        None => (1, s.strip_prefix('+').unwrap_or(s)),
    };
    let mut parts = body.splitn(2, '.');
    let int_part = parts.next()?;
    let frac_part = parts.next().unwrap_or("");
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let mut num = BigInt::zero();
    for c in int_part.chars().chain(frac_part.chars()) {
        num = num * 10 + (c as u8 - b'0');
    }
    let mut den = BigInt::one();
    for _ in 0..frac_part.len() {
        den *= 10;
    }
    Some(Ratio::new(BigInt::from(sign) * num, den))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn ratvec_from_ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| rat(x)).collect()
}

pub fn ratvec_to_f64(v: &[Rational]) -> Vec<f64> {
    v.iter().map(to_f64).collect()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    let mut s = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        s += x * y;
    }
    s
}

pub fn sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(a: &[Rational], c: &Rational) -> Vec<Rational> {
    a.iter().map(|x| x * c).collect()
}

pub fn is_zero_vec(a: &[Rational]) -> bool {
    a.iter().all(|x| x.is_zero())
}

/// Solves `A x = b` for square or rectangular `A` by Gaussian elimination.
/// Returns `None` when the system is inconsistent or underdetermined.
pub fn solve_linear(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let m = a.len();
    if m == 0 {
        return Some(Vec::new());
    }
    let n = a[0].len();
    let mut aug: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let pivot = (row..m).find(|&r| !aug[r][col].is_zero());
        let Some(p) = pivot else { continue };
        aug.swap(row, p);
        let inv = aug[row][col].clone();
        for c in col..=n {
            let v = &aug[row][c] / &inv;
            aug[row][c] = v;
        }
        for r in 0..m {
            if r != row && !aug[r][col].is_zero() {
                let f = aug[r][col].clone();
                for c in col..=n {
                    let v = &aug[r][c] - &f * &aug[row][c];
                    aug[r][c] = v;
                }
            }
        }
        pivot_cols.push(col);
        row += 1;
        if row == m {
            break;
        }
    }
    // Inconsistency: a zero row with nonzero rhs.
    for r in row..m {
        if aug[r][..n].iter().all(|x| x.is_zero()) && !aug[r][n].is_zero() {
            return None;
        }
    }
    if pivot_cols.len() < n {
        return None; // underdetermined
    }
    let mut x = vec![Rational::zero(); n];
    for (r, &c) in pivot_cols.iter().enumerate() {
        x[c] = aug[r][n].clone();
    }
    Some(x)
}

/// Row space rank of a rational matrix.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut rows: Vec<Vec<Rational>> = rows.to_vec();
    let m = rows.len();
    if m == 0 {
        return 0;
    }
    let n = rows[0].len();
    let mut rk = 0;
    for col in 0..n {
        let Some(p) = (rk..m).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rk, p);
        for r in rk + 1..m {
            if !rows[r][col].is_zero() {
                let f = &rows[r][col] / &rows[rk][col];
                for c in col..n {
                    let v = &rows[r][c] - &f * &rows[rk][c];
                    rows[r][c] = v;
                }
            }
        }
        rk += 1;
        if rk == m {
            break;
        }
    }
    rk
}

/// Basis of the nullspace {x : A x = 0}.
pub fn nullspace(rows: &[Vec<Rational>], n: usize) -> Vec<Vec<Rational>> {
    let mut rr: Vec<Vec<Rational>> = rows.to_vec();
    let m = rr.len();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..m).find(|&r| !rr[r][col].is_zero()) else {
            continue;
        };
        rr.swap(row, p);
        let inv = rr[row][col].clone();
        for c in 0..n {
            let v = &rr[row][c] / &inv;
            rr[row][c] = v;
        }
        for r in 0..m {
            if r != row && !rr[r][col].is_zero() {
                let f = rr[r][col].clone();
                for c in 0..n {
                    let v = &rr[r][c] - &f * &rr[row][c];
                    rr[r][c] = v;
                }
            }
        }
        pivots.push((row, col));
        row += 1;
        if row == m {
            break;
        }
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let mut basis = Vec::new();
    for free in 0..n {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![Rational::zero(); n];
        v[free] = Rational::one();
        for &(r, c) in &pivots {
            v[c] = -rr[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Affine rank of a point set (dimension of its affine hull).
pub fn affine_dim(points: &[Vec<Rational>]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let diffs: Vec<Vec<Rational>> = points[1..].iter().map(|p| sub(p, &points[0])).collect();
    rank(&diffs)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Rel {
    Eq,
    /// a.x <= b
    Le,
    /// a.x < b
    Lt,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
    pub rel: Rel,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rational>, rel: Rel, rhs: Rational) -> Self {
        Constraint { coeffs, rhs, rel }
    }

    fn normalized(mut self) -> Self {
        // Scale so the first nonzero coefficient has absolute value 1.
        if let Some(c) = self.coeffs.iter().find(|c| !c.is_zero()).cloned() {
            let s = c.abs();
            for v in self.coeffs.iter_mut() {
                *v /= &s;
            }
            self.rhs /= &s;
        }
        self
    }
}

/// Decides feasibility of a system of rational linear constraints by
/// eliminating equalities through substitution and the remaining variables
/// by Fourier-Motzkin.
pub fn feasible(constraints: &[Constraint], nvars: usize) -> bool {
    let mut eqs: Vec<Constraint> = Vec::new();
    let mut ineqs: Vec<Constraint> = Vec::new();
    for c in constraints {
        debug_assert_eq!(c.coeffs.len(), nvars);
        match c.rel {
            Rel::Eq => eqs.push(c.clone()),
            _ => ineqs.push(c.clone()),
        }
    }
    let mut alive: Vec<bool> = vec![true; nvars];

    // Substitute equalities away.
    while let Some(eq) = eqs.pop() {
        let Some(k) = (0..nvars).find(|&k| alive[k] && !eq.coeffs[k].is_zero()) else {
            if eq.rhs.is_zero() {
                continue;
            }
            return false;
        };
        alive[k] = false;
        // x_k = (rhs - sum_{j!=k} a_j x_j) / a_k
        let ak = eq.coeffs[k].clone();
        let substitute = |c: &mut Constraint| {
            if c.coeffs[k].is_zero() {
                return;
            }
            let f = &c.coeffs[k] / &ak;
            for j in 0..nvars {
                if j != k {
                    let v = &c.coeffs[j] - &f * &eq.coeffs[j];
                    c.coeffs[j] = v;
                }
            }
            c.coeffs[k] = Rational::zero();
            let v = &c.rhs - &f * &eq.rhs;
            c.rhs = v;
        };
        for c in eqs.iter_mut() {
            substitute(c);
        }
        for c in ineqs.iter_mut() {
            substitute(c);
        }
    }

    // Fourier-Motzkin on the remaining inequality system.
    let mut system = ineqs;
    for k in 0..nvars {
        if !alive[k] {
            continue;
        }
        let mut lows: Vec<Constraint> = Vec::new();
        let mut ups: Vec<Constraint> = Vec::new();
        let mut rest: Vec<Constraint> = Vec::new();
        for c in system.drain(..) {
            if c.coeffs[k].is_zero() {
                rest.push(c);
            } else if c.coeffs[k].is_positive() {
                ups.push(c);
            } else {
                lows.push(c);
            }
        }
        for lo in &lows {
            for up in &ups {
                // lo: a.x <= b with a_k < 0  =>  x_k >= (b - a'.x)/a_k side
                // combine to eliminate x_k.
                let fl = -lo.coeffs[k].clone(); // > 0
                let fu = up.coeffs[k].clone(); // > 0
                let mut coeffs = Vec::with_capacity(nvars);
                for j in 0..nvars {
                    coeffs.push(&lo.coeffs[j] * &fu + &up.coeffs[j] * &fl);
                }
                let rhs = &lo.rhs * &fu + &up.rhs * &fl;
                let rel = if lo.rel == Rel::Lt || up.rel == Rel::Lt {
                    Rel::Lt
                } else {
                    Rel::Le
                };
                let c = Constraint { coeffs, rhs, rel }.normalized();
                rest.push(c);
            }
        }
        // Deduplicate to keep growth in check.
        let mut dedup: Vec<Constraint> = Vec::new();
        for c in rest {
            if c.coeffs.iter().all(|v| v.is_zero()) {
                let ok = match c.rel {
                    Rel::Le => !c.rhs.is_negative(),
                    Rel::Lt => c.rhs.is_positive(),
                    Rel::Eq => unreachable!(),
                };
                if !ok {
                    return false;
                }
                continue;
            }
            if !dedup
                .iter()
                .any(|d| d.rel == c.rel && d.rhs == c.rhs && d.coeffs == c.coeffs)
            {
                dedup.push(c);
            }
        }
        system = dedup;
    }
    for c in &system {
        debug_assert!(c.coeffs.iter().all(|v| v.is_zero()));
        let ok = match c.rel {
            Rel::Le => !c.rhs.is_negative(),
            Rel::Lt => c.rhs.is_positive(),
            Rel::Eq => true,
        };
        if !ok {
            return false;
        }
    }
    true
}

/// Is `p` in the convex hull of `points`? Exact, any small dimension.
///
/// Decided through the separating-functional dual: `p` is outside iff there
/// are `a, c` with `a.q <= c` for all hull points and `a.p >= c + 1`.
pub fn in_convex_hull(p: &[Rational], points: &[Vec<Rational>]) -> bool {
    let d = p.len();
    let nvars = d + 1; // a_1..a_d, c
    let mut cons = Vec::with_capacity(points.len() + 1);
    for q in points {
        let mut coeffs = q.clone();
        coeffs.push(rat(-1));
        cons.push(Constraint::new(coeffs, Rel::Le, Rational::zero()));
    }
    // a.p - c >= 1  <=>  -a.p + c <= -1
    let mut coeffs: Vec<Rational> = p.iter().map(|x| -x.clone()).collect();
    coeffs.push(Rational::one());
    cons.push(Constraint::new(coeffs, Rel::Le, rat(-1)));
    !feasible(&cons, nvars)
}

/// Reduces a point set to its extreme points (exact convex hull vertices).
pub fn extreme_points(points: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let mut uniq: Vec<Vec<Rational>> = Vec::new();
    for p in points {
        if !uniq.contains(p) {
            uniq.push(p.clone());
        }
    }
    let mut out = Vec::new();
    for (i, p) in uniq.iter().enumerate() {
        let others: Vec<Vec<Rational>> = uniq
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, q)| q.clone())
            .collect();
        if others.is_empty() || !in_convex_hull(p, &others) {
            out.push(p.clone());
        }
    }
    out
}

/// Coordinates of `points` in the affine frame `(origin, basis)`; `None` if a
/// point is outside the affine span.
pub fn affine_coordinates(
    origin: &[Rational],
    basis: &[Vec<Rational>],
    point: &[Rational],
) -> Option<Vec<Rational>> {
    let d = origin.len();
    let k = basis.len();
    if k == 0 {
        return if point == origin { Some(Vec::new()) } else { None };
    }
    // Least-squares-free exact solve: stack basis vectors as columns.
    let rows: Vec<Vec<Rational>> = (0..d)
        .map(|r| (0..k).map(|c| basis[c][r].clone()).collect())
        .collect();
    let rhs: Vec<Rational> = sub(point, origin);
    // Overdetermined: solve on a row subset of rank k, then verify.
    let sol = solve_overdetermined(&rows, &rhs)?;
    for r in 0..d {
        let mut acc = Rational::zero();
        for c in 0..k {
            acc += &rows[r][c] * &sol[c];
        }
        if acc != rhs[r] {
            return None;
        }
    }
    Some(sol)
}

fn solve_overdetermined(rows: &[Vec<Rational>], rhs: &[Rational]) -> Option<Vec<Rational>> {
    let k = rows.first().map(|r| r.len()).unwrap_or(0);
    // Pick k independent rows greedily.
    let mut chosen_rows: Vec<Vec<Rational>> = Vec::new();
    let mut chosen_rhs: Vec<Rational> = Vec::new();
    for (row, b) in rows.iter().zip(rhs) {
        let mut candidate = chosen_rows.clone();
        candidate.push(row.clone());
        if rank(&candidate) > chosen_rows.len() {
            chosen_rows.push(row.clone());
            chosen_rhs.push(b.clone());
            if chosen_rows.len() == k {
                break;
            }
        }
    }
    if chosen_rows.len() < k {
        return None;
    }
    solve_linear(&chosen_rows, &chosen_rhs)
}

/// Orthonormal-free affine basis: origin = first point, basis = maximal
/// independent set of difference vectors.
pub fn affine_basis(points: &[Vec<Rational>]) -> (Vec<Rational>, Vec<Vec<Rational>>) {
    let origin = points[0].clone();
    let mut basis: Vec<Vec<Rational>> = Vec::new();
    for p in &points[1..] {
        let d = sub(p, &origin);
        let mut cand = basis.clone();
        cand.push(d.clone());
        if rank(&cand) > basis.len() {
            basis.push(d);
        }
    }
    (origin, basis)
}

/// Integer gcd-reduced direction of a rational vector.
pub fn primitive_direction(v: &[Rational]) -> Vec<i64> {
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * &lcm / x.denom()).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return vec![0; v.len()];
    }
    ints.iter()
        .map(|x| (x / &g).to_i64().expect("primitive direction overflow"))
        .collect()
}

/// Determinant of a small integer matrix given by columns.
pub fn det_i64(cols: &[Vec<i64>]) -> i64 {
    let n = cols.len();
    match n {
        1 => cols[0][0],
        2 => cols[0][0] * cols[1][1] - cols[1][0] * cols[0][1],
        3 => {
            let m = |r: usize, c: usize| cols[c][r] as i128;
            let d = m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
                - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
                + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
            i64::try_from(d).expect("determinant overflow")
        }
        _ => panic!("det_i64 supports n <= 3"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rv(v: &[i64]) -> Vec<Rational> {
        ratvec_from_ints(v)
    }

    #[test]
    fn solves_small_systems() {
        let a = vec![rv(&[2, 1]), rv(&[1, -1])];
        let b = rv(&[3, 0]);
        let x = solve_linear(&a, &b).unwrap();
        assert_eq!(x, rv(&[1, 1]));
        assert!(solve_linear(&[rv(&[1, 1]), rv(&[2, 2])], &rv(&[1, 3])).is_none());
    }

    #[test]
    fn hull_membership_square() {
        let square = vec![rv(&[0, 0]), rv(&[2, 0]), rv(&[0, 2]), rv(&[2, 2])];
        assert!(in_convex_hull(&rv(&[1, 1]), &square));
        assert!(in_convex_hull(&rv(&[2, 0]), &square));
        assert!(!in_convex_hull(&rv(&[3, 1]), &square));
    }

    #[test]
    fn extreme_points_drop_midpoint() {
        let pts = vec![rv(&[0, 0]), rv(&[2, 0]), rv(&[1, 0])];
        let ext = extreme_points(&pts);
        assert_eq!(ext.len(), 2);
        assert!(ext.contains(&rv(&[0, 0])) && ext.contains(&rv(&[2, 0])));
    }

    #[test]
    fn feasibility_strictness() {
        // x < 0 and x >= 0 infeasible; x <= 0 and x >= 0 feasible.
        let strict = vec![
            Constraint::new(rv(&[1]), Rel::Lt, rat(0)),
            Constraint::new(rv(&[-1]), Rel::Le, rat(0)),
        ];
        assert!(!feasible(&strict, 1));
        let loose = vec![
            Constraint::new(rv(&[1]), Rel::Le, rat(0)),
            Constraint::new(rv(&[-1]), Rel::Le, rat(0)),
        ];
        assert!(feasible(&loose, 1));
    }

    #[test]
    fn decimal_parsing() {
        assert_eq!(rat_from_decimal("0.1").unwrap(), rat_frac(1, 10));
        assert_eq!(rat_from_decimal("-2.25").unwrap(), rat_frac(-9, 4));
        assert_eq!(rat_from_decimal("3").unwrap(), rat(3));
        assert!(rat_from_decimal("a.b").is_none());
    }

    #[test]
    fn primitive_directions() {
        assert_eq!(primitive_direction(&rv(&[2, -4])), vec![1, -2]);
        let half = vec![rat_frac(1, 2), rat_frac(3, 2)];
        assert_eq!(primitive_direction(&half), vec![1, 3]);
    }
}

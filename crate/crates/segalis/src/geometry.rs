//! Exact rational geometry over the moment curve.
//!
//! Every predicate here works with arbitrary-precision rationals — no
//! floating point — so the module can serve as an independent oracle for the
//! combinatorial predicates in [`crate::complexes`], [`crate::orientals`] and
//! [`crate::triangulations`]: side-of-hyperplane tests, proper-intersection
//! tests, vertical fiber profiles, and simplex volumes.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::complexes::{Complex, Simplex};

/// Exact rational scalar used throughout the crate.
pub type Rat = BigRational;

/// A point with exact rational coordinates.
pub type RationalPoint = Vec<Rat>;

/// Errors for geometric queries.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeometryError {
    #[error("moment points require dimension at least 1")]
    ZeroDimension,
    #[error("simplex has {got} vertices but the ambient dimension {d} allows at most {max}")]
    TooManyVertices { got: usize, d: usize, max: usize },
    #[error("a full-dimensional simplex in dimension {d} needs exactly {expected} vertices, got {got}")]
    NotFullDimensional { d: usize, expected: usize, got: usize },
    #[error("hyperplane test needs |I| = point dimension = {expected}, got |I| = {got}")]
    BadHyperplaneArity { expected: usize, got: usize },
}

/// Which side of an oriented hyperplane a point lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SideVerdict {
    Above,
    On,
    Below,
}

/// Verdict of the sampling-based admissibility falsifier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AdmissibilityVerdict {
    /// A sampled base point whose vertical fiber breaks into ≥ 2 components.
    RejectedWithWitness(RationalPoint),
    /// No sampled point refuted the interval condition.
    NotRefuted,
}

fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// The moment-curve point `ν(t) = (t, t², …, t^d)`, exactly.
pub fn moment_point(t: i64, d: usize) -> Result<RationalPoint, GeometryError> {
    if d == 0 {
        return Err(GeometryError::ZeroDimension);
    }
    let mut coords = Vec::with_capacity(d);
    let mut acc = BigInt::one();
    for _ in 0..d {
        acc *= BigInt::from(t);
        coords.push(Rat::from_integer(acc.clone()));
    }
    Ok(coords)
}

/// Determinant of a square rational matrix by Gaussian elimination.
pub fn determinant(mut m: Vec<Vec<Rat>>) -> Rat {
    let n = m.len();
    let mut det = Rat::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rat::zero();
        };
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= p.clone();
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone() / p.clone();
            for c in col..n {
                let sub = f.clone() * m[col][c].clone();
                m[r][c] -= sub;
            }
        }
    }
    det
}

/// Which side of the hyperplane through `ν(i)`, `i ∈ I`, the point `y` lies
/// on: the sign of the determinant with rows `(1, ν(i))` for `i ∈ I` followed
/// by `(1, y)`.
pub fn side_of_hyperplane(i: &Simplex, y: &[Rat]) -> Result<SideVerdict, GeometryError> {
    let d = y.len();
    if i.len() != d {
        return Err(GeometryError::BadHyperplaneArity { expected: d, got: i.len() });
    }
    let mut rows = Vec::with_capacity(d + 1);
    for &v in i.vertices() {
        let mut row = vec![Rat::one()];
        row.extend(moment_point(v as i64, d)?);
        rows.push(row);
    }
    let mut row = vec![Rat::one()];
    row.extend_from_slice(y);
    rows.push(row);
    let det = determinant(rows);
    Ok(if det.is_positive() {
        SideVerdict::Above
    } else if det.is_negative() {
        SideVerdict::Below
    } else {
        SideVerdict::On
    })
}

/// Volume of the full-dimensional simplex on `ν_d(I)`: the Vandermonde
/// product `∏_{i<j} (t_j − t_i)` divided by `d!`.
pub fn simplex_volume(i: &Simplex, d: usize) -> Result<Rat, GeometryError> {
    if i.len() != d + 1 {
        return Err(GeometryError::NotFullDimensional { d, expected: d + 1, got: i.len() });
    }
    let vs = i.vertices();
    let mut num = BigInt::one();
    for a in 0..vs.len() {
        for b in a + 1..vs.len() {
            num *= BigInt::from(vs[b] as i64 - vs[a] as i64);
        }
    }
    let mut fact = BigInt::one();
    for k in 2..=d {
        fact *= BigInt::from(k as i64);
    }
    Ok(Rat::new(num, fact))
}

/// All basic feasible solutions of `{x ≥ 0 : A x = b}` (vertices of the
/// polytope), found by enumerating column bases.  Suitable for the tiny
/// systems arising from pairs of simplices.
fn basic_feasible_solutions(a: &[Vec<Rat>], b: &[Rat]) -> Vec<Vec<Rat>> {
    let m = a.len();
    let nv = if m == 0 { 0 } else { a[0].len() };
    let mut out = Vec::new();
    // Row-reduce [A | b] once to determine rank and drop dependent rows.
    let (red_a, red_b) = match reduce_system(a, b) {
        Some(x) => x,
        None => return out, // inconsistent system
    };
    let rank = red_a.len();
    if rank == 0 {
        if nv > 0 {
            out.push(vec![Rat::zero(); nv]);
        }
        return out;
    }
    for cols in combinations(nv, rank) {
        let sub: Vec<Vec<Rat>> = red_a
            .iter()
            .map(|row| cols.iter().map(|&c| row[c].clone()).collect())
            .collect();
        if let Some(sol) = solve_square(&sub, &red_b) {
            if sol.iter().all(|x| !x.is_negative()) {
                let mut full = vec![Rat::zero(); nv];
                for (k, &c) in cols.iter().enumerate() {
                    full[c] = sol[k].clone();
                }
                out.push(full);
            }
        }
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    use itertools::Itertools;
    (0..n).combinations(k).collect()
}

/// Gaussian elimination of `[A|b]` to row-echelon form; returns the
/// independent rows, or `None` if the system is inconsistent.
fn reduce_system(a: &[Vec<Rat>], b: &[Rat]) -> Option<(Vec<Vec<Rat>>, Vec<Rat>)> {
    let m = a.len();
    let nv = if m == 0 { 0 } else { a[0].len() };
    let mut aug: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let mut pivot_row = 0;
    for col in 0..nv {
        let Some(r) = (pivot_row..m).find(|&r| !aug[r][col].is_zero()) else {
            continue;
        };
        aug.swap(pivot_row, r);
        let p = aug[pivot_row][col].clone();
        for r2 in 0..m {
            if r2 == pivot_row || aug[r2][col].is_zero() {
                continue;
            }
            let f = aug[r2][col].clone() / p.clone();
            for c in col..=nv {
                let sub = f.clone() * aug[pivot_row][c].clone();
                aug[r2][c] -= sub;
            }
        }
        pivot_row += 1;
        if pivot_row == m {
            break;
        }
    }
    // Rows beyond the pivot count must be all-zero incl. rhs, else inconsistent.
    for row in aug.iter().skip(pivot_row) {
        if row[..nv].iter().all(|x| x.is_zero()) && !row[nv].is_zero() {
            return None;
        }
    }
    let kept: Vec<Vec<Rat>> = aug[..pivot_row].iter().map(|r| r[..nv].to_vec()).collect();
    let rhs: Vec<Rat> = aug[..pivot_row].iter().map(|r| r[nv].clone()).collect();
    Some((kept, rhs))
}

/// Solves a square system exactly; `None` if singular.
fn solve_square(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let n = a.len();
    let mut aug: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !aug[r][col].is_zero())?;
        aug.swap(pivot, col);
        let p = aug[col][col].clone();
        for r in 0..n {
            if r == col || aug[r][col].is_zero() {
                continue;
            }
            let f = aug[r][col].clone() / p.clone();
            for c in col..=n {
                let sub = f.clone() * aug[col][c].clone();
                aug[r][c] -= sub;
            }
        }
    }
    Some(
        (0..n)
            .map(|r| aug[r][n].clone() / aug[r][r].clone())
            .collect(),
    )
}

/// Whether the geometric simplices on `ν_d(I)` and `ν_d(J)` intersect exactly
/// in the face spanned by `I ∩ J`.
///
/// Two independent routes are computed and cross-checked:
///
/// * a linear-feasibility test: the simplices intersect improperly iff the
///   polytope of pairs of barycentric representations of a common point has a
///   vertex supported outside the shared block;
/// * a combinatorial circuit test: an improper crossing exists iff some
///   `(d+2)`-subset of `I ∪ J` has its two alternation classes inside `I`
///   and `J` respectively (the circuits of the moment curve alternate).
pub fn proper_intersection(i: &Simplex, j: &Simplex, d: usize) -> Result<bool, GeometryError> {
    for s in [i, j] {
        if s.len() > d + 1 {
            return Err(GeometryError::TooManyVertices { got: s.len(), d, max: d + 1 });
        }
    }
    let feas = proper_by_feasibility(i, j, d)?;
    let circ = proper_by_circuits(i, j, d);
    debug_assert_eq!(feas, circ, "proper_intersection routes disagree on {i}, {j}, d={d}");
    Ok(feas)
}

/// Feasibility route, exposed separately so tests can cross-check routes.
pub fn proper_by_feasibility(i: &Simplex, j: &Simplex, d: usize) -> Result<bool, GeometryError> {
    let iv = i.vertices();
    let jv = j.vertices();
    let ni = iv.len();
    let nj = jv.len();
    // Variables: λ over I then μ over J.  Equalities: Σλ ν(i) − Σμ ν(j) = 0
    // (d rows), Σλ = 1, Σμ = 1.
    let mut a = vec![vec![Rat::zero(); ni + nj]; d + 2];
    for (k, &v) in iv.iter().enumerate() {
        let p = moment_point(v as i64, d)?;
        for (row, coord) in p.into_iter().enumerate() {
            a[row][k] = coord;
        }
        a[d][k] = Rat::one();
    }
    for (k, &v) in jv.iter().enumerate() {
        let p = moment_point(v as i64, d)?;
        for (row, coord) in p.into_iter().enumerate() {
            a[row][ni + k] = -coord;
        }
        a[d + 1][ni + k] = Rat::one();
    }
    let mut b = vec![Rat::zero(); d + 2];
    b[d] = Rat::one();
    b[d + 1] = Rat::one();
    // Bad vertex: a common point using a vertex outside I ∩ J.
    let shared_i: Vec<bool> = iv.iter().map(|v| j.contains(*v)).collect();
    let shared_j: Vec<bool> = jv.iter().map(|v| i.contains(*v)).collect();
    for sol in basic_feasible_solutions(&a, &b) {
        let bad_i = (0..ni).any(|k| !shared_i[k] && sol[k].is_positive());
        let bad_j = (0..nj).any(|k| !shared_j[k] && sol[ni + k].is_positive());
        if bad_i || bad_j {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Circuit route: on the moment curve in dimension `d`, the minimal affine
/// dependences are the `(d+2)`-subsets with alternating signs.
pub fn proper_by_circuits(i: &Simplex, j: &Simplex, d: usize) -> bool {
    use itertools::Itertools;
    let union = i.union(j);
    if union.len() < d + 2 {
        return true;
    }
    for z in union.vertices().iter().copied().combinations(d + 2) {
        // Alternation classes: even and odd positions of the sorted circuit.
        let evens: Vec<usize> = z.iter().copied().step_by(2).collect();
        let odds: Vec<usize> = z.iter().copied().skip(1).step_by(2).collect();
        let in_i = |vs: &[usize]| vs.iter().all(|v| i.contains(*v));
        let in_j = |vs: &[usize]| vs.iter().all(|v| j.contains(*v));
        if (in_i(&evens) && in_j(&odds)) || (in_j(&evens) && in_i(&odds)) {
            return false;
        }
    }
    true
}

/// A closed rational interval `[lo, hi]` (degenerate when `lo == hi`).
pub type Interval = (Rat, Rat);

/// The intersection of the vertical line over `x ∈ ℝ^{d−1}` with `|K|`
/// (realized on `ν_d`), as a minimal sorted union of disjoint closed
/// intervals.
pub fn fiber_profile(k: &Complex, d: usize, x: &[Rat]) -> Vec<Interval> {
    assert_eq!(x.len(), d.saturating_sub(1), "base point must live in ℝ^(d-1)");
    let mut pieces: Vec<Interval> = Vec::new();
    for f in k.facets() {
        if let Some(iv) = simplex_fiber(f, d, x) {
            pieces.push(iv);
        }
    }
    merge_intervals(pieces)
}

/// The fiber of a single simplex over `x`, or `None` when the vertical line
/// misses it.  Always a single interval (convexity).
pub fn simplex_fiber(s: &Simplex, d: usize, x: &[Rat]) -> Option<Interval> {
    let vs = s.vertices();
    let nv = vs.len();
    // λ ≥ 0, Σλ = 1, Σ λ_v ν_{d−1}(v) = x; height h(λ) = Σ λ_v v^d.
    let mut a = vec![vec![Rat::zero(); nv]; d];
    for (kk, &v) in vs.iter().enumerate() {
        if d >= 2 {
            let p = moment_point(v as i64, d - 1).unwrap();
            for (row, coord) in p.into_iter().enumerate() {
                a[row][kk] = coord;
            }
        }
        a[d - 1][kk] = Rat::one();
    }
    let mut b: Vec<Rat> = x.to_vec();
    b.push(Rat::one());
    let heights: Vec<Rat> = vs
        .iter()
        .map(|&v| {
            let mut acc = Rat::one();
            for _ in 0..d {
                acc *= rat(v as i64);
            }
            acc
        })
        .collect();
    let mut lo: Option<Rat> = None;
    let mut hi: Option<Rat> = None;
    for sol in basic_feasible_solutions(&a, &b) {
        let h: Rat = sol
            .iter()
            .zip(&heights)
            .map(|(l, hv)| l.clone() * hv.clone())
            .fold(Rat::zero(), |acc, t| acc + t);
        lo = Some(match lo {
            Some(cur) => cur.min(h.clone()),
            None => h.clone(),
        });
        hi = Some(match hi {
            Some(cur) => cur.max(h),
            None => h,
        });
    }
    Some((lo?, hi?))
}

/// Merges closed intervals into a minimal sorted union of disjoint ones.
fn merge_intervals(mut pieces: Vec<Interval>) -> Vec<Interval> {
    pieces.sort();
    let mut out: Vec<Interval> = Vec::new();
    for (lo, hi) in pieces {
        match out.last_mut() {
            Some((_, prev_hi)) if lo <= *prev_hi => {
                if hi > *prev_hi {
                    *prev_hi = hi;
                }
            }
            _ => out.push((lo, hi)),
        }
    }
    out
}

/// Samples deterministic base points (pairwise-subset barycenters plus seeded
/// random convex combinations within projected facets, up to `sample_budget`)
/// and rejects `K` as `d`-admissible if some sampled fiber has two or more
/// components.  Rejection is sound; non-refutation is probabilistic.
pub fn oracle_check_admissible(
    k: &Complex,
    d: usize,
    sample_budget: usize,
    seed: u64,
) -> AdmissibilityVerdict {
    let mut samples: Vec<RationalPoint> = Vec::new();
    if d == 1 {
        // The base is a point: the only fiber is |K| itself.
        samples.push(Vec::new());
    } else {
        use itertools::Itertools;
        let facets: Vec<&Simplex> = k.facets().collect();
        for (s1, s2) in facets.iter().cartesian_product(facets.iter()) {
            let verts: Vec<usize> = s1.union(s2).vertices().to_vec();
            for subset in verts.iter().copied().powerset().filter(|s| !s.is_empty()) {
                samples.push(barycenter(&subset, d - 1));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for idx in 0..sample_budget {
            let f = facets[idx % facets.len()];
            samples.push(random_convex_point(f, d - 1, &mut rng));
        }
    }
    for x in samples {
        if fiber_profile(k, d, &x).len() >= 2 {
            return AdmissibilityVerdict::RejectedWithWitness(x);
        }
    }
    AdmissibilityVerdict::NotRefuted
}

fn barycenter(vertices: &[usize], dim: usize) -> RationalPoint {
    let n = rat(vertices.len() as i64);
    let mut acc = vec![Rat::zero(); dim];
    for &v in vertices {
        let p = moment_point(v as i64, dim).unwrap();
        for (c, coord) in p.into_iter().enumerate() {
            acc[c] += coord;
        }
    }
    acc.into_iter().map(|c| c / n.clone()).collect()
}

fn random_convex_point(s: &Simplex, dim: usize, rng: &mut ChaCha8Rng) -> RationalPoint {
    // Random rational barycentric weights with small denominators.
    let weights: Vec<Rat> = s
        .vertices()
        .iter()
        .map(|_| rat(rng.gen_range(1..100)))
        .collect();
    let total: Rat = weights.iter().cloned().fold(Rat::zero(), |a, w| a + w);
    let mut acc = vec![Rat::zero(); dim];
    for (&v, w) in s.vertices().iter().zip(&weights) {
        let p = moment_point(v as i64, dim).unwrap();
        for (c, coord) in p.into_iter().enumerate() {
            acc[c] += coord * w.clone();
        }
    }
    acc.into_iter().map(|c| c / total.clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::{boundary_complex, gap_parity, simplex, Parity, Side};
    use itertools::Itertools;

    #[test]
    fn moment_points() {
        assert_eq!(moment_point(0, 3).unwrap(), vec![rat(0), rat(0), rat(0)]);
        assert_eq!(moment_point(2, 3).unwrap(), vec![rat(2), rat(4), rat(8)]);
        assert_eq!(moment_point(5, 1).unwrap(), vec![rat(5)]);
        assert_eq!(moment_point(3, 0), Err(GeometryError::ZeroDimension));
    }

    #[test]
    fn side_examples() {
        let y = moment_point(3, 3).unwrap();
        assert_eq!(
            side_of_hyperplane(&simplex(&[0, 1, 2]), &y).unwrap(),
            SideVerdict::Above
        );
        let y = moment_point(1, 2).unwrap();
        assert_eq!(
            side_of_hyperplane(&simplex(&[0, 2]), &y).unwrap(),
            SideVerdict::Below
        );
        // Midpoint of the chord from ν(0) to ν(2) lies on the affine span.
        let y = vec![rat(1), rat(2)];
        assert_eq!(
            side_of_hyperplane(&simplex(&[0, 2]), &y).unwrap(),
            SideVerdict::On
        );
    }

    #[test]
    fn gale_agreement_small() {
        // Above ⟺ Even, for a sample of subsets and gaps.
        for n in 2..=6usize {
            for d in 1..=3usize {
                for i in (0..=n).combinations(d) {
                    let s = simplex(&i);
                    for j in (0..=n).filter(|j| !s.contains(*j)) {
                        let y = moment_point(j as i64, d).unwrap();
                        let side = side_of_hyperplane(&s, &y).unwrap();
                        let parity = gap_parity(&s, j).unwrap();
                        match parity {
                            Parity::Even => assert_eq!(side, SideVerdict::Above, "{s} gap {j}"),
                            Parity::Odd => assert_eq!(side, SideVerdict::Below, "{s} gap {j}"),
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn volumes() {
        assert_eq!(simplex_volume(&simplex(&[0, 1]), 1).unwrap(), rat(1));
        assert_eq!(simplex_volume(&simplex(&[0, 1, 2]), 2).unwrap(), rat(1));
        assert_eq!(simplex_volume(&simplex(&[0, 2, 3]), 2).unwrap(), rat(3));
        assert!(simplex_volume(&simplex(&[0, 1]), 2).is_err());
    }

    #[test]
    fn boundary_triangulations_have_equal_volume() {
        for n in 3..=7usize {
            for d in 1..=3usize {
                if d >= n {
                    continue;
                }
                let total = |side| -> Rat {
                    boundary_complex(n, d, side)
                        .unwrap()
                        .facet_vec()
                        .iter()
                        .map(|f| simplex_volume(f, d).unwrap())
                        .fold(Rat::zero(), |a, v| a + v)
                };
                assert_eq!(total(Side::Lower), total(Side::Upper), "n={n} d={d}");
            }
        }
    }

    #[test]
    fn proper_intersection_examples() {
        // Fan triangles of the pentagon share the edge {0,3}: proper.
        assert!(proper_intersection(&simplex(&[0, 2, 3]), &simplex(&[0, 3, 4]), 2).unwrap());
        // Crossing diagonals {0,2} vs {1,3}: improper.
        assert!(!proper_intersection(&simplex(&[0, 2, 4]), &simplex(&[1, 3, 4]), 2).unwrap());
        assert!(!proper_intersection(&simplex(&[0, 2]), &simplex(&[1, 3]), 2).unwrap());
        // A simplex meets itself properly.
        assert!(proper_intersection(&simplex(&[0, 1, 2]), &simplex(&[0, 1, 2]), 2).unwrap());
        assert!(proper_intersection(&simplex(&[0, 1, 2, 3, 4]), &simplex(&[0, 1]), 2).is_err());
    }

    #[test]
    fn proper_intersection_routes_agree_exhaustively() {
        for n in 2..=5usize {
            for d in 1..=3usize {
                let subsets: Vec<Vec<usize>> = (0..=n)
                    .powerset()
                    .filter(|s| !s.is_empty() && s.len() <= d + 1)
                    .collect();
                for (a, b) in subsets.iter().cartesian_product(subsets.iter()) {
                    let i = simplex(a);
                    let j = simplex(b);
                    assert_eq!(
                        proper_by_feasibility(&i, &j, d).unwrap(),
                        proper_by_circuits(&i, &j, d),
                        "n={n} d={d} I={i} J={j}"
                    );
                }
            }
        }
    }

    #[test]
    fn fiber_of_single_simplex_is_one_interval() {
        let k = Complex::generated(&[simplex(&[0, 1, 2, 3])], 3).unwrap();
        // Barycenter of the projected vertices.
        let x = barycenter(&[0, 1, 2, 3], 2);
        let profile = fiber_profile(&k, 3, &x);
        assert_eq!(profile.len(), 1);
        assert!(profile[0].0 < profile[0].1);
    }

    #[test]
    fn fiber_of_vertex_is_degenerate() {
        let k = Complex::generated(&[simplex(&[2])], 4).unwrap();
        let profile = fiber_profile(&k, 1, &[]);
        assert_eq!(profile, vec![(rat(2), rat(2))]);
    }

    #[test]
    fn fiber_misses_far_triangle() {
        let k = Complex::generated(&[simplex(&[0, 1, 2]), simplex(&[2, 3, 4])], 4).unwrap();
        // Interior of the projection of the first triangle only.
        let x = barycenter(&[0, 1], 1);
        let profile = fiber_profile(&k, 2, &x);
        assert_eq!(profile.len(), 1);
    }

    #[test]
    fn admissibility_falsifier() {
        let gap = Complex::generated(&[simplex(&[0, 1]), simplex(&[3, 4])], 4).unwrap();
        assert!(matches!(
            oracle_check_admissible(&gap, 1, 16, 7),
            AdmissibilityVerdict::RejectedWithWitness(_)
        ));
        let seg = Complex::generated(&[simplex(&[0, 1])], 4).unwrap();
        assert_eq!(oracle_check_admissible(&seg, 1, 16, 7), AdmissibilityVerdict::NotRefuted);
        let lower = boundary_complex(4, 3, Side::Lower).unwrap();
        assert_eq!(oracle_check_admissible(&lower, 3, 32, 7), AdmissibilityVerdict::NotRefuted);
    }
}

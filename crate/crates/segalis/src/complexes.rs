//! Abstract simplicial complexes on the vertex set `[n] = {0, …, n}`.
//!
//! Simplices are strictly increasing vertex lists; complexes are finite
//! families closed under passage to nonempty subsets, stored in canonical
//! (lexicographic) order so that equality is structural.  The module also
//! provides the gap-parity predicates on subsets of `[n]` and the resulting
//! lower/upper boundary complexes of cyclic polytopes and hemisphere
//! decompositions of simplex boundaries.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors for complex construction and parity queries.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ComplexError {
    /// A complex must have at least one simplex.
    #[error("a complex must be generated by at least one simplex")]
    EmptyComplex,
    /// A vertex label exceeds the declared ambient `n`.
    #[error("vertex {vertex} out of range for ambient [{ambient}]")]
    BadVertex { vertex: usize, ambient: usize },
    /// Gap parity is only defined for vertices not in the simplex.
    #[error("vertex {0} is not a gap (it belongs to the simplex)")]
    NotAGap(usize),
    /// Boundary complexes require `dim < n`.
    #[error("dimension {dim} too large for ambient [{ambient}]")]
    DimensionTooLarge { dim: usize, ambient: usize },
    /// A single vertex has no boundary.
    #[error("a singleton simplex has no boundary")]
    NoBoundary,
    /// Simplices must be nonempty and strictly increasing.
    #[error("vertex list is not nonempty and strictly increasing")]
    NotASimplex,
}

/// Parity of a gap of a subset, per the evenness criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

/// Which boundary hemisphere of a cyclic polytope.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Lower,
    Upper,
}

/// A nonempty, strictly increasing list of vertex labels.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Simplex(Vec<usize>);

impl Simplex {
    /// Builds a simplex from a vertex list, which must be nonempty and
    /// strictly increasing.
    pub fn new(vertices: Vec<usize>) -> Result<Self, ComplexError> {
        if vertices.is_empty() || vertices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ComplexError::NotASimplex);
        }
        Ok(Simplex(vertices))
    }

    /// Builds a simplex from any collection of vertices, sorting and
    /// deduplicating first.
    pub fn from_iter<I: IntoIterator<Item = usize>>(vertices: I) -> Result<Self, ComplexError> {
        let set: BTreeSet<usize> = vertices.into_iter().collect();
        Self::new(set.into_iter().collect())
    }

    /// The vertex labels, strictly increasing.
    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    /// Number of vertices.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Geometric dimension, `|I| - 1`.
    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    /// Largest vertex label.
    pub fn max_vertex(&self) -> usize {
        *self.0.last().unwrap()
    }

    /// Membership test.
    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    /// True iff every vertex of `self` is a vertex of `other`.
    pub fn is_subset_of(&self, other: &Simplex) -> bool {
        self.0.iter().all(|v| other.contains(*v))
    }

    /// Intersection as a simplex, or `None` when disjoint.
    pub fn intersection(&self, other: &Simplex) -> Option<Simplex> {
        let common: Vec<usize> = self.0.iter().filter(|v| other.contains(**v)).copied().collect();
        if common.is_empty() {
            None
        } else {
            Some(Simplex(common))
        }
    }

    /// Union as a simplex.
    pub fn union(&self, other: &Simplex) -> Simplex {
        let set: BTreeSet<usize> = self.0.iter().chain(other.0.iter()).copied().collect();
        Simplex(set.into_iter().collect())
    }

    /// The facet obtained by deleting the `k`-th vertex (0-based).
    /// Panics if the simplex is a singleton.
    pub fn delete(&self, k: usize) -> Simplex {
        assert!(self.0.len() >= 2, "cannot delete from a singleton");
        let mut v = self.0.clone();
        v.remove(k);
        Simplex(v)
    }

    /// All nonempty subsets of this simplex, as simplices.
    pub fn nonempty_subsets(&self) -> Vec<Simplex> {
        self.0
            .iter()
            .copied()
            .powerset()
            .filter(|s| !s.is_empty())
            .map(Simplex)
            .collect()
    }

    /// All facets (codimension-1 faces). Empty for singletons.
    pub fn facets(&self) -> Vec<Simplex> {
        if self.0.len() < 2 {
            return Vec::new();
        }
        (0..self.0.len()).map(|k| self.delete(k)).collect()
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.0.iter().join(","))
    }
}

/// Shorthand for building a simplex from a slice in tests and examples.
pub fn simplex(vertices: &[usize]) -> Simplex {
    Simplex::new(vertices.to_vec()).expect("valid simplex literal")
}

/// Parity of the gap `j` of the subset `I`: even iff `#{i ∈ I : i > j}` is
/// even.
pub fn gap_parity(i: &Simplex, j: usize) -> Result<Parity, ComplexError> {
    if i.contains(j) {
        return Err(ComplexError::NotAGap(j));
    }
    let above = i.vertices().iter().filter(|&&v| v > j).count();
    Ok(if above % 2 == 0 { Parity::Even } else { Parity::Odd })
}

/// True iff every gap of `I` in `[n]` is even. A subset with no gaps is both
/// even and odd (the criterion is vacuous).
pub fn is_even_subset(i: &Simplex, n: usize) -> bool {
    (0..=n)
        .filter(|j| !i.contains(*j))
        .all(|j| gap_parity(i, j) == Ok(Parity::Even))
}

/// True iff every gap of `I` in `[n]` is odd.
pub fn is_odd_subset(i: &Simplex, n: usize) -> bool {
    (0..=n)
        .filter(|j| !i.contains(*j))
        .all(|j| gap_parity(i, j) == Ok(Parity::Odd))
}

/// A finite abstract simplicial complex on `[n]`, stored downward-closed with
/// the facet set cached.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Complex {
    ambient_n: usize,
    simplices: BTreeSet<Simplex>,
    facets: BTreeSet<Simplex>,
}

impl Complex {
    /// The downward closure `⟨generators⟩` of a nonempty set of simplices.
    /// Idempotent: closing a closed complex returns an equal complex.
    pub fn generated(
        generators: &[Simplex],
        ambient_n: usize,
    ) -> Result<Complex, ComplexError> {
        if generators.is_empty() {
            return Err(ComplexError::EmptyComplex);
        }
        for g in generators {
            if g.max_vertex() > ambient_n {
                return Err(ComplexError::BadVertex {
                    vertex: g.max_vertex(),
                    ambient: ambient_n,
                });
            }
        }
        let mut simplices = BTreeSet::new();
        for g in generators {
            for s in g.nonempty_subsets() {
                simplices.insert(s);
            }
        }
        let facets = compute_facets(&simplices);
        Ok(Complex { ambient_n, simplices, facets })
    }

    /// Ambient vertex range bound `n`.
    pub fn ambient_n(&self) -> usize {
        self.ambient_n
    }

    /// All simplices, in lexicographic order.
    pub fn simplices(&self) -> impl Iterator<Item = &Simplex> {
        self.simplices.iter()
    }

    /// The inclusion-maximal simplices, in lexicographic order.
    pub fn facets(&self) -> impl Iterator<Item = &Simplex> {
        self.facets.iter()
    }

    /// Facet set as a vector (lexicographically sorted).
    pub fn facet_vec(&self) -> Vec<Simplex> {
        self.facets.iter().cloned().collect()
    }

    /// Number of simplices.
    pub fn num_simplices(&self) -> usize {
        self.simplices.len()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.simplices.contains(s)
    }

    /// All simplices of a given cardinality.
    pub fn simplices_of_card(&self, card: usize) -> Vec<Simplex> {
        self.simplices.iter().filter(|s| s.len() == card).cloned().collect()
    }

    /// Largest simplex cardinality present.
    pub fn max_card(&self) -> usize {
        self.simplices.iter().map(|s| s.len()).max().unwrap()
    }

    /// The set of vertices actually used.
    pub fn vertex_set(&self) -> BTreeSet<usize> {
        self.simplices
            .iter()
            .flat_map(|s| s.vertices().iter().copied())
            .collect()
    }

    /// Union of two complexes on the same ambient.
    pub fn union(&self, other: &Complex) -> Complex {
        let simplices: BTreeSet<Simplex> =
            self.simplices.union(&other.simplices).cloned().collect();
        let facets = compute_facets(&simplices);
        Complex {
            ambient_n: self.ambient_n.max(other.ambient_n),
            simplices,
            facets,
        }
    }

    /// Intersection of two complexes, or `None` when empty.
    pub fn intersection(&self, other: &Complex) -> Option<Complex> {
        let simplices: BTreeSet<Simplex> =
            self.simplices.intersection(&other.simplices).cloned().collect();
        if simplices.is_empty() {
            return None;
        }
        let facets = compute_facets(&simplices);
        Some(Complex {
            ambient_n: self.ambient_n.max(other.ambient_n),
            simplices,
            facets,
        })
    }

    /// True iff every simplex of `self` lies in `other`.
    pub fn is_subcomplex_of(&self, other: &Complex) -> bool {
        self.simplices.is_subset(&other.simplices)
    }

}

fn compute_facets(simplices: &BTreeSet<Simplex>) -> BTreeSet<Simplex> {
    simplices
        .iter()
        .filter(|s| {
            !simplices
                .iter()
                .any(|t| t.len() > s.len() && s.is_subset_of(t))
        })
        .cloned()
        .collect()
}

/// The lower (`Side::Lower`) or upper (`Side::Upper`) boundary complex of the
/// cyclic polytope on `[n]`: the complex generated by all even (resp. odd)
/// subsets of cardinality `dim + 1`.
pub fn boundary_complex(n: usize, dim: usize, side: Side) -> Result<Complex, ComplexError> {
    if dim >= n {
        return Err(ComplexError::DimensionTooLarge { dim, ambient: n });
    }
    let pred = match side {
        Side::Lower => is_even_subset,
        Side::Upper => is_odd_subset,
    };
    let generators: Vec<Simplex> = (0..=n)
        .combinations(dim + 1)
        .map(Simplex)
        .filter(|s| pred(s, n))
        .collect();
    Complex::generated(&generators, n)
}

/// Splits the boundary of a simplex into its lower (even-facet) and upper
/// (odd-facet) hemispheres; parity is computed inside `I` via `gap_parity`
/// after relabelling through the order isomorphism `I ≅ [|I|-1]`.
pub fn simplex_hemispheres(i: &Simplex) -> Result<(Complex, Complex), ComplexError> {
    if i.len() < 2 {
        return Err(ComplexError::NoBoundary);
    }
    let m = i.len() - 1;
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    for k in 0..=m {
        // The facet deleting the k-th vertex corresponds, under I ≅ [m], to
        // the subset [m] \ {k}, whose single gap k has #{above} = m - k.
        let facet = i.delete(k);
        if (m - k) % 2 == 0 {
            lower.push(facet);
        } else {
            upper.push(facet);
        }
    }
    let n = i.max_vertex();
    Ok((Complex::generated(&lower, n)?, Complex::generated(&upper, n)?))
}

/// JSON form of a complex: `{"n": int, "facets": [[int,…],…]}` with facets
/// sorted lexicographically.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComplexJson {
    pub n: usize,
    pub facets: Vec<Vec<usize>>,
}

impl From<&Complex> for ComplexJson {
    fn from(c: &Complex) -> Self {
        ComplexJson {
            n: c.ambient_n(),
            facets: c.facets().map(|f| f.vertices().to_vec()).collect(),
        }
    }
}

impl TryFrom<&ComplexJson> for Complex {
    type Error = ComplexError;

    fn try_from(j: &ComplexJson) -> Result<Complex, ComplexError> {
        let gens: Result<Vec<Simplex>, _> =
            j.facets.iter().map(|f| Simplex::new(f.clone())).collect();
        Complex::generated(&gens?, j.n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn facet_sets(c: &Complex) -> Vec<Vec<usize>> {
        c.facets().map(|f| f.vertices().to_vec()).collect()
    }

    #[test]
    fn closure_of_full_simplex_has_all_subsets() {
        let c = Complex::generated(&[simplex(&[0, 1, 2])], 2).unwrap();
        assert_eq!(c.num_simplices(), 7);
    }

    #[test]
    fn lower_boundary_of_c43_matches_fixture() {
        // The three facets of the lower boundary of C([4],4) in dimension 3.
        let c = Complex::generated(
            &[simplex(&[0, 1, 2, 3]), simplex(&[1, 2, 3, 4]), simplex(&[0, 1, 3, 4])],
            4,
        )
        .unwrap();
        let b = boundary_complex(4, 3, Side::Lower).unwrap();
        assert_eq!(c, b);
        assert_eq!(
            facet_sets(&b),
            vec![vec![0, 1, 2, 3], vec![0, 1, 3, 4], vec![1, 2, 3, 4]]
        );
    }

    #[test]
    fn upper_boundary_of_c43_matches_fixture() {
        let b = boundary_complex(4, 3, Side::Upper).unwrap();
        assert_eq!(facet_sets(&b), vec![vec![0, 1, 2, 4], vec![0, 2, 3, 4]]);
    }

    #[test]
    fn gap_parity_hand_checked() {
        assert_eq!(gap_parity(&simplex(&[0, 1, 2, 3]), 4), Ok(Parity::Even));
        assert_eq!(gap_parity(&simplex(&[0, 2, 3, 4]), 1), Ok(Parity::Odd));
        for n in 2..8 {
            for j in 1..n {
                assert_eq!(gap_parity(&simplex(&[0, n]), j), Ok(Parity::Odd));
            }
        }
        assert_eq!(
            gap_parity(&simplex(&[0, 1]), 1),
            Err(ComplexError::NotAGap(1))
        );
    }

    #[test]
    fn even_odd_subsets() {
        for n in 2..8 {
            for i in 0..n {
                assert!(is_even_subset(&simplex(&[i, i + 1]), n));
            }
            assert!(is_odd_subset(&simplex(&[0, n]), n));
        }
        assert!(is_even_subset(&simplex(&[0, 1, 3, 4]), 4));
        // No gaps: both even and odd.
        assert!(is_even_subset(&simplex(&[0, 1, 2]), 2));
        assert!(is_odd_subset(&simplex(&[0, 1, 2]), 2));
    }

    #[test]
    fn lower_boundary_dim2_is_fan() {
        let b = boundary_complex(4, 2, Side::Lower).unwrap();
        assert_eq!(
            facet_sets(&b),
            vec![vec![0, 1, 2], vec![0, 2, 3], vec![0, 3, 4]]
        );
    }

    #[test]
    fn boundary_sides_partition_simplex_boundary() {
        for n in 2..=6 {
            let lo = boundary_complex(n, n - 1, Side::Lower).unwrap();
            let up = boundary_complex(n, n - 1, Side::Upper).unwrap();
            let both = lo.union(&up);
            let all: Vec<Simplex> = (0..=n).combinations(n).map(Simplex).collect();
            let full = Complex::generated(&all, n).unwrap();
            assert_eq!(both, full);
            let lo_facets: BTreeSet<_> = lo.facet_vec().into_iter().collect();
            let up_facets: BTreeSet<_> = up.facet_vec().into_iter().collect();
            assert!(lo_facets.is_disjoint(&up_facets));
            assert_eq!(lo_facets.len() + up_facets.len(), n + 1);
        }
    }

    #[test]
    fn hemispheres_match_parity_oracle() {
        let (lo, up) = simplex_hemispheres(&simplex(&[0, 1, 2, 3])).unwrap();
        assert_eq!(facet_sets(&lo), vec![vec![0, 1, 2], vec![0, 2, 3]]);
        assert_eq!(facet_sets(&up), vec![vec![0, 1, 3], vec![1, 2, 3]]);
        let (lo, up) = simplex_hemispheres(&simplex(&[0, 1, 3, 4])).unwrap();
        assert_eq!(facet_sets(&lo), vec![vec![0, 1, 3], vec![0, 3, 4]]);
        assert_eq!(facet_sets(&up), vec![vec![0, 1, 4], vec![1, 3, 4]]);
        let (lo, up) = simplex_hemispheres(&simplex(&[0, 1])).unwrap();
        assert_eq!(facet_sets(&lo), vec![vec![0]]);
        assert_eq!(facet_sets(&up), vec![vec![1]]);
    }

    #[test]
    fn hemispheres_agree_with_relabelled_gap_parity() {
        // Cross-check the closed-form parity in simplex_hemispheres against
        // gap_parity applied within I via the order isomorphism.
        for verts in (0..=7usize).powerset().filter(|v| v.len() >= 2) {
            let i = Simplex::new(verts).unwrap();
            let m = i.len() - 1;
            let (lo, up) = simplex_hemispheres(&i).unwrap();
            for k in 0..=m {
                let std: Vec<usize> = (0..=m).filter(|x| *x != k).collect();
                let p = gap_parity(&Simplex::new(std).unwrap(), k).unwrap();
                let facet = i.delete(k);
                match p {
                    Parity::Even => assert!(lo.contains(&facet)),
                    Parity::Odd => assert!(up.contains(&facet)),
                }
            }
        }
    }

    #[test]
    fn generated_complex_idempotent_and_errors() {
        let c = Complex::generated(&[simplex(&[0, 2]), simplex(&[1])], 3).unwrap();
        let again = Complex::generated(&c.facet_vec(), 3).unwrap();
        assert_eq!(c, again);
        assert_eq!(Complex::generated(&[], 3), Err(ComplexError::EmptyComplex));
        assert_eq!(
            Complex::generated(&[simplex(&[0, 5])], 3),
            Err(ComplexError::BadVertex { vertex: 5, ambient: 3 })
        );
        assert_eq!(
            boundary_complex(2, 2, Side::Lower),
            Err(ComplexError::DimensionTooLarge { dim: 2, ambient: 2 })
        );
    }

    #[test]
    fn json_round_trip() {
        let b = boundary_complex(5, 2, Side::Upper).unwrap();
        let j = ComplexJson::from(&b);
        let text = serde_json::to_string(&j).unwrap();
        let back: ComplexJson = serde_json::from_str(&text).unwrap();
        assert_eq!(Complex::try_from(&back).unwrap(), b);
    }
}

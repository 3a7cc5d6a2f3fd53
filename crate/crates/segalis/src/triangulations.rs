//! Triangulations of cyclic polytopes: the stacking order on full-dimensional
//! simplices, its ε-word linearization, bistellar flips, exact triangulation
//! recognition, and flip-graph / poset enumeration.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_traits::Zero;
use thiserror::Error;

use crate::complexes::{boundary_complex, simplex_hemispheres, Complex, Side, Simplex};
use crate::geometry::{simplex_volume, Rat};

/// Errors for triangulation operations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum TriangulationError {
    #[error("comparison requires two simplices of cardinality {expected}, got {got_i} and {got_j}")]
    BadArity { expected: usize, got_i: usize, got_j: usize },
    #[error("the facet set is not a triangulation of the cyclic polytope")]
    NotATriangulation,
    #[error("flip simplex {0} is not available")]
    FlipNotAvailable(String),
    #[error("enumeration limit of {limit} nodes exceeded")]
    TooLarge { limit: usize },
    #[error("up-flip closure contains a cycle (this contradicts acyclicity and is a bug)")]
    CycleDetected,
}

/// True iff `I ≺ J`: the simplices of cardinality `d+1` satisfy
/// `|I ∪ J| = d+2` and `I ∩ J` lies in the upper hemisphere of `Δ^I` and the
/// lower hemisphere of `Δ^J` (J is stacked directly on top of I).
pub fn rambau_less(i: &Simplex, j: &Simplex, d: usize) -> Result<bool, TriangulationError> {
    if i.len() != d + 1 || j.len() != d + 1 {
        return Err(TriangulationError::BadArity {
            expected: d + 1,
            got_i: i.len(),
            got_j: j.len(),
        });
    }
    if i.union(j).len() != d + 2 {
        return Ok(false);
    }
    let meet = i.intersection(j).expect("|I∩J| = d ≥ 1 when |I∪J| = d+2");
    let (_, upper_i) = simplex_hemispheres(i).expect("|I| ≥ 2");
    let (lower_j, _) = simplex_hemispheres(j).expect("|J| ≥ 2");
    Ok(upper_i.contains(&meet) && lower_j.contains(&meet))
}

/// Letters of the ε-word, ordered `o < * < e` so that the lexicographic order
/// on words linearly extends the stacking order `≺`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum EpsilonLetter {
    O,
    Star,
    E,
}

impl EpsilonLetter {
    pub fn as_char(self) -> char {
        match self {
            EpsilonLetter::O => 'o',
            EpsilonLetter::Star => '*',
            EpsilonLetter::E => 'e',
        }
    }
}

/// The ε-word of a subset `I ⊆ [n]`: position `k` is `*` if `k ∈ I`, `e` if
/// `k` is an even gap, `o` if `k` is an odd gap.
pub fn epsilon_word(i: &Simplex, n: usize) -> Vec<EpsilonLetter> {
    (0..=n)
        .map(|k| {
            if i.contains(k) {
                EpsilonLetter::Star
            } else {
                match crate::complexes::gap_parity(i, k).expect("k is a gap") {
                    crate::complexes::Parity::Even => EpsilonLetter::E,
                    crate::complexes::Parity::Odd => EpsilonLetter::O,
                }
            }
        })
        .collect()
}

/// ε-word rendered as a string, e.g. `*e*o*`.
pub fn epsilon_string(i: &Simplex, n: usize) -> String {
    epsilon_word(i, n).into_iter().map(EpsilonLetter::as_char).collect()
}

/// A triangulation of the cyclic polytope on `[n]` in dimension `d`, stored
/// as its canonical (sorted) set of full-dimensional facets.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triangulation {
    n: usize,
    d: usize,
    facets: BTreeSet<Simplex>,
}

impl Triangulation {
    /// Validates and builds a triangulation.
    pub fn new(
        facets: impl IntoIterator<Item = Simplex>,
        n: usize,
        d: usize,
    ) -> Result<Triangulation, TriangulationError> {
        let facets: BTreeSet<Simplex> = facets.into_iter().collect();
        let fv: Vec<Simplex> = facets.iter().cloned().collect();
        if !is_triangulation(&fv, n, d) {
            return Err(TriangulationError::NotATriangulation);
        }
        Ok(Triangulation { n, d, facets })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn facets(&self) -> impl Iterator<Item = &Simplex> {
        self.facets.iter()
    }

    pub fn facet_vec(&self) -> Vec<Simplex> {
        self.facets.iter().cloned().collect()
    }

    pub fn num_facets(&self) -> usize {
        self.facets.len()
    }

    /// The underlying downward-closed complex.
    pub fn as_complex(&self) -> Complex {
        Complex::generated(&self.facet_vec(), self.n).expect("nonempty facet set")
    }

    /// The lower boundary triangulation `𝓛([n],d)`.
    pub fn lower(n: usize, d: usize) -> Triangulation {
        let b = boundary_complex(n, d, Side::Lower).expect("d < n");
        Triangulation { n, d, facets: b.facet_vec().into_iter().collect() }
    }

    /// The upper boundary triangulation `𝒰([n],d)`.
    pub fn upper(n: usize, d: usize) -> Triangulation {
        let b = boundary_complex(n, d, Side::Upper).expect("d < n");
        Triangulation { n, d, facets: b.facet_vec().into_iter().collect() }
    }

    /// Deterministic sort key: the ε-words of the sorted facet list.
    pub fn epsilon_key(&self) -> Vec<Vec<EpsilonLetter>> {
        self.facets.iter().map(|f| epsilon_word(f, self.n)).collect()
    }
}

/// Exact total volume of the cyclic polytope on `[n]` in dimension `d`,
/// computed once from its lower boundary triangulation.
pub fn cyclic_polytope_volume(n: usize, d: usize) -> Rat {
    boundary_complex(n, d, Side::Lower)
        .expect("d < n")
        .facet_vec()
        .iter()
        .map(|f| simplex_volume(f, d).expect("facet is full-dimensional"))
        .fold(Rat::zero(), |a, v| a + v)
}

/// Recognition: the facet set tiles the cyclic polytope iff all pairs
/// properly intersect and the exact volumes sum to the polytope volume.
pub fn is_triangulation(facets: &[Simplex], n: usize, d: usize) -> bool {
    if facets.is_empty()
        || facets.iter().any(|f| f.len() != d + 1 || f.max_vertex() > n)
    {
        return false;
    }
    for (a, f1) in facets.iter().enumerate() {
        for f2 in &facets[a + 1..] {
            if !crate::geometry::proper_by_circuits(f1, f2, d) {
                return false;
            }
        }
    }
    let total: Rat = facets
        .iter()
        .map(|f| simplex_volume(f, d).expect("arity checked"))
        .fold(Rat::zero(), |a, v| a + v);
    total == cyclic_polytope_volume(n, d)
}

/// The available bistellar flips of `T`: `up` lists the `(d+2)`-subsets whose
/// lower hemisphere lies in `T`, `down` those whose upper hemisphere does.
pub fn available_flips(t: &Triangulation) -> (Vec<Simplex>, Vec<Simplex>) {
    use itertools::Itertools;
    let mut up = Vec::new();
    let mut down = Vec::new();
    for vs in (0..=t.n).combinations(t.d + 2) {
        let i = Simplex::new(vs).expect("strictly increasing");
        let (lower, upper) = simplex_hemispheres(&i).expect("|I| ≥ 2");
        if lower.facet_vec().iter().all(|f| t.facets.contains(f)) {
            up.push(i.clone());
        }
        if upper.facet_vec().iter().all(|f| t.facets.contains(f)) {
            down.push(i);
        }
    }
    (up, down)
}

/// Direction of a bistellar flip.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlipDirection {
    Up,
    Down,
}

/// Performs the bistellar flip of `T` at the `(d+2)`-simplex `I`, replacing
/// one hemisphere of `∂Δ^I` by the other.
pub fn flip(
    t: &Triangulation,
    i: &Simplex,
    dir: FlipDirection,
) -> Result<Triangulation, TriangulationError> {
    let (lower, upper) = simplex_hemispheres(i).expect("|I| ≥ 2");
    let (remove, insert) = match dir {
        FlipDirection::Up => (lower, upper),
        FlipDirection::Down => (upper, lower),
    };
    let remove_facets = remove.facet_vec();
    if i.len() != t.d + 2 || !remove_facets.iter().all(|f| t.facets.contains(f)) {
        return Err(TriangulationError::FlipNotAvailable(i.to_string()));
    }
    let mut facets = t.facets.clone();
    for f in &remove_facets {
        facets.remove(f);
    }
    for f in insert.facet_vec() {
        facets.insert(f);
    }
    Ok(Triangulation { n: t.n, d: t.d, facets })
}

/// The graph of all triangulations of `C([n],d)` under bistellar flips.
#[derive(Debug, Clone)]
pub struct FlipGraph {
    /// Triangulations in deterministic (ε-lex) order.
    pub nodes: Vec<Triangulation>,
    /// Edges `(a, b, I)` with `a < b` node indices and `I` the flip simplex.
    pub edges: Vec<(usize, usize, Simplex)>,
}

impl FlipGraph {
    /// Whether the graph is connected (it always should be).
    pub fn is_connected(&self) -> bool {
        if self.nodes.is_empty() {
            return true;
        }
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for (a, b, _) in &self.edges {
            adj[*a].push(*b);
            adj[*b].push(*a);
        }
        let mut seen = vec![false; self.nodes.len()];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// Default node limit for flip-graph enumeration.
pub const DEFAULT_NODE_LIMIT: usize = 200_000;

/// Enumerates the flip graph by breadth-first closure from the lower boundary
/// triangulation under up- and down-flips.
pub fn flip_graph(n: usize, d: usize) -> Result<FlipGraph, TriangulationError> {
    flip_graph_with_limit(n, d, DEFAULT_NODE_LIMIT)
}

/// As [`flip_graph`], with an explicit node limit.
pub fn flip_graph_with_limit(
    n: usize,
    d: usize,
    limit: usize,
) -> Result<FlipGraph, TriangulationError> {
    let start = Triangulation::lower(n, d);
    let mut found: BTreeSet<Triangulation> = BTreeSet::from([start.clone()]);
    let mut edge_set: BTreeSet<(Triangulation, Triangulation, Simplex)> = BTreeSet::new();
    let mut queue = VecDeque::from([start]);
    while let Some(t) = queue.pop_front() {
        let (ups, downs) = available_flips(&t);
        let mut neighbours = Vec::new();
        for i in ups {
            let t2 = flip(&t, &i, FlipDirection::Up).expect("flip availability checked");
            neighbours.push((t2, i));
        }
        for i in downs {
            let t2 = flip(&t, &i, FlipDirection::Down).expect("flip availability checked");
            neighbours.push((t2, i));
        }
        for (t2, i) in neighbours {
            let (a, b) = if t <= t2 { (t.clone(), t2.clone()) } else { (t2.clone(), t.clone()) };
            edge_set.insert((a, b, i));
            if found.insert(t2.clone()) {
                if found.len() > limit {
                    return Err(TriangulationError::TooLarge { limit });
                }
                queue.push_back(t2);
            }
        }
    }
    let mut nodes: Vec<Triangulation> = found.into_iter().collect();
    nodes.sort_by_key(|t| t.epsilon_key());
    let index: BTreeMap<&Triangulation, usize> =
        nodes.iter().enumerate().map(|(k, t)| (t, k)).collect();
    let mut edges: Vec<(usize, usize, Simplex)> = edge_set
        .iter()
        .map(|(a, b, i)| {
            let (x, y) = (index[a], index[b]);
            (x.min(y), x.max(y), i.clone())
        })
        .collect();
    edges.sort();
    edges.dedup();
    Ok(FlipGraph { nodes, edges })
}

/// The triangulation poset: reflexive-transitive closure of single up-flips.
#[derive(Debug, Clone)]
pub struct TriangulationPoset {
    pub nodes: Vec<Triangulation>,
    /// `leq[a][b]` iff node `a` is below node `b` in the closure order.
    pub leq: Vec<Vec<bool>>,
}

impl TriangulationPoset {
    /// Indices of minimal elements.
    pub fn minimal(&self) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&a| (0..self.nodes.len()).all(|b| b == a || !self.leq[b][a]))
            .collect()
    }

    /// Indices of maximal elements.
    pub fn maximal(&self) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&a| (0..self.nodes.len()).all(|b| b == a || !self.leq[a][b]))
            .collect()
    }
}

/// Builds the poset of triangulations of `C([n],d)` ordered by up-flips,
/// verifying antisymmetry (a cycle would contradict the linearizability of
/// the stacking order and is reported as an internal error).
pub fn stasheff_tamari_poset(n: usize, d: usize) -> Result<TriangulationPoset, TriangulationError> {
    let graph = flip_graph(n, d)?;
    let m = graph.nodes.len();
    let index: BTreeMap<&Triangulation, usize> =
        graph.nodes.iter().enumerate().map(|(k, t)| (t, k)).collect();
    let mut leq = vec![vec![false; m]; m];
    for (a, row) in leq.iter_mut().enumerate() {
        row[a] = true;
        let (ups, _) = available_flips(&graph.nodes[a]);
        for i in ups {
            let t2 = flip(&graph.nodes[a], &i, FlipDirection::Up).expect("available");
            row[index[&t2]] = true;
        }
    }
    // Floyd–Warshall transitive closure.
    for k in 0..m {
        for a in 0..m {
            if leq[a][k] {
                for b in 0..m {
                    if leq[k][b] {
                        leq[a][b] = true;
                    }
                }
            }
        }
    }
    for a in 0..m {
        for b in 0..m {
            if a != b && leq[a][b] && leq[b][a] {
                return Err(TriangulationError::CycleDetected);
            }
        }
    }
    Ok(TriangulationPoset { nodes: graph.nodes, leq })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::simplex;
    use itertools::Itertools;

    #[test]
    fn rambau_less_examples() {
        assert!(rambau_less(&simplex(&[0, 1, 2, 3]), &simplex(&[0, 1, 3, 4]), 3).unwrap());
        assert!(rambau_less(&simplex(&[0, 1, 3, 4]), &simplex(&[1, 2, 3, 4]), 3).unwrap());
        assert!(!rambau_less(&simplex(&[0, 1, 2, 3]), &simplex(&[0, 1, 2, 3]), 3).unwrap());
        assert!(rambau_less(&simplex(&[0, 1]), &simplex(&[0, 1, 2]), 3).is_err());
    }

    #[test]
    fn epsilon_words() {
        assert_eq!(epsilon_string(&simplex(&[0, 2, 4]), 4), "*e*o*");
        assert_eq!(epsilon_string(&simplex(&[0, 1, 2, 3, 4]), 4), "*****");
        let w1 = epsilon_word(&simplex(&[0, 1, 2, 3]), 4);
        let w2 = epsilon_word(&simplex(&[0, 1, 3, 4]), 4);
        let w3 = epsilon_word(&simplex(&[1, 2, 3, 4]), 4);
        assert!(w1 < w2 && w2 < w3);
    }

    #[test]
    fn epsilon_lex_extends_rambau_order() {
        for n in 2..=6usize {
            for d in 1..=3usize {
                if d + 1 > n + 1 {
                    continue;
                }
                for pair in (0..=n).combinations(d + 1).combinations(2) {
                    let i = simplex(&pair[0]);
                    let j = simplex(&pair[1]);
                    if rambau_less(&i, &j, d).unwrap() {
                        assert!(epsilon_word(&i, n) < epsilon_word(&j, n), "{i} ≺ {j}");
                    }
                    if rambau_less(&j, &i, d).unwrap() {
                        assert!(epsilon_word(&j, n) < epsilon_word(&i, n), "{j} ≺ {i}");
                    }
                }
            }
        }
    }

    #[test]
    fn triangulation_recognition() {
        assert!(is_triangulation(
            &[simplex(&[0, 1, 2]), simplex(&[0, 2, 3]), simplex(&[0, 3, 4])],
            4,
            2
        ));
        assert!(is_triangulation(
            &[simplex(&[0, 1, 3]), simplex(&[1, 2, 3]), simplex(&[0, 3, 4])],
            4,
            2
        ));
        // Volume deficit.
        assert!(!is_triangulation(&[simplex(&[0, 1, 2]), simplex(&[2, 3, 4])], 4, 2));
        // Crossing diagonals.
        assert!(!is_triangulation(
            &[simplex(&[0, 2, 4]), simplex(&[1, 3, 4]), simplex(&[0, 1, 2])],
            4,
            2
        ));
    }

    #[test]
    fn flips_of_pentagon_fan() {
        let t = Triangulation::lower(4, 2);
        let (up, _down) = available_flips(&t);
        assert!(up.contains(&simplex(&[0, 1, 2, 3])));
        assert!(up.contains(&simplex(&[0, 2, 3, 4])));
        let t2 = flip(&t, &simplex(&[0, 1, 2, 3]), FlipDirection::Up).unwrap();
        assert_eq!(
            t2.facet_vec(),
            vec![simplex(&[0, 1, 3]), simplex(&[0, 3, 4]), simplex(&[1, 2, 3])]
        );
        // Up then down at the same simplex is the identity.
        let back = flip(&t2, &simplex(&[0, 1, 2, 3]), FlipDirection::Down).unwrap();
        assert_eq!(back, t);
        // Upper boundary admits no up-flips.
        let u = Triangulation::upper(4, 2);
        assert!(available_flips(&u).0.is_empty());
    }

    #[test]
    fn top_dimensional_flip() {
        // The single flip between the two triangulations of C([4],3).
        let t = Triangulation::lower(4, 3);
        let (up, _) = available_flips(&t);
        assert_eq!(up, vec![simplex(&[0, 1, 2, 3, 4])]);
        let t2 = flip(&t, &simplex(&[0, 1, 2, 3, 4]), FlipDirection::Up).unwrap();
        assert_eq!(t2, Triangulation::upper(4, 3));
    }

    #[test]
    fn pentagon_flip_graph() {
        let g = flip_graph(4, 2).unwrap();
        assert_eq!(g.nodes.len(), 5);
        assert_eq!(g.edges.len(), 5);
        assert!(g.is_connected());
    }

    #[test]
    fn codimension_one_graphs_have_two_nodes() {
        for n in 2..=6usize {
            let g = flip_graph(n, n - 1).unwrap();
            assert_eq!(g.nodes.len(), 2, "n={n}");
            assert_eq!(g.edges.len(), 1);
            assert!(g.is_connected());
        }
    }

    #[test]
    fn pentagon_poset_bounds() {
        let p = stasheff_tamari_poset(4, 2).unwrap();
        assert_eq!(p.nodes.len(), 5);
        let mins = p.minimal();
        let maxs = p.maximal();
        assert_eq!(mins.len(), 1);
        assert_eq!(maxs.len(), 1);
        assert_eq!(p.nodes[mins[0]], Triangulation::lower(4, 2));
        assert_eq!(p.nodes[maxs[0]], Triangulation::upper(4, 2));
    }

    #[test]
    fn hexagon_poset() {
        let p = stasheff_tamari_poset(5, 2).unwrap();
        assert_eq!(p.nodes.len(), 14);
        assert_eq!(p.minimal(), vec![p.nodes.iter().position(|t| *t == Triangulation::lower(5, 2)).unwrap()]);
        assert_eq!(p.maximal(), vec![p.nodes.iter().position(|t| *t == Triangulation::upper(5, 2)).unwrap()]);
    }
}

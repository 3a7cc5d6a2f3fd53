//! Admissible subcomplexes of the cyclic polytope as cells of an ω-category.
//!
//! A `d`-dimensional admissible complex has pairwise properly intersecting
//! simplices and single-interval vertical fibers, recursively in every
//! projection.  These complexes form the cells of an ω-category: the source
//! and target of a cell are its lower and upper surfaces, and composition is
//! union.  This module provides the admissibility decisions, surface
//! computation, composition, excision of the top simplex, atomic
//! decomposition, full enumeration by stacking closure, and verification of
//! the ω-category axioms.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use thiserror::Error;

use crate::complexes::{simplex_hemispheres, Complex, ComplexError, Simplex};
use crate::geometry::{oracle_check_admissible, AdmissibilityVerdict};

/// Errors for oriental-cell operations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum OrientalError {
    #[error("complex is not {0}-admissible")]
    NotAdmissible(usize),
    #[error("cells are not composable at level {0} (source/target mismatch)")]
    NotComposable(usize),
    #[error("cell has equal lower and upper surfaces; nothing to excise")]
    FlatCell,
    #[error("enumeration guard exceeded: n = {n}, d = {d} (limit n ≤ {limit})")]
    TooLarge { n: usize, d: usize, limit: usize },
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Fixed seed for the deterministic sampling part of the admissibility
/// decision; reproducibility matters more than the particular value.
const ADMISSIBILITY_SEED: u64 = 0x5ECA11;
const ADMISSIBILITY_BUDGET: usize = 24;

/// Decides `d`-admissibility of a complex: pairwise proper intersections,
/// at most one `d`-simplex below and above each `(d-1)`-simplex, and
/// single-interval vertical fibers (sampled exactly over a deterministic
/// family of base points).
pub fn is_d_admissible(k: &Complex, d: usize) -> bool {
    if k.max_card() > d + 1 {
        return false;
    }
    if d == 0 {
        return true; // a set of vertices; the recursion handles the base case
    }
    let facets = k.facet_vec();
    for (a, f1) in facets.iter().enumerate() {
        for f2 in &facets[a + 1..] {
            if !crate::geometry::proper_by_circuits(f1, f2, d) {
                return false;
            }
        }
    }
    let top: Vec<&Simplex> = facets.iter().filter(|f| f.len() == d + 1).collect();
    if d >= 1 {
        let mut lower_count: BTreeMap<Simplex, usize> = BTreeMap::new();
        let mut upper_count: BTreeMap<Simplex, usize> = BTreeMap::new();
        for s in &top {
            let (lo, up) = simplex_hemispheres(s).expect("|s| = d+1 ≥ 2");
            for f in lo.facet_vec() {
                *lower_count.entry(f).or_insert(0) += 1;
            }
            for f in up.facet_vec() {
                *upper_count.entry(f).or_insert(0) += 1;
            }
        }
        if lower_count.values().any(|&c| c > 1) || upper_count.values().any(|&c| c > 1) {
            return false;
        }
    }
    matches!(
        oracle_check_admissible(k, d, ADMISSIBILITY_BUDGET, ADMISSIBILITY_SEED),
        AdmissibilityVerdict::NotRefuted
    )
}

/// Raw surface computation (no admissibility validation): the lower surface
/// is generated by the `(d-1)`-simplices that are lower facets of exactly one
/// `d`-simplex and upper facets of none, together with every simplex not
/// contained in a `d`-simplex; the upper surface dually.
fn surface_rule(k: &Complex, d: usize) -> (Complex, Complex) {
    let n = k.ambient_n();
    let top: Vec<Simplex> = k.simplices_of_card(d + 1);
    if top.is_empty() {
        return (k.clone(), k.clone());
    }
    let mut lower_of: BTreeMap<Simplex, usize> = BTreeMap::new();
    let mut upper_of: BTreeMap<Simplex, usize> = BTreeMap::new();
    for s in &top {
        let (lo, up) = simplex_hemispheres(s).expect("|s| ≥ 2");
        for f in lo.facet_vec() {
            *lower_of.entry(f).or_insert(0) += 1;
        }
        for f in up.facet_vec() {
            *upper_of.entry(f).or_insert(0) += 1;
        }
    }
    let strays: Vec<Simplex> = k
        .facets()
        .filter(|f| f.len() <= d && !top.iter().any(|s| f.is_subset_of(s)))
        .cloned()
        .collect();
    let mut lower_gens = strays.clone();
    let mut upper_gens = strays;
    for f in k.simplices_of_card(d) {
        let below = upper_of.get(&f).copied().unwrap_or(0); // d-simplices below f
        let above = lower_of.get(&f).copied().unwrap_or(0); // d-simplices above f
        if above >= 1 && below == 0 {
            lower_gens.push(f.clone());
        }
        if below >= 1 && above == 0 {
            upper_gens.push(f);
        }
    }
    let lower = Complex::generated(&lower_gens, n).expect("surface nonempty");
    let upper = Complex::generated(&upper_gens, n).expect("surface nonempty");
    (lower, upper)
}

/// Lower and upper surfaces `K^-`, `K^+` of a `d`-admissible complex.
pub fn surfaces(k: &Complex, d: usize) -> Result<(Complex, Complex), OrientalError> {
    if !is_d_admissible(k, d) {
        return Err(OrientalError::NotAdmissible(d));
    }
    Ok(surface_rule(k, d))
}

/// Recursive admissibility: `d`-admissible with admissible lower and upper
/// surfaces, down to the base case of a single vertex in dimension 0.
pub fn is_admissible(k: &Complex, d: usize) -> bool {
    if d == 0 {
        return k.num_simplices() == 1 && k.max_card() == 1;
    }
    if !is_d_admissible(k, d) {
        return false;
    }
    let (lo, up) = surface_rule(k, d);
    is_admissible(&lo, d - 1) && is_admissible(&up, d - 1)
}

/// An admissible complex together with its cached chain of iterated sources
/// and targets.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AdmissibleCell {
    complex: Complex,
    dim: usize,
    /// `sources[j]` = the `j`-dimensional iterated source, for `j < dim`.
    sources: Vec<Complex>,
    /// `targets[j]` = the `j`-dimensional iterated target, for `j < dim`.
    targets: Vec<Complex>,
}

impl AdmissibleCell {
    /// Validates admissibility and builds the cell with its surface chain.
    pub fn new(complex: Complex, dim: usize) -> Result<AdmissibleCell, OrientalError> {
        if !is_admissible(&complex, dim) {
            return Err(OrientalError::NotAdmissible(dim));
        }
        Ok(Self::new_unchecked(complex, dim))
    }

    /// Builds the chain without re-deciding admissibility (used internally on
    /// complexes that are admissible by construction).
    fn new_unchecked(complex: Complex, dim: usize) -> AdmissibleCell {
        let mut sources = Vec::with_capacity(dim);
        let mut targets = Vec::with_capacity(dim);
        if dim > 0 {
            let (lo, up) = surface_rule(&complex, dim);
            sources.push(lo);
            targets.push(up);
            for j in (0..dim.saturating_sub(1)).rev() {
                let (lo, _) = surface_rule(&sources[0], j + 1);
                let (_, up) = surface_rule(&targets[0], j + 1);
                sources.insert(0, lo);
                targets.insert(0, up);
                debug_assert_eq!(sources.len() + j, dim);
            }
        }
        AdmissibleCell { complex, dim, sources, targets }
    }

    pub fn complex(&self) -> &Complex {
        &self.complex
    }

    pub fn ambient_n(&self) -> usize {
        self.complex.ambient_n()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Iterated source at level `j < dim`.
    pub fn source(&self, j: usize) -> &Complex {
        &self.sources[j]
    }

    /// Iterated target at level `j < dim`.
    pub fn target(&self, j: usize) -> &Complex {
        &self.targets[j]
    }

    /// The lower surface `K^-` (source one level down).
    pub fn lower_surface(&self) -> &Complex {
        &self.sources[self.dim - 1]
    }

    /// The upper surface `K^+` (target one level down).
    pub fn upper_surface(&self) -> &Complex {
        &self.targets[self.dim - 1]
    }

    /// The same complex viewed as a flat cell one dimension up (the identity
    /// on this cell).
    pub fn flatten(&self) -> AdmissibleCell {
        let mut sources = self.sources.clone();
        let mut targets = self.targets.clone();
        sources.push(self.complex.clone());
        targets.push(self.complex.clone());
        AdmissibleCell { complex: self.complex.clone(), dim: self.dim + 1, sources, targets }
    }

    /// Whether the lower and upper surfaces coincide (identity cells).
    pub fn is_flat(&self) -> bool {
        self.dim == 0 || self.lower_surface() == self.upper_surface()
    }

    /// Full-dimensional simplices of the cell.
    pub fn top_simplices(&self) -> Vec<Simplex> {
        self.complex.simplices_of_card(self.dim + 1)
    }
}

/// A single stacking move: glueing `Δ^I` onto the upper surface of a cell
/// along the lower hemisphere of `I`.
#[derive(Debug, Clone)]
pub struct StackingStep {
    pub base: AdmissibleCell,
    pub added: Simplex,
}

impl StackingStep {
    /// Whether `Δ^added` may be stacked on `base` (its lower hemisphere lies
    /// in the upper surface and the simplex is new).
    pub fn is_valid(&self) -> bool {
        if self.added.len() != self.base.dim() + 1
            || self.base.complex().contains(&self.added)
        {
            return false;
        }
        let (lo, _) = simplex_hemispheres(&self.added).expect("|I| ≥ 2");
        lo.is_subcomplex_of(self.base.upper_surface())
    }

    /// Performs the stacking.  The result is admissible by construction.
    pub fn apply(&self) -> AdmissibleCell {
        debug_assert!(self.is_valid());
        let mut gens = self.base.complex().facet_vec();
        gens.push(self.added.clone());
        let complex =
            Complex::generated(&gens, self.base.ambient_n()).expect("nonempty");
        AdmissibleCell::new_unchecked(complex, self.base.dim())
    }
}

/// Composes two cells at `level`: requires `s_level(k) = t_level(l)` and
/// returns the cell on the union complex (`k` after `l`).
pub fn compose(
    k: &AdmissibleCell,
    l: &AdmissibleCell,
    level: usize,
) -> Result<AdmissibleCell, OrientalError> {
    if k.dim() != l.dim() || level >= k.dim() || k.source(level) != l.target(level) {
        return Err(OrientalError::NotComposable(level));
    }
    let complex = k.complex().union(l.complex());
    Ok(AdmissibleCell::new_unchecked(complex, k.dim()))
}

/// Excises the top simplex: returns `(L, I)` with `K = L ∪ Δ^I` and
/// `(Δ^I)^- ⊆ L^+`.  The excised simplex is the ε-lex-maximal top simplex
/// whose upper hemisphere is exposed in `K^+`, which makes the decomposition
/// deterministic.
pub fn excise_top(k: &AdmissibleCell) -> Result<(AdmissibleCell, Simplex), OrientalError> {
    if k.is_flat() {
        return Err(OrientalError::FlatCell);
    }
    let d = k.dim();
    let n = k.ambient_n();
    let candidates: Vec<Simplex> = k
        .top_simplices()
        .into_iter()
        .filter(|s| {
            let (_, up) = simplex_hemispheres(s).expect("|s| ≥ 2");
            up.is_subcomplex_of(k.upper_surface())
        })
        .collect();
    let i = candidates
        .into_iter()
        .max_by_key(|s| crate::triangulations::epsilon_word(s, n))
        .expect("a non-flat cell has an exposed top simplex");
    let (lo, _) = simplex_hemispheres(&i).expect("|I| ≥ 2");
    let mut gens: Vec<Simplex> = k
        .complex()
        .facets()
        .filter(|f| **f != i)
        .cloned()
        .collect();
    gens.extend(lo.facet_vec());
    let l_complex = Complex::generated(&gens, n).expect("nonempty");
    let l = AdmissibleCell::new_unchecked(l_complex, d);
    debug_assert!(lo.is_subcomplex_of(l.upper_surface()));
    debug_assert_eq!(&l.complex().union(&Complex::generated(&[i.clone()], n).unwrap()), k.complex());
    Ok((l, i))
}

/// Writes a cell as an ordered composite of cells each containing exactly one
/// top-dimensional simplex; folding [`compose`] at level `dim - 1` over the
/// list reproduces the cell.
pub fn atomic_decomposition(k: &AdmissibleCell) -> Vec<AdmissibleCell> {
    let mut atoms_rev: Vec<AdmissibleCell> = Vec::new();
    let mut current = k.clone();
    while !current.is_flat() {
        let (l, i) = excise_top(&current).expect("non-flat");
        let mut gens = l.upper_surface().facet_vec();
        gens.push(i);
        let atom_complex =
            Complex::generated(&gens, k.ambient_n()).expect("nonempty");
        atoms_rev.push(AdmissibleCell::new_unchecked(atom_complex, k.dim()));
        current = l;
    }
    atoms_rev.reverse();
    atoms_rev
}

/// Guard for full enumeration.
pub const ENUMERATION_LIMIT_N: usize = 5;

/// Enumerates all `d`-cells on `[n]`: the flat images of the `(d-1)`-cells
/// together with the closure of those under stacking (complete by excision).
pub fn cells(n: usize, d: usize) -> Result<Vec<AdmissibleCell>, OrientalError> {
    cells_with_limit(n, d, ENUMERATION_LIMIT_N)
}

/// As [`cells`], with an explicit bound on `n`.
pub fn cells_with_limit(
    n: usize,
    d: usize,
    limit: usize,
) -> Result<Vec<AdmissibleCell>, OrientalError> {
    if n > limit || d > n {
        return Err(OrientalError::TooLarge { n, d, limit });
    }
    if d == 0 {
        return Ok((0..=n)
            .map(|v| {
                let c = Complex::generated(&[Simplex::new(vec![v]).unwrap()], n).unwrap();
                AdmissibleCell::new_unchecked(c, 0)
            })
            .collect());
    }
    let below = cells_with_limit(n, d - 1, limit)?;
    let mut seen: BTreeSet<Complex> = BTreeSet::new();
    let mut out: Vec<AdmissibleCell> = Vec::new();
    let mut queue: Vec<AdmissibleCell> = Vec::new();
    for c in below {
        let flat = c.flatten();
        if seen.insert(flat.complex().clone()) {
            out.push(flat.clone());
            queue.push(flat);
        }
    }
    let all_tops: Vec<Simplex> = (0..=n)
        .combinations(d + 1)
        .map(|v| Simplex::new(v).unwrap())
        .collect();
    while let Some(cell) = queue.pop() {
        for i in &all_tops {
            let step = StackingStep { base: cell.clone(), added: i.clone() };
            if step.is_valid() {
                let next = step.apply();
                if seen.insert(next.complex().clone()) {
                    out.push(next.clone());
                    queue.push(next);
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Report of the ω-category axiom verification.
#[derive(Debug, Clone, Default)]
pub struct OmegaReport {
    pub cells_checked: usize,
    pub compositions_checked: usize,
    pub violations: Vec<String>,
}

impl OmegaReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Verifies globularity, unit laws, associativity of every composition level,
/// and binary interchange instances over all enumerated cells on `[n]` up to
/// `max_dim`.
pub fn check_omega_axioms(n: usize, max_dim: usize) -> Result<OmegaReport, OrientalError> {
    let mut report = OmegaReport::default();
    let mut per_dim: Vec<Vec<AdmissibleCell>> = Vec::new();
    for d in 0..=max_dim.min(n) {
        per_dim.push(cells(n, d)?);
    }
    // Globularity.
    for layer in &per_dim {
        for cell in layer {
            report.cells_checked += 1;
            if cell.dim() >= 2 {
                for j in 0..cell.dim() - 1 {
                    let (s_lo, s_up) = surface_rule(cell.source(j + 1), j + 1);
                    let (t_lo, t_up) = surface_rule(cell.target(j + 1), j + 1);
                    if s_lo != t_lo || s_up != t_up {
                        report
                            .violations
                            .push(format!("globularity fails at level {j} for a {}-cell", cell.dim()));
                    }
                    if &s_lo != cell.source(j) || &t_up != cell.target(j) {
                        report
                            .violations
                            .push(format!("cached chain mismatch at level {j}"));
                    }
                }
            }
        }
    }
    // Units and binary compositions per dimension and level.
    for dm in 1..per_dim.len() {
        let layer = &per_dim[dm];
        for level in 0..dm {
            // Group cells by source/target at this level for fast pairing.
            let mut by_target: BTreeMap<&Complex, Vec<&AdmissibleCell>> = BTreeMap::new();
            let mut by_source: BTreeMap<&Complex, Vec<&AdmissibleCell>> = BTreeMap::new();
            for c in layer {
                by_target.entry(c.target(level)).or_default().push(c);
                by_source.entry(c.source(level)).or_default().push(c);
            }
            for c in layer {
                // Unit laws at the top level only (units are flat cells).
                if level == dm - 1 {
                    let us = AdmissibleCell::new_unchecked(c.source(level).clone(), dm);
                    let ut = AdmissibleCell::new_unchecked(c.target(level).clone(), dm);
                    let left = compose(&ut, c, level);
                    let right = compose(c, &us, level);
                    report.compositions_checked += 2;
                    if left.as_ref() != Ok(c) || right.as_ref() != Ok(c) {
                        report.violations.push(format!(
                            "unit law fails at dim {dm} level {level}"
                        ));
                    }
                }
                // Associativity on composable triples a ∗ c ∗ b.
                // Triples a ∗ c ∗ b with s(a) = t(c) and s(c) = t(b).
                let afters = by_source.get(c.target(level)).map(Vec::as_slice).unwrap_or(&[]);
                let befores = by_target.get(c.source(level)).map(Vec::as_slice).unwrap_or(&[]);
                for a in afters {
                    let ac = compose(a, c, level).expect("composable by grouping");
                    for b in befores {
                        let cb = compose(c, b, level).expect("composable");
                        let l = compose(&ac, b, level).expect("composable");
                        let r = compose(a, &cb, level).expect("composable");
                        report.compositions_checked += 1;
                        if l != r {
                            report.violations.push(format!(
                                "associativity fails at dim {dm} level {level}"
                            ));
                        }
                    }
                }
            }
        }
    }
    // Binary interchange: (a ∗_h b) ∗_v (c ∗_h d) = (a ∗_v c) ∗_h (b ∗_v d)
    // for levels h < v within each dimension.
    for dm in 2..per_dim.len() {
        let layer = &per_dim[dm];
        for v in 1..dm {
            for h in 0..v {
                for a in layer {
                    for b in layer.iter().filter(|b| b.target(h) == a.source(h)) {
                        for c in layer.iter().filter(|c| c.target(v) == a.source(v)) {
                            for dcell in layer.iter().filter(|dc| {
                                dc.target(h) == c.source(h) && dc.target(v) == b.source(v)
                            }) {
                                let ab = compose(a, b, h).expect("composable");
                                let cd = compose(c, dcell, h).expect("composable");
                                if ab.source(v) != cd.target(v) {
                                    report.violations.push(format!(
                                        "grid boundary mismatch at dim {dm} ({h},{v})"
                                    ));
                                    continue;
                                }
                                let lhs = compose(&ab, &cd, v).expect("composable");
                                let ac = compose(a, c, v).expect("composable");
                                let bd = compose(b, dcell, v).expect("composable");
                                let rhs = compose(&ac, &bd, h).expect("composable");
                                report.compositions_checked += 1;
                                if lhs != rhs {
                                    report
                                        .violations
                                        .push(format!("interchange fails at dim {dm} ({h},{v})"));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(report)
}

/// JSON form of a cell.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct CellJson {
    pub n: usize,
    pub d: usize,
    pub facets: Vec<Vec<usize>>,
    pub lower: Vec<Vec<usize>>,
    pub upper: Vec<Vec<usize>>,
}

impl From<&AdmissibleCell> for CellJson {
    fn from(c: &AdmissibleCell) -> CellJson {
        let verts = |k: &Complex| k.facet_vec().iter().map(|f| f.vertices().to_vec()).collect();
        let (lower, upper) = if c.dim() == 0 {
            (Vec::new(), Vec::new())
        } else {
            (verts(c.lower_surface()), verts(c.upper_surface()))
        };
        CellJson {
            n: c.ambient_n(),
            d: c.dim(),
            facets: verts(c.complex()),
            lower,
            upper,
        }
    }
}

/// DOT rendering of the stacking (covering) structure of the `d`-cells:
/// an edge `K -> K'` when `K' = K ∪ Δ^I` is a single stacking move.
pub fn cells_dot(cells: &[AdmissibleCell]) -> String {
    let mut out = String::from("digraph cells {\n");
    let label = |c: &AdmissibleCell| {
        c.complex()
            .facet_vec()
            .iter()
            .map(|f| f.to_string())
            .join(" ")
    };
    for (idx, c) in cells.iter().enumerate() {
        out.push_str(&format!("  c{idx} [label=\"{}\"];\n", label(c)));
    }
    let index: BTreeMap<&Complex, usize> =
        cells.iter().enumerate().map(|(i, c)| (c.complex(), i)).collect();
    for (idx, c) in cells.iter().enumerate() {
        let n = c.ambient_n();
        for i in (0..=n).combinations(c.dim() + 1).map(|v| Simplex::new(v).unwrap()) {
            let step = StackingStep { base: c.clone(), added: i.clone() };
            if step.is_valid() {
                let next = step.apply();
                if let Some(&j) = index.get(next.complex()) {
                    out.push_str(&format!("  c{idx} -> c{j} [label=\"{i}\"];\n"));
                }
            }
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::{boundary_complex, simplex, Side};

    fn cx(gens: &[&[usize]], n: usize) -> Complex {
        let v: Vec<Simplex> = gens.iter().map(|g| simplex(g)).collect();
        Complex::generated(&v, n).unwrap()
    }

    fn facet_sets(c: &Complex) -> Vec<Vec<usize>> {
        c.facet_vec().iter().map(|f| f.vertices().to_vec()).collect()
    }

    #[test]
    fn admissibility_basics() {
        assert!(!is_d_admissible(&cx(&[&[0, 1], &[3, 4]], 4), 1));
        assert!(is_d_admissible(&cx(&[&[0, 1], &[1, 2], &[2, 3]], 4), 1));
        assert!(is_d_admissible(&boundary_complex(5, 3, Side::Upper).unwrap(), 3));
        assert!(is_admissible(&cx(&[&[3]], 4), 0));
        assert!(is_admissible(&cx(&[&[0, 1], &[1, 2]], 4), 1));
        assert!(!is_admissible(&cx(&[&[0], &[2]], 4), 0));
        assert!(!is_admissible(&cx(&[&[0], &[2]], 4), 1));
    }

    #[test]
    fn surfaces_of_single_simplex() {
        let k = cx(&[&[0, 1, 2, 3]], 4);
        let (lo, up) = surfaces(&k, 3).unwrap();
        assert_eq!(facet_sets(&lo), vec![vec![0, 1, 2], vec![0, 2, 3]]);
        assert_eq!(facet_sets(&up), vec![vec![0, 1, 3], vec![1, 2, 3]]);
    }

    #[test]
    fn surfaces_of_two_stacked_simplices() {
        let k = cx(&[&[0, 1, 2, 3], &[0, 1, 3, 4]], 4);
        let (lo, up) = surfaces(&k, 3).unwrap();
        assert_eq!(lo, boundary_complex(4, 2, Side::Lower).unwrap());
        assert_eq!(
            facet_sets(&up),
            vec![vec![0, 1, 4], vec![1, 2, 3], vec![1, 3, 4]]
        );
    }

    #[test]
    fn surfaces_of_triangulations() {
        for (n, d) in [(4, 2), (4, 3), (5, 2), (5, 3)] {
            let t = boundary_complex(n, d, Side::Lower).unwrap();
            let (lo, up) = surfaces(&t, d).unwrap();
            assert_eq!(lo, boundary_complex(n, d - 1, Side::Lower).unwrap());
            assert_eq!(up, boundary_complex(n, d - 1, Side::Upper).unwrap());
        }
    }

    #[test]
    fn path_cell_endpoints() {
        let cell = AdmissibleCell::new(cx(&[&[0, 1], &[1, 2]], 2), 1).unwrap();
        assert_eq!(facet_sets(cell.lower_surface()), vec![vec![0]]);
        assert_eq!(facet_sets(cell.upper_surface()), vec![vec![2]]);
    }

    #[test]
    fn stacking_pachner_example() {
        // Stack 0123, then 0134, then 1234 onto the flat lower boundary of
        // the square pyramid base: the result is the lower triangulation seen
        // as a 3-cell from 𝓛([4],2) to 𝒰([4],2).
        let base = AdmissibleCell::new(boundary_complex(4, 2, Side::Lower).unwrap(), 2)
            .unwrap()
            .flatten();
        let s1 = StackingStep { base, added: simplex(&[0, 1, 2, 3]) };
        assert!(s1.is_valid());
        let c1 = s1.apply();
        let s2 = StackingStep { base: c1, added: simplex(&[0, 1, 3, 4]) };
        assert!(s2.is_valid());
        let c2 = s2.apply();
        let s3 = StackingStep { base: c2, added: simplex(&[1, 2, 3, 4]) };
        assert!(s3.is_valid());
        let c3 = s3.apply();
        assert_eq!(c3.lower_surface(), &boundary_complex(4, 2, Side::Lower).unwrap());
        assert_eq!(c3.upper_surface(), &boundary_complex(4, 2, Side::Upper).unwrap());
        assert_eq!(
            facet_sets(c3.upper_surface()),
            vec![vec![0, 1, 4], vec![1, 2, 4], vec![2, 3, 4]]
        );
    }

    #[test]
    fn excision_of_lower_triangulation() {
        let k = AdmissibleCell::new(boundary_complex(4, 3, Side::Lower).unwrap(), 3).unwrap();
        let (l, i) = excise_top(&k).unwrap();
        assert_eq!(i, simplex(&[1, 2, 3, 4]));
        assert_eq!(
            facet_sets(l.complex()),
            vec![vec![0, 1, 2, 3], vec![0, 1, 3, 4]]
        );
    }

    #[test]
    fn excision_of_single_simplex() {
        let k = AdmissibleCell::new(cx(&[&[0, 1, 2, 3]], 3), 3).unwrap();
        let (l, i) = excise_top(&k).unwrap();
        assert_eq!(i, simplex(&[0, 1, 2, 3]));
        assert_eq!(l.complex(), &boundary_complex(3, 2, Side::Lower).unwrap());
    }

    #[test]
    fn atomic_decomposition_recomposes() {
        let k = AdmissibleCell::new(boundary_complex(4, 3, Side::Lower).unwrap(), 3).unwrap();
        let atoms = atomic_decomposition(&k);
        assert_eq!(atoms.len(), 3);
        for a in &atoms {
            assert_eq!(a.top_simplices().len(), 1);
        }
        let mut acc = atoms[0].clone();
        for a in &atoms[1..] {
            acc = compose(a, &acc, 2).unwrap();
        }
        assert_eq!(&acc, &k);
    }

    #[test]
    fn cell_counts_low_dim() {
        assert_eq!(cells(3, 0).unwrap().len(), 4);
        assert_eq!(cells(3, 1).unwrap().len(), 15);
        assert_eq!(cells(4, 1).unwrap().len(), 31);
    }

    #[test]
    fn path_composition() {
        let k = AdmissibleCell::new(cx(&[&[1, 2]], 2), 1).unwrap();
        let l = AdmissibleCell::new(cx(&[&[0, 1]], 2), 1).unwrap();
        let kl = compose(&k, &l, 0).unwrap();
        assert_eq!(kl.complex(), &cx(&[&[0, 1], &[1, 2]], 2));
        assert!(compose(&l, &k, 0).is_err());
    }

    #[test]
    fn omega_axioms_n2() {
        let report = check_omega_axioms(2, 2).unwrap();
        assert!(report.passed(), "{:?}", report.violations);
        // G₂ on [2] contains the globular 2-cell ⟨{0,1,2}⟩.
        let two = cells(2, 2).unwrap();
        let tri = two
            .iter()
            .find(|c| c.complex() == &cx(&[&[0, 1, 2]], 2))
            .expect("triangle cell present");
        assert_eq!(facet_sets(tri.lower_surface()), vec![vec![0, 1], vec![1, 2]]);
        assert_eq!(facet_sets(tri.upper_surface()), vec![vec![0, 2]]);
    }

    #[test]
    fn brute_force_matches_enumeration_n2() {
        use itertools::Itertools;
        let n = 2usize;
        for d in 1..=n {
            let enumerated: BTreeSet<Complex> = cells(n, d)
                .unwrap()
                .into_iter()
                .map(|c| c.complex().clone())
                .collect();
            // All downward-closed families = closures of all facet sets.
            let all_simplices: Vec<Simplex> = (0..=n)
                .powerset()
                .filter(|s| !s.is_empty())
                .map(|s| Simplex::new(s).unwrap())
                .collect();
            let mut brute: BTreeSet<Complex> = BTreeSet::new();
            for gens in all_simplices.iter().cloned().powerset().filter(|g| !g.is_empty()) {
                let c = Complex::generated(&gens, n).unwrap();
                if is_admissible(&c, d) {
                    brute.insert(c);
                }
            }
            assert_eq!(enumerated, brute, "n={n} d={d}");
        }
    }
}

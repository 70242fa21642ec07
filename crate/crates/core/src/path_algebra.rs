//! The graded path algebra kΓ_G(W) and its homogeneous ideals.
//!
//! Multiplication follows the right-to-left convention: for paths p and q the
//! product p·q is "first q, then p" and vanishes unless q ends where p starts.
//! Paths are stored in traversal order (first arrow first).
//!
//! Ideals are handled degree by degree. The degree-d component I_d is spanned
//! by the vertex-pure pieces v_t r v_s of the generators of degree d together
//! with α·b and b·α for arrows α and basis vectors b of I_{d-1}; this is the
//! whole of I_d because every p·r·q with p or q nontrivial factors through an
//! arrow at one end.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde_json::json;
use thiserror::Error;

use crate::cyclotomic::{Conductor, Cyc};
use crate::linalg::{Echelon, SparseVec};
use crate::quiver::CoveringQuiver;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathAlgebraError {
    #[error("generator {0} is not homogeneous")]
    NotHomogeneous(usize),
    #[error("J^N is not contained in the ideal for any N <= {0}")]
    NotNilpotentWithinBound(usize),
    #[error("element is not homogeneous")]
    Inhomogeneous,
}

/// A path of the covering quiver; length 0 is the trivial path e_v.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Path {
    start: usize,
    end: usize,
    families: Vec<u8>,
}

impl Ord for Path {
    fn cmp(&self, other: &Self) -> Ordering {
        self.families
            .len()
            .cmp(&other.families.len())
            .then(self.start.cmp(&other.start))
            .then_with(|| self.families.cmp(&other.families))
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Path {
    pub fn start(&self) -> usize {
        self.start
    }

    pub fn end(&self) -> usize {
        self.end
    }

    pub fn families(&self) -> &[u8] {
        &self.families
    }

    pub fn len(&self) -> usize {
        self.families.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.families.is_empty()
    }

    /// `self · other`: traverse `other`, then `self`.
    pub fn compose(&self, other: &Path) -> Option<Path> {
        if other.end != self.start {
            return None;
        }
        let mut families = Vec::with_capacity(self.len() + other.len());
        families.extend_from_slice(&other.families);
        families.extend_from_slice(&self.families);
        Some(Path {
            start: other.start,
            end: self.end,
            families,
        })
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}:", self.start)?;
        for fam in &self.families {
            write!(f, "{}", fam + 1)?;
        }
        write!(f, "]")
    }
}

/// A finite linear combination of paths; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Elem {
    terms: BTreeMap<Path, Cyc>,
}

impl Elem {
    pub fn zero() -> Self {
        Elem::default()
    }

    pub fn term(p: Path, c: Cyc) -> Self {
        let mut e = Elem::zero();
        e.add_term(p, c);
        e
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Path, &Cyc)> {
        self.terms.iter()
    }

    pub fn coeff(&self, p: &Path) -> Option<&Cyc> {
        self.terms.get(p)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, p: Path, c: Cyc) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&p) {
            Some(x) => {
                *x += &c;
                if x.is_zero() {
                    self.terms.remove(&p);
                }
            }
            None => {
                self.terms.insert(p, c);
            }
        }
    }

    pub fn add(&self, other: &Elem) -> Elem {
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(p.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Elem) -> Elem {
        self.add(&other.scale(&Cyc::from_int(other.conductor_or_default(), -1)))
    }

    fn conductor_or_default(&self) -> Conductor {
        self.terms
            .values()
            .next()
            .map(Cyc::conductor)
            .unwrap_or_else(|| Conductor::new(1).unwrap())
    }

    pub fn scale(&self, c: &Cyc) -> Elem {
        if c.is_zero() {
            return Elem::zero();
        }
        Elem {
            terms: self.terms.iter().map(|(p, x)| (p.clone(), x * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Elem) -> Elem {
        let mut out = Elem::zero();
        // index the right factor by end vertex
        let mut by_end: BTreeMap<usize, Vec<(&Path, &Cyc)>> = BTreeMap::new();
        for (q, c) in &other.terms {
            by_end.entry(q.end).or_default().push((q, c));
        }
        for (p, a) in &self.terms {
            if let Some(qs) = by_end.get(&p.start) {
                for (q, b) in qs {
                    let pq = p.compose(q).expect("matching vertices");
                    out.add_term(pq, a * *b);
                }
            }
        }
        out
    }

    pub fn pow(&self, k: usize, one: &Elem) -> Elem {
        (0..k).fold(one.clone(), |acc, _| acc.mul(self))
    }

    /// Length of the paths if all terms share one length.
    pub fn degree(&self) -> Option<usize> {
        let mut lens = self.terms.keys().map(Path::len);
        let first = lens.next()?;
        lens.all(|l| l == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.degree().is_some()
    }

    pub fn homogeneous_components(&self) -> BTreeMap<usize, Elem> {
        let mut out: BTreeMap<usize, Elem> = BTreeMap::new();
        for (p, c) in &self.terms {
            out.entry(p.len())
                .or_default()
                .add_term(p.clone(), c.clone());
        }
        out
    }

    /// The summands v_t · self · v_s, keyed by (s, t).
    pub fn vertex_pure_parts(&self) -> BTreeMap<(usize, usize), Elem> {
        let mut out: BTreeMap<(usize, usize), Elem> = BTreeMap::new();
        for (p, c) in &self.terms {
            out.entry((p.start, p.end))
                .or_default()
                .add_term(p.clone(), c.clone());
        }
        out
    }

    pub fn map_paths<F: FnMut(&Path) -> Option<(Path, Cyc)>>(&self, mut f: F) -> Elem {
        let mut out = Elem::zero();
        for (p, c) in &self.terms {
            if let Some((q, s)) = f(p) {
                out.add_term(q, c * &s);
            }
        }
        out
    }
}

/// The path algebra of a covering quiver with scalars in Q(ζ_L).
#[derive(Debug, Clone)]
pub struct PathAlgebra {
    quiver: Arc<CoveringQuiver>,
    conductor: Conductor,
}

impl PathAlgebra {
    pub fn new(quiver: Arc<CoveringQuiver>, conductor: Conductor) -> Self {
        PathAlgebra { quiver, conductor }
    }

    pub fn quiver(&self) -> &CoveringQuiver {
        &self.quiver
    }

    pub fn quiver_arc(&self) -> &Arc<CoveringQuiver> {
        &self.quiver
    }

    pub fn conductor(&self) -> Conductor {
        self.conductor
    }

    pub fn scalar(&self, n: i64) -> Cyc {
        Cyc::from_int(self.conductor, n)
    }

    pub fn trivial_path(&self, v: usize) -> Path {
        Path {
            start: v,
            end: v,
            families: Vec::new(),
        }
    }

    /// The path leaving `start` along the given families, in traversal order.
    pub fn path(&self, start: usize, families: &[u8]) -> Path {
        let end = families
            .iter()
            .fold(start, |v, &f| self.quiver.target(v, f as usize));
        Path {
            start,
            end,
            families: families.to_vec(),
        }
    }

    pub fn vertex(&self, v: usize) -> Elem {
        Elem::term(self.trivial_path(v), Cyc::one(self.conductor))
    }

    pub fn one(&self) -> Elem {
        let mut e = Elem::zero();
        for v in 0..self.quiver.num_vertices() {
            e.add_term(self.trivial_path(v), Cyc::one(self.conductor));
        }
        e
    }

    pub fn arrow(&self, start: usize, family: usize) -> Elem {
        Elem::term(self.path(start, &[family as u8]), Cyc::one(self.conductor))
    }

    /// Σ_g g·(a_i, e): the sum of all arrows of one family.
    pub fn family_sum(&self, family: usize) -> Elem {
        let mut e = Elem::zero();
        for v in 0..self.quiver.num_vertices() {
            e.add_term(self.path(v, &[family as u8]), Cyc::one(self.conductor));
        }
        e
    }

    /// dim A_d = |G|·|W|^d.
    pub fn dim_degree(&self, d: usize) -> usize {
        let k = self.quiver.num_families();
        self.quiver.num_vertices() * k.pow(d as u32)
    }

    /// Position of a path within [`PathAlgebra::paths_of_length`].
    pub fn path_index(&self, p: &Path) -> usize {
        let k = self.quiver.num_families();
        p.families
            .iter()
            .fold(p.start, |acc, &f| acc * k + f as usize)
    }

    pub fn path_at(&self, d: usize, idx: usize) -> Path {
        let k = self.quiver.num_families();
        let mut families = vec![0u8; d];
        let mut rest = idx;
        for slot in families.iter_mut().rev() {
            *slot = (rest % k) as u8;
            rest /= k;
        }
        self.path(rest, &families)
    }

    pub fn paths_of_length(&self, d: usize) -> Vec<Path> {
        (0..self.dim_degree(d))
            .map(|i| self.path_at(d, i))
            .collect()
    }

    pub fn to_sparse(&self, x: &Elem) -> SparseVec {
        x.terms()
            .map(|(p, c)| (self.path_index(p), c.clone()))
            .collect()
    }

    pub fn from_sparse(&self, d: usize, v: &SparseVec) -> Elem {
        let mut e = Elem::zero();
        for (i, c) in v {
            e.add_term(self.path_at(d, *i), c.clone());
        }
        e
    }

    pub fn path_json(&self, p: &Path) -> serde_json::Value {
        let fams: Vec<usize> = p.families.iter().map(|&f| f as usize + 1).collect();
        json!([self.quiver.vertex(p.start), fams])
    }

    pub fn elem_json(&self, x: &Elem) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = x
            .terms()
            .map(|(p, c)| json!({"path": self.path_json(p), "coeff": c}))
            .collect();
        serde_json::Value::Array(terms)
    }
}

/// Basis data of one homogeneous component I_d.
#[derive(Debug, Clone)]
pub struct IdealDegree {
    degree: usize,
    full: bool,
    echelon: Echelon,
}

impl IdealDegree {
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Whether I_d = A_d.
    pub fn is_full(&self) -> bool {
        self.full
    }

    pub fn echelon(&self) -> &Echelon {
        &self.echelon
    }

    pub fn dim(&self, alg: &PathAlgebra) -> usize {
        if self.full {
            alg.dim_degree(self.degree)
        } else {
            self.echelon.rank()
        }
    }

    pub fn reduce(&self, v: SparseVec) -> SparseVec {
        if self.full {
            SparseVec::new()
        } else {
            self.echelon.reduce(v)
        }
    }

    pub fn is_pivot(&self, idx: usize) -> bool {
        self.full || self.echelon.is_pivot(idx)
    }
}

/// A homogeneous two-sided ideal, generated degreewise and cached.
#[derive(Debug)]
pub struct GradedIdeal {
    alg: PathAlgebra,
    generators: Vec<Elem>,
    pure_by_degree: BTreeMap<usize, Vec<SparseVec>>,
    cache: Mutex<Vec<Arc<IdealDegree>>>,
}

impl Clone for GradedIdeal {
    fn clone(&self) -> Self {
        GradedIdeal {
            alg: self.alg.clone(),
            generators: self.generators.clone(),
            pure_by_degree: self.pure_by_degree.clone(),
            cache: Mutex::new(self.cache.lock().expect("cache").clone()),
        }
    }
}

/// Per-degree complements of an admissible ideal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientBasis {
    pub per_degree: Vec<Vec<Path>>,
    /// Least N with J^N ⊆ I.
    pub nilpotency: usize,
}

impl QuotientBasis {
    pub fn dims(&self) -> Vec<usize> {
        self.per_degree.iter().map(Vec::len).collect()
    }

    pub fn dimension(&self) -> usize {
        self.per_degree.iter().map(Vec::len).sum()
    }

    pub fn paths(&self) -> impl Iterator<Item = &Path> {
        self.per_degree.iter().flatten()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Admissibility {
    pub admissible: bool,
    pub diagnostic: Option<String>,
}

impl GradedIdeal {
    pub fn new(alg: PathAlgebra, generators: Vec<Elem>) -> Result<Self, PathAlgebraError> {
        let mut pure_by_degree: BTreeMap<usize, Vec<SparseVec>> = BTreeMap::new();
        for (i, g) in generators.iter().enumerate() {
            if g.is_zero() {
                continue;
            }
            let d = g.degree().ok_or(PathAlgebraError::NotHomogeneous(i))?;
            for part in g.vertex_pure_parts().values() {
                pure_by_degree
                    .entry(d)
                    .or_default()
                    .push(alg.to_sparse(part));
            }
        }
        Ok(GradedIdeal {
            alg,
            generators,
            pure_by_degree,
            cache: Mutex::new(Vec::new()),
        })
    }

    /// The arrow ideal J.
    pub fn arrow_ideal(alg: PathAlgebra) -> Self {
        let gens = (0..alg.quiver().num_families())
            .map(|f| alg.family_sum(f))
            .collect();
        GradedIdeal::new(alg, gens).expect("arrows are homogeneous")
    }

    pub fn algebra(&self) -> &PathAlgebra {
        &self.alg
    }

    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    pub fn max_generator_degree(&self) -> usize {
        self.pure_by_degree.keys().next_back().copied().unwrap_or(0)
    }

    pub fn min_generator_degree(&self) -> Option<usize> {
        self.pure_by_degree.keys().next().copied()
    }

    /// Row-reduced basis of I_d.
    pub fn degree_basis(&self, d: usize) -> Arc<IdealDegree> {
        let mut cache = self.cache.lock().expect("ideal cache poisoned");
        while cache.len() <= d {
            let next = self.compute_degree(cache.len(), cache.last().map(Arc::as_ref));
            cache.push(Arc::new(next));
        }
        cache[d].clone()
    }

    fn compute_degree(&self, d: usize, prev: Option<&IdealDegree>) -> IdealDegree {
        let alg = &self.alg;
        let q = alg.quiver();
        if prev.is_some_and(|p| p.full) {
            return IdealDegree {
                degree: d,
                full: true,
                echelon: Echelon::new(),
            };
        }
        let mut candidates: Vec<SparseVec> = Vec::new();
        if let Some(prev) = prev {
            let k = q.num_families();
            for row in prev.echelon.rows() {
                for fam in 0..k {
                    // arrow after the row: append the family
                    let left: SparseVec =
                        row.iter().map(|(i, c)| (i * k + fam, c.clone())).collect();
                    candidates.push(left);
                    // arrow before the row: prepend the family
                    let right: SparseVec = row
                        .iter()
                        .map(|(i, c)| {
                            let p = alg.path_at(d - 1, *i);
                            let start = q.source_into(p.start, fam);
                            let mut fams = Vec::with_capacity(d);
                            fams.push(fam as u8);
                            fams.extend_from_slice(&p.families);
                            (alg.path_index(&alg.path(start, &fams)), c.clone())
                        })
                        .collect();
                    candidates.push(right);
                }
            }
        }
        if let Some(gens) = self.pure_by_degree.get(&d) {
            candidates.extend(gens.iter().cloned());
        }
        let mut echelon = Echelon::new();
        echelon.extend(candidates);
        let full = echelon.rank() == alg.dim_degree(d);
        IdealDegree {
            degree: d,
            full,
            echelon,
        }
    }

    /// Canonical residue of a homogeneous element modulo I.
    pub fn normal_form(&self, x: &Elem) -> Elem {
        let mut out = Elem::zero();
        for (d, part) in x.homogeneous_components() {
            let r = self.degree_basis(d).reduce(self.alg.to_sparse(&part));
            out = out.add(&self.alg.from_sparse(d, &r));
        }
        out
    }

    pub fn contains(&self, x: &Elem) -> bool {
        x.homogeneous_components().into_iter().all(|(d, part)| {
            self.degree_basis(d)
                .reduce(self.alg.to_sparse(&part))
                .is_empty()
        })
    }

    /// Complements of I_d in A_d until J^N ⊆ I.
    pub fn quotient_basis(&self, degree_bound: usize) -> Result<QuotientBasis, PathAlgebraError> {
        let mut per_degree = Vec::new();
        for d in 0..=degree_bound {
            let deg = self.degree_basis(d);
            if deg.full {
                return Ok(QuotientBasis {
                    per_degree,
                    nilpotency: d,
                });
            }
            let paths = (0..self.alg.dim_degree(d))
                .filter(|&i| !deg.is_pivot(i))
                .map(|i| self.alg.path_at(d, i))
                .collect();
            per_degree.push(paths);
        }
        Err(PathAlgebraError::NotNilpotentWithinBound(degree_bound))
    }

    /// Default bound 2·(max generator degree) + exp(G).
    pub fn default_degree_bound(&self) -> usize {
        2 * self.max_generator_degree() + self.alg.quiver().group().exponent() as usize
    }

    /// J^N ⊆ I ⊆ J² for some N within the bound.
    pub fn is_admissible(&self, degree_bound: usize) -> Admissibility {
        if self.min_generator_degree().is_none() {
            return Admissibility {
                admissible: false,
                diagnostic: Some("zero ideal is never admissible".into()),
            };
        }
        if let Some(d) = self.min_generator_degree().filter(|&d| d < 2) {
            return Admissibility {
                admissible: false,
                diagnostic: Some(format!("generator of degree {d} is not in J^2")),
            };
        }
        match self.quotient_basis(degree_bound) {
            Ok(_) => Admissibility {
                admissible: true,
                diagnostic: None,
            },
            Err(e) => Admissibility {
                admissible: false,
                diagnostic: Some(e.to_string()),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{FinAbGroup, WeightSeq};
    use proptest::prelude::*;

    fn algebra(group: &str, weights: &str, l: u32) -> PathAlgebra {
        let g: FinAbGroup = group.parse().unwrap();
        let w = WeightSeq::new(g.parse_elts(weights).unwrap());
        let q = Arc::new(CoveringQuiver::new(g, w).unwrap());
        PathAlgebra::new(q, Conductor::new(l).unwrap())
    }

    /// (X², Y², XY − a·YX) on the given quiver, a = ±1.
    fn book_ideal(alg: &PathAlgebra, a: i64) -> GradedIdeal {
        let x = alg.family_sum(0);
        let y = alg.family_sum(1);
        let gens = vec![
            x.mul(&x),
            y.mul(&y),
            x.mul(&y).sub(&y.mul(&x).scale(&alg.scalar(a))),
        ];
        GradedIdeal::new(alg.clone(), gens).unwrap()
    }

    #[test]
    fn vertex_products() {
        let alg = algebra("Z2", "(1),(1)", 2);
        let ve = alg.vertex(0);
        assert_eq!(ve.mul(&ve), ve);
        assert!(ve.mul(&alg.vertex(1)).is_zero());
    }

    #[test]
    fn family_square_on_z2() {
        let alg = algebra("Z2", "(1),(1)", 2);
        let x = alg.family_sum(0);
        let x2 = x.mul(&x);
        assert_eq!(x2.num_terms(), 2);
        assert!(x2
            .terms()
            .all(|(p, c)| p.families() == [0, 0] && c.is_one()));
    }

    #[test]
    fn path_enumeration() {
        let alg = algebra("Z2", "(1),(1)", 2);
        assert_eq!(
            alg.paths_of_length(0),
            vec![alg.trivial_path(0), alg.trivial_path(1)]
        );
        assert_eq!(alg.paths_of_length(1).len(), 4);
        let klein = algebra("Z2xZ2", "(1,0),(0,1)", 2);
        let p2 = klein.paths_of_length(2);
        assert_eq!(p2.len(), 16);
        let mut sorted = p2.clone();
        sorted.sort();
        assert_eq!(sorted, p2);
        for (i, p) in p2.iter().enumerate() {
            assert_eq!(klein.path_index(p), i);
        }
    }

    #[test]
    fn book_ideal_on_z2() {
        let alg = algebra("Z2", "(1),(1)", 2);
        let ideal = book_ideal(&alg, -1);
        assert_eq!(ideal.degree_basis(1).dim(&alg), 0);
        assert_eq!(ideal.degree_basis(2).dim(&alg), 6);
        let qb = ideal.quotient_basis(6).unwrap();
        assert_eq!(qb.dims(), vec![2, 4, 2]);
        assert_eq!(qb.dimension(), 8);
        assert_eq!(qb.nilpotency, 3);
        assert!(ideal.is_admissible(6).admissible);
    }

    #[test]
    fn membership_examples() {
        let alg = algebra("Z2", "(1),(1)", 2);
        let ideal = book_ideal(&alg, -1);
        for g in ideal.generators() {
            assert!(ideal.contains(g));
        }
        assert!(!ideal.contains(&alg.vertex(0)));
        // v_g·(XY + YX) stays inside
        let x = alg.family_sum(0);
        let y = alg.family_sum(1);
        let r = x.mul(&y).add(&y.mul(&x));
        assert!(ideal.contains(&alg.vertex(1).mul(&r)));
        assert!(ideal.contains(&r.mul(&alg.vertex(1))));
        assert!(!ideal.contains(&x.mul(&y)));
    }

    #[test]
    fn arrow_ideal_quotient() {
        let alg = algebra("Z3", "(1),(1)", 6);
        let j = GradedIdeal::arrow_ideal(alg.clone());
        let qb = j.quotient_basis(4).unwrap();
        assert_eq!(qb.dims(), vec![3]);
        assert_eq!(qb.nilpotency, 1);
        assert_eq!(j.degree_basis(1).dim(&alg), 6);
        assert!(!j.is_admissible(4).admissible);
    }

    #[test]
    fn lower_degrees_are_empty() {
        let alg = algebra("Z2", "(1),(1)", 2);
        let ideal = book_ideal(&alg, -1);
        assert_eq!(ideal.degree_basis(0).dim(&alg), 0);
        assert_eq!(ideal.degree_basis(1).dim(&alg), 0);
    }

    #[test]
    fn zero_ideal_is_not_admissible() {
        let alg = algebra("Z2", "(1),(1)", 2);
        let ideal = GradedIdeal::new(alg, vec![]).unwrap();
        assert!(!ideal.is_admissible(5).admissible);
        assert_eq!(
            ideal.quotient_basis(5),
            Err(PathAlgebraError::NotNilpotentWithinBound(5))
        );
    }

    #[test]
    fn rejects_inhomogeneous_generator() {
        let alg = algebra("Z2", "(1),(1)", 2);
        let bad = alg.vertex(0).add(&alg.arrow(0, 0));
        assert!(GradedIdeal::new(alg, vec![bad]).is_err());
    }

    #[test]
    fn dims_of_free_path_algebra() {
        let alg = algebra("Z4xZ2", "(1,0),(0,1)", 4);
        for d in 0..5 {
            assert_eq!(alg.paths_of_length(d).len(), 8 * 2usize.pow(d as u32));
        }
    }

    fn arb_elem(alg: PathAlgebra) -> impl Strategy<Value = Elem> {
        prop::collection::vec((0usize..3, 0usize..64, -2i64..3), 1..5).prop_map(move |ts| {
            let mut e = Elem::zero();
            for (d, i, c) in ts {
                let i = i % alg.dim_degree(d);
                e.add_term(alg.path_at(d, i), alg.scalar(c));
            }
            e
        })
    }

    proptest! {
        #[test]
        fn identity_and_associativity(
            (x, y, z) in {
                let alg = algebra("Z4", "(1),(3)", 4);
                (arb_elem(alg.clone()), arb_elem(alg.clone()), arb_elem(alg))
            }
        ) {
            let alg = algebra("Z4", "(1),(3)", 4);
            let one = alg.one();
            prop_assert_eq!(one.mul(&x), x.clone());
            prop_assert_eq!(x.mul(&one), x.clone());
            prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        }

        #[test]
        fn ideal_absorbs(d1 in 0usize..3, d2 in 0usize..3, i in 0usize..64, j in 0usize..64, g in 0usize..3) {
            let alg = algebra("Z4", "(1),(1)", 4);
            let ideal = book_ideal(&alg, -1);
            let p = Elem::term(alg.path_at(d1, i % alg.dim_degree(d1)), alg.scalar(1));
            let q = Elem::term(alg.path_at(d2, j % alg.dim_degree(d2)), alg.scalar(1));
            let r = &ideal.generators()[g];
            prop_assert!(ideal.contains(&p.mul(r).mul(&q)));
        }
    }
}

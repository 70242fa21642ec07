//! Hopf algebras given by structure constants, and verification of explicit
//! isomorphisms from quiver quotients onto them.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_integer::Integer;
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::catalog::{build_lifted_ideal, hopf_structure, TameFamily};
use crate::cyclotomic::{Conductor, Cyc};
use crate::group::{Character, FinAbGroup, WeightSeq};
use crate::hopf::{reduce_tensor, HopfStructure};
use crate::linalg::{axpy, Echelon, SparseVec};
use crate::path_algebra::{Elem, GradedIdeal, Path};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("{axiom} fails at {witness}")]
    Axiom { axiom: String, witness: String },
    #[error("invalid parameters: {0}")]
    Parameters(String),
    #[error("table shapes do not match the basis")]
    Shape,
}

/// A sparse element of A ⊗ A in basis-pair coordinates.
pub type Tens = BTreeMap<(usize, usize), Cyc>;

fn add_to(v: &mut SparseVec, k: usize, c: Cyc) {
    if c.is_zero() {
        return;
    }
    axpy(v, &Cyc::from_int(c.conductor(), -1), &[(k, c)]);
}

fn add_tens(t: &mut Tens, k: (usize, usize), c: Cyc) {
    if c.is_zero() {
        return;
    }
    match t.get_mut(&k) {
        Some(x) => {
            *x += &c;
            if x.is_zero() {
                t.remove(&k);
            }
        }
        None => {
            t.insert(k, c);
        }
    }
}

fn scale_vec(v: &SparseVec, c: &Cyc) -> SparseVec {
    if c.is_zero() {
        return SparseVec::new();
    }
    v.iter().map(|(k, x)| (*k, x * c)).collect()
}

fn add_vec(a: &SparseVec, b: &SparseVec) -> SparseVec {
    let mut out = a.clone();
    for (k, c) in b {
        add_to(&mut out, *k, c.clone());
    }
    out
}

/// A finite-dimensional Hopf algebra with every table given on a basis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PresentedHopfAlgebra {
    pub name: String,
    pub labels: Vec<String>,
    /// Radical degree of each basis element.
    pub grading: Vec<usize>,
    #[serde(skip)]
    pub conductor: Conductor,
    pub mult: Vec<Vec<SparseVec>>,
    pub unit: SparseVec,
    pub delta: Vec<Tens>,
    pub counit: Vec<Cyc>,
    pub antipode: Vec<SparseVec>,
    /// Named algebra generators, for building morphisms.
    pub generators: BTreeMap<String, SparseVec>,
}

impl PresentedHopfAlgebra {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn basis(&self, i: usize) -> SparseVec {
        [(i, Cyc::one(self.conductor))].into_iter().collect()
    }

    pub fn gen(&self, name: &str) -> SparseVec {
        self.generators
            .get(name)
            .unwrap_or_else(|| panic!("no generator {name}"))
            .clone()
    }

    pub fn scalar(&self, c: Cyc) -> SparseVec {
        scale_vec(&self.unit, &c)
    }

    pub fn mul(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, x) in a {
            for (j, y) in b {
                let xy = x * y;
                for (k, c) in &self.mult[*i][*j] {
                    add_to(&mut out, *k, &xy * c);
                }
            }
        }
        out
    }

    pub fn add(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        add_vec(a, b)
    }

    pub fn scale(&self, a: &SparseVec, c: &Cyc) -> SparseVec {
        scale_vec(a, c)
    }

    pub fn apply_delta(&self, a: &SparseVec) -> Tens {
        let mut out = Tens::new();
        for (i, x) in a {
            for (k, c) in &self.delta[*i] {
                add_tens(&mut out, *k, x * c);
            }
        }
        out
    }

    pub fn apply_counit(&self, a: &SparseVec) -> Cyc {
        let mut acc = Cyc::zero(self.conductor);
        for (i, x) in a {
            acc += &(x * &self.counit[*i]);
        }
        acc
    }

    pub fn apply_antipode(&self, a: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, x) in a {
            for (k, c) in &self.antipode[*i] {
                add_to(&mut out, *k, x * c);
            }
        }
        out
    }

    pub fn tens_mul(&self, s: &Tens, t: &Tens) -> Tens {
        let mut out = Tens::new();
        for ((a, b), x) in s {
            for ((c, d), y) in t {
                let xy = x * y;
                let left = &self.mult[*a][*c];
                let right = &self.mult[*b][*d];
                for (i, u) in left {
                    for (j, v) in right {
                        add_tens(&mut out, (*i, *j), &(&xy * u) * v);
                    }
                }
            }
        }
        out
    }

    fn elementary(&self, a: &SparseVec, b: &SparseVec) -> Tens {
        let mut t = Tens::new();
        for (i, x) in a {
            for (j, y) in b {
                add_tens(&mut t, (*i, *j), x * y);
            }
        }
        t
    }

    fn fail(&self, axiom: &str, witness: String) -> WitnessError {
        WitnessError::Axiom {
            axiom: axiom.to_string(),
            witness,
        }
    }

    /// Checks every Hopf axiom on basis elements.
    pub fn validate(&self) -> Result<(), WitnessError> {
        let n = self.dim();
        let l = self.conductor;
        if self.mult.len() != n
            || self.mult.iter().any(|r| r.len() != n)
            || self.delta.len() != n
            || self.counit.len() != n
            || self.antipode.len() != n
            || self.grading.len() != n
        {
            return Err(WitnessError::Shape);
        }
        let e: Vec<SparseVec> = (0..n).map(|i| self.basis(i)).collect();
        for i in 0..n {
            if self.mul(&self.unit, &e[i]) != e[i] || self.mul(&e[i], &self.unit) != e[i] {
                return Err(self.fail("unit", self.labels[i].clone()));
            }
        }
        for i in 0..n {
            for j in 0..n {
                let ij = &self.mult[i][j];
                for k in 0..n {
                    if self.mul(ij, &e[k]) != self.mul(&e[i], &self.mult[j][k]) {
                        return Err(self.fail(
                            "associativity",
                            format!(
                                "({}, {}, {})",
                                self.labels[i], self.labels[j], self.labels[k]
                            ),
                        ));
                    }
                }
            }
        }
        let one = Cyc::one(l);
        if self.apply_delta(&self.unit) != self.elementary(&self.unit, &self.unit) {
            return Err(self.fail("coproduct of unit", "1".into()));
        }
        if self.apply_counit(&self.unit) != one {
            return Err(self.fail("counit of unit", "1".into()));
        }
        for i in 0..n {
            let d = &self.delta[i];
            let mut left: BTreeMap<(usize, usize, usize), Cyc> = BTreeMap::new();
            let mut right: BTreeMap<(usize, usize, usize), Cyc> = BTreeMap::new();
            for ((a, b), c) in d {
                for ((a1, a2), c2) in &self.delta[*a] {
                    *left.entry((*a1, *a2, *b)).or_insert_with(|| Cyc::zero(l)) += &(c * c2);
                }
                for ((b1, b2), c2) in &self.delta[*b] {
                    *right.entry((*a, *b1, *b2)).or_insert_with(|| Cyc::zero(l)) += &(c * c2);
                }
            }
            left.retain(|_, c| !c.is_zero());
            right.retain(|_, c| !c.is_zero());
            if left != right {
                return Err(self.fail("coassociativity", self.labels[i].clone()));
            }
            let mut lc = SparseVec::new();
            let mut rc = SparseVec::new();
            let mut ls = SparseVec::new();
            let mut rs = SparseVec::new();
            for ((a, b), c) in d {
                add_to(&mut lc, *b, c * &self.counit[*a]);
                add_to(&mut rc, *a, c * &self.counit[*b]);
                ls = add_vec(&ls, &scale_vec(&self.mul(&self.antipode[*a], &e[*b]), c));
                rs = add_vec(&rs, &scale_vec(&self.mul(&e[*a], &self.antipode[*b]), c));
            }
            if lc != e[i] || rc != e[i] {
                return Err(self.fail("counit", self.labels[i].clone()));
            }
            let eps = scale_vec(&self.unit, &self.counit[i]);
            if ls != eps || rs != eps {
                return Err(self.fail("antipode", self.labels[i].clone()));
            }
        }
        for i in 0..n {
            for j in 0..n {
                let prod = &self.mult[i][j];
                if self.apply_delta(prod) != self.tens_mul(&self.delta[i], &self.delta[j]) {
                    return Err(self.fail(
                        "coproduct multiplicative",
                        format!("({}, {})", self.labels[i], self.labels[j]),
                    ));
                }
                if self.apply_counit(prod) != &self.counit[i] * &self.counit[j] {
                    return Err(self.fail(
                        "counit multiplicative",
                        format!("({}, {})", self.labels[i], self.labels[j]),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Structure constants as JSON: labels plus every table.
    pub fn to_json(&self) -> serde_json::Value {
        let vec_json = |v: &SparseVec| -> serde_json::Value {
            v.iter().map(|(k, c)| json!([self.labels[*k], c])).collect()
        };
        json!({
            "name": self.name,
            "dim": self.dim(),
            "labels": self.labels,
            "unit": vec_json(&self.unit),
            "counit": self.counit,
            "antipode": self.antipode.iter().map(vec_json).collect::<Vec<_>>(),
            "mult": self.mult.iter().map(|r| r.iter().map(vec_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "delta": self.delta.iter().map(|t| t.iter().map(|((a, b), c)| json!([self.labels[*a], self.labels[*b], c])).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }
}

/// Δ, S, ε on a PBW-type basis determined by their values on generators.
/// `words[i]` lists the generator indices whose product (left to right) is
/// basis element i.
fn extend_from_generators(
    alg: &mut PresentedHopfAlgebra,
    words: &[Vec<usize>],
    gens: &[SparseVec],
    gen_delta: &[Tens],
    gen_antipode: &[SparseVec],
    gen_counit: &[Cyc],
) {
    let l = alg.conductor;
    let n = alg.dim();
    let one_t = alg.elementary(&alg.unit, &alg.unit);
    let mut delta = Vec::with_capacity(n);
    let mut antipode = Vec::with_capacity(n);
    let mut counit = Vec::with_capacity(n);
    for w in words {
        let mut d = one_t.clone();
        let mut s = alg.unit.clone();
        let mut e = Cyc::one(l);
        let mut check = alg.unit.clone();
        for &g in w {
            d = alg.tens_mul(&d, &gen_delta[g]);
            s = alg.mul(&gen_antipode[g], &s);
            e = &e * &gen_counit[g];
            check = alg.mul(&check, &gens[g]);
        }
        debug_assert_eq!(check.len(), 1, "word is a basis element");
        delta.push(d);
        antipode.push(s);
        counit.push(e);
    }
    alg.delta = delta;
    alg.antipode = antipode;
    alg.counit = counit;
}

fn primitive_check(n: usize, q: &Cyc) -> Result<(), WitnessError> {
    if !q.is_primitive_mth_root(n as u64) {
        return Err(WitnessError::Parameters(format!(
            "q = {q} is not a primitive {n}-th root of unity"
        )));
    }
    Ok(())
}

/// Taft algebra T_{n²}(q) on basis x^b g^c with gx = qxg, Δ(x) = x⊗g + 1⊗x.
pub fn taft(n: usize, q: &Cyc) -> Result<PresentedHopfAlgebra, WitnessError> {
    taft_named(n, q, "x", "g")
}

pub fn taft_named(
    n: usize,
    q: &Cyc,
    x: &str,
    g: &str,
) -> Result<PresentedHopfAlgebra, WitnessError> {
    primitive_check(n, q)?;
    let l = q.conductor();
    let idx = |b: usize, c: usize| b * n + c;
    let dim = n * n;
    let mut labels = Vec::with_capacity(dim);
    let mut grading = Vec::with_capacity(dim);
    for b in 0..n {
        for c in 0..n {
            labels.push(monomial(&[(x, b), (g, c)]));
            grading.push(b);
        }
    }
    let mut mult = vec![vec![SparseVec::new(); dim]; dim];
    for b in 0..n {
        for c in 0..n {
            for b2 in 0..n {
                for c2 in 0..n {
                    if b + b2 < n {
                        // x^b g^c x^b2 g^c2 = q^{c b2} x^{b+b2} g^{c+c2}
                        let coeff = q.pow((c * b2) as i64).expect("root");
                        mult[idx(b, c)][idx(b2, c2)].insert(idx(b + b2, (c + c2) % n), coeff);
                    }
                }
            }
        }
    }
    let unit: SparseVec = [(idx(0, 0), Cyc::one(l))].into_iter().collect();
    let gx: SparseVec = [(idx(1, 0), Cyc::one(l))].into_iter().collect();
    let gg: SparseVec = [(idx(0, 1), Cyc::one(l))].into_iter().collect();
    let ginv: SparseVec = [(idx(0, n - 1), Cyc::one(l))].into_iter().collect();
    let mut alg = PresentedHopfAlgebra {
        name: format!("T_{}({q})", n * n),
        labels,
        grading,
        conductor: l,
        mult,
        unit: unit.clone(),
        delta: vec![],
        counit: vec![],
        antipode: vec![],
        generators: [(x.to_string(), gx.clone()), (g.to_string(), gg.clone())]
            .into_iter()
            .collect(),
    };
    let mut dx = alg.elementary(&gx, &gg);
    for (k, c) in alg.elementary(&unit, &gx) {
        add_tens(&mut dx, k, c);
    }
    let dg = alg.elementary(&gg, &gg);
    let sx = scale_vec(&alg.mul(&gx, &ginv), &Cyc::from_int(l, -1));
    let words: Vec<Vec<usize>> = (0..n)
        .flat_map(|b| (0..n).map(move |c| [vec![0; b], vec![1; c]].concat()))
        .collect();
    extend_from_generators(
        &mut alg,
        &words,
        &[gx, gg],
        &[dx, dg],
        &[sx, ginv],
        &[Cyc::zero(l), Cyc::one(l)],
    );
    alg.validate()?;
    Ok(alg)
}

fn monomial(parts: &[(&str, usize)]) -> String {
    let s: Vec<String> = parts
        .iter()
        .filter(|(_, e)| *e > 0)
        .map(|(v, e)| {
            if *e == 1 {
                v.to_string()
            } else {
                format!("{v}^{e}")
            }
        })
        .collect();
    if s.is_empty() {
        "1".into()
    } else {
        s.join(" ")
    }
}

/// The book algebra h(q, m) on basis y^a x^b g^c:
/// xⁿ = yⁿ = 0, gⁿ = 1, gx = qxg, gy = q^m yg, xy = yx,
/// Δ(x) = x⊗g + 1⊗x, Δ(y) = y⊗1 + g^m⊗y, Δ(g) = g⊗g.
pub fn book_algebra(n: usize, q: &Cyc, m: usize) -> Result<PresentedHopfAlgebra, WitnessError> {
    primitive_check(n, q)?;
    if m.gcd(&n) != 1 {
        return Err(WitnessError::Parameters(format!("gcd({m}, {n}) must be 1")));
    }
    let l = q.conductor();
    let idx = |a: usize, b: usize, c: usize| (a * n + b) * n + c;
    let dim = n * n * n;
    let mut labels = Vec::with_capacity(dim);
    let mut grading = Vec::with_capacity(dim);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                labels.push(monomial(&[("y", a), ("x", b), ("g", c)]));
                grading.push(a + b);
            }
        }
    }
    let mut mult = vec![vec![SparseVec::new(); dim]; dim];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for a2 in 0..n {
                    for b2 in 0..n {
                        for c2 in 0..n {
                            if a + a2 < n && b + b2 < n {
                                // g^c y^a2 x^b2 = q^{c(m a2 + b2)} y^a2 x^b2 g^c
                                let e = c * (m * a2 + b2);
                                let coeff = q.pow(e as i64).expect("root");
                                mult[idx(a, b, c)][idx(a2, b2, c2)]
                                    .insert(idx(a + a2, b + b2, (c + c2) % n), coeff);
                            }
                        }
                    }
                }
            }
        }
    }
    let one = Cyc::one(l);
    let e = |i: usize| -> SparseVec { [(i, one.clone())].into_iter().collect() };
    let unit = e(idx(0, 0, 0));
    let gy = e(idx(1, 0, 0));
    let gx = e(idx(0, 1, 0));
    let gg = e(idx(0, 0, 1));
    let gm = e(idx(0, 0, m % n));
    let ginv = e(idx(0, 0, n - 1));
    let gminv = e(idx(0, 0, (n - m % n) % n));
    let mut alg = PresentedHopfAlgebra {
        name: format!("h({q},{m})"),
        labels,
        grading,
        conductor: l,
        mult,
        unit: unit.clone(),
        delta: vec![],
        counit: vec![],
        antipode: vec![],
        generators: [
            ("y".to_string(), gy.clone()),
            ("x".to_string(), gx.clone()),
            ("g".to_string(), gg.clone()),
        ]
        .into_iter()
        .collect(),
    };
    let mut dx = alg.elementary(&gx, &gg);
    for (k, c) in alg.elementary(&unit, &gx) {
        add_tens(&mut dx, k, c);
    }
    let mut dy = alg.elementary(&gy, &unit);
    for (k, c) in alg.elementary(&gm, &gy) {
        add_tens(&mut dy, k, c);
    }
    let dg = alg.elementary(&gg, &gg);
    let neg = Cyc::from_int(l, -1);
    let sx = scale_vec(&alg.mul(&gx, &ginv), &neg);
    let sy = scale_vec(&alg.mul(&gminv, &gy), &neg);
    let mut words = Vec::with_capacity(dim);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                words.push([vec![0; a], vec![1; b], vec![2; c]].concat());
            }
        }
    }
    extend_from_generators(
        &mut alg,
        &words,
        &[gy, gx, gg],
        &[dy, dx, dg],
        &[sy, sx, ginv],
        &[Cyc::zero(l), Cyc::zero(l), one.clone()],
    );
    alg.validate()?;
    Ok(alg)
}

/// The ground field as a one-dimensional Hopf algebra.
pub fn unit_algebra(l: Conductor) -> PresentedHopfAlgebra {
    let one = Cyc::one(l);
    let e: SparseVec = [(0, one.clone())].into_iter().collect();
    PresentedHopfAlgebra {
        name: "k".into(),
        labels: vec!["1".into()],
        grading: vec![0],
        conductor: l,
        mult: vec![vec![e.clone()]],
        unit: e.clone(),
        delta: vec![[((0, 0), one.clone())].into_iter().collect()],
        counit: vec![one],
        antipode: vec![e],
        generators: BTreeMap::new(),
    }
}

/// A ⊗ B with componentwise structure constants; basis (i, j) ↦ i·dim B + j.
pub fn tensor_hopf(
    a: &PresentedHopfAlgebra,
    b: &PresentedHopfAlgebra,
) -> Result<PresentedHopfAlgebra, WitnessError> {
    if a.conductor != b.conductor {
        return Err(WitnessError::Parameters("conductors differ".into()));
    }
    let nb = b.dim();
    let pair = |i: usize, j: usize| i * nb + j;
    let tensor_vec = |u: &SparseVec, v: &SparseVec| -> SparseVec {
        let mut out = SparseVec::new();
        for (i, x) in u {
            for (j, y) in v {
                add_to(&mut out, pair(*i, *j), x * y);
            }
        }
        out
    };
    let mut labels = Vec::new();
    let mut grading = Vec::new();
    for i in 0..a.dim() {
        for j in 0..nb {
            labels.push(match (a.labels[i].as_str(), b.labels[j].as_str()) {
                ("1", s) | (s, "1") => s.to_string(),
                (s, t) => format!("{s} {t}"),
            });
            grading.push(a.grading[i] + b.grading[j]);
        }
    }
    let mut mult = vec![vec![SparseVec::new(); a.dim() * nb]; a.dim() * nb];
    let mut delta = Vec::new();
    let mut counit = Vec::new();
    let mut antipode = Vec::new();
    for i in 0..a.dim() {
        for j in 0..nb {
            for i2 in 0..a.dim() {
                for j2 in 0..nb {
                    mult[pair(i, j)][pair(i2, j2)] = tensor_vec(&a.mult[i][i2], &b.mult[j][j2]);
                }
            }
            let mut d = Tens::new();
            for ((a1, a2), x) in &a.delta[i] {
                for ((b1, b2), y) in &b.delta[j] {
                    add_tens(&mut d, (pair(*a1, *b1), pair(*a2, *b2)), x * y);
                }
            }
            delta.push(d);
            counit.push(&a.counit[i] * &b.counit[j]);
            antipode.push(tensor_vec(&a.antipode[i], &b.antipode[j]));
        }
    }
    let mut generators = BTreeMap::new();
    for (name, v) in &a.generators {
        generators.insert(name.clone(), tensor_vec(v, &b.unit));
    }
    for (name, v) in &b.generators {
        generators.insert(name.clone(), tensor_vec(&a.unit, v));
    }
    let out = PresentedHopfAlgebra {
        name: format!("{} ⊗ {}", a.name, b.name),
        labels,
        grading,
        conductor: a.conductor,
        mult,
        unit: tensor_vec(&a.unit, &b.unit),
        delta,
        counit,
        antipode,
        generators,
    };
    out.validate()?;
    Ok(out)
}

/// kΓ_G(W)/I as a presented algebra on the canonical quotient basis.
pub struct QuotientPresentation {
    pub algebra: PresentedHopfAlgebra,
    pub paths: Vec<Path>,
    pub index: HashMap<Path, usize>,
}

pub fn presented_quotient(
    h: &HopfStructure,
    ideal: &GradedIdeal,
    name: &str,
) -> Result<QuotientPresentation, WitnessError> {
    let alg = h.algebra();
    let l = alg.conductor();
    let basis = ideal
        .quotient_basis(ideal.default_degree_bound())
        .map_err(|e| WitnessError::Parameters(e.to_string()))?;
    let paths: Vec<Path> = basis.paths().cloned().collect();
    let index: HashMap<Path, usize> = paths
        .iter()
        .enumerate()
        .map(|(i, p)| (p.clone(), i))
        .collect();
    let coords = |x: &Elem| -> SparseVec {
        ideal
            .normal_form(x)
            .terms()
            .map(|(p, c)| (index[p], c.clone()))
            .collect()
    };
    let one = Cyc::one(l);
    let elems: Vec<Elem> = paths
        .iter()
        .map(|p| Elem::term(p.clone(), one.clone()))
        .collect();
    let mult: Vec<Vec<SparseVec>> = elems
        .iter()
        .map(|a| elems.iter().map(|b| coords(&a.mul(b))).collect())
        .collect();
    let delta: Vec<Tens> = elems
        .iter()
        .map(|a| {
            reduce_tensor(ideal, &h.delta(a))
                .terms()
                .map(|((p, q), c)| ((index[p], index[q]), c.clone()))
                .collect()
        })
        .collect();
    let labels: Vec<String> = paths.iter().map(|p| alg.path_json(p).to_string()).collect();
    let algebra = PresentedHopfAlgebra {
        name: name.to_string(),
        grading: paths.iter().map(Path::len).collect(),
        labels,
        conductor: l,
        mult,
        unit: coords(&alg.one()),
        delta,
        counit: elems.iter().map(|a| h.counit(a)).collect(),
        antipode: elems.iter().map(|a| coords(&h.antipode(a))).collect(),
        generators: BTreeMap::new(),
    };
    Ok(QuotientPresentation {
        algebra,
        paths,
        index,
    })
}

/// A linear map given by the images of the domain basis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HopfMorphism {
    pub name: String,
    #[serde(skip)]
    pub domain: Arc<PresentedHopfAlgebra>,
    #[serde(skip)]
    pub codomain: Arc<PresentedHopfAlgebra>,
    pub images: Vec<SparseVec>,
    /// Images of the ideal generators under the path-level extension.
    pub relation_images: Vec<SparseVec>,
    /// Domain basis indices of arrows.
    pub arrows: Vec<usize>,
}

impl HopfMorphism {
    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, c) in v {
            out = add_vec(&out, &scale_vec(&self.images[*i], c));
        }
        out
    }

    fn apply_tens(&self, t: &Tens) -> Tens {
        let mut out = Tens::new();
        for ((a, b), c) in t {
            for (i, x) in &self.images[*a] {
                for (j, y) in &self.images[*b] {
                    add_tens(&mut out, (*i, *j), &(c * x) * y);
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .images
            .iter()
            .enumerate()
            .map(|(i, v)| {
                json!({
                    "source": self.domain.labels[i],
                    "image": v.iter().map(|(k, c)| json!([self.codomain.labels[*k], c])).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({
            "name": self.name,
            "domain": self.domain.name,
            "codomain": self.codomain.name,
            "domain_dim": self.domain.dim(),
            "codomain_dim": self.codomain.dim(),
            "matrix": rows,
        })
    }
}

/// Extends vertex and arrow images multiplicatively to every path.
pub struct PathAssignment<'a> {
    pub h: &'a HopfStructure,
    pub codomain: &'a PresentedHopfAlgebra,
    pub vertices: Vec<SparseVec>,
    /// Keyed by (start vertex, family).
    pub arrows: HashMap<(usize, usize), SparseVec>,
}

impl PathAssignment<'_> {
    pub fn path_image(&self, p: &Path) -> SparseVec {
        let q = self.h.algebra().quiver();
        let mut acc = self.vertices[p.start()].clone();
        let mut v = p.start();
        for &f in p.families() {
            acc = self.codomain.mul(&self.arrows[&(v, f as usize)], &acc);
            v = q.target(v, f as usize);
        }
        acc
    }

    pub fn elem_image(&self, x: &Elem) -> SparseVec {
        let mut out = SparseVec::new();
        for (p, c) in x.terms() {
            out = add_vec(&out, &scale_vec(&self.path_image(p), c));
        }
        out
    }
}

pub fn morphism_from_assignment(
    name: &str,
    quotient: &QuotientPresentation,
    ideal: &GradedIdeal,
    assignment: &PathAssignment,
) -> HopfMorphism {
    let images = quotient
        .paths
        .iter()
        .map(|p| assignment.path_image(p))
        .collect();
    let relation_images = ideal
        .generators()
        .iter()
        .map(|r| assignment.elem_image(r))
        .collect();
    let arrows = quotient
        .paths
        .iter()
        .enumerate()
        .filter(|(_, p)| p.len() == 1)
        .map(|(i, _)| i)
        .collect();
    HopfMorphism {
        name: name.to_string(),
        domain: Arc::new(quotient.algebra.clone()),
        codomain: Arc::new(assignment.codomain.clone()),
        images,
        relation_images,
        arrows,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IsoCheck {
    pub check: String,
    pub passed: bool,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IsoReport {
    pub passed: bool,
    pub domain_dim: usize,
    pub codomain_dim: usize,
    pub checks: Vec<IsoCheck>,
}

impl IsoReport {
    pub fn first_failure(&self) -> Option<&IsoCheck> {
        self.checks.iter().find(|c| !c.passed)
    }
}

/// Checks that φ is a bijective Hopf algebra map, recording the first
/// failing basis element (or pair) for each condition.
pub fn verify_hopf_iso(phi: &HopfMorphism) -> IsoReport {
    let dom = &phi.domain;
    let cod = &phi.codomain;
    let n = dom.dim();
    let mut checks = Vec::new();
    let mut push = |name: &str, witness: Option<String>| {
        checks.push(IsoCheck {
            check: name.to_string(),
            passed: witness.is_none(),
            witness,
        })
    };
    push(
        "dimensions agree",
        (n != cod.dim()).then(|| format!("{} vs {}", n, cod.dim())),
    );
    push(
        "relations map to zero",
        phi.relation_images
            .iter()
            .position(|v| !v.is_empty())
            .map(|k| format!("generator {}", k + 1)),
    );
    push(
        "unit",
        (phi.apply(&dom.unit) != cod.unit).then(|| "1".to_string()),
    );
    let mut mult_witness = None;
    'm: for i in 0..n {
        for j in 0..n {
            let lhs = phi.apply(&dom.mult[i][j]);
            let rhs = cod.mul(&phi.images[i], &phi.images[j]);
            if lhs != rhs {
                mult_witness = Some(format!("({}, {})", dom.labels[i], dom.labels[j]));
                break 'm;
            }
        }
    }
    push("multiplicative", mult_witness);
    push(
        "coproduct",
        (0..n)
            .find(|&i| phi.apply_tens(&dom.delta[i]) != cod.apply_delta(&phi.images[i]))
            .map(|i| dom.labels[i].clone()),
    );
    push(
        "counit",
        (0..n)
            .find(|&i| cod.apply_counit(&phi.images[i]) != dom.counit[i])
            .map(|i| dom.labels[i].clone()),
    );
    push(
        "antipode",
        (0..n)
            .find(|&i| cod.apply_antipode(&phi.images[i]) != phi.apply(&dom.antipode[i]))
            .map(|i| dom.labels[i].clone()),
    );
    let mut ech = Echelon::new();
    for v in &phi.images {
        ech.insert(v.clone());
    }
    push(
        "bijective",
        (ech.rank() != n || n != cod.dim()).then(|| format!("rank {} of {}", ech.rank(), n)),
    );
    push(
        "radical filtration",
        (0..n)
            .find(|&i| {
                phi.images[i]
                    .keys()
                    .any(|&k| cod.grading[k] < dom.grading[i])
            })
            .map(|i| dom.labels[i].clone()),
    );
    IsoReport {
        passed: checks.iter().all(|c| c.passed),
        domain_dim: n,
        codomain_dim: cod.dim(),
        checks,
    }
}

fn half(l: Conductor) -> Cyc {
    Cyc::from_ratio(l, 1, 2)
}

/// ½(1 + s·g) for s = ±1.
fn idempotent(alg: &PresentedHopfAlgebra, g: &SparseVec, sign: i64) -> SparseVec {
    let l = alg.conductor;
    let v = alg.add(&alg.unit, &alg.scale(g, &Cyc::from_int(l, sign)));
    alg.scale(&v, &half(l))
}

/// The Z₂ instance: W = (g, g), p = q = −1, ideal (X², Y², XY + YX).
pub fn book_domain() -> (HopfStructure, GradedIdeal) {
    let l = Conductor::new(2).expect("nonzero");
    let g = FinAbGroup::cyclic(2);
    let w = WeightSeq::new(vec![g.generator(0), g.generator(0)]);
    let neg = Cyc::from_int(l, -1);
    let chi = Character::new(&g, vec![neg.clone()]).expect("order 2");
    let h = hopf_structure(&g, &w, vec![chi.clone(), chi], l).expect("allowable");
    let ideal =
        build_lifted_ideal(h.algebra(), &TameFamily::I2 { m: 1, a: neg }).expect("valid family");
    (h, ideal)
}

/// The Z₂×Z₂ instance: W = (g, h), a_1 twisted by −1 under g, a_2 under h,
/// ideal (X², Y², XY − YX).
pub fn taft_domain() -> (HopfStructure, GradedIdeal) {
    let l = Conductor::new(2).expect("nonzero");
    let g = FinAbGroup::new(vec![2, 2]).expect("orders");
    let w = WeightSeq::new(vec![g.generator(0), g.generator(1)]);
    let one = Cyc::one(l);
    let neg = Cyc::from_int(l, -1);
    let c1 = Character::new(&g, vec![neg.clone(), one.clone()]).expect("character");
    let c2 = Character::new(&g, vec![one.clone(), neg]).expect("character");
    let h = hopf_structure(&g, &w, vec![c1, c2], l).expect("allowable");
    let ideal =
        build_lifted_ideal(h.algebra(), &TameFamily::I2 { m: 1, a: one }).expect("valid family");
    (h, ideal)
}

/// v_e ↦ ½(1+g), v_g ↦ ½(1−g), (a_1, s) ↦ xg·φ(v_{s⁻¹}), (a_2, s) ↦ y·φ(v_{s⁻¹}).
pub fn phi_book() -> Result<HopfMorphism, WitnessError> {
    let (h, ideal) = book_domain();
    let cod = book_algebra(2, &Cyc::from_int(h.conductor(), -1), 1)?;
    let quotient = presented_quotient(&h, &ideal, "kZ2(2)/(X^2,Y^2,XY+YX)")?;
    quotient.algebra.validate()?;
    let g = cod.gen("g");
    let xg = cod.mul(&cod.gen("x"), &g);
    let y = cod.gen("y");
    let q = h.algebra().quiver();
    let e = q.identity_vertex();
    let gv = 1 - e;
    let mut vertices = vec![SparseVec::new(); 2];
    vertices[e] = idempotent(&cod, &g, 1);
    vertices[gv] = idempotent(&cod, &g, -1);
    let mut arrows = HashMap::new();
    // the arrow with shift s leaves v_{s⁻¹}
    for v in 0..2 {
        arrows.insert((v, 0), cod.mul(&xg, &vertices[v]));
        arrows.insert((v, 1), cod.mul(&y, &vertices[v]));
    }
    let assignment = PathAssignment {
        h: &h,
        codomain: &cod,
        vertices,
        arrows,
    };
    Ok(morphism_from_assignment(
        "phi_book",
        &quotient,
        &ideal,
        &assignment,
    ))
}

/// v_{g^i h^j} ↦ ½(1+(−1)^i g)½(1+(−1)^j h), (a_1, s) ↦ xg·φ(v_{s⁻¹}),
/// (a_2, s) ↦ yh·φ(v_{s⁻¹}), into T₄(−1) ⊗ T₄(−1).
pub fn phi_taft() -> Result<HopfMorphism, WitnessError> {
    let (h, ideal) = taft_domain();
    let l = h.conductor();
    let neg = Cyc::from_int(l, -1);
    let cod = tensor_hopf(
        &taft_named(2, &neg, "x", "g")?,
        &taft_named(2, &neg, "y", "h")?,
    )?;
    let quotient = presented_quotient(&h, &ideal, "kGamma_Z2xZ2((g,h))/(X^2,Y^2,XY-YX)")?;
    quotient.algebra.validate()?;
    let g = cod.gen("g");
    let hh = cod.gen("h");
    let xg = cod.mul(&cod.gen("x"), &g);
    let yh = cod.mul(&cod.gen("y"), &hh);
    let q = h.algebra().quiver();
    let mut vertices = Vec::new();
    for v in 0..q.num_vertices() {
        let exps = q.vertex(v).exps();
        let sg = if exps[0] == 0 { 1 } else { -1 };
        let sh = if exps[1] == 0 { 1 } else { -1 };
        vertices.push(cod.mul(&idempotent(&cod, &g, sg), &idempotent(&cod, &hh, sh)));
    }
    let mut arrows = HashMap::new();
    for v in 0..q.num_vertices() {
        arrows.insert((v, 0), cod.mul(&xg, &vertices[v]));
        arrows.insert((v, 1), cod.mul(&yh, &vertices[v]));
    }
    let assignment = PathAssignment {
        h: &h,
        codomain: &cod,
        vertices,
        arrows,
    };
    Ok(morphism_from_assignment(
        "phi_taft",
        &quotient,
        &ideal,
        &assignment,
    ))
}

/// Copy of φ with one matrix entry increased by 1.
pub fn mutate_entry(phi: &HopfMorphism, row: usize, col: usize) -> HopfMorphism {
    let mut out = phi.clone();
    let l = phi.codomain.conductor;
    add_to(&mut out.images[row], col, Cyc::one(l));
    out
}

/// Copy of φ with the sign of one nonzero entry flipped.
pub fn flip_sign(phi: &HopfMorphism, row: usize, col: usize) -> HopfMorphism {
    let mut out = phi.clone();
    if let Some(c) = out.images[row].get_mut(&col) {
        *c = -c.clone();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn neg(l: u32) -> Cyc {
        Cyc::from_int(Conductor::new(l).unwrap(), -1)
    }

    #[test]
    fn book_tables() {
        let h = book_algebra(2, &neg(2), 1).unwrap();
        assert_eq!(h.dim(), 8);
        let x = h.gen("x");
        let y = h.gen("y");
        let g = h.gen("g");
        assert!(h.apply_counit(&g).is_one());
        assert!(h.apply_counit(&x).is_zero() && h.apply_counit(&y).is_zero());
        let sx = h.scale(&h.mul(&x, &g), &neg(2));
        assert_eq!(h.apply_antipode(&x), sx);
        assert_eq!(h.mul(&x, &y), h.mul(&y, &x));
    }

    #[test]
    fn book_rejects_bad_parameters() {
        let l = Conductor::new(4).unwrap();
        assert!(book_algebra(4, &Cyc::root_of_unity(l, 2), 1).is_err());
        assert!(book_algebra(4, &Cyc::root_of_unity(l, 1), 2).is_err());
        let h = book_algebra(3, &Cyc::root_of_unity(Conductor::new(6).unwrap(), 2), 2).unwrap();
        assert_eq!(h.dim(), 27);
    }

    #[test]
    fn taft_tables() {
        let t = taft(2, &neg(2)).unwrap();
        assert_eq!(t.dim(), 4);
        let g = t.gen("g");
        let gi = g.keys().next().copied().unwrap();
        assert_eq!(t.delta[gi], t.elementary(&g, &g));
        // S² is conjugation by g
        let l = Conductor::new(3).unwrap();
        let t3 = taft(3, &Cyc::root_of_unity(l, 1)).unwrap();
        let g3 = t3.gen("g");
        let ginv = t3.mul(&g3, &g3);
        for i in 0..t3.dim() {
            let e = t3.basis(i);
            let s2 = t3.apply_antipode(&t3.apply_antipode(&e));
            assert_eq!(s2, t3.mul(&t3.mul(&g3, &e), &ginv));
        }
        assert!(taft(2, &Cyc::one(Conductor::new(2).unwrap())).is_err());
    }

    #[test]
    fn tensor_with_unit() {
        let t = taft(2, &neg(2)).unwrap();
        let k = unit_algebra(t.conductor);
        let tk = tensor_hopf(&t, &k).unwrap();
        assert_eq!(tk.mult, t.mult);
        assert_eq!(tk.delta, t.delta);
        let tt = tensor_hopf(&t, &t).unwrap();
        assert_eq!(tt.dim(), 16);
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(tt.counit[i * 4 + j], &t.counit[i] * &t.counit[j]);
            }
        }
    }

    #[test]
    fn quotient_presentation_is_hopf() {
        let (h, ideal) = book_domain();
        let q = presented_quotient(&h, &ideal, "book").unwrap();
        assert_eq!(q.algebra.dim(), 8);
        q.algebra.validate().unwrap();
    }

    #[test]
    fn phi_book_is_iso() {
        let phi = phi_book().unwrap();
        let r = verify_hopf_iso(&phi);
        assert!(r.passed, "{:?}", r.first_failure());
        assert_eq!((r.domain_dim, r.codomain_dim), (8, 8));
        // φ(X²) = 0
        assert!(phi.relation_images.iter().all(|v| v.is_empty()));
    }

    #[test]
    fn phi_taft_is_iso() {
        let phi = phi_taft().unwrap();
        let r = verify_hopf_iso(&phi);
        assert!(r.passed, "{:?}", r.first_failure());
        assert_eq!((r.domain_dim, r.codomain_dim), (16, 16));
    }

    #[test]
    fn sign_flip_breaks_multiplicativity() {
        let phi = phi_book().unwrap();
        // image of an arrow
        let row = phi.arrows[0];
        let col = *phi.images[row].keys().next().unwrap();
        let r = verify_hopf_iso(&flip_sign(&phi, row, col));
        assert!(!r.passed);
        assert_eq!(r.first_failure().unwrap().check, "multiplicative");
    }

    #[test]
    fn every_single_entry_mutation_fails() {
        let phi = phi_book().unwrap();
        for row in 0..8 {
            for col in 0..8 {
                assert!(
                    !verify_hopf_iso(&mutate_entry(&phi, row, col)).passed,
                    "{row} {col}"
                );
            }
        }
    }

    #[test]
    fn morphism_json() {
        let phi = phi_book().unwrap();
        let j = phi.to_json();
        assert_eq!(j["domain_dim"], 8);
        assert_eq!(j["matrix"].as_array().unwrap().len(), 8);
    }

    #[test]
    fn table_mutations_are_detected() {
        let h = book_algebra(2, &neg(2), 1).unwrap();
        let mut undetected = Vec::new();
        for i in 0..h.dim() {
            for k in h.delta[i].keys().copied().collect::<Vec<_>>() {
                let mut bad = h.clone();
                let c = bad.delta[i].get_mut(&k).unwrap();
                *c = -c.clone();
                if bad.validate().is_ok() {
                    undetected.push(format!("delta {i} {k:?}"));
                }
            }
            for j in 0..h.dim() {
                for k in h.mult[i][j].keys().copied().collect::<Vec<_>>() {
                    let mut bad = h.clone();
                    let c = bad.mult[i][j].get_mut(&k).unwrap();
                    *c = -c.clone();
                    if bad.validate().is_ok() {
                        undetected.push(format!("mult {i} {j} {k}"));
                    }
                }
            }
            let mut bad = h.clone();
            add_to(
                &mut bad.antipode[i],
                (i + 1) % h.dim(),
                Cyc::one(h.conductor),
            );
            if bad.validate().is_ok() {
                undetected.push(format!("antipode {i}"));
            }
        }
        assert!(undetected.is_empty(), "{undetected:?}");
    }
}

//! The tame relation families, their lifts to kΓ_G(W), closed-form Hopf
//! ideal criteria, the enumerator, block decomposition and the exclusion of
//! the fifth family.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::cyclotomic::{Conductor, Cyc};
use crate::group::{Character, FinAbGroup, GroupElt, WeightSeq};
use crate::hopf::{BimoduleAction, HopfError, HopfStructure};
use crate::linalg::{Echelon, SparseVec};
use crate::path_algebra::{Elem, GradedIdeal, Path, PathAlgebra};
use crate::quiver::CoveringQuiver;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("family (5) has no lift to a Hopf ideal")]
    Case5,
    #[error("lifting needs exactly two arrow families, got {0}")]
    FamilyCount(usize),
    #[error("invalid family parameter: {0}")]
    BadParameter(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Hopf(#[from] HopfError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TameFamily {
    /// (x² − y², yx − a x², xy)
    I1 { a: Cyc },
    /// (x², y², (xy)^m − a (yx)^m)
    I2 { m: usize, a: Cyc },
    /// (x^n − y^n, xy, yx)
    I3 { n: usize },
    /// (x², y², (xy)^m x − (yx)^m y)
    I4 { m: usize },
    /// (yx − x², y²)
    Case5,
}

impl TameFamily {
    pub fn tag(&self) -> &'static str {
        match self {
            TameFamily::I1 { .. } => "I1",
            TameFamily::I2 { .. } => "I2",
            TameFamily::I3 { .. } => "I3",
            TameFamily::I4 { .. } => "I4",
            TameFamily::Case5 => "Case5",
        }
    }

    pub fn m(&self) -> Option<usize> {
        match self {
            TameFamily::I2 { m, .. } | TameFamily::I4 { m } => Some(*m),
            _ => None,
        }
    }

    pub fn n(&self) -> Option<usize> {
        match self {
            TameFamily::I3 { n } => Some(*n),
            _ => None,
        }
    }

    pub fn a(&self) -> Option<&Cyc> {
        match self {
            TameFamily::I1 { a } | TameFamily::I2 { a, .. } => Some(a),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<(), CatalogError> {
        match self {
            TameFamily::I1 { a } | TameFamily::I2 { a, .. } if a.is_zero() => {
                Err(CatalogError::BadParameter("a must be nonzero".into()))
            }
            TameFamily::I2 { m: 0, .. } | TameFamily::I4 { m: 0 } => {
                Err(CatalogError::BadParameter("m must be at least 1".into()))
            }
            TameFamily::I3 { n } if *n < 2 => {
                Err(CatalogError::BadParameter("n must be at least 2".into()))
            }
            _ => Ok(()),
        }
    }

    /// The relations as elements of the free algebra on x, y, realised in
    /// any path algebra by substituting x and y.
    pub fn relations(&self, x: &Elem, y: &Elem, one: &Elem, l: Conductor) -> Vec<Elem> {
        let xy = x.mul(y);
        let yx = y.mul(x);
        let x2 = x.mul(x);
        let y2 = y.mul(y);
        match self {
            TameFamily::I1 { a } => vec![x2.sub(&y2), yx.sub(&x2.scale(a)), xy],
            TameFamily::I2 { m, a } => {
                vec![x2, y2, xy.pow(*m, one).sub(&yx.pow(*m, one).scale(a))]
            }
            TameFamily::I3 { n } => vec![x.pow(*n, one).sub(&y.pow(*n, one)), xy, yx],
            TameFamily::I4 { m } => {
                vec![x2, y2, xy.pow(*m, one).mul(x).sub(&yx.pow(*m, one).mul(y))]
            }
            TameFamily::Case5 => vec![yx.sub(&x2.scale(&Cyc::one(l))), y2],
        }
    }
}

impl fmt::Display for TameFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TameFamily::I1 { a } => write!(f, "I1(a={a})"),
            TameFamily::I2 { m, a } => write!(f, "I2(m={m},a={a})"),
            TameFamily::I3 { n } => write!(f, "I3(n={n})"),
            TameFamily::I4 { m } => write!(f, "I4(m={m})"),
            TameFamily::Case5 => write!(f, "Case5"),
        }
    }
}

/// X = Σ_g g·a and Y = Σ_g g·b, a and b the arrows leaving v_e.
pub fn lifted_generators(alg: &PathAlgebra) -> Result<(Elem, Elem), CatalogError> {
    let k = alg.quiver().num_families();
    if k != 2 {
        return Err(CatalogError::FamilyCount(k));
    }
    Ok((alg.family_sum(0), alg.family_sum(1)))
}

/// The family's relations with x, y replaced by X, Y.
///
/// Connectedness is not required: on a disconnected quiver the same sums
/// give the G-stable lift used for block decompositions.
pub fn build_lifted_ideal(
    alg: &PathAlgebra,
    fam: &TameFamily,
) -> Result<GradedIdeal, CatalogError> {
    if *fam == TameFamily::Case5 {
        return Err(CatalogError::Case5);
    }
    fam.validate()?;
    let (x, y) = lifted_generators(alg)?;
    let gens = fam.relations(&x, &y, &alg.one(), alg.conductor());
    Ok(GradedIdeal::new(alg.clone(), gens).expect("relations are homogeneous"))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub hopf: bool,
    pub reference: &'static str,
}

fn minus_one(l: Conductor) -> Cyc {
    Cyc::from_int(l, -1)
}

fn is_nth_root(x: &Cyc, n: u64) -> bool {
    x.pow(n as i64).map(|y| y.is_one()).unwrap_or(false)
}

/// W = (g, g) with ord(g) = n, (a_1,e)·g = q⁻¹ g·(a_1,e), (a_2,e)·g = p⁻¹ g·(a_2,e).
pub fn criterion_case1(
    n: u64,
    p: &Cyc,
    q: &Cyc,
    fam: &TameFamily,
) -> Result<Verdict, CatalogError> {
    if !is_nth_root(p, n) || !is_nth_root(q, n) {
        return Err(CatalogError::Precondition(format!(
            "p and q must be {n}-th roots of unity"
        )));
    }
    Ok(match fam {
        TameFamily::I1 { .. } | TameFamily::I3 { .. } => Verdict {
            hopf: false,
            reference: "case1: I1 and I3 never lift to Hopf ideals",
        },
        TameFamily::I4 { .. } => Verdict {
            hopf: false,
            reference: "case1: I4 never lifts to a Hopf ideal",
        },
        TameFamily::Case5 => Verdict {
            hopf: false,
            reference: "case5: quotient is not local Frobenius",
        },
        TameFamily::I2 { m, a } => {
            let neg = minus_one(p.conductor());
            Verdict {
                hopf: *m == 1 && *p == neg && *q == neg && *a == neg,
                reference: "case1: I2 is Hopf iff m = 1 and p = q = a = -1",
            }
        }
    })
}

/// The parameters of W = (g, h), g ≠ h: (a_i,e)·g = q_i⁻¹ g·(a_i,e) and
/// (a_i,e)·h = p_i⁻¹ h·(a_i,e).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Case2Params {
    pub ord_g: u64,
    pub ord_h: u64,
    pub q1: Cyc,
    pub p1: Cyc,
    pub q2: Cyc,
    pub p2: Cyc,
}

pub fn criterion_case2(c: &Case2Params, fam: &TameFamily) -> Result<Verdict, CatalogError> {
    let ok = is_nth_root(&c.q1, c.ord_g)
        && is_nth_root(&c.q2, c.ord_g)
        && is_nth_root(&c.p1, c.ord_h)
        && is_nth_root(&c.p2, c.ord_h);
    if !ok {
        return Err(CatalogError::Precondition(
            "q_i must be ord(g)-th and p_i ord(h)-th roots of unity".into(),
        ));
    }
    Ok(match fam {
        TameFamily::I1 { .. } | TameFamily::I3 { .. } | TameFamily::I4 { .. } => Verdict {
            hopf: false,
            reference: "case2: I1, I3 and I4 never lift to Hopf ideals",
        },
        TameFamily::Case5 => Verdict {
            hopf: false,
            reference: "case5: quotient is not local Frobenius",
        },
        TameFamily::I2 { m, a } => {
            let l = c.q1.conductor();
            let neg = minus_one(l);
            let m = *m as i64;
            let sign = if m % 2 == 1 { Cyc::one(l) } else { neg.clone() };
            let a1 = &sign * &c.q2.pow(m).expect("root");
            let a2 = &sign * &c.p1.pow(-m).expect("root");
            let cond1 = c.q1 == neg && c.p2 == neg && *a == a1 && *a == a2;
            let cond2 = (&c.p1 * &c.q2).is_primitive_mth_root(m as u64);
            Verdict {
                hopf: cond1 && cond2,
                reference: "case2: I2 is Hopf iff q1 = p2 = -1, a = (-1)^(m-1) q2^m = (-1)^(m-1) p1^(-m), p1 q2 primitive m-th root",
            }
        }
    })
}

/// Criterion parameters read off a Hopf structure with two arrow families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CaseParams {
    One { n: u64, q: Cyc, p: Cyc },
    Two(Case2Params),
}

pub fn case_params(h: &HopfStructure) -> Result<CaseParams, CatalogError> {
    let q = h.algebra().quiver();
    if q.num_families() != 2 {
        return Err(CatalogError::FamilyCount(q.num_families()));
    }
    let l = h.conductor();
    let w = q.weights().weights();
    let chars = &h.action().characters;
    let inv = |chi: &Character, g: &GroupElt| chi.eval(g, l).inv().expect("root of unity");
    let group = q.group();
    if w[0] == w[1] {
        Ok(CaseParams::One {
            n: group.elt_order(&w[0]) as u64,
            q: inv(&chars[0], &w[0]),
            p: inv(&chars[1], &w[0]),
        })
    } else {
        Ok(CaseParams::Two(Case2Params {
            ord_g: group.elt_order(&w[0]) as u64,
            ord_h: group.elt_order(&w[1]) as u64,
            q1: inv(&chars[0], &w[0]),
            p1: inv(&chars[0], &w[1]),
            q2: inv(&chars[1], &w[0]),
            p2: inv(&chars[1], &w[1]),
        }))
    }
}

pub fn criterion(h: &HopfStructure, fam: &TameFamily) -> Result<Verdict, CatalogError> {
    match case_params(h)? {
        CaseParams::One { n, q, p } => criterion_case1(n, &p, &q, fam),
        CaseParams::Two(c) => criterion_case2(&c, fam),
    }
}

/// Brute-force verdict: admissible and passes the generator-level Hopf ideal test.
pub fn oracle(h: &HopfStructure, ideal: &GradedIdeal) -> bool {
    let adm = ideal.is_admissible(ideal.default_degree_bound());
    adm.admissible && h.hopf_ideal_checks(ideal, true).passed
}

pub fn hopf_structure(
    group: &FinAbGroup,
    weights: &WeightSeq,
    characters: Vec<Character>,
    l: Conductor,
) -> Result<HopfStructure, CatalogError> {
    let q = CoveringQuiver::new(group.clone(), weights.clone())
        .map_err(|e| CatalogError::Precondition(e.to_string()))?;
    let alg = PathAlgebra::new(Arc::new(q), l);
    Ok(HopfStructure::new(alg, BimoduleAction { characters })?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TameInstance {
    pub group: String,
    pub weights: WeightSeq,
    /// Exponent vectors: χ_i(g_j) = ζ_{n_j}^{k_j}.
    pub chars: Vec<Vec<u32>>,
    pub params: BTreeMap<String, String>,
    pub family: String,
    pub m: Option<usize>,
    pub a: Option<String>,
    pub verdict: bool,
    pub oracle: bool,
    pub dim: usize,
    pub criterion_ref: String,
}

fn params_map(c: &CaseParams) -> BTreeMap<String, String> {
    let mut out = BTreeMap::new();
    match c {
        CaseParams::One { n, q, p } => {
            out.insert("n".into(), n.to_string());
            out.insert("q".into(), q.to_string());
            out.insert("p".into(), p.to_string());
        }
        CaseParams::Two(c) => {
            out.insert("q1".into(), c.q1.to_string());
            out.insert("p1".into(), c.p1.to_string());
            out.insert("q2".into(), c.q2.to_string());
            out.insert("p2".into(), c.p2.to_string());
        }
    }
    out
}

/// Roots of unity in Q(ζ_L), as ζ_M^k for k = 0..M, M = lcm(2, L).
pub fn roots_of_unity(l: Conductor) -> Vec<Cyc> {
    let m = if l.get().is_multiple_of(2) {
        l.get()
    } else {
        2 * l.get()
    };
    (0..m as i64).map(|k| Cyc::unit_root(l, k)).collect()
}

/// Orbit key of an instance under Aut(G) and, for I2, the family swap
/// (which replaces a by a⁻¹).
fn canonical_key(
    group: &FinAbGroup,
    autos: &[Vec<GroupElt>],
    w: (usize, usize),
    tables: (&[u64], &[u64]),
    fam_tag: &str,
    m: usize,
    a_exp: u64,
    roots: u64,
) -> Vec<u64> {
    let elts = group.elements();
    let mut best: Option<Vec<u64>> = None;
    let swaps: &[bool] = if fam_tag == "I2" || fam_tag == "I3" {
        &[false, true]
    } else {
        &[false]
    };
    for images in autos {
        let perm: Vec<usize> = elts
            .iter()
            .map(|g| group.index_of(&group.apply_hom(images, g)))
            .collect();
        for &swap in swaps {
            let (w1, w2, t1, t2, a) = if swap {
                (w.1, w.0, tables.1, tables.0, (roots - a_exp) % roots)
            } else {
                (w.0, w.1, tables.0, tables.1, a_exp)
            };
            let mut key = vec![perm[w1] as u64, perm[w2] as u64, m as u64, a];
            for t in [t1, t2] {
                let mut moved = vec![0u64; t.len()];
                for (i, &v) in t.iter().enumerate() {
                    moved[perm[i]] = v;
                }
                key.extend(moved);
            }
            if best.as_ref().is_none_or(|b| key < *b) {
                best = Some(key);
            }
        }
    }
    best.expect("identity automorphism")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnumerationReport {
    pub instances: Vec<TameInstance>,
    pub negatives_checked: usize,
    pub negative_disagreements: Vec<String>,
}

/// Every criterion-positive tame instance over G at conductor L, one per
/// relabelling orbit, each re-verified by the brute-force oracle. Every
/// `neg_stride`-th criterion-negative grid point is also run through the
/// oracle (0 disables this).
pub fn enumerate_tame(
    group: &FinAbGroup,
    l: Conductor,
    neg_stride: usize,
) -> Result<EnumerationReport, CatalogError> {
    if !l.get().is_multiple_of(group.exponent()) {
        return Err(CatalogError::Precondition(format!(
            "conductor {l} is not a multiple of exp(G) = {}",
            group.exponent()
        )));
    }
    let elts = group.elements();
    let chars = group
        .characters(l)
        .map_err(|e| CatalogError::Precondition(e.to_string()))?;
    let tables: Vec<Vec<u64>> = chars
        .iter()
        .map(|(_, c)| {
            elts.iter()
                .map(|g| c.eval(g, l).root_exponent().expect("root"))
                .collect()
        })
        .collect();
    let roots = roots_of_unity(l);
    let autos = group.automorphisms();
    struct Point {
        w: (usize, usize),
        c: (usize, usize),
        fam: TameFamily,
        verdict: Verdict,
        params: CaseParams,
    }
    let mut positives: BTreeMap<Vec<u64>, Point> = BTreeMap::new();
    let mut negatives: Vec<Point> = Vec::new();
    let mut neg_counter = 0usize;
    for i in 0..elts.len() {
        for j in 0..elts.len() {
            let w = vec![elts[i].clone(), elts[j].clone()];
            if group.subgroup_generated(&w).elements.len() != group.order() {
                continue;
            }
            let ord_lcm = {
                let a = group.elt_order(&w[0]) as usize;
                let b = group.elt_order(&w[1]) as usize;
                num_integer::lcm(a, b)
            };
            for c1 in 0..chars.len() {
                for c2 in 0..chars.len() {
                    let inv =
                        |c: usize, g: usize| chars[c].1.eval(&elts[g], l).inv().expect("root");
                    let params = if i == j {
                        CaseParams::One {
                            n: group.elt_order(&w[0]) as u64,
                            q: inv(c1, i),
                            p: inv(c2, i),
                        }
                    } else {
                        CaseParams::Two(Case2Params {
                            ord_g: group.elt_order(&w[0]) as u64,
                            ord_h: group.elt_order(&w[1]) as u64,
                            q1: inv(c1, i),
                            p1: inv(c1, j),
                            q2: inv(c2, i),
                            p2: inv(c2, j),
                        })
                    };
                    let mut fams: Vec<(TameFamily, u64)> = Vec::new();
                    for m in 1..=ord_lcm {
                        for (k, a) in roots.iter().enumerate() {
                            fams.push((TameFamily::I2 { m, a: a.clone() }, k as u64));
                        }
                    }
                    for (k, a) in roots.iter().enumerate() {
                        fams.push((TameFamily::I1 { a: a.clone() }, k as u64));
                    }
                    for n in 2..=ord_lcm.max(2) {
                        fams.push((TameFamily::I3 { n }, 0));
                    }
                    for m in 1..=ord_lcm {
                        fams.push((TameFamily::I4 { m }, 0));
                    }
                    for (fam, a_exp) in fams {
                        let verdict = match &params {
                            CaseParams::One { n, q, p } => criterion_case1(*n, p, q, &fam)?,
                            CaseParams::Two(c) => criterion_case2(c, &fam)?,
                        };
                        let point = Point {
                            w: (i, j),
                            c: (c1, c2),
                            fam,
                            verdict,
                            params: params.clone(),
                        };
                        if point.verdict.hopf {
                            let key_m = point.fam.m().or(point.fam.n()).unwrap_or(0);
                            let mut key = canonical_key(
                                group,
                                &autos,
                                (i, j),
                                (&tables[c1], &tables[c2]),
                                point.fam.tag(),
                                key_m,
                                a_exp,
                                roots.len() as u64,
                            );
                            key.insert(0, point.fam.tag().as_bytes()[1] as u64);
                            positives.entry(key).or_insert(point);
                        } else {
                            if neg_stride > 0 && neg_counter.is_multiple_of(neg_stride) {
                                negatives.push(point);
                            }
                            neg_counter += 1;
                        }
                    }
                }
            }
        }
    }
    let build = |p: &Point| -> Result<(HopfStructure, GradedIdeal), CatalogError> {
        let w = WeightSeq::new(vec![elts[p.w.0].clone(), elts[p.w.1].clone()]);
        let h = hopf_structure(
            group,
            &w,
            vec![chars[p.c.0].1.clone(), chars[p.c.1].1.clone()],
            l,
        )?;
        let ideal = build_lifted_ideal(h.algebra(), &p.fam)?;
        Ok((h, ideal))
    };
    let points: Vec<&Point> = positives.values().collect();
    let mut instances: Vec<TameInstance> = points
        .par_iter()
        .map(|p| -> Result<TameInstance, CatalogError> {
            let (h, ideal) = build(p)?;
            let verified = oracle(&h, &ideal);
            let dim = ideal
                .quotient_basis(ideal.default_degree_bound())
                .map(|b| b.dimension())
                .unwrap_or(0);
            Ok(TameInstance {
                group: group.to_string(),
                weights: WeightSeq::new(vec![elts[p.w.0].clone(), elts[p.w.1].clone()]),
                chars: vec![chars[p.c.0].0.clone(), chars[p.c.1].0.clone()],
                params: params_map(&p.params),
                family: p.fam.tag().to_string(),
                m: p.fam.m().or(p.fam.n()),
                a: p.fam.a().map(|a| a.to_string()),
                verdict: p.verdict.hopf,
                oracle: verified,
                dim,
                criterion_ref: p.verdict.reference.to_string(),
            })
        })
        .collect::<Result<_, _>>()?;
    instances.sort_by(|x, y| {
        (&x.weights, &x.chars, &x.family, x.m, &x.a)
            .cmp(&(&y.weights, &y.chars, &y.family, y.m, &y.a))
    });
    let negative_disagreements: Vec<String> = negatives
        .par_iter()
        .map(|p| -> Result<Option<String>, CatalogError> {
            let (h, ideal) = build(p)?;
            Ok(oracle(&h, &ideal).then(|| {
                format!(
                    "W=({},{}) chars=({:?},{:?}) {}",
                    elts[p.w.0], elts[p.w.1], chars[p.c.0].0, chars[p.c.1].0, p.fam
                )
            }))
        })
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .flatten()
        .collect();
    Ok(EnumerationReport {
        instances,
        negatives_checked: negatives.len(),
        negative_disagreements,
    })
}

impl TameInstance {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(&json!({
            "group": self.group,
            "weights": self.weights,
            "chars": self.chars,
            "params": self.params,
            "family": self.family,
            "m": self.m,
            "a": self.a,
            "verdict": if self.verdict { "hopf" } else { "not hopf" },
            "oracle": if self.oracle { "hopf" } else { "not hopf" },
            "dim": self.dim,
            "criterion_ref": self.criterion_ref,
        }))
        .expect("serialisable")
    }
}

/// Quotient dimension of a Hopf instance.
pub fn dimension_formula(ideal: &GradedIdeal) -> Result<usize, CatalogError> {
    ideal
        .quotient_basis(ideal.default_degree_bound())
        .map(|b| b.dimension())
        .map_err(|e| CatalogError::Precondition(e.to_string()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockReport {
    pub subgroup: Vec<GroupElt>,
    pub num_blocks: usize,
    /// Vertex sets of the blocks, principal block first.
    pub blocks: Vec<Vec<usize>>,
    /// Quotient dimension per degree, per block.
    pub dims: Vec<Vec<usize>>,
    pub total_dim: usize,
    pub principal_dim: usize,
    pub equal_blocks: bool,
    pub dimension_law: bool,
    /// Quotient basis paths of the principal block H₀.
    #[serde(skip)]
    pub principal_basis: Vec<Path>,
}

/// Splits kΓ_G(W)/I along the connected components of Γ_G(W).
pub fn blocks(ideal: &GradedIdeal) -> Result<BlockReport, CatalogError> {
    let alg = ideal.algebra();
    let q = alg.quiver();
    let n = q.group().subgroup_generated(q.weights().weights());
    let comps = q.connected_components();
    let mut order: Vec<usize> = (0..comps.components.len()).collect();
    order.sort_by_key(|&c| (c != comps.identity_component, comps.components[c][0]));
    let blocks: Vec<Vec<usize>> = order.iter().map(|&c| comps.components[c].clone()).collect();
    let mut block_of = vec![0usize; q.num_vertices()];
    for (b, vs) in blocks.iter().enumerate() {
        for &v in vs {
            block_of[v] = b;
        }
    }
    let basis = ideal
        .quotient_basis(ideal.default_degree_bound())
        .map_err(|e| CatalogError::Precondition(e.to_string()))?;
    let depth = basis.dims().len();
    let mut dims = vec![vec![0usize; depth]; blocks.len()];
    let mut principal_basis = Vec::new();
    for p in basis.paths() {
        let b = block_of[p.start()];
        dims[b][p.len()] += 1;
        if b == 0 {
            principal_basis.push(p.clone());
        }
    }
    let total_dim = basis.dimension();
    let principal_dim: usize = dims[0].iter().sum();
    let equal_blocks = dims.iter().all(|d| *d == dims[0]);
    Ok(BlockReport {
        subgroup: n.elements.clone(),
        num_blocks: blocks.len(),
        blocks,
        dims,
        total_dim,
        principal_dim,
        equal_blocks,
        dimension_law: total_dim == n.index() * principal_dim,
        principal_basis,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocalAlgebraData {
    pub dims: Vec<usize>,
    pub dim: usize,
    pub j3_zero: bool,
    pub j4_zero: bool,
    pub yxy_zero: bool,
    /// {z : zJ = 0}
    pub right_socle: Vec<String>,
    /// {z : Jz = 0}
    pub left_socle: Vec<String>,
    pub socle_simple: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Case5Report {
    /// Λ = k⟨x,y⟩/(yx − x², y²) itself.
    pub lambda: LocalAlgebraData,
    /// Λ/(yxy): what Λ must be if it is local Frobenius.
    pub frobenius_reduction: LocalAlgebraData,
    pub excluded: bool,
}

/// Word in x (family 1) and y (family 2) for a path, leftmost factor last traversed.
pub fn word(p: &Path) -> String {
    if p.is_trivial() {
        return "1".into();
    }
    p.families()
        .iter()
        .rev()
        .map(|&f| if f == 0 { 'x' } else { 'y' })
        .collect()
}

fn elem_words(x: &Elem) -> String {
    let parts: Vec<String> = x
        .terms()
        .map(|(p, c)| {
            if c.is_one() {
                word(p)
            } else {
                format!("({c})*{}", word(p))
            }
        })
        .collect();
    parts.join(" + ")
}

fn free_algebra() -> PathAlgebra {
    let g = FinAbGroup::cyclic(1);
    let w = WeightSeq::new(vec![g.identity(), g.identity()]);
    PathAlgebra::new(
        Arc::new(CoveringQuiver::new(g, w).expect("trivial weights")),
        Conductor::new(2).expect("nonzero"),
    )
}

/// Kernel of z ↦ (z·u)_{u ∈ mults} on each homogeneous component of a
/// graded quotient, returned as elements in quotient-basis coordinates.
fn annihilator(ideal: &GradedIdeal, mults: &[Elem], on_right: bool, depth: usize) -> Vec<Elem> {
    let alg = ideal.algebra();
    let mut out = Vec::new();
    for d in 0..depth {
        let deg = ideal.degree_basis(d);
        if deg.is_full() {
            break;
        }
        let basis: Vec<Path> = alg
            .paths_of_length(d)
            .into_iter()
            .filter(|p| !deg.is_pivot(alg.path_index(p)))
            .collect();
        let width = alg.dim_degree(d + 1);
        let offset = mults.len() * width;
        let mut ech = Echelon::new();
        for (k, p) in basis.iter().enumerate() {
            let z = Elem::term(p.clone(), Cyc::one(alg.conductor()));
            let mut v = SparseVec::new();
            for (slot, u) in mults.iter().enumerate() {
                let prod = if on_right { z.mul(u) } else { u.mul(&z) };
                let nf = ideal.normal_form(&prod);
                for (idx, c) in alg.to_sparse(&nf) {
                    v.insert(slot * width + idx, c);
                }
            }
            v.insert(offset + k, Cyc::one(alg.conductor()));
            ech.insert(v);
        }
        for row in ech.rows() {
            if row[0].0 >= offset {
                let mut e = Elem::zero();
                for (col, c) in row {
                    e.add_term(basis[col - offset].clone(), c.clone());
                }
                out.push(e);
            }
        }
    }
    out
}

fn local_data(ideal: &GradedIdeal) -> LocalAlgebraData {
    let alg = ideal.algebra();
    let basis = ideal.quotient_basis(8).expect("finite dimensional");
    let dims = basis.dims();
    let (x, y) = (alg.family_sum(0), alg.family_sum(1));
    let yxy = y.mul(&x).mul(&y);
    let gens = [x, y];
    let right = annihilator(ideal, &gens, true, dims.len());
    let left = annihilator(ideal, &gens, false, dims.len());
    // the identity is never in the socle, so simplicity means one generator
    LocalAlgebraData {
        dim: dims.iter().sum(),
        j3_zero: dims.iter().skip(3).all(|&d| d == 0),
        j4_zero: dims.iter().skip(4).all(|&d| d == 0),
        yxy_zero: ideal.contains(&yxy),
        socle_simple: right.len() == 1 && left.len() == 1,
        right_socle: right.iter().map(elem_words).collect(),
        left_socle: left.iter().map(elem_words).collect(),
        dims,
    }
}

/// Computes Λ = k⟨x,y⟩/(yx − x², y²) and Λ/(yxy) by degreewise reduction.
pub fn case5_refutation() -> Case5Report {
    let alg = free_algebra();
    let (x, y) = (alg.family_sum(0), alg.family_sum(1));
    let rels = TameFamily::Case5.relations(&x, &y, &alg.one(), alg.conductor());
    let lambda = GradedIdeal::new(alg.clone(), rels.clone()).expect("homogeneous");
    let mut forced = rels;
    forced.push(y.mul(&x).mul(&y));
    let reduced = GradedIdeal::new(alg, forced).expect("homogeneous");
    let lambda = local_data(&lambda);
    let frobenius_reduction = local_data(&reduced);
    let excluded = !lambda.socle_simple && !frobenius_reduction.socle_simple;
    Case5Report {
        lambda,
        frobenius_reduction,
        excluded,
    }
}

/// One point of an oracle-agreement grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridPoint {
    /// Index into the character pairs passed to [`oracle_grid`].
    pub pair: usize,
    /// Index into the family list passed to [`oracle_grid`].
    pub family_index: usize,
    pub weights: String,
    pub params: BTreeMap<String, String>,
    pub family: String,
    pub criterion: bool,
    pub oracle: bool,
    pub dim: Option<usize>,
    pub m_divides_lcm: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridReport {
    pub group: String,
    pub points: usize,
    pub positives: Vec<GridPoint>,
    pub disagreements: Vec<GridPoint>,
}

/// Runs criterion and oracle on every (characters, family) pair for fixed
/// G and W. Ideals depend only on the family, so each is built once.
pub fn oracle_grid(
    group: &FinAbGroup,
    weights: &WeightSeq,
    l: Conductor,
    char_pairs: &[(Character, Character)],
    families: &[TameFamily],
) -> Result<GridReport, CatalogError> {
    let q = CoveringQuiver::new(group.clone(), weights.clone())
        .map_err(|e| CatalogError::Precondition(e.to_string()))?;
    let alg = PathAlgebra::new(Arc::new(q), l);
    let ideals: Vec<(GradedIdeal, bool)> = families
        .iter()
        .map(|f| {
            let ideal = build_lifted_ideal(&alg, f)?;
            let adm = ideal.is_admissible(ideal.default_degree_bound()).admissible;
            Ok((ideal, adm))
        })
        .collect::<Result<_, CatalogError>>()?;
    let w = weights.weights();
    let lcm = num_integer::lcm(
        group.elt_order(&w[0]) as usize,
        group.elt_order(&w[1]) as usize,
    );
    let results: Vec<Vec<GridPoint>> = char_pairs
        .par_iter()
        .enumerate()
        .map(|(pair, (c1, c2))| -> Result<Vec<GridPoint>, CatalogError> {
            let h = HopfStructure::new(
                alg.clone(),
                BimoduleAction {
                    characters: vec![c1.clone(), c2.clone()],
                },
            )?;
            let params = case_params(&h)?;
            let mut out = Vec::new();
            for (family_index, (fam, (ideal, adm))) in families.iter().zip(&ideals).enumerate() {
                let verdict = criterion(&h, fam)?;
                let oracle = *adm && h.hopf_ideal_checks(ideal, true).passed;
                let dim = oracle.then(|| dimension_formula(ideal)).transpose()?;
                out.push(GridPoint {
                    pair,
                    family_index,
                    weights: weights.to_string(),
                    params: params_map(&params),
                    family: fam.to_string(),
                    criterion: verdict.hopf,
                    oracle,
                    dim,
                    m_divides_lcm: fam.m().filter(|_| oracle).map(|m| lcm.is_multiple_of(m)),
                });
            }
            Ok(out)
        })
        .collect::<Result<_, _>>()?;
    let points: Vec<GridPoint> = results.into_iter().flatten().collect();
    Ok(GridReport {
        group: group.to_string(),
        points: points.len(),
        positives: points.iter().filter(|p| p.oracle).cloned().collect(),
        disagreements: points
            .iter()
            .filter(|p| p.criterion != p.oracle)
            .cloned()
            .collect(),
    })
}

/// All ordered pairs of characters of G at conductor L.
pub fn all_char_pairs(group: &FinAbGroup, l: Conductor) -> Vec<(Character, Character)> {
    let chars = group
        .characters(l)
        .expect("conductor divisible by exponent");
    let mut out = Vec::new();
    for (_, a) in &chars {
        for (_, b) in &chars {
            out.push((a.clone(), b.clone()));
        }
    }
    out
}

/// Counts how many grid points fall in each (criterion, oracle) cell.
pub fn confusion(points: &[GridPoint]) -> HashMap<(bool, bool), usize> {
    let mut out = HashMap::new();
    for p in points {
        *out.entry((p.criterion, p.oracle)).or_insert(0) += 1;
    }
    out
}

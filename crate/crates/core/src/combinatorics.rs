//! The polynomials H₁, H₂, H₃ and the primitive-root vanishing criterion.
//!
//! All three are computed by direct tuple enumeration into integer
//! coefficient vectors; evaluation at a cyclotomic number is available both
//! through those vectors and by summing over the tuples directly.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use once_cell::sync::Lazy;
use serde::Serialize;
use thiserror::Error;

use crate::cyclotomic::{Conductor, Cyc};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CombError {
    #[error("need 0 < l < m, got m = {m}, l = {l}")]
    OutOfRange { m: usize, l: usize },
    #[error("need m >= 2, got {0}")]
    MTooSmall(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Kind {
    H1,
    H2,
    H3,
}

/// Integer polynomial in t; `coeffs[k]` counts the tuples of weight k.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HPolynomial {
    pub m: usize,
    pub l: usize,
    pub coeffs: Vec<u64>,
}

impl HPolynomial {
    fn from_weights(m: usize, l: usize, weights: impl IntoIterator<Item = usize>) -> Self {
        let mut coeffs = Vec::new();
        for w in weights {
            if coeffs.len() <= w {
                coeffs.resize(w + 1, 0);
            }
            coeffs[w] += 1;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        HPolynomial { m, l, coeffs }
    }

    pub fn total(&self) -> u64 {
        self.coeffs.iter().sum()
    }

    pub fn eval(&self, t: &Cyc) -> Cyc {
        let mut acc = Cyc::zero(t.conductor());
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * t) + &Cyc::from_int(t.conductor(), *c as i64);
        }
        acc
    }
}

fn check(m: usize, l: usize) -> Result<(), CombError> {
    if l == 0 || l >= m {
        Err(CombError::OutOfRange { m, l })
    } else {
        Ok(())
    }
}

/// All weakly increasing (m_1..m_len) with entries in 0..=max.
fn weakly_increasing(len: usize, max: usize) -> Vec<Vec<usize>> {
    fn go(len: usize, lo: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for v in lo..=max {
            cur.push(v);
            go(len, v, max, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(len, 0, max, &mut Vec::new(), &mut out);
    out
}

/// All (n_1..n_len) of naturals with n_1 + … + n_len ≤ bound.
fn simplex(len: usize, bound: usize) -> Vec<Vec<usize>> {
    fn go(len: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for v in 0..=left {
            cur.push(v);
            go(len, left - v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(len, bound, &mut Vec::new(), &mut out);
    out
}

fn weighted(tuple: &[usize], weights: &[usize]) -> usize {
    tuple.iter().zip(weights).map(|(n, w)| n * w).sum()
}

/// Weight multiset of each H_k as a list of exponents (one per tuple).
fn exponents(kind: Kind, m: usize, l: usize) -> Vec<usize> {
    match kind {
        Kind::H1 => weakly_increasing(l, m - l)
            .iter()
            .map(|t| t.iter().sum())
            .collect(),
        Kind::H2 => {
            let w: Vec<usize> = (1..=l).map(|i| l + 1 - i).collect();
            simplex(l, m - l).iter().map(|t| weighted(t, &w)).collect()
        }
        Kind::H3 => {
            let w1: Vec<usize> = (1..l).map(|i| l - i).collect();
            let mut out: Vec<usize> = simplex(l - 1, m - l)
                .iter()
                .map(|t| m - l + weighted(t, &w1))
                .collect();
            if m - l >= 1 {
                let w2: Vec<usize> = (1..=l).map(|i| l + 1 - i).collect();
                out.extend(simplex(l, m - l - 1).iter().map(|t| weighted(t, &w2)));
            }
            out
        }
    }
}

static MEMO: Lazy<Mutex<HashMap<(Kind, usize, usize), Arc<HPolynomial>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

pub fn h_poly(kind: Kind, m: usize, l: usize) -> Result<Arc<HPolynomial>, CombError> {
    check(m, l)?;
    if let Some(p) = MEMO.lock().unwrap().get(&(kind, m, l)) {
        return Ok(p.clone());
    }
    let p = Arc::new(HPolynomial::from_weights(m, l, exponents(kind, m, l)));
    MEMO.lock().unwrap().insert((kind, m, l), p.clone());
    Ok(p)
}

/// H₂-shaped sum with caller-chosen weights on the simplex coordinates.
pub fn h2_with_weights(m: usize, l: usize, weights: &[usize]) -> Result<HPolynomial, CombError> {
    check(m, l)?;
    assert_eq!(weights.len(), l, "one weight per coordinate");
    Ok(HPolynomial::from_weights(
        m,
        l,
        simplex(l, m - l).iter().map(|t| weighted(t, weights)),
    ))
}

/// Sums t^weight over the tuples, without building the polynomial.
pub fn eval_direct(kind: Kind, m: usize, l: usize, t: &Cyc) -> Result<Cyc, CombError> {
    check(m, l)?;
    let mut acc = Cyc::zero(t.conductor());
    for e in exponents(kind, m, l) {
        acc += &t.pow(e as i64).expect("nonnegative power");
    }
    Ok(acc)
}

pub fn h1(m: usize, l: usize, t: &Cyc) -> Result<Cyc, CombError> {
    Ok(h_poly(Kind::H1, m, l)?.eval(t))
}

pub fn h2(m: usize, l: usize, t: &Cyc) -> Result<Cyc, CombError> {
    Ok(h_poly(Kind::H2, m, l)?.eval(t))
}

pub fn h3(m: usize, l: usize, t: &Cyc) -> Result<Cyc, CombError> {
    Ok(h_poly(Kind::H3, m, l)?.eval(t))
}

/// Coefficientwise H₁ = H₂ = H₃ for every 0 < l < m.
pub fn h_identity_check(m: usize) -> Result<bool, CombError> {
    if m < 2 {
        return Err(CombError::MTooSmall(m));
    }
    for l in 1..m {
        let a = h_poly(Kind::H1, m, l)?;
        let b = h_poly(Kind::H2, m, l)?;
        let c = h_poly(Kind::H3, m, l)?;
        if a.coeffs != b.coeffs || b.coeffs != c.coeffs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether H₁(m, l, t) = 0 for all 0 < l < m.
pub fn vanishing_criterion(m: usize, t: &Cyc) -> Result<bool, CombError> {
    if m < 2 {
        return Err(CombError::MTooSmall(m));
    }
    for l in 1..m {
        if !h1(m, l, t)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Coefficients in x of ∏_{r=1}^{m} (1 + t^r x).
pub fn generating_product(m: usize, t: &Cyc) -> Vec<Cyc> {
    let l = t.conductor();
    let mut poly = vec![Cyc::one(l)];
    for r in 1..=m {
        let tr = t.pow(r as i64).expect("nonnegative power");
        let mut next = vec![Cyc::zero(l); poly.len() + 1];
        for (k, c) in poly.iter().enumerate() {
            next[k] += c;
            next[k + 1] += &(c * &tr);
        }
        poly = next;
    }
    poly
}

/// ∏_{r=1}^{m} (1 + ζ_m^r x) = 1 − (−x)^m, compared coefficientwise.
pub fn generating_function_check(m: usize) -> bool {
    let l = Conductor::lcm_of([m as u32]);
    let zeta = Cyc::root_of_unity(l, (l.get() / m as u32) as i64);
    let lhs = generating_product(m, &zeta);
    let mut rhs = vec![Cyc::zero(l); m + 1];
    rhs[0] = Cyc::one(l);
    // −(−1)^m x^m
    rhs[m] = Cyc::from_int(l, if m.is_multiple_of(2) { -1 } else { 1 });
    lhs == rhs
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub m: usize,
    pub l: usize,
    /// t = ζ_m^k
    pub k: usize,
    pub value: Cyc,
}

/// H₁(m, l, ζ_m^k) for all 2 ≤ m ≤ m_max, 0 < l < m, 0 ≤ k < m.
pub fn table(m_max: usize) -> Vec<TableRow> {
    let mut rows = Vec::new();
    for m in 2..=m_max {
        let l_cond = Conductor::lcm_of([m as u32]);
        let step = (l_cond.get() / m as u32) as i64;
        for k in 0..m {
            let t = Cyc::root_of_unity(l_cond, step * k as i64);
            for l in 1..m {
                rows.push(TableRow {
                    m,
                    l,
                    k,
                    value: h1(m, l, &t).expect("in range"),
                });
            }
        }
    }
    rows
}

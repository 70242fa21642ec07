//! Exact arithmetic in the cyclotomic field Q(ζ_L).
//!
//! An element is stored as its residue modulo the L-th cyclotomic polynomial
//! Φ_L, i.e. as a coefficient vector of length φ(L) in the power basis
//! 1, ζ, …, ζ^{φ(L)-1}. Because Φ_L is irreducible the representation is
//! canonical, so equality and zero tests are plain coefficient comparisons.
//!
//! All values taking part in one computation must share a conductor. Binary
//! operators panic on a conductor mismatch; the `checked_*` variants return
//! [`CycError::ConductorMismatch`] instead.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use once_cell::sync::Lazy;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycError {
    #[error("division by zero in Q(ζ_{0})")]
    DivisionByZero(u32),
    #[error("conductor mismatch: {left} vs {right}")]
    ConductorMismatch { left: u32, right: u32 },
    #[error("conductor must be positive")]
    ZeroConductor,
    #[error("malformed coefficient vector: {0}")]
    Malformed(String),
}

/// The conductor L of the field Q(ζ_L).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Conductor(u32);

impl Conductor {
    pub fn new(l: u32) -> Result<Self, CycError> {
        if l == 0 {
            Err(CycError::ZeroConductor)
        } else {
            Ok(Conductor(l))
        }
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// Smallest conductor containing every conductor in `parts` together with -1.
    pub fn lcm_of<I: IntoIterator<Item = u32>>(parts: I) -> Self {
        let l = parts
            .into_iter()
            .filter(|&p| p > 0)
            .fold(2u32, |acc, p| acc.lcm(&p));
        Conductor(l)
    }

    /// Degree φ(L) of the field over Q.
    pub fn degree(self) -> usize {
        field(self.0).degree
    }
}

impl fmt::Display for Conductor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Integer coefficients (ascending) of the n-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    assert!(n > 0);
    // x^n - 1 divided by Φ_d for every proper divisor d.
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            num = div_monic(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

fn div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let qlen = num.len() - dn;
    let mut quot = vec![0i64; qlen];
    for k in (0..qlen).rev() {
        let c = rem[k + dn];
        quot[k] = c;
        if c != 0 {
            for (j, &dc) in den.iter().enumerate() {
                rem[k + j] -= c * dc;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    quot
}

#[derive(Debug)]
struct FieldData {
    conductor: u32,
    degree: usize,
    /// `reduce[k]` = x^{degree + k} mod Φ_L, for k in 0..degree-1.
    reduce: Vec<Vec<BigInt>>,
}

static FIELDS: Lazy<Mutex<HashMap<u32, Arc<FieldData>>>> = Lazy::new(|| Mutex::new(HashMap::new()));

fn field(l: u32) -> Arc<FieldData> {
    let mut cache = FIELDS.lock().expect("field cache poisoned");
    cache
        .entry(l)
        .or_insert_with(|| Arc::new(FieldData::new(l)))
        .clone()
}

impl FieldData {
    fn new(l: u32) -> Self {
        let phi = cyclotomic_polynomial(l);
        let degree = phi.len() - 1;
        let mut reduce = Vec::with_capacity(degree.saturating_sub(1));
        // x^degree = -(phi_0 + ... + phi_{deg-1} x^{deg-1})
        let mut cur: Vec<BigInt> = phi[..degree].iter().map(|&c| BigInt::from(-c)).collect();
        for _ in 0..degree.saturating_sub(1) {
            reduce.push(cur.clone());
            // multiply by x
            let top = cur[degree - 1].clone();
            let mut next = vec![BigInt::zero(); degree];
            for j in (1..degree).rev() {
                next[j] = cur[j - 1].clone();
            }
            if !top.is_zero() {
                for j in 0..degree {
                    next[j] -= &top * BigInt::from(phi[j]);
                }
            }
            cur = next;
        }
        FieldData {
            conductor: l,
            degree,
            reduce,
        }
    }
}

/// An exact element of Q(ζ_L).
#[derive(Clone)]
pub struct Cyc {
    field: Arc<FieldData>,
    coeffs: Vec<BigRational>,
}

impl PartialEq for Cyc {
    fn eq(&self, other: &Self) -> bool {
        self.field.conductor == other.field.conductor && self.coeffs == other.coeffs
    }
}

impl Eq for Cyc {}

impl Cyc {
    pub fn zero(l: Conductor) -> Self {
        let field = field(l.0);
        let coeffs = vec![BigRational::zero(); field.degree];
        Cyc { field, coeffs }
    }

    pub fn one(l: Conductor) -> Self {
        Self::from_int(l, 1)
    }

    pub fn from_int(l: Conductor, n: i64) -> Self {
        Self::from_rational(l, BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(l: Conductor, r: BigRational) -> Self {
        let mut z = Self::zero(l);
        z.coeffs[0] = r;
        z
    }

    /// p/q as a field element.
    pub fn from_ratio(l: Conductor, p: i64, q: i64) -> Self {
        Self::from_rational(l, BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    /// Builds an element from power-basis coefficients (length φ(L)).
    pub fn from_coeffs(l: Conductor, coeffs: Vec<BigRational>) -> Result<Self, CycError> {
        let field = field(l.0);
        if coeffs.len() != field.degree {
            return Err(CycError::Malformed(format!(
                "expected {} coefficients, got {}",
                field.degree,
                coeffs.len()
            )));
        }
        Ok(Cyc { field, coeffs })
    }

    /// ζ_L^k in canonical form.
    pub fn root_of_unity(l: Conductor, k: i64) -> Self {
        let field = field(l.0);
        let k = k.rem_euclid(l.0 as i64) as usize;
        let mut coeffs = vec![BigRational::zero(); field.degree];
        if k < field.degree {
            coeffs[k] = BigRational::one();
            return Cyc { field, coeffs };
        }
        // ζ itself, reduced when φ(L) = 1 (ζ_1 = 1, ζ_2 = -1).
        let zeta = if field.degree == 1 {
            Cyc::from_int(l, if l.0 == 1 { 1 } else { -1 })
        } else {
            coeffs[1] = BigRational::one();
            Cyc {
                field: field.clone(),
                coeffs,
            }
        };
        zeta.pow(k as i64).expect("nonnegative power")
    }

    pub fn conductor(&self) -> Conductor {
        Conductor(self.field.conductor)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, if the element lies in Q.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    fn check(&self, other: &Self) -> Result<(), CycError> {
        if self.field.conductor == other.field.conductor {
            Ok(())
        } else {
            Err(CycError::ConductorMismatch {
                left: self.field.conductor,
                right: other.field.conductor,
            })
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, CycError> {
        self.check(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Cyc {
            field: self.field.clone(),
            coeffs,
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, CycError> {
        self.check(other)?;
        let d = self.field.degree;
        if d == 1 {
            return Ok(Cyc {
                field: self.field.clone(),
                coeffs: vec![&self.coeffs[0] * &other.coeffs[0]],
            });
        }
        let mut prod = vec![BigRational::zero(); 2 * d - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        let mut coeffs: Vec<BigRational> = prod.drain(..d).collect();
        for (k, c) in prod.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (j, r) in self.field.reduce[k].iter().enumerate() {
                if !r.is_zero() {
                    coeffs[j] += &c * BigRational::from_integer(r.clone());
                }
            }
        }
        Ok(Cyc {
            field: self.field.clone(),
            coeffs,
        })
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Cyc {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Multiplicative inverse, solving the linear system of multiplication by `self`.
    pub fn inv(&self) -> Result<Self, CycError> {
        if self.is_zero() {
            return Err(CycError::DivisionByZero(self.field.conductor));
        }
        let d = self.field.degree;
        if d == 1 {
            return Ok(Cyc {
                field: self.field.clone(),
                coeffs: vec![self.coeffs[0].recip()],
            });
        }
        let l = self.conductor();
        // Column j of the matrix is self·ζ^j.
        let mut cols = Vec::with_capacity(d);
        let mut basis = Cyc::one(l);
        let zeta = Cyc::root_of_unity(l, 1);
        for _ in 0..d {
            cols.push(self * &basis);
            basis = &basis * &zeta;
        }
        // Augmented rows: [M | e_0].
        let mut rows: Vec<Vec<BigRational>> = (0..d)
            .map(|i| {
                let mut row: Vec<BigRational> = cols.iter().map(|c| c.coeffs[i].clone()).collect();
                row.push(if i == 0 {
                    BigRational::one()
                } else {
                    BigRational::zero()
                });
                row
            })
            .collect();
        for col in 0..d {
            let piv = (col..d)
                .find(|&r| !rows[r][col].is_zero())
                .ok_or(CycError::DivisionByZero(self.field.conductor))?;
            rows.swap(col, piv);
            let p = rows[col][col].recip();
            for x in rows[col].iter_mut() {
                *x *= &p;
            }
            for r in 0..d {
                if r != col && !rows[r][col].is_zero() {
                    let f = rows[r][col].clone();
                    for c in col..=d {
                        let sub = &f * &rows[col][c];
                        rows[r][c] -= sub;
                    }
                }
            }
        }
        let coeffs = rows.into_iter().map(|mut r| r.pop().unwrap()).collect();
        Ok(Cyc {
            field: self.field.clone(),
            coeffs,
        })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, CycError> {
        self.check(other)?;
        self.checked_mul(&other.inv()?)
    }

    /// Integer power; negative exponents require a nonzero base.
    pub fn pow(&self, e: i64) -> Result<Self, CycError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Cyc::one(self.conductor());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// Smallest d ≥ 1 with x^d = 1, or `None` when x is not a root of unity.
    ///
    /// The roots of unity of Q(ζ_L) form the cyclic group of order lcm(2, L),
    /// so only its divisors need to be tried.
    pub fn multiplicative_order(&self) -> Option<u64> {
        if self.is_zero() {
            return None;
        }
        let m = u64::from(self.field.conductor).lcm(&2);
        let mut acc = self.clone();
        for d in 1..=m {
            if acc.is_one() {
                return if m % d == 0 { Some(d) } else { None };
            }
            acc = &acc * self;
        }
        None
    }

    pub fn is_primitive_mth_root(&self, m: u64) -> bool {
        self.multiplicative_order() == Some(m)
    }

    /// ζ_M^k where M = lcm(2, L) is the number of roots of unity in the field.
    pub fn unit_root(l: Conductor, k: i64) -> Self {
        if l.0.is_multiple_of(2) {
            Cyc::root_of_unity(l, k)
        } else {
            // ζ_{2L} = -ζ_L^{(L+1)/2}
            let z = Cyc::root_of_unity(l, k.rem_euclid(2 * l.0 as i64) * ((l.0 as i64 + 1) / 2));
            if k.rem_euclid(2) == 1 {
                -z
            } else {
                z
            }
        }
    }

    /// If `self` = ζ_M^k with M = lcm(2, L), returns k in 0..M.
    pub fn root_exponent(&self) -> Option<u64> {
        let m = u64::from(self.field.conductor).lcm(&2);
        self.multiplicative_order()?;
        let l = Conductor(self.field.conductor);
        (0..m).find(|&k| Cyc::unit_root(l, k as i64) == *self)
    }
}

impl fmt::Debug for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyc[{}]({})", self.field.conductor, self)
    }
}

impl fmt::Display for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            match (k, abs.is_one()) {
                (0, _) => write!(f, "{abs}")?,
                (_, true) => write!(f, "z{}^{k}", self.field.conductor)?,
                (_, false) => write!(f, "{abs}*z{}^{k}", self.field.conductor)?,
            }
        }
        Ok(())
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl<'a, 'b> $tr<&'b Cyc> for &'a Cyc {
            type Output = Cyc;
            fn $m(self, rhs: &'b Cyc) -> Cyc {
                let f: fn(&Cyc, &Cyc) -> Result<Cyc, CycError> = $body;
                f(self, rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<Cyc> for Cyc {
            type Output = Cyc;
            fn $m(self, rhs: Cyc) -> Cyc {
                $tr::$m(&self, &rhs)
            }
        }
        impl<'b> $tr<&'b Cyc> for Cyc {
            type Output = Cyc;
            fn $m(self, rhs: &'b Cyc) -> Cyc {
                $tr::$m(&self, rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| a.checked_add(b));
binop!(Sub, sub, |a, b| a.checked_add(&-b));
binop!(Mul, mul, |a, b| a.checked_mul(b));

impl AddAssign<&Cyc> for Cyc {
    fn add_assign(&mut self, rhs: &Cyc) {
        self.check(rhs).unwrap_or_else(|e| panic!("{e}"));
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl SubAssign<&Cyc> for Cyc {
    fn sub_assign(&mut self, rhs: &Cyc) {
        self.check(rhs).unwrap_or_else(|e| panic!("{e}"));
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
    }
}

impl Neg for &Cyc {
    type Output = Cyc;
    fn neg(self) -> Cyc {
        Cyc {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for Cyc {
    type Output = Cyc;
    fn neg(self) -> Cyc {
        -&self
    }
}

/// A scalar written as `[c*]zM^k`, `[c*]zM`, `i`, or a rational `c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalarExpr {
    pub coeff: BigRational,
    /// (M, k) for a factor ζ_M^k.
    pub root: Option<(u32, i64)>,
}

impl ScalarExpr {
    /// Smallest conductor the value needs (1 for rationals).
    pub fn min_conductor(&self) -> u32 {
        self.root.map_or(1, |(m, _)| m)
    }

    pub fn to_cyc(&self, l: Conductor) -> Result<Cyc, CycError> {
        let base = match self.root {
            None => Cyc::one(l),
            Some((m, k)) => {
                let big = l.0.lcm(&2);
                if !big.is_multiple_of(m) {
                    return Err(CycError::Malformed(format!("ζ_{m} is not in Q(ζ_{})", l.0)));
                }
                Cyc::unit_root(l, k * i64::from(big / m))
            }
        };
        Ok(base.scale(&self.coeff))
    }
}

impl std::str::FromStr for ScalarExpr {
    type Err = CycError;

    fn from_str(s: &str) -> Result<Self, CycError> {
        let bad = || CycError::Malformed(format!("cannot parse scalar {s:?}"));
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (sign, body) = match t.strip_prefix('-') {
            Some(rest) => (-1, rest),
            None => (1, t.as_str()),
        };
        let (coeff_str, root_str) = match body.split_once('*') {
            Some((c, r)) => (Some(c), Some(r)),
            None if body.starts_with('z') || body == "i" => (None, Some(body)),
            None => (Some(body), None),
        };
        let mut coeff = match coeff_str {
            Some(c) => c.parse::<BigRational>().map_err(|_| bad())?,
            None => BigRational::one(),
        };
        if sign < 0 {
            coeff = -coeff;
        }
        let root = match root_str {
            None => None,
            Some("i") => Some((4, 1)),
            Some(r) => {
                let r = r.strip_prefix('z').ok_or_else(bad)?;
                let (m, k) = match r.split_once('^') {
                    Some((m, k)) => (m, k.parse::<i64>().map_err(|_| bad())?),
                    None => (r, 1),
                };
                let m: u32 = m.parse().map_err(|_| bad())?;
                if m == 0 {
                    return Err(bad());
                }
                Some((m, k))
            }
        };
        Ok(ScalarExpr { coeff, root })
    }
}

#[derive(Serialize, Deserialize)]
struct CycJson {
    conductor: u32,
    coeffs: Vec<String>,
}

impl Serialize for Cyc {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CycJson {
            conductor: self.field.conductor,
            coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cyc {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = CycJson::deserialize(d)?;
        let l = Conductor::new(raw.conductor).map_err(D::Error::custom)?;
        let coeffs = raw
            .coeffs
            .iter()
            .map(|s| s.parse::<BigRational>().map_err(D::Error::custom))
            .collect::<Result<Vec<_>, _>>()?;
        Cyc::from_coeffs(l, coeffs).map_err(D::Error::custom)
    }
}

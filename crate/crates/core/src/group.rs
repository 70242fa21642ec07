//! Finite abelian groups presented as products of cyclic groups.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclotomic::{Conductor, Cyc};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("cannot parse group `{0}` (expected e.g. Z2xZ4)")]
    ParseGroup(String),
    #[error("cannot parse group element `{0}` (expected e.g. (1,0))")]
    ParseElement(String),
    #[error("cyclic factor orders must be positive")]
    ZeroOrder,
    #[error("element {elt} does not belong to {group}")]
    NotInGroup { elt: String, group: String },
    #[error("character value for generator {index} is not an {order}-th root of unity")]
    NotAHomomorphism { index: usize, order: u32 },
    #[error("character has {got} values but the group has {want} generators")]
    CharacterArity { got: usize, want: usize },
    #[error("character order {0} does not divide the conductor {1}")]
    ConductorTooSmall(u32, u32),
}

/// An element of a product of cyclic groups, stored as its exponent vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElt {
    exps: Vec<u32>,
}

impl GroupElt {
    pub fn exps(&self) -> &[u32] {
        &self.exps
    }
}

impl fmt::Display for GroupElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.exps.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Z_{n_1} × … × Z_{n_k} with distinguished generators g_1, …, g_k.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FinAbGroup {
    orders: Vec<u32>,
}

impl FromStr for FinAbGroup {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GroupError::ParseGroup(s.to_string());
        let orders = s
            .trim()
            .split(['x', '×'])
            .map(|part| {
                let part = part.trim();
                part.strip_prefix('Z')
                    .and_then(|n| n.parse::<u32>().ok())
                    .ok_or_else(bad)
            })
            .collect::<Result<Vec<_>, _>>()?;
        FinAbGroup::new(orders)
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.orders.iter().map(|n| format!("Z{n}")).collect();
        write!(f, "{}", parts.join("x"))
    }
}

impl FinAbGroup {
    pub fn new(orders: Vec<u32>) -> Result<Self, GroupError> {
        if orders.contains(&0) {
            return Err(GroupError::ZeroOrder);
        }
        Ok(FinAbGroup { orders })
    }

    pub fn cyclic(n: u32) -> Self {
        FinAbGroup { orders: vec![n] }
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn order(&self) -> usize {
        self.orders.iter().map(|&n| n as usize).product()
    }

    pub fn exponent(&self) -> u32 {
        self.orders.iter().fold(1, |acc, n| acc.lcm(n))
    }

    pub fn identity(&self) -> GroupElt {
        GroupElt {
            exps: vec![0; self.rank()],
        }
    }

    /// The i-th distinguished generator.
    pub fn generator(&self, i: usize) -> GroupElt {
        let mut exps = vec![0; self.rank()];
        exps[i] = 1 % self.orders[i];
        GroupElt { exps }
    }

    pub fn elt(&self, exps: &[i64]) -> Result<GroupElt, GroupError> {
        if exps.len() != self.rank() {
            return Err(GroupError::NotInGroup {
                elt: format!("{exps:?}"),
                group: self.to_string(),
            });
        }
        Ok(GroupElt {
            exps: exps
                .iter()
                .zip(&self.orders)
                .map(|(&e, &n)| e.rem_euclid(n as i64) as u32)
                .collect(),
        })
    }

    pub fn parse_elt(&self, s: &str) -> Result<GroupElt, GroupError> {
        let bad = || GroupError::ParseElement(s.to_string());
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(bad)?;
        let exps = if inner.trim().is_empty() {
            Vec::new()
        } else {
            inner
                .split(',')
                .map(|t| t.trim().parse::<i64>().map_err(|_| bad()))
                .collect::<Result<Vec<_>, _>>()?
        };
        self.elt(&exps)
    }

    /// Parses a comma separated list of tuples such as `(1,0),(0,1)`.
    pub fn parse_elts(&self, s: &str) -> Result<Vec<GroupElt>, GroupError> {
        let mut out = Vec::new();
        let mut rest = s.trim();
        while !rest.is_empty() {
            let close = rest
                .find(')')
                .ok_or_else(|| GroupError::ParseElement(s.to_string()))?;
            out.push(self.parse_elt(&rest[..=close])?);
            rest = rest[close + 1..].trim_start_matches([',', ' ']);
        }
        Ok(out)
    }

    pub fn contains(&self, g: &GroupElt) -> bool {
        g.exps.len() == self.rank() && g.exps.iter().zip(&self.orders).all(|(e, n)| e < n)
    }

    fn check(&self, g: &GroupElt) -> Result<(), GroupError> {
        if self.contains(g) {
            Ok(())
        } else {
            Err(GroupError::NotInGroup {
                elt: g.to_string(),
                group: self.to_string(),
            })
        }
    }

    pub fn try_mul(&self, a: &GroupElt, b: &GroupElt) -> Result<GroupElt, GroupError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul(a, b))
    }

    /// Product of two elements. Both must belong to the group.
    pub fn mul(&self, a: &GroupElt, b: &GroupElt) -> GroupElt {
        debug_assert!(self.contains(a) && self.contains(b));
        GroupElt {
            exps: a
                .exps
                .iter()
                .zip(&b.exps)
                .zip(&self.orders)
                .map(|((x, y), n)| (x + y) % n)
                .collect(),
        }
    }

    pub fn inv(&self, a: &GroupElt) -> GroupElt {
        GroupElt {
            exps: a
                .exps
                .iter()
                .zip(&self.orders)
                .map(|(x, n)| (n - x) % n)
                .collect(),
        }
    }

    pub fn pow(&self, a: &GroupElt, k: i64) -> GroupElt {
        GroupElt {
            exps: a
                .exps
                .iter()
                .zip(&self.orders)
                .map(|(&x, &n)| ((x as i64 * k).rem_euclid(n as i64)) as u32)
                .collect(),
        }
    }

    pub fn elt_order(&self, a: &GroupElt) -> u32 {
        a.exps
            .iter()
            .zip(&self.orders)
            .map(|(&x, &n)| n / x.gcd(&n))
            .fold(1, |acc, d| acc.lcm(&d))
    }

    /// All elements in lexicographic exponent order.
    pub fn elements(&self) -> Vec<GroupElt> {
        (0..self.order()).map(|i| self.element(i)).collect()
    }

    /// Position of `g` in [`FinAbGroup::elements`].
    pub fn index_of(&self, g: &GroupElt) -> usize {
        g.exps
            .iter()
            .zip(&self.orders)
            .fold(0usize, |acc, (&e, &n)| acc * n as usize + e as usize)
    }

    pub fn element(&self, mut idx: usize) -> GroupElt {
        let mut exps = vec![0u32; self.rank()];
        for (slot, &n) in exps.iter_mut().zip(&self.orders).rev() {
            *slot = (idx % n as usize) as u32;
            idx /= n as usize;
        }
        GroupElt { exps }
    }

    /// The subgroup generated by `gens`, with coset representatives of G/N.
    pub fn subgroup_generated(&self, gens: &[GroupElt]) -> Subgroup {
        let mut member = vec![false; self.order()];
        let mut elements = vec![self.identity()];
        member[self.index_of(&self.identity())] = true;
        let mut frontier = 0;
        while frontier < elements.len() {
            let cur = elements[frontier].clone();
            frontier += 1;
            for g in gens {
                let next = self.mul(&cur, g);
                let idx = self.index_of(&next);
                if !member[idx] {
                    member[idx] = true;
                    elements.push(next);
                }
            }
        }
        elements.sort();
        let mut covered = vec![false; self.order()];
        let mut coset_reps = Vec::new();
        for (i, g) in self.elements().into_iter().enumerate() {
            if covered[i] {
                continue;
            }
            for n in &elements {
                covered[self.index_of(&self.mul(&g, n))] = true;
            }
            coset_reps.push(g);
        }
        Subgroup {
            elements,
            coset_reps,
        }
    }

    /// Every automorphism, given as the images of the distinguished generators.
    pub fn automorphisms(&self) -> Vec<Vec<GroupElt>> {
        let elts = self.elements();
        let mut out = Vec::new();
        let mut images: Vec<GroupElt> = Vec::new();
        self.extend_automorphisms(&elts, &mut images, &mut out);
        out
    }

    fn extend_automorphisms(
        &self,
        elts: &[GroupElt],
        images: &mut Vec<GroupElt>,
        out: &mut Vec<Vec<GroupElt>>,
    ) {
        let i = images.len();
        if i == self.rank() {
            if self.subgroup_generated(images).elements.len() == self.order() {
                out.push(images.clone());
            }
            return;
        }
        for cand in elts {
            // image of g_i must satisfy the relation g_i^{n_i} = e
            if self.orders[i].is_multiple_of(self.elt_order(cand)) {
                images.push(cand.clone());
                self.extend_automorphisms(elts, images, out);
                images.pop();
            }
        }
    }

    /// Applies the homomorphism determined by generator images.
    pub fn apply_hom(&self, images: &[GroupElt], g: &GroupElt) -> GroupElt {
        let mut acc = self.identity();
        for (img, &e) in images.iter().zip(&g.exps) {
            acc = self.mul(&acc, &self.pow(img, e as i64));
        }
        acc
    }

    /// Whether `w` is stable, up to permutation, under conjugation by every element.
    pub fn is_weight_sequence(&self, w: &WeightSeq) -> bool {
        if !w.weights.iter().all(|x| self.contains(x)) {
            return false;
        }
        let mut sorted = w.weights.clone();
        sorted.sort();
        self.elements().iter().all(|g| {
            let ginv = self.inv(g);
            let mut conj: Vec<GroupElt> = w
                .weights
                .iter()
                .map(|x| self.mul(&self.mul(g, x), &ginv))
                .collect();
            conj.sort();
            conj == sorted
        })
    }

    /// All characters with values in Q(ζ_L), indexed by exponent vectors:
    /// entry k_i means χ(g_i) = ζ_{n_i}^{k_i}.
    pub fn characters(&self, l: Conductor) -> Result<Vec<(Vec<u32>, Character)>, GroupError> {
        for &n in &self.orders {
            if !l.get().is_multiple_of(n) {
                return Err(GroupError::ConductorTooSmall(n, l.get()));
            }
        }
        let count: usize = self.order();
        Ok((0..count)
            .map(|idx| {
                let ks = self.element(idx).exps;
                let chi = Character::from_exponents(self, l, &ks);
                (ks, chi)
            })
            .collect())
    }
}

/// A subgroup N ⊆ G together with representatives of G/N.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    pub elements: Vec<GroupElt>,
    pub coset_reps: Vec<GroupElt>,
}

impl Subgroup {
    pub fn index(&self) -> usize {
        self.coset_reps.len()
    }

    pub fn contains(&self, g: &GroupElt) -> bool {
        self.elements.binary_search(g).is_ok()
    }
}

/// An ordered sequence of group elements labelling arrow families.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightSeq {
    weights: Vec<GroupElt>,
}

impl WeightSeq {
    pub fn new(weights: Vec<GroupElt>) -> Self {
        WeightSeq { weights }
    }

    pub fn weights(&self) -> &[GroupElt] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

impl fmt::Display for WeightSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.weights.iter().map(|w| w.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// A homomorphism G → Q(ζ_L)^×, given by its values on the distinguished generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Character {
    values: Vec<Cyc>,
}

impl Character {
    /// Validates that each value is an n_i-th root of unity.
    pub fn new(group: &FinAbGroup, values: Vec<Cyc>) -> Result<Self, GroupError> {
        if values.len() != group.rank() {
            return Err(GroupError::CharacterArity {
                got: values.len(),
                want: group.rank(),
            });
        }
        for (i, (v, &n)) in values.iter().zip(group.orders()).enumerate() {
            if !v.pow(n as i64).map(|x| x.is_one()).unwrap_or(false) {
                return Err(GroupError::NotAHomomorphism { index: i, order: n });
            }
        }
        Ok(Character { values })
    }

    /// Skips validation; used to build deliberately broken actions in tests.
    pub fn new_unchecked(values: Vec<Cyc>) -> Self {
        Character { values }
    }

    pub fn trivial(group: &FinAbGroup, l: Conductor) -> Self {
        Character {
            values: vec![Cyc::one(l); group.rank()],
        }
    }

    /// χ(g_i) = ζ_{n_i}^{k_i}; requires n_i | L.
    pub fn from_exponents(group: &FinAbGroup, l: Conductor, ks: &[u32]) -> Self {
        let values = ks
            .iter()
            .zip(group.orders())
            .map(|(&k, &n)| Cyc::root_of_unity(l, (k * (l.get() / n)) as i64))
            .collect();
        Character { values }
    }

    pub fn values(&self) -> &[Cyc] {
        &self.values
    }

    pub fn conductor(&self) -> Option<Conductor> {
        self.values.first().map(Cyc::conductor)
    }

    pub fn is_homomorphism(&self, group: &FinAbGroup) -> bool {
        self.values.len() == group.rank()
            && self
                .values
                .iter()
                .zip(group.orders())
                .all(|(v, &n)| v.pow(n as i64).map(|x| x.is_one()).unwrap_or(false))
    }

    /// χ(g) = ∏ χ(g_i)^{e_i}.
    pub fn eval(&self, g: &GroupElt, l: Conductor) -> Cyc {
        let mut acc = Cyc::one(l);
        for (v, &e) in self.values.iter().zip(&g.exps) {
            if e > 0 {
                acc = &acc * &v.pow(e as i64).expect("nonnegative power");
            }
        }
        acc
    }

    pub fn inverse(&self) -> Result<Self, crate::cyclotomic::CycError> {
        Ok(Character {
            values: self
                .values
                .iter()
                .map(Cyc::inv)
                .collect::<Result<Vec<_>, _>>()?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g(s: &str) -> FinAbGroup {
        s.parse().unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let z4 = g("Z4");
        let a = z4.parse_elt("(1)").unwrap();
        let b = z4.parse_elt("(3)").unwrap();
        assert_eq!(z4.mul(&a, &b), z4.identity());
        let v4 = g("Z2xZ2");
        assert_eq!(v4.elt_order(&v4.parse_elt("(1,1)").unwrap()), 2);
        let z42 = g("Z4xZ2");
        assert_eq!(
            z42.inv(&z42.parse_elt("(1,0)").unwrap()),
            z42.parse_elt("(3,0)").unwrap()
        );
        assert_eq!(z42.exponent(), 4);
        assert_eq!(z42.order(), 8);
    }

    #[test]
    fn mixed_groups_rejected() {
        let z4 = g("Z4");
        let v4 = g("Z2xZ2");
        let x = v4.parse_elt("(1,1)").unwrap();
        assert!(z4.try_mul(&z4.identity(), &x).is_err());
    }

    #[test]
    fn parsing() {
        assert_eq!(g("Z2xZ4").orders(), &[2, 4]);
        assert!("Q8".parse::<FinAbGroup>().is_err());
        assert!("Z0".parse::<FinAbGroup>().is_err());
        let v = g("Z4xZ2");
        let ws = v.parse_elts("(1,0),(0,1)").unwrap();
        assert_eq!(ws.len(), 2);
        assert_eq!(ws[1], v.generator(1));
        assert!(v.parse_elt("(1)").is_err());
    }

    #[test]
    fn subgroups() {
        let z4 = g("Z4");
        let g2 = z4.parse_elt("(2)").unwrap();
        let n = z4.subgroup_generated(&[g2.clone(), g2]);
        assert_eq!(
            n.elements,
            vec![z4.identity(), z4.parse_elt("(2)").unwrap()]
        );
        assert_eq!(n.index(), 2);

        let v4 = g("Z2xZ2");
        let n = v4.subgroup_generated(&[v4.generator(0), v4.generator(1)]);
        assert_eq!(n.elements.len(), 4);
        assert_eq!(n.index(), 1);

        let n = v4.subgroup_generated(&[]);
        assert_eq!(n.elements, vec![v4.identity()]);
        assert_eq!(n.index(), 4);
    }

    #[test]
    fn weight_sequences() {
        let z4 = g("Z4");
        let w = WeightSeq::new(vec![z4.generator(0), z4.generator(0)]);
        assert!(z4.is_weight_sequence(&w));
        assert!(z4.is_weight_sequence(&WeightSeq::new(vec![])));
        let foreign = WeightSeq::new(vec![g("Z2xZ2").generator(0)]);
        assert!(!z4.is_weight_sequence(&foreign));
    }

    #[test]
    fn character_evaluation() {
        let l = Conductor::new(4).unwrap();
        let z2 = g("Z2");
        let chi = Character::new(&z2, vec![Cyc::from_int(l, -1)]).unwrap();
        assert!(chi.eval(&z2.identity(), l).is_one());

        let v4 = g("Z2xZ2");
        let chi = Character::new(&v4, vec![Cyc::from_int(l, -1), Cyc::one(l)]).unwrap();
        assert_eq!(
            chi.eval(&v4.parse_elt("(1,1)").unwrap(), l),
            Cyc::from_int(l, -1)
        );

        let z4 = g("Z4");
        let chi = Character::new(&z4, vec![Cyc::root_of_unity(l, 1)]).unwrap();
        assert_eq!(
            chi.eval(&z4.parse_elt("(2)").unwrap(), l),
            Cyc::from_int(l, -1)
        );

        assert!(Character::new(&z2, vec![Cyc::root_of_unity(l, 1)]).is_err());
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(g("Z4").automorphisms().len(), 2);
        assert_eq!(g("Z2xZ2").automorphisms().len(), 6);
        assert_eq!(g("Z6").automorphisms().len(), 2);
        assert_eq!(g("Z4xZ2").automorphisms().len(), 8);
    }

    fn groups() -> impl Strategy<Value = FinAbGroup> {
        prop::collection::vec(1u32..6, 1..3).prop_map(|o| FinAbGroup::new(o).unwrap())
    }

    proptest! {
        #[test]
        fn two_weights_commute(grp in groups(), i in 0usize..100, j in 0usize..100) {
            let a = grp.element(i % grp.order());
            let b = grp.element(j % grp.order());
            prop_assert_eq!(grp.mul(&a, &b), grp.mul(&b, &a));
        }

        #[test]
        fn subgroup_closed_and_lagrange(grp in groups(), i in 0usize..100, j in 0usize..100) {
            let gens = [grp.element(i % grp.order()), grp.element(j % grp.order())];
            let n = grp.subgroup_generated(&gens);
            for x in &n.elements {
                prop_assert!(n.contains(&grp.inv(x)));
                for y in &n.elements {
                    prop_assert!(n.contains(&grp.mul(x, y)));
                }
            }
            prop_assert_eq!(n.elements.len() * n.index(), grp.order());
        }

        #[test]
        fn characters_are_multiplicative(i in 0usize..100, j in 0usize..100, c in 0usize..100) {
            let grp = FinAbGroup::new(vec![4, 2]).unwrap();
            let l = Conductor::new(4).unwrap();
            let chars = grp.characters(l).unwrap();
            let (_, chi) = &chars[c % chars.len()];
            prop_assert!(chi.is_homomorphism(&grp));
            let a = grp.element(i % 8);
            let b = grp.element(j % 8);
            prop_assert_eq!(chi.eval(&grp.mul(&a, &b), l), &chi.eval(&a, l) * &chi.eval(&b, l));
        }
    }
}

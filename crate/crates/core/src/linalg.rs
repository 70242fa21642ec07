//! Sparse row echelon forms over Q(ζ_L).
//!
//! Each row is normalised so that its leading (smallest) column carries
//! coefficient 1. The set of leading columns of a subspace does not depend on
//! the order in which spanning vectors are inserted, so [`Echelon::reduce`]
//! yields the canonical representative supported outside the pivot columns.

use std::collections::{BTreeMap, HashMap};

use crate::cyclotomic::Cyc;

pub type SparseVec = BTreeMap<usize, Cyc>;

#[derive(Debug, Clone, Default)]
pub struct Echelon {
    rows: Vec<Vec<(usize, Cyc)>>,
    pivots: HashMap<usize, usize>,
}

/// `v -= c·row`, dropping cancelled entries.
pub fn axpy(v: &mut SparseVec, c: &Cyc, row: &[(usize, Cyc)]) {
    for (col, val) in row {
        let delta = c * val;
        match v.get_mut(col) {
            Some(x) => {
                *x -= &delta;
                if x.is_zero() {
                    v.remove(col);
                }
            }
            None => {
                v.insert(*col, -delta);
            }
        }
    }
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivots.contains_key(&col)
    }

    pub fn rows(&self) -> impl Iterator<Item = &[(usize, Cyc)]> {
        self.rows.iter().map(Vec::as_slice)
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.iter().map(|r| r[0].0)
    }

    /// Canonical residue of `v` modulo the row space.
    pub fn reduce(&self, mut v: SparseVec) -> SparseVec {
        let mut cursor = 0usize;
        loop {
            let next = v
                .range(cursor..)
                .map(|(k, _)| *k)
                .find(|k| self.pivots.contains_key(k));
            let Some(col) = next else { break };
            let c = v.remove(&col).expect("present");
            let row = &self.rows[self.pivots[&col]];
            axpy(&mut v, &c, &row[1..]);
            cursor = col + 1;
        }
        v
    }

    /// Adds `v` to the row space; returns whether the rank grew.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let r = self.reduce(v);
        let Some((&lead, lead_val)) = r.iter().next() else {
            return false;
        };
        let scale = lead_val.inv().expect("nonzero leading entry");
        let row: Vec<(usize, Cyc)> = r
            .into_iter()
            .map(|(k, x)| {
                let y = if k == lead {
                    Cyc::one(x.conductor())
                } else {
                    &x * &scale
                };
                (k, y)
            })
            .collect();
        self.pivots.insert(lead, self.rows.len());
        self.rows.push(row);
        true
    }

    /// Inserts a batch, sparsest vectors first.
    pub fn extend<I: IntoIterator<Item = SparseVec>>(&mut self, vecs: I) {
        let mut vecs: Vec<SparseVec> = vecs.into_iter().filter(|v| !v.is_empty()).collect();
        vecs.sort_by(|a, b| {
            a.len()
                .cmp(&b.len())
                .then_with(|| a.keys().next().cmp(&b.keys().next()))
        });
        for v in vecs {
            self.insert(v);
        }
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v.clone()).is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::Conductor;

    fn vec_of(l: Conductor, entries: &[(usize, i64)]) -> SparseVec {
        entries
            .iter()
            .map(|&(k, x)| (k, Cyc::from_int(l, x)))
            .collect()
    }

    #[test]
    fn rank_and_membership() {
        let l = Conductor::new(4).unwrap();
        let mut e = Echelon::new();
        assert!(e.insert(vec_of(l, &[(0, 1), (1, 1)])));
        assert!(e.insert(vec_of(l, &[(1, 2), (2, 1)])));
        assert!(!e.insert(vec_of(l, &[(0, 2), (1, 4), (2, 1)])));
        assert_eq!(e.rank(), 2);
        assert!(e.contains(&vec_of(l, &[(0, 1), (1, 3), (2, 1)])));
        assert!(!e.contains(&vec_of(l, &[(2, 1)])));
    }

    #[test]
    fn residue_is_insertion_order_independent() {
        let l = Conductor::new(3).unwrap();
        let z = Cyc::root_of_unity(l, 1);
        let a: SparseVec = [(0, Cyc::one(l)), (2, z.clone())].into_iter().collect();
        let b: SparseVec = [(0, z.clone()), (1, Cyc::one(l)), (3, Cyc::one(l))]
            .into_iter()
            .collect();
        let probe: SparseVec = (0..4)
            .map(|k| (k, Cyc::root_of_unity(l, k as i64)))
            .collect();
        let mut e1 = Echelon::new();
        e1.insert(a.clone());
        e1.insert(b.clone());
        let mut e2 = Echelon::new();
        e2.insert(b);
        e2.insert(a);
        assert_eq!(e1.reduce(probe.clone()), e2.reduce(probe));
    }
}

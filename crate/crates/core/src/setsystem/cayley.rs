use std::sync::Arc;

use super::{GroundSet, SetSystem};
use crate::bits::{self, MemberSet};
use crate::error::{Error, Result};

/// Multiplication table of an abstract semilattice on elements `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicationTable {
    n: usize,
    product: Vec<usize>,
}

impl MultiplicationTable {
    /// Validates commutativity, idempotence and associativity.
    pub fn new(rows: Vec<Vec<usize>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidTable("no elements".into()));
        }
        let mut product = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidTable(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for &v in row {
                if v >= n {
                    return Err(Error::InvalidTable(format!("entry {v} in row {i} out of range")));
                }
                product.push(v);
            }
        }
        let table = MultiplicationTable { n, product };
        table.validate()?;
        Ok(table)
    }

    fn validate(&self) -> Result<()> {
        let n = self.n;
        for i in 0..n {
            if self.product(i, i) != i {
                return Err(Error::InvalidTable(format!("element {i} is not idempotent")));
            }
            for j in 0..n {
                if self.product(i, j) != self.product(j, i) {
                    return Err(Error::InvalidTable(format!("{i}·{j} ≠ {j}·{i}")));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let ij = self.product(i, j);
                for k in 0..n {
                    if self.product(ij, k) != self.product(i, self.product(j, k)) {
                        return Err(Error::InvalidTable(format!(
                            "({i}·{j})·{k} ≠ {i}·({j}·{k})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Table of a union-closed system under union, elements numbered by
    /// member index.
    pub fn of_system(system: &SetSystem) -> Result<Self> {
        let n = system.len();
        if n == 0 {
            return Err(Error::EmptyFamily);
        }
        let mut product = vec![0; n * n];
        let mut buf = vec![0u64; system.word_width()];
        for i in 0..n {
            for j in i..n {
                buf.copy_from_slice(system.words_of(i));
                bits::union_into(&mut buf, system.words_of(j));
                let k = system.index_of_words(&buf).ok_or_else(|| {
                    Error::NotUnionClosed(system.format_member(i), system.format_member(j))
                })?;
                product[i * n + j] = k;
                product[j * n + i] = k;
            }
        }
        Ok(MultiplicationTable { n, product })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn product(&self, i: usize, j: usize) -> usize {
        self.product[i * self.n + j]
    }

    /// `x | y`, i.e. `xy = y`.
    pub fn divides(&self, x: usize, y: usize) -> bool {
        self.product(x, y) == y
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.product.chunks(self.n).map(<[usize]>::to_vec).collect()
    }
}

/// Image of the Cayley embedding together with the element map.
#[derive(Debug, Clone)]
pub struct CayleyImage {
    pub system: SetSystem,
    /// `element_to_member[x]` is the member index of `E_x`.
    pub element_to_member: Vec<usize>,
}

impl CayleyImage {
    pub fn set_of(&self, element: usize) -> MemberSet {
        self.system.member(self.element_to_member[element])
    }
}

/// Sends each element `x` to `E_x = { y : x does not divide y }`, a set of
/// elements; the image is a union-closed system isomorphic to the table.
pub fn cayley_embedding(table: &MultiplicationTable) -> Result<CayleyImage> {
    let n = table.len();
    let ground = Arc::new(GroundSet::numbered(n)?);
    let images: Vec<MemberSet> = (0..n)
        .map(|x| MemberSet::from_indices(n, (0..n).filter(|&y| !table.divides(x, y))))
        .collect();
    let system = SetSystem::new(Arc::clone(&ground), images.clone()).map_err(|e| match e {
        Error::DuplicateMember(m) => Error::InvalidTable(format!("embedding not injective at {m}")),
        other => other,
    })?;
    let element_to_member = images
        .iter()
        .map(|s| system.index_of(s).expect("image is a member"))
        .collect();
    let mut system = system;
    system.mark_closed();
    Ok(CayleyImage {
        system,
        element_to_member,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setsystem::is_union_closed;

    #[test]
    fn two_chain() {
        let table = MultiplicationTable::new(vec![vec![0, 1], vec![1, 1]]).unwrap();
        let img = cayley_embedding(&table).unwrap();
        assert!(img.set_of(0).is_empty());
        assert_eq!(img.set_of(1).indices(), vec![0]);
    }

    #[test]
    fn trivial_semilattice() {
        let table = MultiplicationTable::new(vec![vec![0]]).unwrap();
        let img = cayley_embedding(&table).unwrap();
        assert_eq!(img.system.len(), 1);
        assert!(img.system.member(0).is_empty());
    }

    #[test]
    fn rejects_invalid_tables() {
        assert!(MultiplicationTable::new(vec![vec![1, 1], vec![1, 1]]).is_err());
        assert!(MultiplicationTable::new(vec![vec![0, 1], vec![0, 1]]).is_err());
        assert!(MultiplicationTable::new(vec![vec![0, 2], vec![2, 1]]).is_err());
        // commutative and idempotent but not associative
        let rows = vec![vec![0, 2, 2], vec![2, 1, 0], vec![2, 0, 2]];
        assert!(MultiplicationTable::new(rows).is_err());
    }

    #[test]
    fn m1_round_trips_through_its_table() {
        let s = crate::setsystem::tests::m1();
        let table = MultiplicationTable::of_system(&s).unwrap();
        let img = cayley_embedding(&table).unwrap();
        let fresh = SetSystem::new(img.system.ground_arc(), img.system.members().collect()).unwrap();
        assert!(is_union_closed(&fresh).is_closed());
        // E_x ∪ E_y = E_{xy} and the relabelled table agrees
        let n = table.len();
        for x in 0..n {
            for y in 0..n {
                assert_eq!(img.set_of(x).union(&img.set_of(y)), img.set_of(table.product(x, y)));
            }
        }
        let image_table = MultiplicationTable::of_system(&img.system).unwrap();
        for x in 0..n {
            for y in 0..n {
                let mx = img.element_to_member[x];
                let my = img.element_to_member[y];
                assert_eq!(
                    image_table.product(mx, my),
                    img.element_to_member[table.product(x, y)]
                );
            }
        }
    }
}

//! Finite groups given by multiplication tables: maximal subgroups, normal subgroups, structure probes.

use std::collections::HashMap;
use std::fmt;

use crate::green::Green;
use crate::psgrp::PartialSemigroup;
use crate::Error;

/// A subgroup as a sorted list of element indices.
pub type Subgroup = Vec<usize>;

#[derive(Clone, Debug)]
pub struct Group {
    order: usize,
    table: Vec<u32>,
    identity: usize,
    inv: Vec<u32>,
}

impl Group {
    pub fn from_table(order: usize, table: Vec<u32>) -> Result<Group, Error> {
        assert_eq!(table.len(), order * order);
        let m = |a: usize, b: usize| table[a * order + b] as usize;
        let identity = (0..order)
            .find(|&e| (0..order).all(|a| m(e, a) == a && m(a, e) == a))
            .ok_or_else(|| Error::Structure("no identity".into()))?;
        let inv = (0..order)
            .map(|a| {
                (0..order)
                    .find(|&b| m(a, b) == identity)
                    .map(|b| b as u32)
                    .ok_or_else(|| Error::Structure(format!("element {a} has no inverse")))
            })
            .collect::<Result<Vec<u32>, Error>>()?;
        Ok(Group { order, table, identity, inv })
    }

    /// Builds a group from elements closed under an associative product.
    pub fn from_elements<T: Eq + std::hash::Hash + Clone>(elems: &[T], mul: impl Fn(&T, &T) -> T) -> Result<Group, Error> {
        let index: HashMap<&T, usize> = elems.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let n = elems.len();
        let mut table = Vec::with_capacity(n * n);
        for a in elems {
            for b in elems {
                let c = index.get(&mul(a, b)).ok_or_else(|| Error::Structure("not closed".into()))?;
                table.push(*c as u32);
            }
        }
        Group::from_table(n, table)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn whole(&self) -> Subgroup {
        (0..self.order).collect()
    }

    pub fn trivial(&self) -> Subgroup {
        vec![self.identity]
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn center(&self) -> Subgroup {
        (0..self.order).filter(|&a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a))).collect()
    }

    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.order];
        let mut out = Vec::new();
        for g in 0..self.order {
            if seen[g] {
                continue;
            }
            let mut cls: Vec<usize> = (0..self.order).map(|h| self.mul(self.mul(h, g), self.inv(h))).collect();
            cls.sort_unstable();
            cls.dedup();
            cls.iter().for_each(|&c| seen[c] = true);
            out.push(cls);
        }
        out
    }

    /// Subgroup generated by `gens` (closure under right multiplication suffices in a finite group).
    pub fn generated(&self, gens: &[usize]) -> Subgroup {
        let mut inside = vec![false; self.order];
        inside[self.identity] = true;
        let mut stack = vec![self.identity];
        let gens: Vec<usize> = {
            let mut g = gens.to_vec();
            g.sort_unstable();
            g.dedup();
            g
        };
        while let Some(x) = stack.pop() {
            for &g in &gens {
                let y = self.mul(x, g);
                if !inside[y] {
                    inside[y] = true;
                    stack.push(y);
                }
            }
        }
        (0..self.order).filter(|&x| inside[x]).collect()
    }

    pub fn is_subgroup(&self, h: &[usize]) -> bool {
        let mut inside = vec![false; self.order];
        h.iter().for_each(|&x| inside[x] = true);
        inside[self.identity] && h.iter().all(|&a| h.iter().all(|&b| inside[self.mul(a, b)]))
    }

    pub fn is_normal(&self, h: &[usize]) -> bool {
        let mut inside = vec![false; self.order];
        h.iter().for_each(|&x| inside[x] = true);
        self.is_subgroup(h) && h.iter().all(|&x| (0..self.order).all(|g| inside[self.mul(self.mul(g, x), self.inv(g))]))
    }

    /// All normal subgroups, sorted by order and then lexicographically.
    pub fn normal_subgroups(&self) -> Vec<Subgroup> {
        let mut found: Vec<Subgroup> = vec![self.trivial()];
        for cls in self.conjugacy_classes() {
            let n = self.generated(&cls);
            if !found.contains(&n) {
                found.push(n);
            }
        }
        // close under joins
        let mut i = 0;
        while i < found.len() {
            for j in 0..i {
                let mut u = found[i].clone();
                u.extend_from_slice(&found[j]);
                let n = self.generated(&u);
                if !found.contains(&n) {
                    found.push(n);
                }
            }
            i += 1;
        }
        found.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        found
    }

    /// The subgroup `h` as a group in its own right.
    pub fn subgroup_group(&self, h: &[usize]) -> Group {
        let pos: HashMap<usize, usize> = h.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let table = h.iter().flat_map(|&a| h.iter().map(move |&b| (a, b))).map(|(a, b)| pos[&self.mul(a, b)] as u32).collect();
        Group::from_table(h.len(), table).expect("subgroup")
    }

    pub fn is_cyclic(&self) -> bool {
        (0..self.order).any(|a| self.element_order(a) == self.order)
    }

    /// Dihedral of order `2m` with `m ≥ 2` (so the Klein group counts as dihedral of order 4).
    pub fn is_dihedral(&self) -> bool {
        if self.order < 4 || self.order % 2 != 0 {
            return false;
        }
        let m = self.order / 2;
        (0..self.order).filter(|&r| self.element_order(r) == m).any(|r| {
            let rot = self.generated(&[r]);
            let r_inv = self.inv(r);
            (0..self.order)
                .filter(|s| rot.binary_search(s).is_err())
                .any(|s| self.element_order(s) == 2 && self.mul(self.mul(s, r), s) == r_inv)
        })
    }

    pub fn structure(&self) -> Structure {
        let n = self.order;
        let nonabelian = !self.is_abelian();
        let centerless = self.center().len() == 1;
        let involutions = (0..n).filter(|&a| self.element_order(a) == 2).count();
        if n == 1 {
            Structure::Trivial
        } else if self.is_cyclic() {
            Structure::Cyclic(n)
        } else if n == 4 {
            Structure::Klein
        } else if n == 8 && nonabelian && involutions == 1 {
            Structure::Quaternion
        } else if nonabelian && centerless && [6, 24, 120].contains(&n) {
            Structure::Symmetric(match n {
                6 => 3,
                24 => 4,
                _ => 5,
            })
        } else if nonabelian && centerless && [12, 60].contains(&n) {
            Structure::Alternating(if n == 12 { 4 } else { 5 })
        } else if self.is_dihedral() {
            Structure::Dihedral(n)
        } else {
            Structure::Other(n)
        }
    }
}

/// Coarse isomorphism type, used for labelling.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Structure {
    Trivial,
    Cyclic(usize),
    Klein,
    Quaternion,
    Dihedral(usize),
    Symmetric(usize),
    Alternating(usize),
    Other(usize),
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Structure::Trivial => write!(f, "1"),
            Structure::Cyclic(n) => write!(f, "C{n}"),
            Structure::Klein => write!(f, "K"),
            Structure::Quaternion => write!(f, "Q8"),
            Structure::Dihedral(n) => write!(f, "D{n}"),
            Structure::Symmetric(k) => write!(f, "S{k}"),
            Structure::Alternating(k) => write!(f, "A{k}"),
            Structure::Other(n) => write!(f, "G{n}"),
        }
    }
}

/// A maximal subgroup of a partial semigroup: the H-class of an idempotent.
#[derive(Clone, Debug)]
pub struct MaxSubgroup {
    pub idempotent: usize,
    /// Semigroup indices of the group elements; group element `i` is `elems[i]`.
    pub elems: Vec<usize>,
    pub group: Group,
}

impl MaxSubgroup {
    pub fn new(s: &PartialSemigroup, green: &Green, e: usize) -> Result<MaxSubgroup, Error> {
        if !green.idempotent[e] {
            return Err(Error::Precondition(format!("element {e} is not idempotent")));
        }
        let elems = green.h_class(e);
        let pos: HashMap<usize, usize> = elems.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let mut table = Vec::with_capacity(elems.len() * elems.len());
        for &a in &elems {
            for &b in &elems {
                let c = s.mul(a, b).and_then(|c| pos.get(&c)).ok_or_else(|| Error::Structure("H-class not closed".into()))?;
                table.push(*c as u32);
            }
        }
        let group = Group::from_table(elems.len(), table)?;
        Ok(MaxSubgroup { idempotent: e, elems, group })
    }

    pub fn local(&self, x: usize) -> Option<usize> {
        self.elems.iter().position(|&y| y == x)
    }

    /// Semigroup indices of a subgroup.
    pub fn members(&self, n: &[usize]) -> Vec<usize> {
        n.iter().map(|&i| self.elems[i]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm_group(k: usize, pred: impl Fn(&[usize]) -> bool) -> Group {
        let mut perms: Vec<Vec<usize>> = Vec::new();
        let mut p: Vec<usize> = (0..k).collect();
        fn rec(p: &mut Vec<usize>, i: usize, out: &mut Vec<Vec<usize>>) {
            if i == p.len() {
                out.push(p.clone());
                return;
            }
            for j in i..p.len() {
                p.swap(i, j);
                rec(p, i + 1, out);
                p.swap(i, j);
            }
        }
        rec(&mut p, 0, &mut perms);
        perms.retain(|q| pred(q));
        perms.sort();
        Group::from_elements(&perms, |a, b| a.iter().map(|&i| b[i]).collect()).unwrap()
    }

    /// Independent oracle: normal subgroups are exactly the unions of conjugacy classes
    /// (containing the identity) that are closed under multiplication.
    fn normal_by_class_unions(g: &Group) -> Vec<Subgroup> {
        let classes: Vec<Vec<usize>> = g.conjugacy_classes().into_iter().filter(|c| c != &vec![g.identity()]).collect();
        let mut out = Vec::new();
        for mask in 0u32..(1 << classes.len()) {
            let mut h = vec![g.identity()];
            for (i, c) in classes.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    h.extend(c);
                }
            }
            h.sort_unstable();
            if g.is_subgroup(&h) {
                out.push(h);
            }
        }
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    #[test]
    fn symmetric_groups() {
        for (k, count) in [(2, 2), (3, 3), (4, 4), (5, 3)] {
            let g = perm_group(k, |_| true);
            let ns = g.normal_subgroups();
            assert_eq!(ns.len(), count, "S{k}");
            assert_eq!(ns, normal_by_class_unions(&g));
        }
        assert_eq!(perm_group(4, |_| true).structure(), Structure::Symmetric(4));
        assert_eq!(perm_group(3, |_| true).structure(), Structure::Symmetric(3));
    }

    #[test]
    fn dihedral_and_cyclic() {
        // symmetries of a square as permutations of its corners
        let d8 = perm_group(4, |p| {
            let d = |i: usize, j: usize| (4 + p[j] - p[i]) % 4;
            d(0, 1) == d(1, 2) && d(1, 2) == d(2, 3) && (d(0, 1) == 1 || d(0, 1) == 3)
        });
        assert_eq!(d8.order(), 8);
        assert!(d8.is_dihedral());
        assert_eq!(d8.structure(), Structure::Dihedral(8));
        assert_eq!(d8.normal_subgroups().len(), 6);
        assert_eq!(d8.normal_subgroups(), normal_by_class_unions(&d8));
        let c4 = perm_group(4, |p| (0..4).all(|i| p[(i + 1) % 4] == (p[i] + 1) % 4));
        assert_eq!(c4.structure(), Structure::Cyclic(4));
        assert_eq!(c4.normal_subgroups().len(), 3);
    }
}

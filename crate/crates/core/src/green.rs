//! Green's relations, the D-class order and the ideal chain.

use std::collections::HashMap;

use crate::psgrp::PartialSemigroup;
use crate::Error;

struct BitMatrix {
    words: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    fn new(n: usize) -> BitMatrix {
        let words = n.div_ceil(64);
        BitMatrix { words, bits: vec![0; words * n] }
    }
    fn set(&mut self, r: usize, c: usize) {
        self.bits[r * self.words + c / 64] |= 1 << (c % 64);
    }
    fn get(&self, r: usize, c: usize) -> bool {
        self.bits[r * self.words + c / 64] >> (c % 64) & 1 == 1
    }
}

fn dense_ids(keys: impl Iterator<Item = (u32, u32)>) -> (Vec<u32>, usize) {
    let mut map = HashMap::new();
    let ids: Vec<u32> = keys
        .map(|k| {
            let next = map.len() as u32;
            *map.entry(k).or_insert(next)
        })
        .collect();
    (ids, map.len())
}

/// Green's relations as class-id vectors. Ids are dense and numbered by first occurrence.
#[derive(Clone, Debug)]
pub struct Green {
    pub r: Vec<u32>,
    pub l: Vec<u32>,
    pub h: Vec<u32>,
    pub d: Vec<u32>,
    pub n_r: usize,
    pub n_l: usize,
    pub n_h: usize,
    pub d_members: Vec<Vec<usize>>,
    /// `d_leq[a][b]` iff `D_a ≤ D_b` in the J-order.
    pub d_leq: Vec<Vec<bool>>,
    pub idempotent: Vec<bool>,
}

impl Green {
    /// Computes R, L, H, D and the J-order. Fails if `D ≠ J` or `R∘L ≠ L∘R`.
    pub fn compute(s: &PartialSemigroup) -> Result<Green, Error> {
        let n = s.n();
        let mut right = BitMatrix::new(n);
        let mut left = BitMatrix::new(n);
        for x in 0..n {
            right.set(x, x);
            left.set(x, x);
            for &z in s.row(x) {
                right.set(x, z as usize);
            }
            for &y in s.left_of(x) {
                left.set(x, s.mul_unchecked(y as usize, x));
            }
        }
        let classes = |m: &BitMatrix, reach: &dyn Fn(usize) -> Vec<usize>| {
            let mut id = vec![u32::MAX; n];
            let mut next = 0u32;
            for x in 0..n {
                if id[x] != u32::MAX {
                    continue;
                }
                id[x] = next;
                for y in reach(x) {
                    if id[y] == u32::MAX && m.get(y, x) {
                        id[y] = next;
                    }
                }
                next += 1;
            }
            (id, next as usize)
        };
        let (r, n_r) = classes(&right, &|x| s.row(x).iter().map(|&z| z as usize).collect());
        let (l, n_l) =
            classes(&left, &|x| s.left_of(x).iter().map(|&y| s.mul_unchecked(y as usize, x)).collect());
        let (h, n_h) = dense_ids((0..n).map(|x| (r[x], l[x])));

        // D = R ∨ L
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut first_r = vec![usize::MAX; n_r];
        let mut first_l = vec![usize::MAX; n_l];
        for x in 0..n {
            for (f, c) in [(&mut first_r, r[x]), (&mut first_l, l[x])] {
                if f[c as usize] == usize::MAX {
                    f[c as usize] = x;
                } else {
                    let (a, b) = (find(&mut parent, f[c as usize]), find(&mut parent, x));
                    parent[a] = b;
                }
            }
        }
        let (d, n_d) = dense_ids((0..n).map(|x| (find(&mut parent, x) as u32, 0)));
        let mut d_members = vec![Vec::new(); n_d];
        for x in 0..n {
            d_members[d[x] as usize].push(x);
        }
        for (k, mem) in d_members.iter().enumerate() {
            let count = |ids: &[u32]| {
                let mut v: Vec<u32> = mem.iter().map(|&x| ids[x]).collect();
                v.sort_unstable();
                v.dedup();
                v.len()
            };
            if count(&h) != count(&r) * count(&l) {
                return Err(Error::Structure(format!("R∘L ≠ L∘R on D-class {k}")));
            }
        }

        // J-order by two-sided reachability from each D-class representative
        let mut d_leq = vec![vec![false; n_d]; n_d];
        for b in 0..n_d {
            let mut seen = vec![false; n];
            let start = d_members[b][0];
            seen[start] = true;
            let mut stack = vec![start];
            while let Some(x) = stack.pop() {
                let lefts = s.left_of(x).iter().map(|&y| s.mul_unchecked(y as usize, x));
                for z in s.row(x).iter().map(|&z| z as usize).chain(lefts) {
                    if !seen[z] {
                        seen[z] = true;
                        stack.push(z);
                    }
                }
            }
            for a in 0..n_d {
                d_leq[a][b] = seen[d_members[a][0]];
            }
        }
        for a in 0..n_d {
            for b in 0..a {
                if d_leq[a][b] && d_leq[b][a] {
                    return Err(Error::Structure(format!("D ≠ J: D-classes {a} and {b} are J-related")));
                }
            }
        }
        let idempotent = (0..n).map(|x| s.mul(x, x) == Some(x)).collect();
        Ok(Green { r, l, h, d, n_r, n_l, n_h, d_members, d_leq, idempotent })
    }

    pub fn n_d(&self) -> usize {
        self.d_members.len()
    }

    pub fn h_class(&self, x: usize) -> Vec<usize> {
        (0..self.h.len()).filter(|&y| self.h[y] == self.h[x]).collect()
    }

    pub fn d_is_regular(&self, k: usize) -> bool {
        self.d_members[k].iter().any(|&x| self.idempotent[x])
    }

    pub fn is_regular(&self) -> bool {
        (0..self.n_d()).all(|k| self.d_is_regular(k))
    }

    /// `(x, xa) ∈ J ⇒ (x, xa) ∈ R` and the dual statement.
    pub fn is_stable(&self, s: &PartialSemigroup) -> bool {
        (0..s.n()).all(|x| {
            s.row(x).iter().all(|&z| self.d[z as usize] != self.d[x] || self.r[z as usize] == self.r[x])
                && s.left_of(x).iter().all(|&y| {
                    let z = s.mul_unchecked(y as usize, x);
                    self.d[z] != self.d[x] || self.l[z] == self.l[x]
                })
        })
    }

    /// D-class ids from bottom to top when the J-order is a chain.
    pub fn chain(&self) -> Option<Vec<usize>> {
        let n_d = self.n_d();
        let mut order: Vec<usize> = (0..n_d).collect();
        order.sort_by_key(|&b| (0..n_d).filter(|&a| self.d_leq[a][b]).count());
        let total = (0..n_d).all(|a| (0..n_d).all(|b| self.d_leq[a][b] || self.d_leq[b][a]));
        total.then_some(order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elements::{Family, FamilySpec};
    use std::collections::BTreeSet;

    fn build(f: Family, objs: &[usize]) -> PartialSemigroup {
        let e = FamilySpec::new(f, objs).generate(usize::MAX).unwrap();
        PartialSemigroup::from_elements(&e, objs.len()).unwrap()
    }

    /// Naive principal one-sided ideals straight from the definition.
    fn naive_r(s: &PartialSemigroup, x: usize) -> BTreeSet<usize> {
        let mut set: BTreeSet<usize> = (0..s.n()).filter_map(|y| s.mul(x, y)).collect();
        set.insert(x);
        set
    }

    fn naive_l(s: &PartialSemigroup, x: usize) -> BTreeSet<usize> {
        let mut set: BTreeSet<usize> = (0..s.n()).filter_map(|y| s.mul(y, x)).collect();
        set.insert(x);
        set
    }

    #[test]
    fn matches_definitions() {
        for (f, objs) in [(Family::T, vec![3]), (Family::B, vec![1, 3]), (Family::P, vec![2])] {
            let s = build(f, &objs);
            let g = Green::compute(&s).unwrap();
            for x in 0..s.n() {
                for y in 0..s.n() {
                    assert_eq!(g.r[x] == g.r[y], naive_r(&s, x) == naive_r(&s, y));
                    assert_eq!(g.l[x] == g.l[y], naive_l(&s, x) == naive_l(&s, y));
                }
            }
            assert!(g.is_stable(&s));
            assert!(g.is_regular());
            assert!(g.chain().is_some());
        }
    }

    #[test]
    fn transformation_ranks_are_d_classes() {
        let e = FamilySpec::new(Family::T, &[4]).generate(usize::MAX).unwrap();
        let s = PartialSemigroup::from_elements(&e, 1).unwrap();
        let g = Green::compute(&s).unwrap();
        assert_eq!(g.n_d(), 4);
        for x in 0..s.n() {
            for y in 0..s.n() {
                assert_eq!(g.d[x] == g.d[y], e[x].rank() == e[y].rank());
            }
        }
        let chain = g.chain().unwrap();
        let ranks: Vec<usize> = chain.iter().map(|&k| e[g.d_members[k][0]].rank()).collect();
        assert_eq!(ranks, vec![1, 2, 3, 4]);
    }
}

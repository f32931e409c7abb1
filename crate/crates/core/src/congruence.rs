//! Congruences as canonical class vectors, principal closure and full lattice enumeration.

use std::collections::HashMap;
use std::hash::Hash;

use rayon::prelude::*;

use crate::green::Green;
use crate::psgrp::PartialSemigroup;
use crate::Error;

pub const MAX_LATTICE_ELEMENTS: usize = 2500;
pub const MAX_CONGRUENCES: usize = 100_000;

#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    pub fn new(n: usize) -> UnionFind {
        UnionFind { parent: (0..n as u32).collect() }
    }

    pub fn from_congruence(c: &Congruence) -> UnionFind {
        UnionFind { parent: c.class.clone() }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let g = self.parent[self.parent[x] as usize];
            self.parent[x] = g;
            x = g as usize;
        }
        x
    }

    /// Returns false if already joined.
    pub fn union(&mut self, x: usize, y: usize) -> bool {
        let (a, b) = (self.find(x), self.find(y));
        if a == b {
            return false;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        self.parent[hi] = lo as u32;
        true
    }

    pub fn into_congruence(mut self) -> Congruence {
        let n = self.parent.len();
        let class = (0..n).map(|x| self.find(x) as u32).collect();
        Congruence { class }
    }
}

/// An equivalence on `0..n`, stored with each element mapped to the least element of its class.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Congruence {
    class: Vec<u32>,
}

impl Congruence {
    pub fn identity(n: usize) -> Congruence {
        Congruence { class: (0..n as u32).collect() }
    }

    /// Equivalence whose classes are the fibres of `key`.
    pub fn from_key<K: Hash + Eq>(n: usize, key: impl Fn(usize) -> K) -> Congruence {
        let mut first: HashMap<K, u32> = HashMap::new();
        let class = (0..n).map(|x| *first.entry(key(x)).or_insert(x as u32)).collect();
        Congruence { class }
    }

    /// The universal relation on each hom-set.
    pub fn universal(s: &PartialSemigroup) -> Congruence {
        Self::from_key(s.n(), |x| (s.bd(x), s.br(x)))
    }

    pub fn n(&self) -> usize {
        self.class.len()
    }

    pub fn rep(&self, x: usize) -> usize {
        self.class[x] as usize
    }

    pub fn rel(&self, x: usize, y: usize) -> bool {
        self.class[x] == self.class[y]
    }

    pub fn n_classes(&self) -> usize {
        self.class.iter().enumerate().filter(|&(x, &c)| x == c as usize).count()
    }

    pub fn is_identity(&self) -> bool {
        self.class.iter().enumerate().all(|(x, &c)| x == c as usize)
    }

    pub fn class_vec(&self) -> &[u32] {
        &self.class
    }

    /// Classes in order of their least element, each sorted.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut slot = vec![usize::MAX; self.n()];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for x in 0..self.n() {
            let r = self.rep(x);
            if slot[r] == usize::MAX {
                slot[r] = out.len();
                out.push(Vec::new());
            }
            out[slot[r]].push(x);
        }
        out
    }

    /// Pairs `(x, rep(x))` with `x ≠ rep(x)`; these generate the equivalence.
    pub fn spanning_pairs(&self) -> Vec<(u32, u32)> {
        self.class
            .iter()
            .enumerate()
            .filter(|&(x, &c)| x != c as usize)
            .map(|(x, &c)| (x as u32, c))
            .collect()
    }

    pub fn leq(&self, other: &Congruence) -> bool {
        self.class.iter().enumerate().all(|(x, &c)| other.class[x] == other.class[c as usize])
    }

    pub fn join(&self, other: &Congruence) -> Congruence {
        let mut uf = UnionFind::from_congruence(self);
        for (x, c) in other.spanning_pairs() {
            uf.union(x as usize, c as usize);
        }
        uf.into_congruence()
    }

    pub fn meet(&self, other: &Congruence) -> Congruence {
        Self::from_key(self.n(), |x| (self.class[x], other.class[x]))
    }

    /// Checks that classes lie inside hom-sets and are compatible with all products.
    pub fn is_congruence(&self, s: &PartialSemigroup) -> bool {
        self.n() == s.n()
            && (0..s.n()).into_par_iter().all(|x| {
                let c = self.rep(x);
                if c == x {
                    return true;
                }
                s.same_hom(x, c)
                    && s.right_of(x).iter().all(|&g| self.rel(s.mul_unchecked(x, g as usize), s.mul_unchecked(c, g as usize)))
                    && s.left_of(x).iter().all(|&g| self.rel(s.mul_unchecked(g as usize, x), s.mul_unchecked(g as usize, c)))
            })
    }

    /// Restriction to a subset, renumbered in the order of `keep`.
    pub fn restrict(&self, keep: &[usize]) -> Congruence {
        Self::from_key(keep.len(), |i| self.class[keep[i]])
    }

    /// Extends a relation on a subset (given by `embed`) to `0..n` by the identity elsewhere.
    pub fn extend(&self, n: usize, embed: &[usize]) -> Congruence {
        let mut uf = UnionFind::new(n);
        for (x, c) in self.spanning_pairs() {
            uf.union(embed[x as usize], embed[c as usize]);
        }
        uf.into_congruence()
    }

    /// Union of congruences whose non-trivial classes have pairwise disjoint supports.
    /// Fails if two parts both move some element, since the union need not be transitive then.
    pub fn union_disjoint(parts: &[&Congruence]) -> Result<Congruence, Error> {
        let n = parts.first().map_or(0, |c| c.n());
        let mut owner = vec![usize::MAX; n];
        let mut class = vec![0u32; n];
        for x in 0..n {
            class[x] = x as u32;
        }
        for (i, c) in parts.iter().enumerate() {
            let mut size = vec![0u32; n];
            c.class.iter().for_each(|&r| size[r as usize] += 1);
            for x in 0..n {
                let r = c.class[x];
                if size[r as usize] > 1 {
                    if owner[x] != usize::MAX && owner[x] != i {
                        return Err(Error::Precondition(format!("parts {} and {i} overlap at element {x}", owner[x])));
                    }
                    owner[x] = i;
                    class[x] = r;
                }
            }
        }
        Ok(Congruence { class })
    }
}

/// Principal-congruence engine: closes pair sets under translation by a generating set.
pub struct Closure<'a> {
    s: &'a PartialSemigroup,
    gens: Vec<usize>,
}

impl<'a> Closure<'a> {
    /// Generators are chosen greedily from the top of the J-order down.
    pub fn new(s: &'a PartialSemigroup, green: &Green) -> Closure<'a> {
        let height: Vec<usize> = (0..green.n_d()).map(|b| (0..green.n_d()).filter(|&a| green.d_leq[a][b]).count()).collect();
        let mut order: Vec<usize> = (0..s.n()).collect();
        order.sort_by_key(|&x| (std::cmp::Reverse(height[green.d[x] as usize]), x));
        let gens = s.generating_set(&order);
        Closure { s, gens }
    }

    pub fn semigroup(&self) -> &PartialSemigroup {
        self.s
    }

    pub fn generators(&self) -> &[usize] {
        &self.gens
    }

    /// Smallest congruence containing `base` (already a congruence) and `pairs`.
    pub fn extend(&self, base: &Congruence, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Congruence, Error> {
        let s = self.s;
        let mut uf = UnionFind::from_congruence(base);
        let mut work: Vec<(usize, usize)> = Vec::new();
        for (x, y) in pairs {
            if !s.same_hom(x, y) {
                return Err(Error::Validation(format!("elements {x} and {y} lie in different hom-sets")));
            }
            work.push((x, y));
        }
        while let Some((x, y)) = work.pop() {
            if !uf.union(x, y) {
                continue;
            }
            for &g in &self.gens {
                if let (Some(a), Some(b)) = (s.mul(x, g), s.mul(y, g)) {
                    work.push((a, b));
                }
                if let (Some(a), Some(b)) = (s.mul(g, x), s.mul(g, y)) {
                    work.push((a, b));
                }
            }
        }
        Ok(uf.into_congruence())
    }

    pub fn generate(&self, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Congruence, Error> {
        self.extend(&Congruence::identity(self.s.n()), pairs)
    }

    pub fn principal(&self, x: usize, y: usize) -> Result<Congruence, Error> {
        self.generate([(x, y)])
    }

    /// Largest congruence contained in the equivalence `theta` (greatest fixpoint refinement).
    pub fn largest_below(&self, theta: &Congruence) -> Congruence {
        let s = self.s;
        let mut cur = theta.clone();
        loop {
            let next = Congruence::from_key(s.n(), |x| {
                let mut key = Vec::with_capacity(2 * self.gens.len() + 1);
                key.push(cur.class[x]);
                for &g in &self.gens {
                    key.push(s.mul(x, g).map_or(u32::MAX, |z| cur.class[z]));
                    key.push(s.mul(g, x).map_or(u32::MAX, |z| cur.class[z]));
                }
                key
            });
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }
}

/// The H-relation as an equivalence.
pub fn h_relation(green: &Green) -> Congruence {
    Congruence::from_key(green.h.len(), |x| green.h[x])
}

/// The largest congruence contained in H.
pub fn zeta(closure: &Closure, green: &Green) -> Congruence {
    closure.largest_below(&h_relation(green))
}

/// Whether `sigma ∪ Δ_T` is a congruence on `t`, where `embed` maps the ideal into `t`.
pub fn is_liftable(sigma: &Congruence, t: &PartialSemigroup, embed: &[usize]) -> bool {
    sigma.extend(t.n(), embed).is_congruence(t)
}

#[derive(Clone, Debug)]
pub struct LatticeOptions {
    pub force: bool,
    pub max_elements: usize,
    pub max_congruences: usize,
}

impl Default for LatticeOptions {
    fn default() -> Self {
        LatticeOptions { force: false, max_elements: MAX_LATTICE_ELEMENTS, max_congruences: MAX_CONGRUENCES }
    }
}

/// A set of congruences with its Hasse diagram. Nodes are sorted by decreasing number of classes,
/// then by class vector, so the identity is node 0 whenever it is present.
#[derive(Clone, Debug)]
pub struct CongLattice {
    pub congs: Vec<Congruence>,
    /// `(lower, upper)` cover pairs, sorted.
    pub covers: Vec<(usize, usize)>,
    index: HashMap<Congruence, usize>,
}

impl CongLattice {
    pub fn len(&self) -> usize {
        self.congs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.congs.is_empty()
    }

    pub fn find(&self, c: &Congruence) -> Option<usize> {
        self.index.get(c).copied()
    }

    /// Builds the Hasse diagram of an arbitrary finite set by brute force comparison.
    pub fn from_set(congs: Vec<Congruence>) -> CongLattice {
        let mut congs = congs;
        congs.sort_by(|a, b| b.n_classes().cmp(&a.n_classes()).then_with(|| a.cmp(b)));
        congs.dedup();
        let n = congs.len();
        let below: Vec<Vec<usize>> = (0..n)
            .into_par_iter()
            .map(|j| (0..n).filter(|&i| i != j && congs[i].leq(&congs[j])).collect())
            .collect();
        let mut covers = Vec::new();
        for j in 0..n {
            for &i in &below[j] {
                if !below[j].iter().any(|&k| k != i && below[k].contains(&i)) {
                    covers.push((i, j));
                }
            }
        }
        covers.sort_unstable();
        let index = congs.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        CongLattice { congs, covers, index }
    }

    fn from_parts(congs: Vec<Congruence>, covers: Vec<(usize, usize)>) -> CongLattice {
        let mut order: Vec<usize> = (0..congs.len()).collect();
        order.sort_by(|&a, &b| congs[b].n_classes().cmp(&congs[a].n_classes()).then_with(|| congs[a].cmp(&congs[b])));
        let mut pos = vec![0; congs.len()];
        for (i, &o) in order.iter().enumerate() {
            pos[o] = i;
        }
        let mut covers: Vec<(usize, usize)> = covers.into_iter().map(|(a, b)| (pos[a], pos[b])).collect();
        covers.sort_unstable();
        let mut slots: Vec<Option<Congruence>> = congs.into_iter().map(Some).collect();
        let congs: Vec<Congruence> = order.iter().map(|&o| slots[o].take().unwrap()).collect();
        let index = congs.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        CongLattice { congs, covers, index }
    }

    pub fn upper_covers(&self, i: usize) -> Vec<usize> {
        self.covers.iter().filter(|&&(a, _)| a == i).map(|&(_, b)| b).collect()
    }
}

struct Principal {
    cong: Congruence,
    seed: (usize, usize),
    pairs: Vec<(u32, u32)>,
}

/// All distinct principal congruences `cg(x, y)`, `x < y` in a common hom-set, with their seeds.
pub fn principal_congruences(closure: &Closure) -> Vec<(Congruence, (usize, usize))> {
    distinct_principals(closure).into_iter().map(|p| (p.cong, p.seed)).collect()
}

fn distinct_principals(closure: &Closure) -> Vec<Principal> {
    let s = closure.semigroup();
    let n = s.n();
    let xs: Vec<usize> = (0..n).collect();
    let chunks: Vec<Vec<(Congruence, (usize, usize))>> = xs
        .par_chunks(16)
        .map(|chunk| {
            let mut local: HashMap<Congruence, (usize, usize)> = HashMap::new();
            let mut out = Vec::new();
            for &x in chunk {
                for y in x + 1..n {
                    if !s.same_hom(x, y) {
                        continue;
                    }
                    let c = closure.principal(x, y).expect("same hom-set");
                    if !local.contains_key(&c) {
                        local.insert(c.clone(), (x, y));
                        out.push((c, (x, y)));
                    }
                }
            }
            out
        })
        .collect();
    let mut seen: HashMap<Congruence, ()> = HashMap::new();
    let mut out = Vec::new();
    for (c, seed) in chunks.into_iter().flatten() {
        if seen.insert(c.clone(), ()).is_none() {
            let pairs = c.spanning_pairs();
            out.push(Principal { cong: c, seed, pairs });
        }
    }
    out
}

/// Every congruence of `s`, found as joins of principal congruences, with covers.
pub fn all_congruences(closure: &Closure, opts: &LatticeOptions) -> Result<CongLattice, Error> {
    let s = closure.semigroup();
    let n = s.n();
    if n > opts.max_elements && !opts.force {
        return Err(Error::Guard(format!(
            "refusing to enumerate congruences of {n} elements (limit {}); use force to override",
            opts.max_elements
        )));
    }
    let principals = distinct_principals(closure);
    let mut nodes: Vec<Congruence> = vec![Congruence::identity(n)];
    let mut index: HashMap<Congruence, usize> = HashMap::new();
    index.insert(nodes[0].clone(), 0);
    let mut covers: Vec<(usize, usize)> = Vec::new();
    let mut frontier: Vec<usize> = vec![0];
    while !frontier.is_empty() {
        let results: Vec<Vec<Congruence>> = frontier
            .par_iter()
            .map(|&i| {
                let c = &nodes[i];
                let mut cands: Vec<Congruence> = Vec::new();
                for p in &principals {
                    if c.rel(p.seed.0, p.seed.1) {
                        continue;
                    }
                    let mut uf = UnionFind::from_congruence(c);
                    for &(x, y) in &p.pairs {
                        uf.union(x as usize, y as usize);
                    }
                    let j = uf.into_congruence();
                    if !cands.contains(&j) {
                        cands.push(j);
                    }
                }
                let minimal: Vec<Congruence> = cands
                    .iter()
                    .filter(|d| !cands.iter().any(|e| e != *d && e.leq(d)))
                    .cloned()
                    .collect();
                minimal
            })
            .collect();
        let mut next = Vec::new();
        for (&i, ups) in frontier.iter().zip(results) {
            for d in ups {
                let j = match index.get(&d) {
                    Some(&j) => j,
                    None => {
                        let j = nodes.len();
                        index.insert(d.clone(), j);
                        nodes.push(d);
                        next.push(j);
                        if nodes.len() > opts.max_congruences && !opts.force {
                            return Err(Error::Guard(format!(
                                "more than {} congruences; use force to override",
                                opts.max_congruences
                            )));
                        }
                        j
                    }
                };
                covers.push((i, j));
            }
        }
        frontier = next;
    }
    Ok(CongLattice::from_parts(nodes, covers))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elements::{Family, FamilySpec};

    fn setup(f: Family, objs: &[usize]) -> (PartialSemigroup, Green) {
        let e = FamilySpec::new(f, objs).generate(usize::MAX).unwrap();
        let s = PartialSemigroup::from_elements(&e, objs.len()).unwrap();
        let g = Green::compute(&s).unwrap();
        (s, g)
    }

    #[test]
    fn lattice_basics() {
        let (s, g) = setup(Family::T, &[3]);
        let cl = Closure::new(&s, &g);
        let lat = all_congruences(&cl, &LatticeOptions::default()).unwrap();
        // the classical count for the full transformation monoid of degree 3
        assert_eq!(lat.len(), 7);
        assert!(lat.congs[0].is_identity());
        assert_eq!(lat.congs.last().unwrap(), &Congruence::universal(&s));
        for c in &lat.congs {
            assert!(c.is_congruence(&s));
        }
        let brute = CongLattice::from_set(lat.congs.clone());
        assert_eq!(brute.covers, lat.covers);
    }

    #[test]
    fn zeta_of_symmetric_group_part() {
        let (s, g) = setup(Family::T, &[3]);
        let cl = Closure::new(&s, &g);
        let z = zeta(&cl, &g);
        assert!(z.is_congruence(&s));
        assert!(z.leq(&h_relation(&g)));
    }

    #[test]
    fn join_meet() {
        let a = Congruence::from_key(4, |x| x / 2);
        let b = Congruence::from_key(4, |x| (x + 1) % 4 / 2);
        assert_eq!(a.join(&b).n_classes(), 1);
        assert!(a.meet(&b).is_identity());
        assert!(a.meet(&b).leq(&a));
        assert!(a.leq(&a.join(&b)));
    }
}

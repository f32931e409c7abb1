//! Finite posets given by cover relations: standard constructions and isomorphism tests.

use std::collections::HashMap;

use crate::congruence::CongLattice;
use crate::constructions::set_partitions;

/// A finite poset stored by its Hasse diagram and a reachability matrix.
#[derive(Clone, Debug)]
pub struct Poset {
    n: usize,
    covers: Vec<(usize, usize)>,
    up: Vec<Vec<usize>>,
    down: Vec<Vec<usize>>,
    leq: Vec<Vec<u64>>,
}

impl Poset {
    /// `covers` are `(lower, upper)` pairs; they must form a DAG.
    pub fn from_covers(n: usize, covers: &[(usize, usize)]) -> Poset {
        let mut covers = covers.to_vec();
        covers.sort_unstable();
        covers.dedup();
        let mut up = vec![Vec::new(); n];
        let mut down = vec![Vec::new(); n];
        for &(a, b) in &covers {
            up[a].push(b);
            down[b].push(a);
        }
        // topological order from the top down
        let mut indeg: Vec<usize> = up.iter().map(|u| u.len()).collect();
        let mut stack: Vec<usize> = (0..n).filter(|&x| indeg[x] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(x) = stack.pop() {
            order.push(x);
            for &d in &down[x] {
                indeg[d] -= 1;
                if indeg[d] == 0 {
                    stack.push(d);
                }
            }
        }
        assert_eq!(order.len(), n, "cover relation has a cycle");
        let words = n.div_ceil(64).max(1);
        let mut leq = vec![vec![0u64; words]; n];
        for &x in order.iter().rev() {
            // every element below x has been processed
            let mut row = vec![0u64; words];
            row[x / 64] |= 1 << (x % 64);
            for &d in &down[x] {
                for (r, s) in row.iter_mut().zip(&leq[d]) {
                    *r |= *s;
                }
            }
            leq[x] = row;
        }
        Poset { n, covers, up, down, leq }
    }

    /// Builds the Hasse diagram of an order given as a predicate.
    pub fn from_leq(n: usize, leq: impl Fn(usize, usize) -> bool) -> Poset {
        let below: Vec<Vec<usize>> = (0..n).map(|j| (0..n).filter(|&i| i != j && leq(i, j)).collect()).collect();
        let mut covers = Vec::new();
        for j in 0..n {
            for &i in &below[j] {
                if !below[j].iter().any(|&k| k != i && below[k].contains(&i)) {
                    covers.push((i, j));
                }
            }
        }
        Poset::from_covers(n, &covers)
    }

    pub fn from_congruences(l: &CongLattice) -> Poset {
        Poset::from_covers(l.len(), &l.covers)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    /// `x ≤ y`.
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[y][x / 64] >> (x % 64) & 1 == 1
    }

    pub fn chain(k: usize) -> Poset {
        let covers: Vec<(usize, usize)> = (1..k).map(|i| (i - 1, i)).collect();
        Poset::from_covers(k, &covers)
    }

    /// The partition lattice `Eq(n)`; node `i` is the `i`-th restricted growth string.
    pub fn eq_lattice(n: usize) -> Poset {
        let parts = set_partitions(n);
        let index: HashMap<Vec<u8>, usize> = parts.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let mut covers = Vec::new();
        for (i, p) in parts.iter().enumerate() {
            let k = p.iter().map(|&x| x as usize + 1).max().unwrap_or(0);
            for a in 0..k {
                for b in a + 1..k {
                    let merged: Vec<u8> = p.iter().map(|&x| if x as usize == b { a as u8 } else { x }).collect();
                    let canon = canonical(&merged);
                    covers.push((i, index[&canon]));
                }
            }
        }
        Poset::from_covers(parts.len(), &covers)
    }

    /// Direct product; node `(i, j)` is `i * other.len() + j`.
    pub fn product(&self, other: &Poset) -> Poset {
        let m = other.n;
        let mut covers = Vec::new();
        for i in 0..self.n {
            for &(a, b) in &other.covers {
                covers.push((i * m + a, i * m + b));
            }
        }
        for &(a, b) in &self.covers {
            for j in 0..m {
                covers.push((a * m + j, b * m + j));
            }
        }
        Poset::from_covers(self.n * m, &covers)
    }

    /// Ordinal sum: every element of `self` below every element of `other`.
    pub fn ordinal_sum(&self, other: &Poset) -> Poset {
        let off = self.n;
        let mut covers = self.covers.clone();
        covers.extend(other.covers.iter().map(|&(a, b)| (a + off, b + off)));
        for t in self.maximal() {
            for b in other.minimal() {
                covers.push((t, b + off));
            }
        }
        Poset::from_covers(self.n + other.n, &covers)
    }

    /// `L^⊤`: a new top element above everything.
    pub fn adjoin_top(&self) -> Poset {
        self.ordinal_sum(&Poset::chain(1))
    }

    /// Piles `layers` on top of `base`: the bottom of the first layer is identified with the top of
    /// `base`, every later layer sits strictly above the previous one, and a new top caps the result.
    pub fn stack_lattices(base: &Poset, layers: &[Poset]) -> Poset {
        let mut acc = base.clone();
        for (i, layer) in layers.iter().enumerate() {
            if i == 0 {
                let top = acc.maximal()[0];
                let bottom = layer.minimal()[0];
                let off = acc.n;
                // layer node j maps to top if j is its bottom, otherwise to a fresh node
                let mut map = vec![0; layer.n];
                let mut next = off;
                for (j, m) in map.iter_mut().enumerate() {
                    if j == bottom {
                        *m = top;
                    } else {
                        *m = next;
                        next += 1;
                    }
                }
                let mut covers = acc.covers.clone();
                covers.extend(layer.covers.iter().map(|&(a, b)| (map[a], map[b])));
                acc = Poset::from_covers(next, &covers);
            } else {
                acc = acc.ordinal_sum(layer);
            }
        }
        acc.adjoin_top()
    }

    /// Inclusion order on a family of sorted sets.
    pub fn of_subsets(sets: &[Vec<usize>]) -> Poset {
        Poset::from_leq(sets.len(), |i, j| sets[i].iter().all(|x| sets[j].binary_search(x).is_ok()))
    }

    pub fn is_chain(&self) -> bool {
        (0..self.n).all(|x| (0..x).all(|y| self.leq(x, y) || self.leq(y, x)))
    }

    pub fn maximal(&self) -> Vec<usize> {
        (0..self.n).filter(|&x| self.up[x].is_empty()).collect()
    }

    pub fn minimal(&self) -> Vec<usize> {
        (0..self.n).filter(|&x| self.down[x].is_empty()).collect()
    }

    pub fn is_lattice(&self) -> bool {
        if self.minimal().len() != 1 || self.maximal().len() != 1 {
            return false;
        }
        (0..self.n).all(|x| {
            (0..x).all(|y| {
                let ub: Vec<usize> = (0..self.n).filter(|&z| self.leq(x, z) && self.leq(y, z)).collect();
                ub.iter().filter(|&&z| ub.iter().all(|&w| self.leq(z, w))).count() == 1
            })
        })
    }

    /// Checks that `map` is a bijection carrying covers exactly onto covers.
    pub fn is_isomorphism(&self, other: &Poset, map: &[usize]) -> bool {
        if self.n != other.n || map.len() != self.n {
            return false;
        }
        let mut seen = vec![false; self.n];
        for &m in map {
            if m >= self.n || std::mem::replace(&mut seen[m], true) {
                return false;
            }
        }
        let mut image: Vec<(usize, usize)> = self.covers.iter().map(|&(a, b)| (map[a], map[b])).collect();
        image.sort_unstable();
        image == other.covers
    }

    fn invariant(&self, x: usize) -> (usize, usize, usize, usize) {
        let below = (0..self.n).filter(|&y| self.leq(y, x)).count();
        let above = (0..self.n).filter(|&y| self.leq(x, y)).count();
        (self.down[x].len(), self.up[x].len(), below, above)
    }

    /// Backtracking isomorphism search guided by degree and principal ideal sizes.
    pub fn find_isomorphism(&self, other: &Poset) -> Option<Vec<usize>> {
        if self.n != other.n || self.covers.len() != other.covers.len() {
            return None;
        }
        let inv_a: Vec<_> = (0..self.n).map(|x| self.invariant(x)).collect();
        let inv_b: Vec<_> = (0..other.n).map(|x| other.invariant(x)).collect();
        let mut sa = inv_a.clone();
        let mut sb = inv_b.clone();
        sa.sort_unstable();
        sb.sort_unstable();
        if sa != sb {
            return None;
        }
        // assign bottom-up so that lower covers are already placed
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&x| (inv_a[x].2, x));
        let mut map = vec![usize::MAX; self.n];
        let mut used = vec![false; other.n];
        fn rec(
            k: usize,
            order: &[usize],
            a: &Poset,
            b: &Poset,
            inv_a: &[(usize, usize, usize, usize)],
            inv_b: &[(usize, usize, usize, usize)],
            map: &mut Vec<usize>,
            used: &mut Vec<bool>,
        ) -> bool {
            if k == order.len() {
                return true;
            }
            let x = order[k];
            for y in 0..b.n {
                if used[y] || inv_a[x] != inv_b[y] {
                    continue;
                }
                let ok = a.down[x].iter().all(|&d| map[d] != usize::MAX && b.down[y].contains(&map[d]));
                if !ok {
                    continue;
                }
                map[x] = y;
                used[y] = true;
                if rec(k + 1, order, a, b, inv_a, inv_b, map, used) {
                    return true;
                }
                map[x] = usize::MAX;
                used[y] = false;
            }
            false
        }
        rec(0, &order, self, other, &inv_a, &inv_b, &mut map, &mut used).then_some(map).filter(|m| self.is_isomorphism(other, m))
    }

    pub fn is_isomorphic(&self, other: &Poset) -> bool {
        self.find_isomorphism(other).is_some()
    }
}

fn canonical(p: &[u8]) -> Vec<u8> {
    let mut relabel = [u8::MAX; 256];
    let mut next = 0u8;
    p.iter()
        .map(|&x| {
            if relabel[x as usize] == u8::MAX {
                relabel[x as usize] = next;
                next += 1;
            }
            relabel[x as usize]
        })
        .collect()
}

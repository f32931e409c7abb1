use std::fmt;

/// A partition of `[m] ∪ [n]'`. Top vertex `i` is `i`, bottom vertex `j'` is `m + j`.
/// Blocks are stored as a restricted growth string, which makes the representation canonical.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Diagram {
    pub dom: u8,
    pub cod: u8,
    pub m: u8,
    pub n: u8,
    pub rgs: Vec<u8>,
}

fn find(p: &mut [u8], mut x: u8) -> u8 {
    while p[x as usize] != x {
        let g = p[p[x as usize] as usize];
        p[x as usize] = g;
        x = g;
    }
    x
}

fn canonical(labels: impl Iterator<Item = u8>, cap: usize) -> Vec<u8> {
    let mut relabel = vec![u8::MAX; cap];
    let mut next = 0u8;
    labels
        .map(|l| {
            let r = &mut relabel[l as usize];
            if *r == u8::MAX {
                *r = next;
                next += 1;
            }
            *r
        })
        .collect()
}

impl Diagram {
    pub fn from_blocks(dom: u8, cod: u8, m: usize, n: usize, blocks: &[Vec<usize>]) -> Diagram {
        let mut lab = vec![u8::MAX; m + n];
        for (b, blk) in blocks.iter().enumerate() {
            for &v in blk {
                lab[v] = b as u8;
            }
        }
        assert!(lab.iter().all(|&l| l != u8::MAX), "blocks must cover all vertices");
        Diagram { dom, cod, m: m as u8, n: n as u8, rgs: canonical(lab.into_iter(), blocks.len()) }
    }

    pub fn identity(obj: u8, k: usize) -> Diagram {
        let blocks: Vec<Vec<usize>> = (0..k).map(|i| vec![i, k + i]).collect();
        Diagram::from_blocks(obj, obj, k, k, &blocks)
    }

    pub fn n_blocks(&self) -> usize {
        self.rgs.iter().map(|&l| l as usize + 1).max().unwrap_or(0)
    }

    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut b = vec![Vec::new(); self.n_blocks()];
        for (v, &l) in self.rgs.iter().enumerate() {
            b[l as usize].push(v);
        }
        b
    }

    pub fn compose(&self, other: &Diagram) -> Diagram {
        debug_assert_eq!(self.cod, other.dom);
        debug_assert_eq!(self.n, other.m);
        let (m, k, n) = (self.m as usize, self.n as usize, other.n as usize);
        let total = m + k + n;
        let mut p: Vec<u8> = (0..total as u8).collect();
        let mut first = vec![u8::MAX; self.n_blocks().max(other.n_blocks())];
        // self occupies vertices 0..m+k, other occupies m..m+k+n
        for (v, &l) in self.rgs.iter().enumerate() {
            let f = &mut first[l as usize];
            if *f == u8::MAX {
                *f = v as u8;
            } else {
                let (a, b) = (find(&mut p, *f), find(&mut p, v as u8));
                p[a as usize] = b;
            }
        }
        first.iter_mut().for_each(|f| *f = u8::MAX);
        for (v, &l) in other.rgs.iter().enumerate() {
            let v = (v + m) as u8;
            let f = &mut first[l as usize];
            if *f == u8::MAX {
                *f = v;
            } else {
                let (a, b) = (find(&mut p, *f), find(&mut p, v));
                p[a as usize] = b;
            }
        }
        let outer: Vec<u8> = (0..m).chain(m + k..total).map(|v| find(&mut p, v as u8)).collect();
        Diagram { dom: self.dom, cod: other.cod, m: self.m, n: other.n, rgs: canonical(outer.into_iter(), total) }
    }

    fn block_kinds(&self) -> Vec<(bool, bool)> {
        let mut kinds = vec![(false, false); self.n_blocks()];
        for (v, &l) in self.rgs.iter().enumerate() {
            if v < self.m as usize {
                kinds[l as usize].0 = true;
            } else {
                kinds[l as usize].1 = true;
            }
        }
        kinds
    }

    /// Number of transversal blocks.
    pub fn rank(&self) -> usize {
        self.block_kinds().iter().filter(|&&(t, b)| t && b).count()
    }

    pub fn max_block(&self) -> usize {
        let mut c = vec![0usize; self.n_blocks()];
        for &l in &self.rgs {
            c[l as usize] += 1;
        }
        c.into_iter().max().unwrap_or(0)
    }

    /// Relabel vertices: new vertex `v` takes the block of old vertex `f(v)`.
    fn relabel(&self, f: impl Fn(usize) -> usize) -> Diagram {
        let total = self.rgs.len();
        let lab = (0..total).map(|v| self.rgs[f(v)]);
        Diagram { rgs: canonical(lab, total), ..self.clone() }
    }

    pub fn rotate(&self, s: usize, t: usize) -> Diagram {
        let (m, n) = (self.m as usize, self.n as usize);
        self.relabel(|v| if v < m { (v + s) % m } else { m + (v - m + t) % n })
    }

    /// Reflect the top row (left composition with the reversal permutation).
    pub fn flip_top(&self) -> Diagram {
        let m = self.m as usize;
        self.relabel(|v| if v < m { m - 1 - v } else { v })
    }

    pub fn flip_bottom(&self) -> Diagram {
        let (m, n) = (self.m as usize, self.n as usize);
        self.relabel(|v| if v < m { v } else { m + (n - 1 - (v - m)) })
    }

    /// Non-crossing with respect to the boundary order `1..m, n'..1'`.
    pub fn is_planar(&self) -> bool {
        let (m, n) = (self.m as usize, self.n as usize);
        let order = (0..m).chain((0..n).rev().map(|j| m + j));
        let mut remaining = vec![0usize; self.n_blocks()];
        for &l in &self.rgs {
            remaining[l as usize] += 1;
        }
        let mut open = vec![false; remaining.len()];
        let mut stack: Vec<u8> = Vec::new();
        for v in order {
            let l = self.rgs[v];
            if open[l as usize] {
                if stack.last() != Some(&l) {
                    return false;
                }
            } else if remaining[l as usize] > 1 {
                open[l as usize] = true;
                stack.push(l);
            }
            remaining[l as usize] -= 1;
            if remaining[l as usize] == 0 && open[l as usize] {
                stack.pop();
                open[l as usize] = false;
            }
        }
        true
    }

    pub fn is_anti_planar(&self) -> bool {
        self.flip_top().is_planar()
    }

    pub fn is_annular(&self) -> bool {
        let (m, n) = (self.m as usize, self.n as usize);
        (0..m).any(|s| (0..n).any(|t| self.rotate(s, t).is_planar()))
    }

    pub fn is_anti_annular(&self) -> bool {
        self.flip_top().is_annular()
    }

    /// Swap top and bottom rows.
    pub fn star(&self) -> Diagram {
        let (m, n) = (self.m as usize, self.n as usize);
        let total = m + n;
        let lab = (0..total).map(|v| if v < n { self.rgs[m + v] } else { self.rgs[v - n] });
        Diagram { dom: self.cod, cod: self.dom, m: self.n, n: self.m, rgs: canonical(lab, total) }
    }

    /// Horizontal juxtaposition: `other` is placed to the right of `self`.
    pub fn oplus(&self, other: &Diagram, dom: u8, cod: u8) -> Diagram {
        let (m1, n1, m2, n2) = (self.m as usize, self.n as usize, other.m as usize, other.n as usize);
        let off = self.n_blocks() as u8;
        let top = self.rgs[..m1].iter().copied().chain(other.rgs[..m2].iter().map(|&l| l + off));
        let bottom = self.rgs[m1..].iter().copied().chain(other.rgs[m2..].iter().map(|&l| l + off));
        let total = m1 + n1 + m2 + n2;
        Diagram { dom, cod, m: (m1 + m2) as u8, n: (n1 + n2) as u8, rgs: canonical(top.chain(bottom), total) }
    }

    /// The equivalence on top vertices induced by the blocks, as a growth string.
    pub fn ker(&self) -> Vec<u8> {
        let m = self.m as usize;
        canonical(self.rgs[..m].iter().copied(), self.rgs.len())
    }

    /// The equivalence on bottom vertices induced by the blocks, as a growth string.
    pub fn coker(&self) -> Vec<u8> {
        let m = self.m as usize;
        canonical(self.rgs[m..].iter().copied(), self.rgs.len())
    }

    /// Top vertices lying in transversals.
    pub fn domain(&self) -> Vec<usize> {
        let kinds = self.block_kinds();
        (0..self.m as usize).filter(|&v| kinds[self.rgs[v] as usize] == (true, true)).collect()
    }

    /// Bottom vertices (numbered from 0) lying in transversals.
    pub fn codomain(&self) -> Vec<usize> {
        let kinds = self.block_kinds();
        let m = self.m as usize;
        (0..self.n as usize).filter(|&j| kinds[self.rgs[m + j] as usize] == (true, true)).collect()
    }

    /// The projection onto rank 0: a single transversal is split into its upper and lower parts,
    /// and (for matchings) two transversals `{a, b'}, {c, d'}` become `{a, c}, {b', d'}`.
    /// Returns `None` above the retractable ranks (1 in general, 2 for matchings).
    pub fn retract_hat(&self, matching: bool) -> Option<Diagram> {
        let m = self.m as usize;
        let total = self.rgs.len();
        let kinds = self.block_kinds();
        let trans: Vec<u8> = (0..kinds.len() as u8).filter(|&b| kinds[b as usize] == (true, true)).collect();
        let fresh = kinds.len() as u8;
        match trans.len() {
            0 => Some(self.clone()),
            1 => {
                let lab = (0..total).map(|v| if v >= m && self.rgs[v] == trans[0] { fresh } else { self.rgs[v] });
                Some(Diagram { rgs: canonical(lab, total + 1), ..self.clone() })
            }
            2 if matching => {
                let lab = (0..total).map(|v| {
                    let l = self.rgs[v];
                    match (v < m, l == trans[0], l == trans[1]) {
                        (true, true, _) | (true, _, true) => trans[0],
                        (false, true, _) | (false, _, true) => trans[1],
                        _ => l,
                    }
                });
                Some(Diagram { rgs: canonical(lab, total), ..self.clone() })
            }
            _ => None,
        }
    }

    /// The permutation diagram of `π` on `k` points: `i` is joined to `π(i)'`.
    pub fn from_perm(obj: u8, perm: &[usize]) -> Diagram {
        let k = perm.len();
        let blocks: Vec<Vec<usize>> = (0..k).map(|i| vec![i, k + perm[i]]).collect();
        Diagram::from_blocks(obj, obj, k, k, &blocks)
    }

    /// Reads off `π` when the first `q` top vertices are matched to the first `q` bottom vertices.
    pub fn transversal_perm(&self, q: usize) -> Option<Vec<usize>> {
        let m = self.m as usize;
        (0..q)
            .map(|i| (0..q).find(|&j| self.rgs[i] == self.rgs[m + j]))
            .collect()
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.m as usize;
        let blocks = self.blocks();
        for (bi, b) in blocks.iter().enumerate() {
            if bi > 0 {
                write!(f, ",")?;
            }
            write!(f, "{{")?;
            for (i, &v) in b.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                if v < m {
                    write!(f, "{}", v + 1)?;
                } else {
                    write!(f, "{}'", v - m + 1)?;
                }
            }
            write!(f, "}}")?;
        }
        Ok(())
    }
}

/// Restrictions on block sizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Blocks {
    Any,
    AtMostTwo,
    ExactlyTwo,
}

/// Enumerates all diagrams `[m] -> [n]` with the given block restriction, calling `emit` for each.
/// Stops early (returning false) when `emit` returns false.
pub fn for_each_diagram(dom: u8, cod: u8, m: usize, n: usize, blocks: Blocks, mut emit: impl FnMut(Diagram) -> bool) -> bool {
    let total = m + n;
    match blocks {
        Blocks::Any => {
            let mut rgs = vec![0u8; total];
            fn rec(rgs: &mut Vec<u8>, i: usize, max: u8, mk: &mut dyn FnMut(&[u8]) -> bool) -> bool {
                if i == rgs.len() {
                    return mk(rgs);
                }
                for l in 0..=max {
                    rgs[i] = l;
                    let nmax = if l == max { max + 1 } else { max };
                    if !rec(rgs, i + 1, nmax, mk) {
                        return false;
                    }
                }
                true
            }
            if total == 0 {
                return emit(Diagram { dom, cod, m: 0, n: 0, rgs: vec![] });
            }
            rgs[0] = 0;
            rec(&mut rgs, 1, 1, &mut |r| emit(Diagram { dom, cod, m: m as u8, n: n as u8, rgs: r.to_vec() }))
        }
        Blocks::AtMostTwo | Blocks::ExactlyTwo => {
            let singles = blocks == Blocks::AtMostTwo;
            let mut lab = vec![u8::MAX; total];
            fn rec(lab: &mut Vec<u8>, next: u8, singles: bool, mk: &mut dyn FnMut(&[u8]) -> bool) -> bool {
                let Some(i) = lab.iter().position(|&l| l == u8::MAX) else {
                    return mk(lab);
                };
                lab[i] = next;
                if singles && !rec(lab, next + 1, singles, mk) {
                    return false;
                }
                for j in i + 1..lab.len() {
                    if lab[j] == u8::MAX {
                        lab[j] = next;
                        let ok = rec(lab, next + 1, singles, mk);
                        lab[j] = u8::MAX;
                        if !ok {
                            return false;
                        }
                    }
                }
                lab[i] = u8::MAX;
                true
            }
            rec(&mut lab, 0, singles, &mut |l| {
                emit(Diagram { dom, cod, m: m as u8, n: n as u8, rgs: canonical(l.iter().copied(), total) })
            })
        }
    }
}

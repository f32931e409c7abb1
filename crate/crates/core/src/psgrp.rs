//! Finite partial semigroups with hom-set structure, stored as composition tables.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::elements::Elem;
use crate::Error;

pub const DEFAULT_MAX_ELEMENTS: usize = 5000;
pub const ASSOC_EXHAUSTIVE_LIMIT: usize = 300;
pub const ASSOC_SAMPLES: usize = 100_000;

/// Element cap for building, overridable through `CONGWB_MAX_ELEMENTS`.
pub fn max_elements() -> usize {
    std::env::var("CONGWB_MAX_ELEMENTS")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_ELEMENTS)
}

/// A partial semigroup whose product `xy` is defined iff `br(x) = bd(y)`.
/// Elements are `0..n`; the table stores, for each `x`, the products with every `y` of domain `br(x)`.
#[derive(Clone, Debug)]
pub struct PartialSemigroup {
    n_obj: usize,
    bd: Vec<u32>,
    br: Vec<u32>,
    by_bd: Vec<Vec<u32>>,
    by_br: Vec<Vec<u32>>,
    pos: Vec<u32>,
    row: Vec<usize>,
    table: Vec<u32>,
}

impl PartialSemigroup {
    fn skeleton(n_obj: usize, bd: Vec<u32>, br: Vec<u32>) -> PartialSemigroup {
        let n = bd.len();
        let mut by_bd = vec![Vec::new(); n_obj];
        let mut by_br = vec![Vec::new(); n_obj];
        let mut pos = vec![0u32; n];
        for x in 0..n {
            pos[x] = by_bd[bd[x] as usize].len() as u32;
            by_bd[bd[x] as usize].push(x as u32);
            by_br[br[x] as usize].push(x as u32);
        }
        let mut row = Vec::with_capacity(n + 1);
        let mut off = 0;
        for x in 0..n {
            row.push(off);
            off += by_bd[br[x] as usize].len();
        }
        row.push(off);
        PartialSemigroup { n_obj, bd, br, by_bd, by_br, pos, row, table: Vec::new() }
    }

    /// Builds the table from a product oracle returning `None` when the product leaves the set.
    pub fn from_fn(
        n_obj: usize,
        bd: Vec<u32>,
        br: Vec<u32>,
        mul: impl Fn(usize, usize) -> Option<usize> + Sync,
    ) -> Result<PartialSemigroup, Error> {
        let mut s = Self::skeleton(n_obj, bd, br);
        let rows: Vec<Result<Vec<u32>, Error>> = (0..s.n())
            .into_par_iter()
            .map(|x| {
                s.by_bd[s.br[x] as usize]
                    .iter()
                    .map(|&y| {
                        let z = mul(x, y as usize)
                            .ok_or_else(|| Error::Structure(format!("product of {x} and {y} is not in the set")))?;
                        if s.bd[z] != s.bd[x] || s.br[z] != s.br[y as usize] {
                            return Err(Error::Structure(format!("product of {x} and {y} lies in the wrong hom-set")));
                        }
                        Ok(z as u32)
                    })
                    .collect()
            })
            .collect();
        let mut table = Vec::with_capacity(*s.row.last().unwrap());
        for r in rows {
            table.extend(r?);
        }
        s.table = table;
        Ok(s)
    }

    /// Builds from concrete elements; every product must be one of the given elements.
    pub fn from_elements(elems: &[Elem], n_obj: usize) -> Result<PartialSemigroup, Error> {
        let index: HashMap<&Elem, usize> = elems.iter().enumerate().map(|(i, e)| (e, i)).collect();
        if index.len() != elems.len() {
            return Err(Error::Structure("duplicate elements".into()));
        }
        let bd = elems.iter().map(|e| e.dom() as u32).collect();
        let br = elems.iter().map(|e| e.cod() as u32).collect();
        Self::from_fn(n_obj, bd, br, |x, y| index.get(&elems[x].compose(&elems[y])).copied())
    }

    pub fn n(&self) -> usize {
        self.bd.len()
    }

    pub fn n_objects(&self) -> usize {
        self.n_obj
    }

    pub fn bd(&self, x: usize) -> usize {
        self.bd[x] as usize
    }

    pub fn br(&self, x: usize) -> usize {
        self.br[x] as usize
    }

    pub fn same_hom(&self, x: usize, y: usize) -> bool {
        self.bd[x] == self.bd[y] && self.br[x] == self.br[y]
    }

    pub fn mul(&self, x: usize, y: usize) -> Option<usize> {
        (self.br[x] == self.bd[y]).then(|| self.table[self.row[x] + self.pos[y] as usize] as usize)
    }

    /// Product without the composability check (caller guarantees `br(x) = bd(y)`).
    #[inline]
    pub fn mul_unchecked(&self, x: usize, y: usize) -> usize {
        self.table[self.row[x] + self.pos[y] as usize] as usize
    }

    /// Elements `y` for which `xy` is defined.
    pub fn right_of(&self, x: usize) -> &[u32] {
        &self.by_bd[self.br[x] as usize]
    }

    /// Elements `y` for which `yx` is defined.
    pub fn left_of(&self, x: usize) -> &[u32] {
        &self.by_br[self.bd[x] as usize]
    }

    /// All products `xy`, aligned with `right_of(x)`.
    pub fn row(&self, x: usize) -> &[u32] {
        &self.table[self.row[x]..self.row[x + 1]]
    }

    pub fn hom(&self, a: usize, b: usize) -> Vec<usize> {
        (0..self.n()).filter(|&x| self.bd(x) == a && self.br(x) == b).collect()
    }

    pub fn table_len(&self) -> usize {
        self.table.len()
    }

    /// Exhaustive for small `n`, otherwise a fixed-seed sample of triples.
    pub fn check_associativity(&self) -> Result<(), Error> {
        let fail = |x, y, z| Err(Error::Structure(format!("associativity fails at ({x}, {y}, {z})")));
        if self.n() <= ASSOC_EXHAUSTIVE_LIMIT {
            let bad = (0..self.n()).into_par_iter().find_map_any(|x| {
                for &y in self.right_of(x) {
                    let xy = self.mul_unchecked(x, y as usize);
                    for &z in self.right_of(y as usize) {
                        let yz = self.mul_unchecked(y as usize, z as usize);
                        if self.mul_unchecked(xy, z as usize) != self.mul_unchecked(x, yz) {
                            return Some((x, y as usize, z as usize));
                        }
                    }
                }
                None
            });
            if let Some((x, y, z)) = bad {
                return fail(x, y, z);
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            for _ in 0..ASSOC_SAMPLES {
                let x = rng.gen_range(0..self.n());
                let ys = self.right_of(x);
                if ys.is_empty() {
                    continue;
                }
                let y = ys[rng.gen_range(0..ys.len())] as usize;
                let zs = self.right_of(y);
                if zs.is_empty() {
                    continue;
                }
                let z = zs[rng.gen_range(0..zs.len())] as usize;
                if self.mul_unchecked(self.mul_unchecked(x, y), z) != self.mul_unchecked(x, self.mul_unchecked(y, z)) {
                    return fail(x, y, z);
                }
            }
        }
        Ok(())
    }

    pub fn is_ideal(&self, set: &[bool]) -> bool {
        (0..self.n()).filter(|&x| set[x]).all(|x| {
            self.row(x).iter().all(|&z| set[z as usize])
                && self.left_of(x).iter().all(|&y| set[self.mul_unchecked(y as usize, x)])
        })
    }

    /// The sub-partial semigroup on `keep` (sorted), which must be closed under products.
    pub fn restrict(&self, keep: &[usize]) -> Result<PartialSemigroup, Error> {
        let mut new_id = vec![u32::MAX; self.n()];
        for (i, &x) in keep.iter().enumerate() {
            new_id[x] = i as u32;
        }
        let bd = keep.iter().map(|&x| self.bd[x]).collect();
        let br = keep.iter().map(|&x| self.br[x]).collect();
        Self::from_fn(self.n_obj, bd, br, |x, y| {
            let z = new_id[self.mul_unchecked(keep[x], keep[y])];
            (z != u32::MAX).then_some(z as usize)
        })
    }

    /// Greedy generating set: scan `order`, keep any element not yet generated, and grow the
    /// generated sub-partial semigroup incrementally.
    pub fn generating_set(&self, order: &[usize]) -> Vec<usize> {
        let n = self.n();
        let mut inside = vec![false; n];
        let mut members: Vec<usize> = Vec::new();
        let mut gens = Vec::new();
        for &g in order {
            if inside[g] {
                continue;
            }
            gens.push(g);
            inside[g] = true;
            members.push(g);
            let mut queue = vec![g];
            while let Some(z) = queue.pop() {
                let mut i = 0;
                while i < members.len() {
                    let w = members[i];
                    for p in [self.mul(z, w), self.mul(w, z)].into_iter().flatten() {
                        if !inside[p] {
                            inside[p] = true;
                            members.push(p);
                            queue.push(p);
                        }
                    }
                    i += 1;
                }
            }
        }
        gens
    }
}

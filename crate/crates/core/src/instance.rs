//! A concrete category (or one of its chain ideals) with its Green structure and rank labels.

use std::collections::HashMap;

use crate::congruence::Closure;
use crate::elements::{Elem, FamilySpec};
use crate::green::Green;
use crate::groups::MaxSubgroup;
use crate::psgrp::{self, PartialSemigroup};
use crate::Error;

#[derive(Clone, Debug)]
pub struct Instance {
    pub spec: FamilySpec,
    pub elems: Vec<Elem>,
    pub s: PartialSemigroup,
    pub green: Green,
    /// D-class ids from bottom to top.
    pub chain: Vec<usize>,
    /// Rank of the elements in each chain position.
    pub ranks: Vec<usize>,
    index: HashMap<Elem, usize>,
}

impl Instance {
    /// Generates, tabulates and checks the whole category.
    pub fn build(spec: &FamilySpec, force: bool) -> Result<Instance, Error> {
        let limit = if force { usize::MAX } else { psgrp::max_elements() };
        let elems = spec.generate(limit)?;
        let s = PartialSemigroup::from_elements(&elems, spec.objects.len())?;
        Self::assemble(spec.clone(), elems, s)
    }

    fn assemble(spec: FamilySpec, elems: Vec<Elem>, s: PartialSemigroup) -> Result<Instance, Error> {
        s.check_associativity()?;
        let green = Green::compute(&s)?;
        if !green.is_regular() {
            return Err(Error::Structure("not regular".into()));
        }
        if !green.is_stable(&s) {
            return Err(Error::Structure("not stable".into()));
        }
        let chain = green.chain().ok_or_else(|| Error::Structure("ideals do not form a chain".into()))?;
        let mut ranks = Vec::with_capacity(chain.len());
        for &k in &chain {
            let members = &green.d_members[k];
            let q = elems[members[0]].rank();
            if members.iter().any(|&x| elems[x].rank() != q) {
                return Err(Error::Structure(format!("D-class {k} mixes ranks")));
            }
            ranks.push(q);
        }
        let step = spec.family.rank_step();
        let start = spec.family.min_rank(&spec.objects);
        if ranks.first() != Some(&start) || ranks.windows(2).any(|w| w[1] != w[0] + step) {
            return Err(Error::Structure(format!("unexpected rank sequence {ranks:?}")));
        }
        let index = elems.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        Ok(Instance { spec, elems, s, green, chain, ranks, index })
    }

    pub fn n(&self) -> usize {
        self.elems.len()
    }

    pub fn top_rank(&self) -> usize {
        *self.ranks.last().unwrap()
    }

    pub fn check_rank(&self, r: usize) -> Result<(), Error> {
        if self.ranks.contains(&r) {
            Ok(())
        } else {
            Err(Error::Validation(format!("rank {r} is not one of the available ranks {:?}", self.ranks)))
        }
    }

    /// The ideal of all elements of rank at most `r`, as a partial semigroup in its own right.
    pub fn ideal(&self, r: usize) -> Result<Instance, Error> {
        self.check_rank(r)?;
        if r == self.top_rank() {
            return Ok(self.clone());
        }
        let keep = self.ideal_members(r);
        let mut mask = vec![false; self.n()];
        keep.iter().for_each(|&x| mask[x] = true);
        if !self.s.is_ideal(&mask) {
            return Err(Error::Structure(format!("rank ≤ {r} elements do not form an ideal")));
        }
        let s = self.s.restrict(&keep)?;
        let elems = keep.iter().map(|&x| self.elems[x].clone()).collect();
        Self::assemble(self.spec.clone(), elems, s)
    }

    pub fn ideal_members(&self, q: usize) -> Vec<usize> {
        (0..self.n()).filter(|&x| self.elems[x].rank() <= q).collect()
    }

    pub fn d_class(&self, q: usize) -> &[usize] {
        let k = self.ranks.iter().position(|&r| r == q).expect("rank present");
        &self.green.d_members[self.chain[k]]
    }

    /// Rank of the chain position just above `q`, if any.
    pub fn next_rank(&self, q: usize) -> Option<usize> {
        let k = self.ranks.iter().position(|&r| r == q)?;
        self.ranks.get(k + 1).copied()
    }

    pub fn index_of(&self, e: &Elem) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub fn closure(&self) -> Closure<'_> {
        Closure::new(&self.s, &self.green)
    }

    pub fn label(&self, x: usize) -> String {
        self.elems[x].to_string()
    }

    /// The natural copy of a degree-`q` permutation (or `q × q` matrix) inside this instance.
    pub fn natural(&self, q: usize, perm: &[usize], mat: Option<&[u8]>) -> Result<usize, Error> {
        let obj = self.spec.carrier(q).ok_or_else(|| Error::Precondition(format!("no object carries rank {q}")))?;
        let e = self.spec.natural(obj, q, perm, mat);
        self.index_of(&e).ok_or_else(|| Error::Precondition(format!("natural element {e} of rank {q} is not present")))
    }

    /// The idempotent `id_q♮` of rank `q`.
    pub fn natural_idempotent(&self, q: usize) -> Result<usize, Error> {
        let id: Vec<usize> = (0..q).collect();
        self.natural(q, &id, None)
    }

    /// The maximal subgroup at rank `q`, taken at the natural idempotent.
    pub fn max_subgroup(&self, q: usize) -> Result<MaxSubgroup, Error> {
        self.check_rank(q)?;
        if q == 0 {
            // rank-0 H-classes are trivial; use any idempotent of the bottom class
            let e = *self
                .d_class(0)
                .iter()
                .find(|&&x| self.green.idempotent[x])
                .ok_or_else(|| Error::Structure("no idempotent of rank 0".into()))?;
            return MaxSubgroup::new(&self.s, &self.green, e);
        }
        let e = self.natural_idempotent(q)?;
        MaxSubgroup::new(&self.s, &self.green, e)
    }

    /// The idempotent `e` of a chosen maximal subgroup at every rank.
    pub fn idempotent_at(&self, q: usize) -> Result<usize, Error> {
        Ok(self.max_subgroup(q)?.idempotent)
    }
}

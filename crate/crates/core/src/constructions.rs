//! Named congruences on a chain ideal and the tools used to assemble them.

use std::collections::HashMap;

use crate::congruence::{Closure, Congruence};
use crate::groups::{MaxSubgroup, Subgroup};
use crate::instance::Instance;
use crate::Error;

pub fn delta(t: &Instance) -> Congruence {
    Congruence::identity(t.n())
}

pub fn nabla(t: &Instance) -> Congruence {
    Congruence::universal(&t.s)
}

fn unique(x: usize) -> (usize, usize, usize) {
    (usize::MAX, usize::MAX, x)
}

/// Rees congruence `R_I = ∇̃_I ∪ Δ` of the ideal of rank `≤ q`.
pub fn rees(t: &Instance, q: usize) -> Congruence {
    Congruence::from_key(t.n(), |x| {
        if t.elems[x].rank() <= q {
            (t.s.bd(x), t.s.br(x), usize::MAX)
        } else {
            unique(x)
        }
    })
}

/// `ν_N`: the principal closure of `{(e, g) : g ∈ N}` restricted to the D-class of `e`.
pub fn nu(t: &Instance, closure: &Closure, g: &MaxSubgroup, n: &[usize]) -> Congruence {
    let e = g.idempotent;
    let c = closure.generate(n.iter().map(|&i| (e, g.elems[i]))).expect("group elements share a hom-set");
    let d = t.green.d[e];
    Congruence::from_key(t.n(), |x| if t.green.d[x] == d { (0, 0, c.rep(x)) } else { unique(x) })
}

/// The relation `D(N×N)D ∩ (D×D)` computed directly, as an equivalence.
pub fn nu_formula(t: &Instance, g: &MaxSubgroup, n: &[usize]) -> Congruence {
    let s = &t.s;
    let e = g.idempotent;
    let d = t.green.d[e];
    let mut uf = crate::congruence::UnionFind::new(t.n());
    let lefts: Vec<Option<usize>> = std::iter::once(None).chain(s.left_of(e).iter().map(|&a| Some(a as usize))).collect();
    let rights: Vec<Option<usize>> = std::iter::once(None).chain(s.right_of(e).iter().map(|&b| Some(b as usize))).collect();
    let act = |a: Option<usize>, x: usize, b: Option<usize>| {
        let ax = a.map_or(x, |a| s.mul_unchecked(a, x));
        b.map_or(ax, |b| s.mul_unchecked(ax, b))
    };
    let members = g.members(n);
    for &a in &lefts {
        for &b in &rights {
            if t.green.d[act(a, e, b)] != d {
                continue;
            }
            let base = act(a, members[0], b);
            for &x in &members[1..] {
                let y = act(a, x, b);
                if t.green.d[y] == d {
                    uf.union(base, y);
                }
            }
        }
    }
    uf.into_congruence()
}

/// `R_{I_q} ∪ ν_1 ∪ ν_2 ∪ ⋯` for relations `ν_i` supported above `I_q` on distinct D-classes.
pub fn rees_with(t: &Instance, q: usize, nus: &[&Congruence]) -> Result<Congruence, Error> {
    let r = rees(t, q);
    let mut parts = vec![&r];
    parts.extend_from_slice(nus);
    Congruence::union_disjoint(&parts)
}

/// Outcome of the search for a retraction `I_q → M` onto the minimal ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Retract {
    Map(Vec<usize>),
    NoCandidate(usize),
    Ambiguous(usize, Vec<usize>),
    AxiomFails(String),
}

impl Retract {
    pub fn map(&self) -> Option<&[usize]> {
        match self {
            Retract::Map(f) => Some(f),
            _ => None,
        }
    }
}

/// Searches for the retraction of the ideal of rank `≤ q` onto the minimal ideal `M`:
/// `xf` is the unique `y ∈ M` in the hom-set of `x` with `my = mx` and `ym = xm` for all `m ∈ M`.
/// The result is indexed by all elements of `t` (`usize::MAX` outside the ideal).
pub fn retraction(t: &Instance, q: usize) -> Retract {
    let s = &t.s;
    let bottom = t.ranks[0];
    let in_m: Vec<bool> = (0..t.n()).map(|x| t.elems[x].rank() == bottom).collect();
    let in_i: Vec<bool> = (0..t.n()).map(|x| t.elems[x].rank() <= q).collect();
    let m_left = |x: usize| s.left_of(x).iter().map(|&m| m as usize).filter(|&m| in_m[m]).collect::<Vec<_>>();
    let m_right = |x: usize| s.right_of(x).iter().map(|&m| m as usize).filter(|&m| in_m[m]).collect::<Vec<_>>();
    let mut f = vec![usize::MAX; t.n()];
    let hom_m: HashMap<(usize, usize), Vec<usize>> = (0..t.n()).filter(|&x| in_m[x]).fold(HashMap::new(), |mut acc, x| {
        acc.entry((s.bd(x), s.br(x))).or_default().push(x);
        acc
    });
    for x in (0..t.n()).filter(|&x| in_i[x]) {
        let (ml, mr) = (m_left(x), m_right(x));
        let cands: Vec<usize> = hom_m
            .get(&(s.bd(x), s.br(x)))
            .map(|v| v.as_slice())
            .unwrap_or(&[])
            .iter()
            .copied()
            .filter(|&y| {
                ml.iter().all(|&m| s.mul_unchecked(m, y) == s.mul_unchecked(m, x))
                    && mr.iter().all(|&m| s.mul_unchecked(y, m) == s.mul_unchecked(x, m))
            })
            .collect();
        match cands.len() {
            0 => return Retract::NoCandidate(x),
            1 => f[x] = cands[0],
            _ => return Retract::Ambiguous(x, cands),
        }
    }
    // axioms: identity on M, homomorphism, compatible with the action of t
    for x in (0..t.n()).filter(|&x| in_i[x]) {
        if in_m[x] && f[x] != x {
            return Retract::AxiomFails(format!("not the identity on M at {x}"));
        }
        for (k, &a) in s.right_of(x).iter().enumerate() {
            let xa = s.row(x)[k] as usize;
            if in_i[a as usize] && f[xa] != s.mul_unchecked(f[x], f[a as usize]) {
                return Retract::AxiomFails(format!("not multiplicative at ({x}, {a})"));
            }
            if f[xa] != s.mul_unchecked(f[x], a as usize) {
                return Retract::AxiomFails(format!("(xb)f ≠ (xf)b at ({x}, {a})"));
            }
        }
        for &a in s.left_of(x) {
            if f[s.mul_unchecked(a as usize, x)] != s.mul_unchecked(a as usize, f[x]) {
                return Retract::AxiomFails(format!("(ax)f ≠ a(xf) at ({a}, {x})"));
            }
        }
    }
    Retract::Map(f)
}

/// Congruences on the minimal ideal used to build `θ_{I,τ}`.
#[derive(Clone, Copy, Debug)]
pub enum Tau<'a> {
    Nabla,
    L,
    R,
    H,
    Delta,
    Given(&'a Congruence),
}

/// `θ_{I,τ} = {(x, y) ∈ I × I : (xf, yf) ∈ τ} ∪ Δ`, with `f` from [`retraction`].
pub fn theta(t: &Instance, f: &[usize], tau: Tau) -> Congruence {
    let g = &t.green;
    Congruence::from_key(t.n(), |x| {
        if f[x] == usize::MAX {
            return unique(x);
        }
        let y = f[x];
        let k = match tau {
            Tau::Nabla => 0,
            Tau::L => g.l[y] as usize,
            Tau::R => g.r[y] as usize,
            Tau::H => g.h[y] as usize,
            Tau::Delta => y,
            Tau::Given(c) => c.rep(y),
        };
        (t.s.bd(x), t.s.br(x), k)
    })
}

/// Whether `|Nx| ≤ 1` and `|xN| ≤ 1` for all `x` in the minimal ideal.
pub fn in_pair_condition(t: &Instance, g: &MaxSubgroup, n: &[usize]) -> bool {
    let s = &t.s;
    let members = g.members(n);
    t.d_class(t.ranks[0]).iter().all(|&x| {
        let mut left: Vec<usize> = members.iter().filter_map(|&a| s.mul(a, x)).collect();
        let mut right: Vec<usize> = members.iter().filter_map(|&a| s.mul(x, a)).collect();
        left.sort_unstable();
        left.dedup();
        right.sort_unstable();
        right.dedup();
        left.len() <= 1 && right.len() <= 1
    })
}

/// The four relations `μ, λ, ρ, R` of a retractable IN-pair, in that order: each is
/// `θ_{I,τ} ∪ ν_N` for `τ` one of `H, L, R, ∇` on the minimal ideal.
pub fn in_pair_family(t: &Instance, f: &[usize], nu_n: &Congruence) -> Result<[Congruence; 4], Error> {
    let [a, b, c, d] = [Tau::H, Tau::L, Tau::R, Tau::Nabla].map(|tau| Congruence::union_disjoint(&[&theta(t, f, tau), nu_n]));
    Ok([a?, b?, c?, d?])
}

/// `τ_N = (ν_N)♯` restricted to `t` minus its top D-class, returned on that ideal's numbering.
pub fn tau_n(t: &Instance, closure: &Closure, g: &MaxSubgroup, n: &[usize]) -> (Congruence, Vec<usize>) {
    let nu_n = nu(t, closure, g, n);
    let sharp = closure.extend(&Congruence::identity(t.n()), nu_n.spanning_pairs().into_iter().map(|(a, b)| (a as usize, b as usize))).unwrap();
    let top = t.top_rank();
    let keep: Vec<usize> = (0..t.n()).filter(|&x| t.elems[x].rank() < top).collect();
    (sharp.restrict(&keep), keep)
}

/// `N↓p = {g ∈ G_p : (e_p, g) ∈ (ν_N)♯}` as a subgroup of `gp`.
pub fn n_down(t: &Instance, closure: &Closure, gq: &MaxSubgroup, n: &[usize], gp: &MaxSubgroup) -> Subgroup {
    let nu_n = nu(t, closure, gq, n);
    let sharp = closure.generate(nu_n.spanning_pairs().into_iter().map(|(a, b)| (a as usize, b as usize))).unwrap();
    (0..gp.elems.len()).filter(|&i| sharp.rel(gp.idempotent, gp.elems[i])).collect()
}

/// `Z` with `ζ|_{D} = ν_Z` on the D-class of `g`.
pub fn zeta_subgroup(zeta: &Congruence, g: &MaxSubgroup) -> Subgroup {
    (0..g.elems.len()).filter(|&i| zeta.rel(g.idempotent, g.elems[i])).collect()
}

/// One H-congruence `Θ(𝐍) = ∪ ν_{N_q}` per admissible tuple, with the tuple given as indices into
/// the per-rank normal subgroup lists.
pub struct NzTuples {
    pub groups: Vec<MaxSubgroup>,
    pub normals: Vec<Vec<Subgroup>>,
    pub tuples: Vec<Vec<usize>>,
    pub congruences: Vec<Congruence>,
}

/// Enumerates NZ-tuples: `N_q ⊴ G_q`, `N_q ≤ Z_q`, and `N_q↓p ≤ N_p` for `p < q`.
pub fn nz_tuples(t: &Instance, closure: &Closure, zeta: &Congruence) -> Result<NzTuples, Error> {
    let mut groups = Vec::new();
    let mut normals: Vec<Vec<Subgroup>> = Vec::new();
    for &q in &t.ranks {
        let g = t.max_subgroup(q)?;
        let z = zeta_subgroup(zeta, &g);
        let ns: Vec<Subgroup> = g.group.normal_subgroups().into_iter().filter(|n| n.iter().all(|x| z.binary_search(x).is_ok())).collect();
        groups.push(g);
        normals.push(ns);
    }
    let k = t.ranks.len();
    // down[q][i][p] = N_{q,i}↓p
    let down: Vec<Vec<Vec<Subgroup>>> = (0..k)
        .map(|qi| normals[qi].iter().map(|n| (0..qi).map(|pi| n_down(t, closure, &groups[qi], n, &groups[pi])).collect()).collect())
        .collect();
    let mut tuples = Vec::new();
    let mut cur = vec![0usize; k];
    fn rec(qi: usize, k: usize, cur: &mut Vec<usize>, normals: &[Vec<Subgroup>], down: &[Vec<Vec<Subgroup>>], out: &mut Vec<Vec<usize>>) {
        if qi == k {
            out.push(cur.clone());
            return;
        }
        for i in 0..normals[qi].len() {
            let ok = (0..qi).all(|pi| down[qi][i][pi].iter().all(|x| normals[pi][cur[pi]].binary_search(x).is_ok()));
            if ok {
                cur[qi] = i;
                rec(qi + 1, k, cur, normals, down, out);
            }
        }
    }
    rec(0, k, &mut cur, &normals, &down, &mut tuples);
    let congruences = tuples
        .iter()
        .map(|tup| {
            let parts: Vec<Congruence> = tup.iter().enumerate().map(|(qi, &i)| nu(t, closure, &groups[qi], &normals[qi][i])).collect();
            let refs: Vec<&Congruence> = parts.iter().collect();
            Congruence::union_disjoint(&refs)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(NzTuples { groups, normals, tuples, congruences })
}

/// A group element `φ(α, β)` of `g` for `α H β` in the D-class of `g`: with `h ↦ uhv` a Green
/// bijection from `H_α` onto `g` (found by search), `φ = (uαv)⁻¹(uβv)`. Only defined up to
/// conjugacy, so callers should use [`phi_in`].
pub fn phi(t: &Instance, g: &MaxSubgroup, a: usize, b: usize) -> Result<usize, Error> {
    let s = &t.s;
    let gr = &t.green;
    let e = g.idempotent;
    if gr.h[a] != gr.h[b] {
        return Err(Error::Precondition(format!("{a} and {b} are not H-related")));
    }
    if gr.d[a] != gr.d[e] {
        return Err(Error::Precondition(format!("{a} is not in the D-class of the group")));
    }
    let lefts = std::iter::once(None).chain(s.left_of(a).iter().map(|&u| Some(u as usize)));
    for u in lefts {
        let ua = u.map_or(a, |u| s.mul_unchecked(u, a));
        if gr.l[ua] != gr.l[a] || gr.r[ua] != gr.r[e] {
            continue;
        }
        let rights = std::iter::once(None).chain(s.right_of(ua).iter().map(|&v| Some(v as usize)));
        for v in rights {
            let uav = v.map_or(ua, |v| s.mul_unchecked(ua, v));
            if gr.h[uav] != gr.h[e] {
                continue;
            }
            let ub = u.map_or(b, |u| s.mul_unchecked(u, b));
            let ubv = v.map_or(ub, |v| s.mul_unchecked(ub, v));
            let (x, y) = (g.local(uav), g.local(ubv));
            if let (Some(x), Some(y)) = (x, y) {
                return Ok(g.group.mul(g.group.inv(x), y));
            }
        }
    }
    Err(Error::Structure(format!("no Green bijection from the H-class of {a} onto the group")))
}

/// Whether `φ(α, β) ∈ N`; independent of the choices made in [`phi`] since `N` is normal.
pub fn phi_in(t: &Instance, g: &MaxSubgroup, a: usize, b: usize, n: &[usize]) -> Result<bool, Error> {
    Ok(n.binary_search(&phi(t, g, a, b)?).is_ok())
}

/// All set partitions of `0..n` as restricted growth strings.
pub fn set_partitions(n: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut cur = vec![0u8; n];
    fn rec(i: usize, max: u8, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for l in 0..=max {
            cur[i] = l;
            rec(i + 1, if l == max { max + 1 } else { max }, cur, out);
        }
    }
    if n == 0 {
        return vec![vec![]];
    }
    rec(1, 1, &mut cur, &mut out);
    out
}

pub fn bell(n: usize) -> usize {
    let mut row = vec![1usize];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for &x in &row {
            next.push(next.last().unwrap() + x);
        }
        row = next;
    }
    row[0]
}

pub const MAX_PRB_CONGRUENCES: usize = 200_000;

/// Congruences of the minimal ideal when it is a partial rectangular band, together with the
/// whole of `t` as identity elsewhere: `σ_{E1,E2}` for all families of equivalences `E1` on the
/// R-classes and `E2` on the L-classes of each object.
pub fn prb_congruences(t: &Instance) -> Result<Vec<(String, Congruence)>, Error> {
    let s = &t.s;
    let g = &t.green;
    let m: Vec<usize> = t.d_class(t.ranks[0]).to_vec();
    let k = s.n_objects();
    // R-classes by domain object and L-classes by codomain object
    let mut xs: Vec<Vec<u32>> = vec![Vec::new(); k];
    let mut ys: Vec<Vec<u32>> = vec![Vec::new(); k];
    for &x in &m {
        if !xs[s.bd(x)].contains(&g.r[x]) {
            xs[s.bd(x)].push(g.r[x]);
        }
        if !ys[s.br(x)].contains(&g.l[x]) {
            ys[s.br(x)].push(g.l[x]);
        }
    }
    let mut cells: HashMap<(u32, u32), usize> = HashMap::new();
    for &x in &m {
        if cells.insert((g.r[x], g.l[x]), x).is_some() {
            return Err(Error::Precondition("minimal ideal is not H-trivial".into()));
        }
    }
    let expected: usize = (0..k).map(|a| xs[a].len()).sum::<usize>() * (0..k).map(|b| ys[b].len()).sum::<usize>();
    if cells.len() != expected {
        return Err(Error::Precondition("minimal ideal is not a partial rectangular band".into()));
    }
    let total: f64 = xs.iter().chain(ys.iter()).map(|v| bell(v.len()) as f64).product();
    if total > MAX_PRB_CONGRUENCES as f64 {
        return Err(Error::Guard(format!("{total} congruences on the minimal ideal")));
    }
    let parts: Vec<Vec<Vec<u8>>> = xs.iter().chain(ys.iter()).map(|v| set_partitions(v.len())).collect();
    let pos_r: HashMap<u32, usize> = xs.iter().flat_map(|v| v.iter().enumerate().map(|(i, &c)| (c, i))).collect();
    let pos_l: HashMap<u32, usize> = ys.iter().flat_map(|v| v.iter().enumerate().map(|(i, &c)| (c, i))).collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; 2 * k];
    let in_m: Vec<bool> = {
        let mut v = vec![false; t.n()];
        m.iter().for_each(|&x| v[x] = true);
        v
    };
    loop {
        let c = Congruence::from_key(t.n(), |x| {
            if !in_m[x] {
                return unique(x);
            }
            let (a, b) = (s.bd(x), s.br(x));
            let e1 = parts[a][choice[a]][pos_r[&g.r[x]]] as usize;
            let e2 = parts[k + b][choice[k + b]][pos_l[&g.l[x]]] as usize;
            (a * k + b, e1, e2)
        });
        let fmt = |range: std::ops::Range<usize>| {
            range
                .map(|i| parts[i][choice[i]].iter().map(|d| char::from(b'0' + d)).collect::<String>())
                .collect::<Vec<_>>()
                .join(",")
        };
        out.push((format!("sigma[{};{}]", fmt(0..k), fmt(k..2 * k)), c));
        let mut i = 0;
        loop {
            if i == 2 * k {
                return Ok(out);
            }
            choice[i] += 1;
            if choice[i] < parts[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elements::{Family, FamilySpec};

    fn inst(f: Family, objs: &[usize]) -> Instance {
        Instance::build(&FamilySpec::new(f, objs), false).unwrap()
    }

    #[test]
    fn bell_numbers() {
        assert_eq!((0..8).map(bell).collect::<Vec<_>>(), vec![1, 1, 2, 5, 15, 52, 203, 877]);
        for n in 0..7 {
            assert_eq!(set_partitions(n).len(), bell(n));
        }
    }

    #[test]
    fn nu_matches_formula() {
        let t = inst(Family::T, &[4]);
        let cl = t.closure();
        for q in 1..=4 {
            let g = t.max_subgroup(q).unwrap();
            for n in g.group.normal_subgroups() {
                let a = nu(&t, &cl, &g, &n);
                assert_eq!(a, nu_formula(&t, &g, &n), "rank {q}");
                if q >= 2 {
                    assert!(rees_with(&t, q - 1, &[&a]).unwrap().is_congruence(&t.s));
                }
            }
        }
    }

    #[test]
    fn retraction_of_brauer_rank_two() {
        let t = inst(Family::B, &[4]);
        let f = retraction(&t, 2);
        let f = f.map().expect("retractable");
        for tau in [Tau::Nabla, Tau::L, Tau::R, Tau::H, Tau::Delta] {
            assert!(theta(&t, f, tau).is_congruence(&t.s));
        }
        assert_eq!(theta(&t, f, Tau::Nabla), rees(&t, 2));
        // the top rank is not retractable
        assert!(retraction(&t, 4).map().is_none());
    }

    #[test]
    fn prb_count() {
        let p = inst(Family::P, &[3]).ideal(0).unwrap();
        let all = prb_congruences(&p).unwrap();
        assert_eq!(all.len(), 52 * 52);
        assert!(all.iter().take(50).all(|(_, c)| c.is_congruence(&p.s)));
    }
}

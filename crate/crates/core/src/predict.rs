//! The classification theorems as explicit congruence lists, and their verification against the
//! brute-force lattice.

use std::collections::HashSet;

use crate::congruence::{all_congruences, Closure, CongLattice, Congruence, LatticeOptions};
use crate::constructions::{self, in_pair_family, nu, prb_congruences, rees, rees_with, retraction, theta, Tau};
use crate::elements::{matrix, Elem, Family, FamilySpec, Kind};
use crate::groups::{MaxSubgroup, Subgroup};
use crate::instance::Instance;
use crate::lattice::Poset;
use crate::Error;

/// A congruence with its ASCII name.
#[derive(Clone, Debug)]
pub struct Named {
    pub label: String,
    pub cong: Congruence,
}

/// The congruences a theorem lists for one ideal, plus the abstract lattice it describes when the
/// theorem states one.
#[derive(Clone, Debug)]
pub struct Prediction {
    pub theorem: String,
    pub congruences: Vec<Named>,
    pub shape: Option<Poset>,
}

impl Prediction {
    pub fn new(theorem: &str) -> Prediction {
        Prediction { theorem: theorem.into(), congruences: Vec::new(), shape: None }
    }

    /// Adds a congruence unless it is already listed; the first label wins.
    pub fn push(&mut self, label: impl Into<String>, cong: Congruence) {
        if !self.congruences.iter().any(|n| n.cong == cong) {
            self.congruences.push(Named { label: label.into(), cong });
        }
    }

    pub fn len(&self) -> usize {
        self.congruences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.congruences.is_empty()
    }

    pub fn label_of(&self, c: &Congruence) -> Option<&str> {
        self.congruences.iter().find(|n| &n.cong == c).map(|n| n.label.as_str())
    }
}

/// Per-position data shared by all predictors: the chosen maximal subgroups, their normal
/// subgroups (smallest first) and display names.
pub struct Context<'a> {
    pub t: &'a Instance,
    pub closure: Closure<'a>,
    pub groups: Vec<MaxSubgroup>,
    pub normals: Vec<Vec<Subgroup>>,
    pub names: Vec<Vec<String>>,
}

impl<'a> Context<'a> {
    pub fn new(t: &'a Instance) -> Result<Context<'a>, Error> {
        let closure = t.closure();
        let mut groups = Vec::new();
        let mut normals = Vec::new();
        let mut names = Vec::new();
        for (k, &q) in t.ranks.iter().enumerate() {
            let g = t.max_subgroup(q)?;
            let ns = g.group.normal_subgroups();
            let mut seen: Vec<String> = Vec::new();
            let labels = ns
                .iter()
                .map(|n| {
                    let base = subgroup_name(t, k, &g, n);
                    let dup = seen.iter().filter(|s| **s == base).count();
                    seen.push(base.clone());
                    if dup == 0 {
                        base
                    } else {
                        format!("{base}#{dup}")
                    }
                })
                .collect();
            groups.push(g);
            normals.push(ns);
            names.push(labels);
        }
        Ok(Context { t, closure, groups, normals, names })
    }

    pub fn top(&self) -> usize {
        self.t.ranks.len() - 1
    }

    /// `ν_N` on the D-class at position `k`.
    pub fn nu(&self, k: usize, n: &[usize]) -> Congruence {
        nu(self.t, &self.closure, &self.groups[k], n)
    }

    /// `R_{I_q,N}` with `I_q` the ideal at position `k` and `N ⊴ G` at position `k + 1`.
    pub fn r_in(&self, k: usize, i: usize) -> Result<Named, Error> {
        let q = self.t.ranks[k];
        let c = rees_with(self.t, q, &[&self.nu(k + 1, &self.normals[k + 1][i])])?;
        Ok(Named { label: self.suffix(format!("R_I{q}"), k + 1, i), cong: c })
    }

    fn suffix(&self, base: String, k: usize, i: usize) -> String {
        if self.normals[k][i].len() == 1 {
            base
        } else {
            format!("{base}_{}", self.names[k][i])
        }
    }

    /// The retraction of the ideal at position `k` onto the minimal ideal.
    pub fn retraction_at(&self, k: usize) -> Result<Vec<usize>, Error> {
        let t = self.t;
        if k == 0 {
            let bottom = t.ranks[0];
            return Ok((0..t.n()).map(|x| if t.elems[x].rank() == bottom { x } else { usize::MAX }).collect());
        }
        match retraction(t, t.ranks[k]) {
            constructions::Retract::Map(f) => Ok(f),
            other => Err(Error::Precondition(format!("ideal I{} is not retractable: {other:?}", t.ranks[k]))),
        }
    }

    /// `μ, λ, ρ, R` of the IN-pair `(I_q, N)` with `I_q` at position `k`, `N` at position `k + 1`.
    pub fn in_pair(&self, k: usize, f: &[usize], i: usize) -> Result<Vec<Named>, Error> {
        let q = self.t.ranks[k];
        let fam = in_pair_family(self.t, f, &self.nu(k + 1, &self.normals[k + 1][i]))?;
        Ok(["mu", "lam", "rho", "R"]
            .iter()
            .zip(fam)
            .map(|(name, c)| Named { label: self.suffix(format!("{name}_I{q}"), k + 1, i), cong: c })
            .collect())
    }
}

fn factorial(q: usize) -> usize {
    (1..=q).product()
}

/// A short name for a normal subgroup of the group at position `k`.
fn subgroup_name(t: &Instance, k: usize, g: &MaxSubgroup, n: &[usize]) -> String {
    let q = t.ranks[k];
    if n.len() == 1 {
        return "1".into();
    }
    match t.spec.family.kind() {
        Kind::Linear { projective: false } => {
            let p = t.spec.p.unwrap();
            let corner = |x: usize| match &t.elems[g.elems[x]] {
                Elem::Mat(m) => m.corner(q),
                _ => unreachable!("linear family"),
            };
            let scalar = |a: &[u8]| (0..q * q).all(|i| a[i] == if i / q == i % q { a[0] } else { 0 });
            let sl: Vec<usize> = (0..g.elems.len()).filter(|&x| matrix::det(&corner(x), q, p) == 1).collect();
            if n.iter().all(|&x| scalar(&corner(x))) {
                format!("Z{}", n.len())
            } else if sl.iter().all(|x| n.binary_search(x).is_ok()) {
                if n.len() == g.elems.len() {
                    format!("GL{q}")
                } else if n.len() == sl.len() {
                    format!("SL{q}")
                } else {
                    format!("SL{q}.{}", n.len() / sl.len())
                }
            } else {
                g.group.subgroup_group(n).structure().to_string()
            }
        }
        _ => {
            let order = g.group.order();
            if order == factorial(q) && q >= 2 && n.len() == order {
                format!("S{q}")
            } else if order == factorial(q) && q >= 3 && 2 * n.len() == order {
                format!("A{q}")
            } else {
                g.group.subgroup_group(n).structure().to_string()
            }
        }
    }
}

/// The subgroup `Z_q(H)` of scalar matrices `cE_q` with `c^d = 1`, at position `k` of a linear
/// instance.
pub fn scalar_subgroup(t: &Instance, g: &MaxSubgroup, k: usize, d: usize) -> Subgroup {
    let q = t.ranks[k];
    let p = t.spec.p.unwrap() as usize;
    (0..g.elems.len())
        .filter(|&x| {
            let Elem::Mat(m) = &t.elems[g.elems[x]] else { return false };
            let a = m.corner(q);
            let c = a.first().copied().unwrap_or(1) as usize;
            let scalar = (0..q * q).all(|i| a[i] as usize == if i / q == i % q { c } else { 0 });
            scalar && (0..d).fold(1, |acc, _| acc * c % p) == 1
        })
        .collect()
}

fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|d| n % d == 0).collect()
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_ok())
}

/// The four-group `{id, (12)(34), (13)(24), (14)(23)}` inside the group of degree-4 permutations.
pub fn klein_members(t: &Instance, g: &MaxSubgroup) -> Vec<usize> {
    const K: [[usize; 4]; 4] = [[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]];
    (0..g.elems.len()).filter(|&x| t.elems[g.elems[x]].perm(4).is_some_and(|p| K.iter().any(|k| k[..] == p[..]))).collect()
}

/// Shape of the congruence lattice of a partial rectangular band: a product of partition lattices.
pub fn prb_shape(t: &Instance) -> Poset {
    let s = &t.s;
    let g = &t.green;
    let m = t.d_class(t.ranks[0]);
    let k = s.n_objects();
    let mut xs: Vec<HashSet<u32>> = vec![HashSet::new(); k];
    let mut ys: Vec<HashSet<u32>> = vec![HashSet::new(); k];
    for &x in m {
        xs[s.bd(x)].insert(g.r[x]);
        ys[s.br(x)].insert(g.l[x]);
    }
    xs.iter().chain(ys.iter()).fold(Poset::chain(1), |acc, v| acc.product(&Poset::eq_lattice(v.len())))
}

fn normal_poset(ns: &[Subgroup]) -> Poset {
    Poset::of_subsets(ns)
}

/// The height-two retractable form: `{τ ∪ ν_N} ∪ {θ_{S,τ}}` over congruences `τ` of the minimal
/// ideal and `N ⊴ G` on the top D-class.
pub fn small_ideal(cx: &Context, theorem: &str) -> Result<Prediction, Error> {
    let t = cx.t;
    let mut out = Prediction::new(theorem);
    let prb = prb_congruences(t)?;
    let f = cx.retraction_at(1)?;
    for (label, tau) in &prb {
        for (i, n) in cx.normals[1].iter().enumerate() {
            let c = Congruence::union_disjoint(&[tau, &cx.nu(1, n)])?;
            let l = if n.len() == 1 { label.clone() } else { format!("{label}+nu_{}", cx.names[1][i]) };
            out.push(l, c);
        }
    }
    for (label, tau) in &prb {
        out.push(format!("theta_{label}"), theta(t, &f, Tau::Given(tau)));
    }
    out.shape = Some(prb_shape(t).product(&normal_poset(&cx.normals[1]).adjoin_top()));
    Ok(out)
}

/// Dispatches to the classification theorem for the family of `t`, with `t` taken as the ideal
/// `I_r` for its top rank `r`.
pub fn predict_theorem(t: &Instance) -> Result<Prediction, Error> {
    let cx = Context::new(t)?;
    predict_with(&cx)
}

pub fn predict_with(cx: &Context) -> Result<Prediction, Error> {
    let t = cx.t;
    let fam = t.spec.family;
    let top = cx.top();
    let layers = |from: usize| -> Vec<Poset> { (from..=top).map(|k| normal_poset(&cx.normals[k])).collect() };
    let tname = theorem_name(fam, t.ranks[0] % 2 == 1);
    if top == 0 {
        let mut out = Prediction::new(&format!("{tname}/minimal"));
        if fam.is_linear() {
            out.push("Nabla", constructions::nabla(t));
            out.shape = Some(Poset::chain(1));
        } else {
            for (l, c) in prb_congruences(t)? {
                out.push(l, c);
            }
            out.shape = Some(prb_shape(t));
        }
        return Ok(out);
    }
    let mut out = Prediction::new(&tname);
    match fam {
        Family::T | Family::OpT | Family::OprT | Family::OripT | Family::OriprT => {
            out.push("Delta", constructions::delta(t));
            for k in 0..top {
                for i in 0..cx.normals[k + 1].len() {
                    let n = cx.r_in(k, i)?;
                    out.push(n.label, n.cong);
                }
            }
            out.shape = Some(Poset::stack_lattices(&Poset::chain(2), &layers(1)));
        }
        Family::P | Family::Pb | Family::Motzkin | Family::OpP | Family::OprP | Family::OripP | Family::OriprP => {
            if top == 1 {
                return small_ideal(cx, &format!("{tname}/retractable"));
            }
            for k in 0..=1 {
                let f = cx.retraction_at(k)?;
                for i in 0..cx.normals[k + 1].len() {
                    for n in cx.in_pair(k, &f, i)? {
                        out.push(n.label, n.cong);
                    }
                }
            }
            for k in 2..top {
                for i in 0..cx.normals[k + 1].len() {
                    let n = cx.r_in(k, i)?;
                    out.push(n.label, n.cong);
                }
            }
        }
        Family::B | Family::Tl | Family::Tlpm | Family::J | Family::Jpm if t.ranks[0] == 0 => {
            if top == 1 {
                return small_ideal(cx, &format!("{tname}/retractable"));
            }
            let f0 = cx.retraction_at(0)?;
            for i in 0..cx.normals[1].len() {
                for n in cx.in_pair(0, &f0, i)? {
                    out.push(n.label, n.cong);
                }
            }
            let f1 = cx.retraction_at(1)?;
            let klein = klein_members(t, &cx.groups[2]);
            for (i, n) in cx.normals[2].iter().enumerate() {
                if is_subset(n, &klein) {
                    for n in cx.in_pair(1, &f1, i)? {
                        out.push(n.label, n.cong);
                    }
                }
            }
            for k in 1..top {
                for i in 0..cx.normals[k + 1].len() {
                    let n = cx.r_in(k, i)?;
                    out.push(n.label, n.cong);
                }
            }
        }
        Family::B | Family::Tl | Family::Tlpm | Family::J | Family::Jpm => {
            let f0 = cx.retraction_at(0)?;
            let [_, lam, rho, r] = in_pair_family(t, &f0, &Congruence::identity(t.n()))?;
            let q = t.ranks[0];
            out.push("Delta", constructions::delta(t));
            out.push(format!("lam_I{q}"), lam);
            out.push(format!("rho_I{q}"), rho);
            out.push(format!("R_I{q}"), r);
            for k in 0..top {
                for i in 0..cx.normals[k + 1].len() {
                    let n = cx.r_in(k, i)?;
                    out.push(n.label, n.cong);
                }
            }
            let diamond = Poset::chain(2).product(&Poset::chain(2));
            out.shape = Some(Poset::stack_lattices(&diamond, &layers(1)));
        }
        Family::L => linear(cx, &mut out)?,
        Family::Pl => {
            for k in 0..top {
                for i in 0..cx.normals[k + 1].len() {
                    let n = cx.r_in(k, i)?;
                    out.push(n.label, n.cong);
                }
            }
            out.shape = Some(Poset::stack_lattices(&Poset::chain(1), &layers(1)));
        }
    }
    out.push("Nabla", constructions::nabla(t));
    Ok(out)
}

fn theorem_name(fam: Family, odd: bool) -> String {
    let base = match fam {
        Family::T => "T",
        Family::OpT | Family::OprT | Family::OripT | Family::OriprT => "QT",
        Family::P => "P",
        Family::OpP | Family::OprP | Family::OripP | Family::OriprP => "QP",
        Family::Pb | Family::Motzkin => "PB-M",
        Family::B => "B",
        Family::Tl => "TL",
        Family::Tlpm => "TLpm",
        Family::J | Family::Jpm => "J",
        Family::L => "L",
        Family::Pl => "PL",
    };
    if fam.is_brauer_type() {
        format!("{base}-{}", if odd { "odd" } else { "even" })
    } else {
        base.into()
    }
}

/// `R_{I_q} ∪ ν_{N_{q+1}} ∪ ν_{Z_{q+2}(H_{q+2})} ∪ ⋯` over all admissible tuples.
fn linear(cx: &Context, out: &mut Prediction) -> Result<(), Error> {
    let t = cx.t;
    let top = cx.top();
    let p = t.spec.p.unwrap() as usize;
    let ds = divisors(p - 1);
    // chains d_{k+2} ≥ ⋯ ≥ d_top of divisors of p − 1 under divisibility
    fn chains(len: usize, ds: &[usize], bound: usize) -> Vec<Vec<usize>> {
        if len == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for &d in ds.iter().filter(|&&d| bound % d == 0) {
            for mut rest in chains(len - 1, ds, d) {
                rest.insert(0, d);
                out.push(rest);
            }
        }
        out
    }
    let scalars: Vec<Vec<Subgroup>> =
        (0..=top).map(|k| ds.iter().map(|&d| scalar_subgroup(t, &cx.groups[k], k, d)).collect()).collect();
    let d_index = |d: usize| ds.iter().position(|&e| e == d).unwrap();
    for k in 0..top {
        let q = t.ranks[k];
        for (i, n) in cx.normals[k + 1].iter().enumerate() {
            for ch in chains(top - k - 1, &ds, p - 1) {
                if let Some(&d) = ch.first() {
                    if !is_subset(&scalars[k + 1][d_index(d)], n) {
                        continue;
                    }
                }
                let mut parts = vec![rees(t, q), cx.nu(k + 1, n)];
                for (j, &d) in ch.iter().enumerate() {
                    parts.push(cx.nu(k + 2 + j, &scalars[k + 2 + j][d_index(d)]));
                }
                let refs: Vec<&Congruence> = parts.iter().collect();
                let c = Congruence::union_disjoint(&refs)?;
                let mut tag = vec![cx.names[k + 1][i].clone()];
                tag.extend(ch.iter().map(|d| format!("Z{d}")));
                let label = if ch.iter().all(|&d| d == 1) && n.len() == 1 {
                    format!("R_I{q}")
                } else if ch.is_empty() {
                    format!("R_I{q}_{}", tag[0])
                } else {
                    format!("R_I{q}_({})", tag.join(","))
                };
                out.push(label, c);
            }
        }
    }
    Ok(())
}

/// Outcome of comparing a theorem's list with the brute-force lattice.
#[derive(Clone, Debug)]
pub struct Report {
    pub spec: String,
    pub rank: usize,
    pub theorem: String,
    pub n_elements: usize,
    pub predicted: usize,
    pub oracle: usize,
    /// Oracle congruences the theorem does not list (by node id and class count).
    pub missing: Vec<String>,
    /// Listed relations that are not congruences of the ideal.
    pub extra: Vec<String>,
    pub hasse_isomorphic: bool,
    pub shape_isomorphic: Option<bool>,
    pub is_chain: bool,
}

impl Report {
    pub fn equal(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty() && self.predicted == self.oracle
    }

    pub fn line(&self) -> String {
        let shape = match self.shape_isomorphic {
            Some(true) => ", shape ok",
            Some(false) => ", SHAPE MISMATCH",
            None => "",
        };
        format!(
            "{} r={} [{}]: {} {} = {} (oracle){}{}",
            self.spec,
            self.rank,
            self.theorem,
            if self.equal() { "EQUAL" } else { "DIFFERENT" },
            self.predicted,
            self.oracle,
            shape,
            if self.is_chain { ", chain" } else { "" }
        )
    }
}

/// Compares a prediction with the full congruence lattice of `t`.
pub fn compare(t: &Instance, pred: &Prediction, lat: &CongLattice) -> Report {
    let missing: Vec<String> = lat
        .congs
        .iter()
        .enumerate()
        .filter(|(_, c)| pred.label_of(c).is_none())
        .map(|(i, c)| format!("c{i} ({} classes)", c.n_classes()))
        .collect();
    let extra: Vec<String> = pred.congruences.iter().filter(|n| lat.find(&n.cong).is_none()).map(|n| n.label.clone()).collect();
    let oracle_poset = Poset::from_congruences(lat);
    let predicted = CongLattice::from_set(pred.congruences.iter().map(|n| n.cong.clone()).collect());
    let pred_poset = Poset::from_congruences(&predicted);
    Report {
        spec: t.spec.name(),
        rank: t.top_rank(),
        theorem: pred.theorem.clone(),
        n_elements: t.n(),
        predicted: pred.len(),
        oracle: lat.len(),
        missing,
        extra,
        hasse_isomorphic: oracle_poset.is_isomorphic(&pred_poset),
        shape_isomorphic: pred.shape.as_ref().map(|s| s.is_isomorphic(&oracle_poset)),
        is_chain: oracle_poset.is_chain(),
    }
}

/// Builds `I_r` of `spec`, predicts its congruences and checks them against the oracle.
pub fn verify_theorem(spec: &FamilySpec, r: usize, opts: &LatticeOptions) -> Result<Report, Error> {
    spec.validate()?;
    let full = Instance::build(spec, opts.force)?;
    let t = full.ideal(r)?;
    Ok(verify_instance(&t, opts)?.0)
}

pub fn verify_instance(t: &Instance, opts: &LatticeOptions) -> Result<(Report, Prediction, CongLattice), Error> {
    let pred = predict_theorem(t)?;
    let lat = all_congruences(&t.closure(), opts)?;
    Ok((compare(t, &pred, &lat), pred, lat))
}

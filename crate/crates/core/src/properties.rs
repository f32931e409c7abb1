//! The separation and multiplication properties of an ideal extension, and the short-chain
//! propositions whose hypotheses are checked mechanically before they are applied.

use rayon::prelude::*;

use crate::congruence::{zeta, Congruence};
use crate::constructions::{self, in_pair_condition, in_pair_family, theta, Tau};
use crate::instance::Instance;
use crate::predict::{small_ideal, Context, Prediction};
use crate::Error;

/// Outcome of one quantified condition, with the first failing pair if any.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Item {
    pub holds: bool,
    pub counterexample: Option<(usize, usize)>,
}

impl Item {
    fn from_failures(mut fails: Vec<(usize, usize)>) -> Item {
        fails.sort_unstable();
        Item { holds: fails.is_empty(), counterexample: fails.first().copied() }
    }
}

/// `Dmax`, `ngen` and the items of `Sep`/`Mult` and their `ζ` variants for `T` with `S = T ∖ D_T`.
#[derive(Clone, Debug)]
pub struct PropertyReport {
    pub dmax_t: bool,
    pub dmax_s: bool,
    pub ngen: Item,
    pub s1: Item,
    pub s2: Item,
    pub s3: Item,
    pub s3z: Item,
    pub m1: Item,
    pub m2: Item,
    pub m3: Item,
    pub m3z: Item,
}

impl PropertyReport {
    fn base(&self) -> bool {
        self.dmax_t && self.dmax_s
    }

    pub fn ngen(&self) -> bool {
        self.dmax_t && self.ngen.holds
    }

    pub fn sep(&self) -> bool {
        self.base() && self.s1.holds && self.s2.holds && self.s3.holds
    }

    pub fn sepb(&self) -> bool {
        self.base() && self.s1.holds && self.s2.holds
    }

    pub fn sepz(&self) -> bool {
        self.base() && self.s1.holds && self.s2.holds && self.s3z.holds
    }

    pub fn mult(&self) -> bool {
        self.base() && self.m1.holds && self.m2.holds && self.m3.holds
    }

    pub fn multb(&self) -> bool {
        self.base() && self.m1.holds && self.m2.holds
    }

    pub fn multz(&self) -> bool {
        self.base() && self.m1.holds && self.m2.holds && self.m3z.holds
    }

    /// `Mult ⟹ Sep`, `Multz ⟹ Sepz`, `Multb ⟹ Sepb`, and `Sep ⟹ Sepz ⟹ Sepb` (likewise for Mult).
    pub fn grid_consistent(&self) -> bool {
        let imp = |a: bool, b: bool| !a || b;
        imp(self.mult(), self.sep())
            && imp(self.multz(), self.sepz())
            && imp(self.multb(), self.sepb())
            && imp(self.sep(), self.sepz())
            && imp(self.sepz(), self.sepb())
            && imp(self.mult(), self.multz())
            && imp(self.multz(), self.multb())
    }

    pub fn lines(&self) -> Vec<String> {
        let show = |name: &str, v: bool, items: &[(&str, &Item)]| {
            let mut s = format!("{name}: {v}");
            for (n, i) in items {
                if let Some((x, y)) = i.counterexample {
                    s.push_str(&format!(" [{n} fails at ({x}, {y})]"));
                }
            }
            s
        };
        vec![
            format!("Dmax(T): {}", self.dmax_t),
            format!("Dmax(S): {}", self.dmax_s),
            show("ngen", self.ngen(), &[("ngen", &self.ngen)]),
            show("Sep", self.sep(), &[("S1", &self.s1), ("S2", &self.s2), ("S3", &self.s3)]),
            show("Sepb", self.sepb(), &[]),
            show("Sepz", self.sepz(), &[("S3z", &self.s3z)]),
            show("Mult", self.mult(), &[("M1", &self.m1), ("M2", &self.m2), ("M3", &self.m3)]),
            show("Multb", self.multb(), &[]),
            show("Multz", self.multz(), &[("M3z", &self.m3z)]),
        ]
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    /// `y ∈ S`
    Lower,
    /// `y ∈ D_T ∖ H_x`
    Level,
    /// `y ∈ H_x ∖ {x}`
    Group,
}

/// Exhaustive check of all the properties on `t`, taking `D_T` to be its top D-class.
pub fn check_properties(t: &Instance) -> PropertyReport {
    let s = &t.s;
    let g = &t.green;
    let k = t.ranks.len();
    let top = t.chain[k - 1];
    let dmax_t = g.d_is_regular(top) && g.is_stable(s);
    let dmax_s = k >= 2 && g.d_is_regular(t.chain[k - 2]);
    let pos_of_d: Vec<usize> = {
        let mut v = vec![usize::MAX; g.n_d()];
        t.chain.iter().enumerate().for_each(|(i, &d)| v[d] = i);
        v
    };
    let level = |x: usize| pos_of_d[g.d[x] as usize];
    let in_s = |x: usize| level(x) + 1 < k;
    let in_ds = |x: usize| k >= 2 && level(x) + 2 == k;
    let in_dt = |x: usize| level(x) + 1 == k;
    let closure = t.closure();
    let ze = zeta(&closure, g);
    let nabla = Congruence::universal(s);
    let dt: Vec<usize> = (0..t.n()).filter(|&x| in_dt(x)).collect();

    // does some class meet D_S and contain two non-H-related members of S?
    let lower_sep = |c: &Congruence| {
        let mut first_h: Vec<u32> = vec![u32::MAX; t.n()];
        let mut has_ds = vec![false; t.n()];
        let mut split = vec![false; t.n()];
        for x in (0..t.n()).filter(|&x| in_s(x)) {
            let r = c.rep(x);
            has_ds[r] |= in_ds(x);
            if first_h[r] == u32::MAX {
                first_h[r] = g.h[x];
            } else if first_h[r] != g.h[x] {
                split[r] = true;
            }
        }
        (0..t.n()).any(|r| has_ds[r] && split[r])
    };
    let crosses = |c: &Congruence| {
        let mut top_rep = vec![false; t.n()];
        dt.iter().for_each(|&x| top_rep[c.rep(x)] = true);
        (0..t.n()).any(|y| in_s(y) && top_rep[c.rep(y)])
    };
    let mult_lower = |x: usize, y: usize| {
        let ok = |x: usize, y: usize| {
            one_sided(t, x).iter().any(|&a| {
                let ax = a.map_or(x, |a| s.mul_unchecked(a, x));
                let ay = a.map_or(y, |a| s.mul_unchecked(a, y));
                right_sided(t, x).iter().any(|&b| {
                    let axb = b.map_or(ax, |b| s.mul_unchecked(ax, b));
                    let ayb = b.map_or(ay, |b| s.mul_unchecked(ay, b));
                    in_ds(axb) && in_s(ayb) && g.h[ayb] != g.h[axb]
                })
            })
        };
        ok(x, y) || ok(y, x)
    };
    let mult_level = |x: usize, y: usize| {
        let ok = |x: usize, y: usize| {
            one_sided(t, x).iter().any(|&a| {
                let ax = a.map_or(x, |a| s.mul_unchecked(a, x));
                let ay = a.map_or(y, |a| s.mul_unchecked(a, y));
                right_sided(t, x).iter().any(|&b| {
                    let axb = b.map_or(ax, |b| s.mul_unchecked(ax, b));
                    let ayb = b.map_or(ay, |b| s.mul_unchecked(ay, b));
                    in_dt(axb) && in_s(ayb)
                })
            })
        };
        ok(x, y) || ok(y, x)
    };

    struct Verdict {
        pair: (usize, usize),
        kind: Kind,
        in_zeta: bool,
        ngen: bool,
        sep: bool,
        mult: bool,
    }
    let verdicts: Vec<Verdict> = dt
        .par_iter()
        .flat_map_iter(|&x| {
            let ys: Vec<usize> = (0..t.n())
                .filter(|&y| y != x && s.same_hom(x, y) && !(in_dt(y) && y < x))
                .collect();
            ys.into_iter().map(move |y| (x, y))
        })
        .map(|(x, y)| {
            let kind = if in_s(y) {
                Kind::Lower
            } else if g.h[x] != g.h[y] {
                Kind::Level
            } else {
                Kind::Group
            };
            let c = closure.principal(x, y).expect("same hom-set");
            let (sep, mult) = match kind {
                Kind::Lower | Kind::Group => (lower_sep(&c), mult_lower(x, y)),
                Kind::Level => (crosses(&c), mult_level(x, y)),
            };
            Verdict { pair: (x, y), kind, in_zeta: ze.rel(x, y), ngen: kind == Kind::Group || c == nabla, sep, mult }
        })
        .collect();
    let fails = |pred: &dyn Fn(&Verdict) -> bool| Item::from_failures(verdicts.iter().filter(|v| pred(v)).map(|v| v.pair).collect());
    PropertyReport {
        dmax_t,
        dmax_s,
        ngen: fails(&|v| !v.ngen),
        s1: fails(&|v| v.kind == Kind::Lower && !v.sep),
        s2: fails(&|v| v.kind == Kind::Level && !v.sep),
        s3: fails(&|v| v.kind == Kind::Group && !v.sep),
        s3z: fails(&|v| v.kind == Kind::Group && !v.in_zeta && !v.sep),
        m1: fails(&|v| v.kind == Kind::Lower && !v.mult),
        m2: fails(&|v| v.kind == Kind::Level && !v.mult),
        m3: fails(&|v| v.kind == Kind::Group && !v.mult),
        m3z: fails(&|v| v.kind == Kind::Group && !v.in_zeta && !v.mult),
    }
}

/// `T¹` elements that can multiply `x` on the left (`None` is the adjoined identity).
fn one_sided(t: &Instance, x: usize) -> Vec<Option<usize>> {
    std::iter::once(None).chain(t.s.left_of(x).iter().map(|&a| Some(a as usize))).collect()
}

fn right_sided(t: &Instance, x: usize) -> Vec<Option<usize>> {
    std::iter::once(None).chain(t.s.right_of(x).iter().map(|&b| Some(b as usize))).collect()
}

/// Which short-chain proposition to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SmallVariant {
    /// Height two, retractable.
    Retractable,
    /// Height two, not retractable.
    Height2,
    /// Height three with a retractable lower ideal.
    Height3,
}

fn hypothesis(cond: bool, what: &str) -> Result<(), Error> {
    if cond {
        Ok(())
    } else {
        Err(Error::Precondition(format!("hypothesis fails: {what}")))
    }
}

/// For `x ∈ D_1`, `y ∈ D_1 ∖ H_x` with `x ∼ y`, `cg(x, y)` relates an element of `D_1` to one of `D_0`.
fn level_pairs_drop(t: &Instance, k1: usize) -> bool {
    let g = &t.green;
    let closure = t.closure();
    let d1 = t.d_class(t.ranks[k1]).to_vec();
    let lower = |x: usize| t.elems[x].rank() < t.ranks[k1];
    d1.par_iter().all(|&x| {
        d1.iter().filter(|&&y| y > x && t.s.same_hom(x, y) && g.h[x] != g.h[y]).all(|&y| {
            let c = closure.principal(x, y).unwrap();
            let mut hit = vec![false; t.n()];
            d1.iter().for_each(|&z| hit[c.rep(z)] = true);
            (0..t.n()).any(|z| lower(z) && t.elems[z].rank() == t.ranks[0] && hit[c.rep(z)])
        })
    })
}

/// `cg(x, y) ⊇ target` for all `x ∼ y` not related by `skip`.
fn pairs_generate(t: &Instance, target: &Congruence, skip: &(dyn Fn(usize, usize) -> bool + Sync)) -> bool {
    let closure = t.closure();
    (0..t.n()).into_par_iter().all(|x| {
        (x + 1..t.n()).filter(|&y| t.s.same_hom(x, y) && !skip(x, y)).all(|y| target.leq(&closure.principal(x, y).unwrap()))
    })
}

fn is_h_trivial(t: &Instance, k: usize) -> bool {
    let d = t.d_class(t.ranks[k]);
    d.iter().all(|&x| t.green.h_class(x).len() == 1)
}

/// Applies one of the short-chain propositions to `t` after checking every hypothesis.
pub fn predict_small(t: &Instance, variant: SmallVariant) -> Result<Prediction, Error> {
    let cx = Context::new(t)?;
    let k = t.ranks.len();
    let g = &t.green;
    hypothesis(is_h_trivial(t, 0), "D0 is H-trivial")?;
    match variant {
        SmallVariant::Retractable => {
            hypothesis(k == 2, "height two")?;
            hypothesis(cx.retraction_at(1).is_ok(), "retractable onto D0")?;
            hypothesis(level_pairs_drop(t, 1), "D1 pairs reach D0")?;
            small_ideal(&cx, "small-ideal")
        }
        SmallVariant::Height2 => {
            hypothesis(k == 2, "height two")?;
            hypothesis(level_pairs_drop(t, 1), "(i) D1 pairs reach D0")?;
            let f0 = cx.retraction_at(0)?;
            let [_, lam, rho, r] = in_pair_family(t, &f0, &Congruence::identity(t.n()))?;
            hypothesis(pairs_generate(t, &rho, &|x, y| g.l[x] == g.l[y]), "(ii) non-L pairs generate rho_D0")?;
            hypothesis(pairs_generate(t, &lam, &|x, y| g.r[x] == g.r[y]), "(iii) non-R pairs generate lam_D0")?;
            let grp = &cx.groups[1];
            let e = grp.idempotent;
            let d0 = t.d_class(t.ranks[0]);
            let separated = |left: bool| {
                grp.elems.iter().filter(|&&x| x != e).all(|&x| {
                    d0.iter().any(|&a| {
                        let (p, q) = if left { (t.s.mul(a, e), t.s.mul(a, x)) } else { (t.s.mul(e, a), t.s.mul(x, a)) };
                        matches!((p, q), (Some(p), Some(q)) if p != q)
                    })
                })
            };
            hypothesis(rho.is_identity() || separated(true), "(iv) left separation in G")?;
            hypothesis(lam.is_identity() || separated(false), "(v) right separation in G")?;
            let mut out = Prediction::new("small01");
            let q = t.ranks[0];
            out.push("Delta", constructions::delta(t));
            out.push(format!("lam_I{q}"), lam);
            out.push(format!("rho_I{q}"), rho);
            out.push(format!("R_I{q}"), r);
            for i in 0..cx.normals[1].len() {
                let n = cx.r_in(0, i)?;
                out.push(n.label, n.cong);
            }
            out.push("Nabla", constructions::nabla(t));
            Ok(out)
        }
        SmallVariant::Height3 => {
            hypothesis(k == 3, "height three")?;
            let f = cx.retraction_at(1).map_err(|_| Error::Precondition("hypothesis fails: S = D0 ∪ D1 retractable".into()))?;
            hypothesis(check_properties(t).sep(), "Sep(T)")?;
            hypothesis(level_pairs_drop(t, 1), "(i) D1 pairs reach D0")?;
            let f0 = cx.retraction_at(0)?;
            let [_, lam0, rho0, _] = in_pair_family(t, &f0, &Congruence::identity(t.n()))?;
            let lf = theta(t, &f, Tau::L);
            let rf = theta(t, &f, Tau::R);
            hypothesis(pairs_generate(t, &rho0, &|x, y| g.l[x] == g.l[y] || lf.rel(x, y)), "(ii) rho_D0 generation")?;
            hypothesis(pairs_generate(t, &lam0, &|x, y| g.r[x] == g.r[y] || rf.rel(x, y)), "(iii) lam_D0 generation")?;
            // (iv): H is the largest normal subgroup of G2 forming a retractable IN-pair with S
            let g2 = &cx.groups[2];
            let admissible: Vec<usize> = (0..cx.normals[2].len()).filter(|&i| in_pair_condition(t, g2, &cx.normals[2][i])).collect();
            let h_idx = *admissible.iter().max_by_key(|&&i| cx.normals[2][i].len()).ok_or_else(|| Error::Precondition("hypothesis fails: (iv) no retractable IN-pair".into()))?;
            let h = &cx.normals[2][h_idx];
            hypothesis(admissible.iter().all(|&i| cx.normals[2][i].iter().all(|x| h.binary_search(x).is_ok())), "(iv) a largest retractable H")?;
            let e = g2.idempotent;
            let d0 = t.d_class(t.ranks[0]);
            let ok = (0..g2.elems.len()).filter(|x| h.binary_search(x).is_err()).all(|i| {
                let x = g2.elems[i];
                let left = d0.iter().any(|&a| matches!((t.s.mul(a, e), t.s.mul(a, x)), (Some(p), Some(q)) if p != q));
                let right = d0.iter().any(|&b| matches!((t.s.mul(e, b), t.s.mul(x, b)), (Some(p), Some(q)) if p != q));
                left && right
            });
            hypothesis(ok, "(iv) separation outside H")?;
            let mut out = Prediction::new("small012");
            for i in 0..cx.normals[1].len() {
                for n in cx.in_pair(0, &f0, i)? {
                    out.push(n.label, n.cong);
                }
            }
            for (i, n) in cx.normals[2].iter().enumerate() {
                if n.iter().all(|x| h.binary_search(x).is_ok()) {
                    for n in cx.in_pair(1, &f, i)? {
                        out.push(n.label, n.cong);
                    }
                } else {
                    let n = cx.r_in(1, i)?;
                    out.push(n.label, n.cong);
                }
            }
            out.push("Nabla", constructions::nabla(t));
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elements::{Family, FamilySpec};

    fn ideal(f: Family, objs: &[usize], r: usize) -> Instance {
        Instance::build(&FamilySpec::new(f, objs), false).unwrap().ideal(r).unwrap()
    }

    #[test]
    fn transformation_mult() {
        for r in 2..=4 {
            let rep = check_properties(&ideal(Family::T, &[4], r));
            assert!(rep.mult(), "r = {r}: {:?}", rep.lines());
            assert!(rep.ngen());
            assert!(rep.grid_consistent());
        }
    }

    #[test]
    fn small_variants() {
        let t = ideal(Family::T, &[4], 2);
        assert_eq!(predict_small(&t, SmallVariant::Height2).unwrap().len(), 4);
        assert!(predict_small(&t, SmallVariant::Retractable).is_err());
        let b3 = ideal(Family::B, &[3], 3);
        assert_eq!(predict_small(&b3, SmallVariant::Height2).unwrap().len(), 7);
    }
}

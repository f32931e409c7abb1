use congwb::congruence::{h_relation, is_liftable, zeta};
use congwb::constructions::{in_pair_family, nu, nu_formula, nz_tuples, phi_in, rees, retraction, set_partitions, tau_n, theta, zeta_subgroup, Tau};
use congwb::lattice::Poset;
use congwb::{all_congruences, Congruence, Family, FamilySpec, Instance, LatticeOptions};
use proptest::prelude::*;
use std::collections::HashSet;
use std::sync::OnceLock;

fn build(s: FamilySpec) -> Instance {
    Instance::build(&s, false).unwrap()
}

fn ideal(s: FamilySpec, r: usize) -> Instance {
    build(s).ideal(r).unwrap()
}

fn lattice(t: &Instance) -> Vec<Congruence> {
    all_congruences(&t.closure(), &LatticeOptions::default()).unwrap().congs
}

/// Every equivalence refining the hom-sets, filtered by the congruence axioms.
fn naive_congruences(t: &Instance) -> HashSet<Vec<u32>> {
    let n = t.n();
    set_partitions(n)
        .into_iter()
        .filter(|rgs| (0..n).all(|x| (0..n).all(|y| rgs[x] != rgs[y] || t.s.same_hom(x, y))))
        .map(|rgs| Congruence::from_key(n, |x| rgs[x]))
        .filter(|c| c.is_congruence(&t.s))
        .map(|c| c.class_vec().to_vec())
        .collect()
}

#[test]
fn lattice_matches_naive_enumeration() {
    let specs = [
        FamilySpec::new(Family::T, &[2]),
        FamilySpec::new(Family::T, &[1, 2]),
        FamilySpec::new(Family::B, &[2]),
        FamilySpec::new(Family::P, &[1]),
        FamilySpec::new(Family::Tl, &[3]),
        FamilySpec::new(Family::Motzkin, &[2]),
        FamilySpec::new(Family::OpT, &[3]),
        FamilySpec::linear(Family::L, &[1], 3),
    ];
    let mut checked = 0;
    for s in specs {
        let t = build(s.clone());
        if t.n() > 10 {
            continue;
        }
        let fast: HashSet<Vec<u32>> = lattice(&t).iter().map(|c| c.class_vec().to_vec()).collect();
        assert_eq!(fast, naive_congruences(&t), "{}", s.name());
        checked += 1;
    }
    assert!(checked >= 6, "only {checked} instances were small enough");
}

fn t3() -> &'static Instance {
    static T: OnceLock<Instance> = OnceLock::new();
    T.get_or_init(|| build(FamilySpec::new(Family::T, &[3])))
}

fn p2() -> &'static Instance {
    static T: OnceLock<Instance> = OnceLock::new();
    T.get_or_init(|| build(FamilySpec::new(Family::P, &[2])))
}

fn pairs(t: &Instance, raw: &[(usize, usize)]) -> Vec<(usize, usize)> {
    raw.iter().map(|&(a, b)| (a % t.n(), b % t.n())).filter(|&(a, b)| t.s.same_hom(a, b)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn closure_is_monotone_and_idempotent(raw in prop::collection::vec((0usize..1000, 0usize..1000), 0..6), extra in (0usize..1000, 0usize..1000)) {
        for t in [t3(), p2()] {
            let cl = t.closure();
            let ps = pairs(t, &raw);
            let c = cl.generate(ps.clone()).unwrap();
            prop_assert!(c.is_congruence(&t.s));
            prop_assert!(ps.iter().all(|&(a, b)| c.rel(a, b)));
            prop_assert_eq!(&cl.generate(c.spanning_pairs().into_iter().map(|(a, b)| (a as usize, b as usize))).unwrap(), &c);
            let mut more = ps.clone();
            more.extend(pairs(t, &[extra]));
            prop_assert!(c.leq(&cl.generate(more).unwrap()));
        }
    }

    #[test]
    fn largest_below_is_the_largest_congruence_below(labels in prop::collection::vec(0u8..3, 27)) {
        for t in [t3(), p2()] {
            let theta = Congruence::from_key(t.n(), |x| (t.s.bd(x), t.s.br(x), labels[x % labels.len()]));
            let lb = t.closure().largest_below(&theta);
            prop_assert!(lb.is_congruence(&t.s));
            prop_assert!(lb.leq(&theta));
            for c in lattice(t) {
                if c.leq(&theta) {
                    prop_assert!(c.leq(&lb));
                }
            }
        }
    }
}

#[test]
fn lattices_are_closed_under_join_and_meet() {
    for (s, r) in [(FamilySpec::new(Family::T, &[4]), 3), (FamilySpec::new(Family::P, &[3]), 2), (FamilySpec::new(Family::B, &[4]), 2)] {
        let t = ideal(s, r);
        let congs = lattice(&t);
        let set: HashSet<&Congruence> = congs.iter().collect();
        for a in &congs {
            for b in &congs {
                assert!(set.contains(&a.join(b)));
                assert!(set.contains(&a.meet(b)));
            }
        }
    }
}

#[test]
fn zeta_restricts_to_ideals() {
    let cases = [
        (FamilySpec::new(Family::T, &[4]), vec![1, 2, 3]),
        (FamilySpec::new(Family::B, &[4]), vec![0, 2]),
        (FamilySpec::linear(Family::L, &[2], 3), vec![0, 1]),
    ];
    for (s, rs) in cases {
        let t = build(s);
        let zt = zeta(&t.closure(), &t.green);
        for r in rs {
            let sub = t.ideal(r).unwrap();
            let zs = zeta(&sub.closure(), &sub.green);
            assert_eq!(zt.restrict(&t.ideal_members(r)), zs, "rank {r}");
            assert!(zs.leq(&h_relation(&sub.green)));
        }
    }
}

#[test]
fn liftable_congruences_form_a_sublattice() {
    for (s, q, r) in [(FamilySpec::new(Family::B, &[4]), 2, 4), (FamilySpec::new(Family::T, &[4]), 2, 3)] {
        let t = ideal(s, r);
        let sub = t.ideal(q).unwrap();
        let embed = t.ideal_members(q);
        let lift: Vec<Congruence> = lattice(&sub).into_iter().filter(|c| is_liftable(c, &t.s, &embed)).collect();
        assert!(!lift.is_empty());
        let set: HashSet<&Congruence> = lift.iter().collect();
        for a in &lift {
            for b in &lift {
                assert!(set.contains(&a.join(b)) && set.contains(&a.meet(b)));
            }
        }
    }
}

/// `(instance, rank)` pairs whose top D-class is small enough for the direct formula.
fn d_classes() -> Vec<(Instance, usize)> {
    vec![
        (build(FamilySpec::new(Family::T, &[4])), 3),
        (build(FamilySpec::new(Family::T, &[4])), 4),
        (build(FamilySpec::new(Family::P, &[3])), 3),
        (build(FamilySpec::new(Family::B, &[4])), 4),
        (build(FamilySpec::new(Family::Jpm, &[4])), 4),
        (build(FamilySpec::linear(Family::L, &[2], 3)), 2),
        (build(FamilySpec::linear(Family::L, &[2], 3)), 1),
    ]
}

#[test]
fn nu_closure_matches_direct_formula() {
    for (t, q) in d_classes() {
        assert!(t.d_class(q).len() <= 400);
        let g = t.max_subgroup(q).unwrap();
        let cl = t.closure();
        let h = h_relation(&t.green);
        for n in g.group.normal_subgroups() {
            let a = nu(&t, &cl, &g, &n);
            assert_eq!(a, nu_formula(&t, &g, &n), "{} rank {q}", t.spec.name());
            assert!(a.leq(&h));
            assert_eq!(zeta_subgroup(&a, &g), n, "N is recovered from ν_N");
        }
    }
}

#[test]
fn nu_preserves_joins() {
    for (t, q) in d_classes() {
        let g = t.max_subgroup(q).unwrap();
        let cl = t.closure();
        let ns = g.group.normal_subgroups();
        for a in &ns {
            for b in &ns {
                let gens: Vec<usize> = a.iter().chain(b).copied().collect();
                let ab = g.group.generated(&gens);
                assert_eq!(nu(&t, &cl, &g, a).join(&nu(&t, &cl, &g, b)), nu(&t, &cl, &g, &ab));
            }
        }
    }
}

#[test]
fn phi_membership_describes_nu() {
    for (t, q) in d_classes() {
        let g = t.max_subgroup(q).unwrap();
        let cl = t.closure();
        let d = t.d_class(q);
        for n in g.group.normal_subgroups() {
            let nu_n = nu(&t, &cl, &g, &n);
            for &a in d {
                for &b in d {
                    if t.green.h[a] == t.green.h[b] {
                        assert_eq!(phi_in(&t, &g, a, b, &n).unwrap(), nu_n.rel(a, b));
                    }
                }
            }
        }
        if let Some(&b) = d.iter().find(|&&b| t.green.h[b] != t.green.h[d[0]]) {
            assert!(phi_in(&t, &g, d[0], b, &g.group.whole()).is_err());
        }
    }
}

#[test]
fn retractions_absorb_products() {
    let cases = [
        (FamilySpec::new(Family::P, &[3]), 1),
        (FamilySpec::new(Family::P, &[2]), 1),
        (FamilySpec::new(Family::B, &[4]), 2),
        (FamilySpec::new(Family::Pb, &[3]), 1),
        (FamilySpec::new(Family::Tl, &[6]), 2),
    ];
    for (s, q) in cases {
        let t = ideal(s.clone(), q);
        let f = retraction(&t, q).map().map(<[usize]>::to_vec).unwrap_or_else(|| panic!("{} I{q} not retractable", s.name()));
        for x in 0..t.n() {
            assert_eq!(f[f[x]], f[x]);
            for &y in t.s.right_of(x) {
                let (y, xy) = (y as usize, t.s.mul_unchecked(x, y as usize));
                assert_eq!(f[xy], t.s.mul_unchecked(x, f[y]), "{} (xy)f = x(yf)", s.name());
                assert_eq!(f[xy], t.s.mul_unchecked(f[x], y), "{} (xy)f = (xf)y", s.name());
            }
        }
    }
}

#[test]
fn nz_tuples_are_the_h_congruences() {
    for s in [FamilySpec::linear(Family::L, &[2], 3), FamilySpec::new(Family::B, &[4]), FamilySpec::new(Family::T, &[3])] {
        let t = build(s.clone());
        let cl = t.closure();
        let z = zeta(&cl, &t.green);
        let nz = nz_tuples(&t, &cl, &z).unwrap();
        let h = h_relation(&t.green);
        let oracle: HashSet<Congruence> = lattice(&t).into_iter().filter(|c| c.leq(&h)).collect();
        let got: HashSet<Congruence> = nz.congruences.iter().cloned().collect();
        assert_eq!(got.len(), nz.tuples.len(), "{}: Θ is injective", s.name());
        assert_eq!(got, oracle, "{}", s.name());
        assert!(got.iter().all(|c| c.leq(&z)));
    }
}

#[test]
fn stacking_counts() {
    // base, then layers glued bottom-to-top, then a new top
    let c = Poset::chain;
    let t4 = Poset::stack_lattices(&c(2), &[c(2), c(3), c(4)]);
    assert_eq!(t4.len(), 2 + (2 - 1) + 3 + 4 + 1);
    assert!(t4.is_chain());
    let b3 = Poset::stack_lattices(&c(2).product(&c(2)), &[c(3)]);
    assert_eq!(b3.len(), 4 + (3 - 1) + 1);
    assert!(b3.is_lattice() && !b3.is_chain());
    let with_product = Poset::stack_lattices(&c(1), &[c(2).product(&c(2)), c(2)]);
    assert_eq!(with_product.len(), 1 + 3 + 2 + 1);
}

/// Below `R_S ∪ ν_G` the congruences are exactly `σ ∪ ν_N` with `σ` liftable and `τ_N ⊆ σ`.
#[test]
fn interval_below_top_group_congruence() {
    for (s, r) in [(FamilySpec::new(Family::T, &[4]), 3), (FamilySpec::new(Family::B, &[4]), 4), (FamilySpec::new(Family::P, &[3]), 2)] {
        let t = ideal(s.clone(), r);
        let q = t.ranks[t.ranks.len() - 2];
        let sub = t.ideal(q).unwrap();
        let embed = t.ideal_members(q);
        let g = t.max_subgroup(r).unwrap();
        let cl = t.closure();
        let top = rees(&t, q).join(&nu(&t, &cl, &g, &g.group.whole()));
        let interval: HashSet<Congruence> = lattice(&t).into_iter().filter(|c| c.leq(&top)).collect();
        let sub_congs = lattice(&sub);
        let mut built = HashSet::new();
        for n in g.group.normal_subgroups() {
            let (tau, _) = tau_n(&t, &cl, &g, &n);
            let nu_n = nu(&t, &cl, &g, &n);
            for sigma in sub_congs.iter().filter(|c| tau.leq(c) && is_liftable(c, &t.s, &embed)) {
                built.insert(sigma.extend(t.n(), &embed).join(&nu_n));
            }
        }
        assert_eq!(built, interval, "{} r={r}", s.name());
    }
}

/// `η ⊆ μ ⊆ λ, ρ ⊆ R` for a retractable ideal, with `μ = η` over an H-trivial minimal ideal.
#[test]
fn retraction_family_inclusions() {
    for (s, q) in [(FamilySpec::new(Family::P, &[3]), 1), (FamilySpec::new(Family::B, &[4]), 2), (FamilySpec::new(Family::Pb, &[3]), 1)] {
        let t = ideal(s.clone(), q);
        let f = retraction(&t, q).map().unwrap().to_vec();
        let [mu, lam, rho, r] = in_pair_family(&t, &f, &Congruence::identity(t.n())).unwrap();
        let eta = theta(&t, &f, Tau::Delta);
        assert!(eta.leq(&mu) && mu.leq(&lam) && mu.leq(&rho) && lam.leq(&r) && rho.leq(&r), "{}", s.name());
        assert_eq!(lam.meet(&rho), mu);
        assert_eq!(lam.join(&rho), r);
        assert_eq!(r, rees(&t, q));
        let h_trivial = t.d_class(t.ranks[0]).iter().all(|&x| t.green.h_class(x).len() == 1);
        assert!(!h_trivial || mu == eta, "{}", s.name());
        assert!([&eta, &mu, &lam, &rho, &r].iter().all(|c| c.is_congruence(&t.s)));
    }
}

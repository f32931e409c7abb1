//! End-to-end acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::collections::{BTreeSet, HashSet};
use std::time::Instant;

use congwb::congruence::{h_relation, is_liftable, zeta};
use congwb::constructions::{nu, nu_formula, nz_tuples, retraction, tau_n, zeta_subgroup};
use congwb::elements::Diagram;
use congwb::lattice::Poset;
use congwb::predict::{klein_members, predict_theorem, verify_instance, Prediction, Report};
use congwb::properties::check_properties;
use congwb::{all_congruences, CongLattice, Congruence, Elem, Error, Family, FamilySpec, Instance, LatticeOptions};

#[derive(Default)]
struct Check {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Check {
    fn ok(&mut self, cond: bool, what: impl Into<String>) {
        if !cond {
            self.failures.push(what.into());
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    /// Verifies `I_r` of `spec` against the oracle; returns the pieces for further checks.
    fn verify(&mut self, spec: &FamilySpec, r: usize) -> Result<(Instance, Report, Prediction, CongLattice), Error> {
        let t = Instance::build(spec, false)?.ideal(r)?;
        let (rep, pred, lat) = verify_instance(&t, &LatticeOptions::default())?;
        self.ok(rep.equal(), format!("{} missing={:?} extra={:?}", rep.line(), rep.missing, rep.extra));
        self.ok(rep.hasse_isomorphic, format!("{}: Hasse diagrams differ", rep.line()));
        self.ok(rep.shape_isomorphic != Some(false), format!("{}: abstract shape differs", rep.line()));
        Ok((t, rep, pred, lat))
    }
}

fn t(f: Family, objs: &[usize]) -> FamilySpec {
    FamilySpec::new(f, objs)
}

fn lin(f: Family, objs: &[usize], p: u8) -> FamilySpec {
    FamilySpec::linear(f, objs, p)
}

fn labels(p: &Prediction) -> BTreeSet<String> {
    p.congruences.iter().map(|n| n.label.clone()).collect()
}

fn c1(ck: &mut Check) -> Result<(), Error> {
    let mut counts = Vec::new();
    for (r, n) in [(1, 15), (2, 4), (3, 7), (4, 11)] {
        let (_, rep, _, _) = ck.verify(&t(Family::T, &[4]), r)?;
        ck.ok(rep.oracle == n, format!("r={r}: {} congruences, expected {n}", rep.oracle));
        ck.ok(r < 2 || rep.is_chain, format!("r={r}: not a chain"));
        counts.push(rep.oracle);
    }
    ck.note(format!("counts {counts:?}"));
    Ok(())
}

fn c2(ck: &mut Check) -> Result<(), Error> {
    let mut counts = Vec::new();
    for f in [Family::T, Family::OpT, Family::OprT, Family::OripT, Family::OriprT] {
        let (inst, rep, _, _) = ck.verify(&t(f, &[4]), 4)?;
        counts.push(rep.oracle);
        let g = inst.max_subgroup(4)?.group;
        match f {
            Family::OripT => ck.ok(g.order() == 4 && g.is_cyclic(), format!("OriP group is {}", g.structure())),
            Family::OriprT => ck.ok(g.order() == 8 && g.is_dihedral(), format!("OriPR group is {}", g.structure())),
            _ => {}
        }
    }
    ck.note(format!("counts {counts:?}"));
    Ok(())
}

fn c3(ck: &mut Check) -> Result<(), Error> {
    let mut lats = Vec::new();
    for r in 0..=3 {
        let (_, rep, _, lat) = ck.verify(&t(Family::P, &[3]), r)?;
        lats.push(lat);
        ck.note(format!("r={r}: {}", rep.oracle));
    }
    ck.ok(lats[0].len() == 52 * 52, format!("|Cong(I0)| = {}", lats[0].len()));
    let prod = Poset::from_congruences(&lats[0]).product(&Poset::chain(2));
    ck.ok(prod.is_isomorphic(&Poset::from_congruences(&lats[1])), "Cong(I1) is not Cong(I0) x 2");
    Ok(())
}

fn c4(ck: &mut Check) -> Result<(), Error> {
    let (_, rep, _, lat) = ck.verify(&t(Family::B, &[4]), 2)?;
    ck.ok(rep.oracle == 75, format!("|Cong(I2)| = {}", rep.oracle));
    let eq3 = Poset::eq_lattice(3);
    let shape = eq3.product(&eq3).product(&Poset::chain(3));
    ck.ok(shape.is_isomorphic(&Poset::from_congruences(&lat)), "Cong(I2) is not Eq3 x Eq3 x 3");
    let (_, rep, pred, _) = ck.verify(&t(Family::B, &[4]), 4)?;
    let ls = labels(&pred);
    ck.ok(ls.iter().any(|l| l.ends_with("_K")), format!("no Klein-group layer among {ls:?}"));
    ck.note(format!("I2: 75, I4: {}", rep.oracle));
    Ok(())
}

fn c5(ck: &mut Check) -> Result<(), Error> {
    let (_, rep, pred, _) = ck.verify(&t(Family::B, &[3]), 3)?;
    ck.ok(rep.oracle == 7, format!("|Cong(B3)| = {}", rep.oracle));
    let want: BTreeSet<String> =
        ["Delta", "lam_I1", "rho_I1", "R_I1", "R_I1_A3", "R_I1_S3", "Nabla"].iter().map(|s| s.to_string()).collect();
    ck.ok(labels(&pred) == want, format!("labels {:?}", labels(&pred)));
    Ok(())
}

fn c6(ck: &mut Check) -> Result<(), Error> {
    for (f, n, rs) in [(Family::Tl, 4, vec![0, 2, 4]), (Family::Tl, 5, vec![1, 3, 5]), (Family::Tl, 6, vec![0, 2, 4, 6]), (Family::Tlpm, 4, vec![0, 2, 4])] {
        for r in rs {
            let (_, rep, _, _) = ck.verify(&t(f, &[n]), r)?;
            ck.note(format!("{} r={r}: {}", rep.spec, rep.oracle));
        }
    }
    Ok(())
}

fn c7(ck: &mut Check) -> Result<(), Error> {
    for f in [Family::J, Family::Jpm] {
        for r in [0, 2, 4] {
            let (_, rep, _, _) = ck.verify(&t(f, &[4]), r)?;
            ck.note(format!("{} r={r}: {}", rep.spec, rep.oracle));
        }
        // r = 1 is a partial rectangular band with ~1.3e10 congruences; skipped
        for r in [3, 5] {
            let (_, rep, _, _) = ck.verify(&t(f, &[5]), r)?;
            ck.note(format!("{} r={r}: {}", rep.spec, rep.oracle));
        }
    }
    let inst = Instance::build(&t(Family::Jpm, &[4]), false)?;
    let g = inst.max_subgroup(4)?;
    let k = klein_members(&inst, &g);
    let inside = g.group.normal_subgroups().iter().filter(|n| n.iter().all(|x| k.binary_search(x).is_ok())).count();
    ck.ok(inside == 3, format!("{inside} normal subgroups of G4 inside the Klein group"));
    Ok(())
}

/// The scalar relation `y = cx` for a nonzero scalar `c`.
fn scalar_relation(t: &Instance) -> Congruence {
    Congruence::from_key(t.n(), |x| match &t.elems[x] {
        Elem::Mat(m) => (1..m.p).map(|c| m.e.iter().map(|&a| (a as u32 * c as u32 % m.p as u32) as u8).collect::<Vec<u8>>()).min().unwrap(),
        _ => unreachable!(),
    })
}

fn c8(ck: &mut Check) -> Result<(), Error> {
    for p in [2, 3] {
        for r in 0..=2 {
            let (_, rep, _, _) = ck.verify(&lin(Family::L, &[2], p), r)?;
            ck.note(format!("Z{p} r={r}: {}", rep.oracle));
        }
    }
    let m3 = Instance::build(&lin(Family::L, &[2], 3), false)?;
    let z = zeta(&m3.closure(), &m3.green);
    ck.ok(z.n_classes() == 41, format!("zeta has {} classes", z.n_classes()));
    ck.ok(z == scalar_relation(&m3), "zeta is not the scalar relation");

    // M2(Z7): predicted list checked structurally, without the full lattice
    let m7 = Instance::build(&lin(Family::L, &[2], 7), true)?;
    let g2 = m7.max_subgroup(2)?;
    let normals = g2.group.normal_subgroups();
    ck.ok(g2.group.order() == 2016 && normals.len() == 8, format!("GL2(7): order {}, {} normal subgroups", g2.group.order(), normals.len()));
    let i1 = m7.ideal(1)?;
    let cong1 = all_congruences(&i1.closure(), &LatticeOptions::default())?;
    ck.ok(i1.n() == 385 && cong1.len() == 5, format!("I1: {} elements, {} congruences", i1.n(), cong1.len()));
    let cl = m7.closure();
    let embed = m7.ideal_members(1);
    let mut layers = Vec::new();
    let mut built = HashSet::new();
    for n in &normals {
        let (tau, _) = tau_n(&m7, &cl, &g2, n);
        let nu_n = nu(&m7, &cl, &g2, n);
        let mut size = 0;
        for sigma in cong1.congs.iter().filter(|s| tau.leq(s) && is_liftable(s, &m7.s, &embed)) {
            size += 1;
            built.insert(sigma.extend(m7.n(), &embed).join(&nu_n));
        }
        layers.push(size);
    }
    layers.sort_unstable_by(|a, b| b.cmp(a));
    ck.ok(layers == [5, 3, 3, 2, 1, 1, 1, 1], format!("layer sizes {layers:?}"));
    built.insert(Congruence::universal(&m7.s));
    let pred = predict_theorem(&m7)?;
    let predicted: HashSet<Congruence> = pred.congruences.iter().map(|n| n.cong.clone()).collect();
    ck.ok(pred.len() == 18 && predicted.len() == 18, format!("M2(Z7): {} predicted", pred.len()));
    ck.ok(predicted == built, "M2(Z7): prediction differs from the layer construction");
    ck.ok(pred.congruences.iter().all(|n| n.cong.is_congruence(&m7.s)), "M2(Z7): a predicted relation is not a congruence");
    ck.note(format!("M2(Z7): 18 predicted, layers {layers:?}"));
    Ok(())
}

fn c9(ck: &mut Check) -> Result<(), Error> {
    for r in 0..=2 {
        let (_, rep, _, _) = ck.verify(&lin(Family::Pl, &[2], 3), r)?;
        ck.note(format!("r={r}: {}", rep.oracle));
    }
    let inst = Instance::build(&lin(Family::Pl, &[2], 3), false)?;
    ck.ok(check_properties(&inst).sep(), "Sep fails on PL2(Z3)");
    Ok(())
}

fn c10(ck: &mut Check) -> Result<(), Error> {
    let m3 = Instance::build(&lin(Family::L, &[2], 3), false)?;
    let cl = m3.closure();
    let z = zeta(&cl, &m3.green);
    let nz = nz_tuples(&m3, &cl, &z)?;
    let h = h_relation(&m3.green);
    let lat = all_congruences(&cl, &LatticeOptions::default())?;
    let oracle: HashSet<&Congruence> = lat.congs.iter().filter(|c| c.leq(&h)).collect();
    let theta: HashSet<&Congruence> = nz.congruences.iter().collect();
    ck.ok(oracle == theta, format!("{} H-congruences vs {} NZ-tuples", oracle.len(), theta.len()));
    ck.note(format!("M2(Z3): {} H-congruences", oracle.len()));

    let (b4, _, pred, lat) = ck.verify(&t(Family::B, &[4]), 4)?;
    let zb = zeta(&b4.closure(), &b4.green);
    ck.ok(pred.label_of(&zb) == Some("mu_I0_S2"), format!("zeta(B4) is {:?}", pred.label_of(&zb)));
    let hb = h_relation(&b4.green);
    let nontrivial: Vec<&Congruence> = lat.congs.iter().filter(|c| c.leq(&hb) && !c.is_identity()).collect();
    ck.ok(nontrivial == [&zb], format!("{} nontrivial H-congruences on B4", nontrivial.len()));
    Ok(())
}

fn c11(ck: &mut Check) -> Result<(), Error> {
    // Green's relations against kernel/image/rank descriptions
    for spec in [t(Family::T, &[2, 3]), t(Family::P, &[3]), t(Family::B, &[4]), t(Family::Jpm, &[4]), lin(Family::L, &[2], 3), lin(Family::Pl, &[2], 3)] {
        let inst = Instance::build(&spec, false)?;
        let (g, e) = (&inst.green, &inst.elems);
        let (ri, li): (Vec<_>, Vec<_>) = e.iter().map(|x| (x.r_invariant(), x.l_invariant())).unzip();
        let ok = (0..inst.n()).all(|x| {
            (0..inst.n()).all(|y| {
                (g.r[x] == g.r[y]) == (ri[x] == ri[y]) && (g.l[x] == g.l[y]) == (li[x] == li[y]) && (g.d[x] == g.d[y]) == (e[x].rank() == e[y].rank())
            })
        });
        ck.ok(ok, format!("Green's relations on {}", spec.name()));
    }

    // involution laws and planarity closure
    let diags = |spec: FamilySpec| -> Result<Vec<Diagram>, Error> {
        Ok(spec.generate(usize::MAX)?.into_iter().filter_map(|e| if let Elem::Diag(d) = e { Some(d) } else { None }).collect())
    };
    let p3 = diags(t(Family::P, &[3]))?;
    let inv = p3.iter().all(|a| a.star().star() == *a && a.compose(&a.star()).compose(a) == *a)
        && p3.iter().take(60).all(|a| p3.iter().all(|b| a.compose(b).star() == b.star().compose(&a.star())));
    ck.ok(inv, "involution laws on P3");
    for f in [Family::Motzkin, Family::OpP] {
        let pl = diags(t(f, &[3]))?;
        ck.ok(pl.iter().all(|a| a.is_planar() && pl.iter().all(|b| a.compose(b).is_planar())), "planar diagrams are not closed");
    }
    let ann: Vec<Diagram> = diags(t(Family::B, &[4]))?.into_iter().filter(Diagram::is_annular).collect();
    ck.ok(ann.iter().all(|a| ann.iter().all(|b| a.compose(b).is_annular())), "annular diagrams are not closed");

    // ν: direct formula, recovery of N, join law
    let d_classes = [
        (t(Family::T, &[4]), 3),
        (t(Family::T, &[4]), 4),
        (t(Family::P, &[3]), 3),
        (t(Family::B, &[4]), 4),
        (t(Family::J, &[4]), 4),
        (t(Family::Jpm, &[4]), 4),
        (t(Family::OriprT, &[4]), 4),
        (lin(Family::L, &[2], 3), 1),
        (lin(Family::L, &[2], 3), 2),
        (lin(Family::Pl, &[2], 3), 2),
    ];
    for (spec, q) in &d_classes {
        let inst = Instance::build(spec, false)?;
        if inst.d_class(*q).len() > 400 {
            continue;
        }
        let g = inst.max_subgroup(*q)?;
        let cl = inst.closure();
        let ns = g.group.normal_subgroups();
        let nus: Vec<Congruence> = ns.iter().map(|n| nu(&inst, &cl, &g, n)).collect();
        for (n, v) in ns.iter().zip(&nus) {
            ck.ok(*v == nu_formula(&inst, &g, n), format!("nu formula on {} rank {q}", spec.name()));
            ck.ok(zeta_subgroup(v, &g) == *n, format!("N not recovered on {} rank {q}", spec.name()));
        }
        for (i, a) in ns.iter().enumerate() {
            for (j, b) in ns.iter().enumerate() {
                let ab = g.group.generated(&a.iter().chain(b).copied().collect::<Vec<_>>());
                let k = ns.iter().position(|n| *n == ab).expect("product of normal subgroups is normal");
                ck.ok(nus[i].join(&nus[j]) == nus[k], format!("nu join law on {} rank {q}", spec.name()));
            }
        }
    }

    // retraction identity (xy)f = x(yf) = (xf)y
    for (spec, q) in [(t(Family::P, &[3]), 1), (t(Family::B, &[4]), 2), (t(Family::Pb, &[3]), 1), (t(Family::Tl, &[6]), 2)] {
        let inst = Instance::build(&spec, false)?.ideal(q)?;
        let Some(f) = retraction(&inst, q).map().map(<[usize]>::to_vec) else {
            ck.ok(false, format!("{} I{q} has no retraction", spec.name()));
            continue;
        };
        let s = &inst.s;
        let ok = (0..inst.n()).all(|x| {
            s.right_of(x).iter().all(|&y| {
                let xy = f[s.mul_unchecked(x, y as usize)];
                xy == s.mul_unchecked(x, f[y as usize]) && xy == s.mul_unchecked(f[x], y as usize)
            })
        });
        ck.ok(ok, format!("retraction identity on {} I{q}", spec.name()));
    }

    // ζ restriction and lift sublattice closure
    for (spec, rs) in [(t(Family::T, &[4]), vec![1, 2, 3]), (t(Family::B, &[4]), vec![0, 2]), (lin(Family::L, &[2], 3), vec![0, 1])] {
        let inst = Instance::build(&spec, false)?;
        let zt = zeta(&inst.closure(), &inst.green);
        for r in rs {
            let sub = inst.ideal(r)?;
            ck.ok(zt.restrict(&inst.ideal_members(r)) == zeta(&sub.closure(), &sub.green), format!("zeta restriction {} r={r}", spec.name()));
        }
    }
    for (spec, q, r) in [(t(Family::B, &[4]), 2, 4), (t(Family::T, &[4]), 2, 3), (t(Family::P, &[3]), 1, 2)] {
        let inst = Instance::build(&spec, false)?.ideal(r)?;
        let sub = inst.ideal(q)?;
        let embed = inst.ideal_members(q);
        let lat = all_congruences(&sub.closure(), &LatticeOptions::default())?;
        let lift: Vec<&Congruence> = lat.congs.iter().filter(|c| is_liftable(c, &inst.s, &embed)).collect();
        let set: HashSet<&Congruence> = lift.iter().copied().collect();
        let closed = lift.iter().all(|a| lift.iter().all(|b| set.contains(&a.join(b)) && set.contains(&a.meet(b))));
        ck.ok(closed, format!("liftable congruences of {} I{q} in I{r} are not a sublattice", spec.name()));
    }

    // Mult / Multz
    let mult = [
        (t(Family::T, &[4]), vec![2, 3, 4]),
        (t(Family::P, &[3]), vec![2, 3]),
        (t(Family::B, &[3]), vec![3]),
        (t(Family::B, &[4]), vec![4]),
        (t(Family::Tl, &[5]), vec![3, 5]),
        (t(Family::Tl, &[6]), vec![4, 6]),
        (t(Family::Tlpm, &[4]), vec![4]),
        (t(Family::J, &[4]), vec![4]),
        (t(Family::Jpm, &[4]), vec![4]),
        (t(Family::J, &[5]), vec![3, 5]),
        (t(Family::Jpm, &[5]), vec![3, 5]),
        (lin(Family::Pl, &[2], 3), vec![2]),
    ];
    let mut n = 0;
    for (spec, rs) in mult {
        let inst = Instance::build(&spec, false)?;
        for r in rs {
            let rep = check_properties(&inst.ideal(r)?);
            ck.ok(rep.mult() && rep.grid_consistent(), format!("Mult on {} r={r}: {}", spec.name(), rep.lines().join("; ")));
            n += 1;
        }
    }
    for p in [2, 3] {
        let rep = check_properties(&Instance::build(&lin(Family::L, &[2], p), false)?);
        ck.ok(rep.multz() && rep.grid_consistent(), format!("Multz on M2(Z{p}): {}", rep.lines().join("; ")));
        n += 1;
    }
    ck.note(format!("{n} property reports"));
    Ok(())
}

fn main() {
    let criteria: [(&str, fn(&mut Check) -> Result<(), Error>); 11] = [
        ("transformation chain", c1),
        ("transformation reducts", c2),
        ("partition category", c3),
        ("Brauer even", c4),
        ("Brauer odd", c5),
        ("Temperley-Lieb", c6),
        ("Jones", c7),
        ("linear", c8),
        ("projective linear", c9),
        ("H-congruences", c10),
        ("property suite", c11),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut ck = Check::default();
        if let Err(e) = f(&mut ck) {
            ck.failures.push(format!("error: {e}"));
        }
        let secs = start.elapsed().as_secs_f64();
        if ck.failures.is_empty() {
            println!("PASS {:>2} {name} ({secs:.1}s): {}", i + 1, ck.notes.join(", "));
        } else {
            failed += 1;
            println!("FAIL {:>2} {name} ({secs:.1}s): {}", i + 1, ck.failures.join(" | "));
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use congwb::congruence::{principal_congruences, zeta};
use congwb::constructions::{self, in_pair_family, theta, Tau};
use congwb::predict::{predict_theorem, verify_instance, Context};
use congwb::properties::check_properties;
use congwb::{all_congruences, Congruence, Error, Family, FamilySpec, Instance, LatticeOptions};
use rayon::prelude::*;

use congwb_cli::config::{RunConfig, SpecArgs};
use congwb_cli::output::{lattice_dot, lattice_json, NamedJson};

#[derive(Parser, Debug)]
#[command(name = "congwb", version, about = "Congruence lattices of chain ideals in finite categories")]
struct Cli {
    /// JSON file with default values for the instance flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the category and summarise its size and D-class chain.
    Build(SpecArgs),
    /// Print the D-classes with their R/L/H data and maximal subgroups.
    Green(SpecArgs),
    /// Compute Cong(I_r) and write its JSON and DOT encodings.
    CongLattice {
        #[command(flatten)]
        spec: SpecArgs,
        /// Lattice JSON output path.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Hasse diagram DOT output path.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// List the principal congruences, or print the one generated by a pair of element indices.
    Principal {
        #[command(flatten)]
        spec: SpecArgs,
        /// Two element indices `x,y` in one hom-set.
        #[arg(long, value_delimiter = ',')]
        pair: Option<Vec<usize>>,
    },
    /// Build one named congruence and print its classes.
    Named {
        name: NamedKind,
        #[command(flatten)]
        spec: SpecArgs,
        /// Rank q of the ideal I_q (or of the D-class, for nu).
        #[arg(long)]
        ideal: Option<usize>,
        /// Normal subgroup name, as printed by `green`.
        #[arg(long)]
        subgroup: Option<String>,
        /// One normal subgroup name per D-class, bottom first (theta-tuple).
        #[arg(long, value_delimiter = ',')]
        tuple: Option<Vec<String>>,
    },
    /// Check the separation and multiplication properties of I_r over its top D-class.
    CheckProperties(SpecArgs),
    /// Compare the classification theorem with the brute-force lattice (all ranks if none given).
    Verify(SpecArgs),
    /// Run the built-in verification matrix.
    VerifyAll {
        #[arg(long)]
        force: bool,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum NamedKind {
    Rees,
    Nu,
    Rin,
    Lam,
    Rho,
    Mu,
    Eta,
    ThetaTuple,
    Zeta,
}

enum Failure {
    Mismatch,
    Err(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Err(e)
    }
}

type Res = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch) => ExitCode::from(1),
        Err(Failure::Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Guard(_) => 3,
                _ => 2,
            })
        }
    }
}

fn run(cli: Cli) -> Res {
    let cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(n) = cli.threads.or(cfg.threads) {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Validation(format!("cannot start {n} threads: {e}")))?;
    }
    match cli.command {
        Command::Build(a) => build(&a.merged(&cfg)),
        Command::Green(a) => green(&a.merged(&cfg)),
        Command::CongLattice { spec, json, dot } => cong_lattice(&spec.merged(&cfg), json.or(cfg.json.clone()), dot.or(cfg.dot.clone())),
        Command::Principal { spec, pair } => principal(&spec.merged(&cfg), pair),
        Command::Named { name, spec, ideal, subgroup, tuple } => named(&spec.merged(&cfg), name, ideal, subgroup, tuple),
        Command::CheckProperties(a) => properties(&a.merged(&cfg)),
        Command::Verify(a) => verify(&a.merged(&cfg)),
        Command::VerifyAll { force } => verify_all(force || cfg.force),
    }
}

fn instance(a: &SpecArgs) -> Result<Instance, Error> {
    let full = Instance::build(&a.spec()?, a.force)?;
    match a.rank {
        Some(r) => full.ideal(r),
        None => Ok(full),
    }
}

fn options(force: bool) -> LatticeOptions {
    LatticeOptions { force, ..LatticeOptions::default() }
}

fn build(a: &SpecArgs) -> Res {
    let t = instance(a)?;
    let ds: Vec<String> = t.ranks.iter().map(|&q| format!("D{q}({})", t.d_class(q).len())).collect();
    println!("{}: {} elements, D-classes: {}", t.spec.name(), t.n(), ds.join(" < "));
    let k = t.s.n_objects();
    let mut sizes = vec![0usize; k * k];
    (0..t.n()).for_each(|x| sizes[t.s.bd(x) * k + t.s.br(x)] += 1);
    for (i, &m) in t.spec.objects.iter().enumerate() {
        let row: Vec<String> = (0..k).map(|j| format!("{m}->{}: {}", t.spec.objects[j], sizes[i * k + j])).collect();
        println!("  hom-sets {}", row.join(", "));
    }
    println!("  regular: yes, stable: yes, ideals form a chain: yes");
    Ok(())
}

fn green(a: &SpecArgs) -> Res {
    let t = instance(a)?;
    let cx = Context::new(&t)?;
    for (k, &q) in t.ranks.iter().enumerate() {
        let d = t.d_class(q);
        let g = &t.green;
        let count = |v: &[u32]| d.iter().map(|&x| v[x]).collect::<std::collections::HashSet<_>>().len();
        let grp = &cx.groups[k].group;
        println!(
            "D{q}: {} elements, {} R-classes, {} L-classes, H-classes of size {}, group {} (order {}), normal subgroups: {}",
            d.len(),
            count(&g.r),
            count(&g.l),
            cx.groups[k].elems.len(),
            grp.structure(),
            grp.order(),
            cx.names[k].join(", ")
        );
    }
    Ok(())
}

/// Names from the theorem's list where available, with `Δ`, `∇` and the Rees congruences always named.
fn labels(t: &Instance, congs: &[Congruence]) -> (Vec<String>, Vec<bool>) {
    let pred = predict_theorem(t).ok();
    let rees: Vec<(usize, Congruence)> = t.ranks.iter().map(|&q| (q, constructions::rees(t, q))).collect();
    let nabla = constructions::nabla(t);
    let mut labels = Vec::new();
    let mut filled = Vec::new();
    for (i, c) in congs.iter().enumerate() {
        let r = rees.iter().find(|(_, r)| r == c);
        let is_rees = c.is_identity() || r.is_some();
        let label = pred.as_ref().and_then(|p| p.label_of(c)).map(str::to_string).unwrap_or_else(|| {
            if c.is_identity() {
                "Delta".into()
            } else if *c == nabla {
                "Nabla".into()
            } else if let Some((q, _)) = r {
                format!("R_I{q}")
            } else {
                format!("c{i}")
            }
        });
        labels.push(label);
        filled.push(is_rees);
    }
    (labels, filled)
}

fn cong_lattice(a: &SpecArgs, json: Option<PathBuf>, dot: Option<PathBuf>) -> Res {
    let t = instance(a)?;
    let lat = all_congruences(&t.closure(), &options(a.force))?;
    let (labels, filled) = labels(&t, &lat.congs);
    println!("{} r={}: {} congruences, {} covers", t.spec.name(), t.top_rank(), lat.len(), lat.covers.len());
    let write = |p: &PathBuf, s: String| std::fs::write(p, s).map_err(|e| Error::Validation(format!("cannot write {}: {e}", p.display())));
    if let Some(p) = json {
        let j = serde_json::to_string_pretty(&lattice_json(&t, &lat, &labels)).expect("serialisable");
        write(&p, j + "\n")?;
    }
    if let Some(p) = dot {
        write(&p, lattice_dot(&lat, &labels, &filled))?;
    }
    if lat.len() <= 64 {
        for (i, l) in labels.iter().enumerate() {
            println!("  {i}: {l} ({} classes)", lat.congs[i].n_classes());
        }
    }
    Ok(())
}

fn print_json<T: serde::Serialize>(v: &T) {
    use std::io::Write;
    // a closed pipe (e.g. `| head`) is not an error
    let _ = writeln!(std::io::stdout(), "{}", serde_json::to_string_pretty(v).expect("serialisable"));
}

fn principal(a: &SpecArgs, pair: Option<Vec<usize>>) -> Res {
    let t = instance(a)?;
    let cl = t.closure();
    if let Some(p) = pair {
        let &[x, y] = &p[..] else {
            return Err(Error::Validation("--pair takes two element indices".into()).into());
        };
        if x >= t.n() || y >= t.n() || !t.s.same_hom(x, y) {
            return Err(Error::Validation(format!("({x}, {y}) is not a pair of elements in one hom-set")).into());
        }
        let c = cl.principal(x, y)?;
        print_json(&NamedJson::new(&t, format!("cg({}, {})", t.label(x), t.label(y)), &c));
        return Ok(());
    }
    let ps = principal_congruences(&cl);
    println!("{} r={}: {} distinct principal congruences", t.spec.name(), t.top_rank(), ps.len());
    for (c, (x, y)) in ps {
        println!("  cg({}, {}): {} classes", t.label(x), t.label(y), c.n_classes());
    }
    Ok(())
}

fn position(t: &Instance, q: usize) -> Result<usize, Error> {
    t.check_rank(q)?;
    Ok(t.ranks.iter().position(|&r| r == q).unwrap())
}

fn subgroup_index(cx: &Context, k: usize, name: &str) -> Result<usize, Error> {
    cx.names[k].iter().position(|n| n == name).ok_or_else(|| {
        Error::Validation(format!("no normal subgroup '{name}' at rank {}; available: {}", cx.t.ranks[k], cx.names[k].join(", ")))
    })
}

fn named(a: &SpecArgs, kind: NamedKind, ideal: Option<usize>, subgroup: Option<String>, tuple: Option<Vec<String>>) -> Res {
    let t = instance(a)?;
    let cx = Context::new(&t)?;
    let need_ideal = || ideal.ok_or_else(|| Error::Validation("--ideal is required".into()));
    // N ⊴ G at the position just above I_q, trivial by default
    let above = |k: usize| -> Result<Option<(usize, usize)>, Error> {
        match &subgroup {
            None => Ok(None),
            Some(s) if k + 1 < t.ranks.len() => Ok(Some((k + 1, subgroup_index(&cx, k + 1, s)?))),
            Some(_) => Err(Error::Validation(format!("no D-class above rank {}", t.ranks[k]))),
        }
    };
    let suffix = |n: Option<(usize, usize)>| n.map(|(k, i)| format!("_{}", cx.names[k][i])).unwrap_or_default();
    let (label, c) = match kind {
        NamedKind::Rees => {
            let q = need_ideal()?;
            t.check_rank(q)?;
            (format!("R_I{q}"), constructions::rees(&t, q))
        }
        NamedKind::Nu => {
            let q = need_ideal()?;
            let k = position(&t, q)?;
            let i = match &subgroup {
                Some(s) => subgroup_index(&cx, k, s)?,
                None => cx.normals[k].len() - 1,
            };
            (format!("nu_D{q}_{}", cx.names[k][i]), cx.nu(k, &cx.normals[k][i]))
        }
        NamedKind::Rin => {
            let k = position(&t, need_ideal()?)?;
            let i = above(k)?.map_or(0, |(_, i)| i);
            if k + 1 >= t.ranks.len() {
                return Err(Error::Validation("R_{I,N} needs a D-class above the ideal".into()).into());
            }
            let n = cx.r_in(k, i)?;
            (n.label, n.cong)
        }
        NamedKind::Lam | NamedKind::Rho | NamedKind::Mu | NamedKind::Eta => {
            let q = need_ideal()?;
            let k = position(&t, q)?;
            let f = cx.retraction_at(k)?;
            let n = above(k)?;
            let nu_n = n.map_or_else(|| Congruence::identity(t.n()), |(k, i)| cx.nu(k, &cx.normals[k][i]));
            let [mu, lam, rho, _] = in_pair_family(&t, &f, &nu_n)?;
            let (name, c) = match kind {
                NamedKind::Lam => ("lam", lam),
                NamedKind::Rho => ("rho", rho),
                NamedKind::Mu => ("mu", mu),
                _ => ("eta", Congruence::union_disjoint(&[&theta(&t, &f, Tau::Delta), &nu_n])?),
            };
            (format!("{name}_I{q}{}", suffix(n)), c)
        }
        NamedKind::ThetaTuple => {
            let names = tuple.ok_or_else(|| Error::Validation("--tuple is required".into()))?;
            if names.len() != t.ranks.len() {
                return Err(Error::Validation(format!("--tuple needs {} entries, one per D-class", t.ranks.len())).into());
            }
            let parts = names
                .iter()
                .enumerate()
                .map(|(k, s)| Ok(cx.nu(k, &cx.normals[k][subgroup_index(&cx, k, s)?])))
                .collect::<Result<Vec<_>, Error>>()?;
            let c = Congruence::union_disjoint(&parts.iter().collect::<Vec<_>>())?;
            if !c.is_congruence(&t.s) {
                return Err(Error::Precondition(format!("({}) is not an NZ-tuple", names.join(","))).into());
            }
            (format!("Theta({})", names.join(",")), c)
        }
        NamedKind::Zeta => ("zeta".into(), zeta(&cx.closure, &t.green)),
    };
    print_json(&NamedJson::new(&t, label, &c));
    Ok(())
}

fn properties(a: &SpecArgs) -> Res {
    let t = instance(a)?;
    let rep = check_properties(&t);
    println!("{} r={}", t.spec.name(), t.top_rank());
    for l in rep.lines() {
        println!("  {l}");
    }
    if !rep.grid_consistent() {
        println!("  implication grid inconsistent");
        return Err(Failure::Mismatch);
    }
    Ok(())
}

fn report_cell(t: &Instance, force: bool) -> (bool, String) {
    match verify_instance(t, &options(force)) {
        Ok((rep, _, _)) => {
            let mut s = rep.line();
            if !rep.equal() {
                s += &format!("\n    missing: {:?}\n    extra: {:?}", rep.missing, rep.extra);
            }
            (rep.equal() && rep.hasse_isomorphic, s)
        }
        Err(e) => (false, format!("{} r={}: {e}", t.spec.name(), t.top_rank())),
    }
}

fn verify(a: &SpecArgs) -> Res {
    let full = Instance::build(&a.spec()?, a.force)?;
    let ranks = match a.rank {
        Some(r) => vec![r],
        None => full.ranks.clone(),
    };
    let mut ok = true;
    for r in ranks {
        let t = full.ideal(r)?;
        let (good, line) = report_cell(&t, a.force);
        println!("{line}");
        ok &= good;
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Mismatch)
    }
}

/// The built-in verification matrix: `(family, objects, field, ranks)`.
fn matrix() -> Vec<(FamilySpec, Vec<usize>)> {
    use Family::*;
    let d = |f, n: usize, rs: &[usize]| (FamilySpec::new(f, &[n]), rs.to_vec());
    let l = |f, p, rs: &[usize]| (FamilySpec::linear(f, &[2], p), rs.to_vec());
    vec![
        d(T, 4, &[1, 2, 3, 4]),
        d(OpT, 4, &[4]),
        d(OprT, 4, &[4]),
        d(OripT, 4, &[4]),
        d(OriprT, 4, &[4]),
        d(P, 3, &[0, 1, 2, 3]),
        d(Pb, 3, &[0, 1, 2, 3]),
        d(Motzkin, 3, &[0, 1, 2, 3]),
        d(OpP, 3, &[0, 1, 2, 3]),
        d(OriprP, 3, &[0, 1, 2, 3]),
        d(B, 3, &[1, 3]),
        d(B, 4, &[0, 2, 4]),
        d(Tl, 4, &[0, 2, 4]),
        d(Tl, 5, &[1, 3, 5]),
        d(Tl, 6, &[0, 2, 4, 6]),
        d(Tlpm, 4, &[0, 2, 4]),
        d(J, 4, &[0, 2, 4]),
        d(Jpm, 4, &[0, 2, 4]),
        d(J, 5, &[3, 5]),
        d(Jpm, 5, &[3, 5]),
        l(L, 2, &[0, 1, 2]),
        l(L, 3, &[0, 1, 2]),
        l(Pl, 3, &[0, 1, 2]),
    ]
}

fn verify_all(force: bool) -> Res {
    let cells = matrix();
    let results: Vec<Vec<(bool, String)>> = cells
        .par_iter()
        .map(|(spec, ranks)| match Instance::build(spec, force) {
            Ok(full) => ranks
                .iter()
                .map(|&r| match full.ideal(r) {
                    Ok(t) => report_cell(&t, force),
                    Err(e) => (false, format!("{} r={r}: {e}", spec.name())),
                })
                .collect(),
            Err(e) => vec![(false, format!("{}: {e}", spec.name()))],
        })
        .collect();
    let (mut pass, mut total) = (0, 0);
    for (ok, line) in results.into_iter().flatten() {
        println!("{line}");
        pass += ok as usize;
        total += 1;
    }
    println!("{pass}/{total} cells equal");
    if pass == total {
        Ok(())
    } else {
        Err(Failure::Mismatch)
    }
}

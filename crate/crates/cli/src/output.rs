//! Lattice JSON and Graphviz DOT encodings.

use std::fmt::Write as _;

use congwb::{CongLattice, Congruence, Instance};
use serde::{Deserialize, Serialize};

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct CongJson {
    pub id: usize,
    pub label: String,
    pub classes: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct LatticeJson {
    pub family: String,
    pub objects: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub field: Option<u8>,
    pub rank: usize,
    pub n_elements: usize,
    pub elements: Vec<String>,
    pub congruences: Vec<CongJson>,
    pub covers: Vec<[usize; 2]>,
}

/// A named congruence with its classes given by element strings.
#[derive(Serialize, Debug)]
pub struct NamedJson {
    pub label: String,
    pub n_classes: usize,
    pub classes: Vec<Vec<String>>,
}

impl NamedJson {
    pub fn new(t: &Instance, label: String, c: &Congruence) -> NamedJson {
        let classes = c.classes().into_iter().map(|cl| cl.into_iter().map(|x| t.label(x)).collect()).collect();
        NamedJson { label, n_classes: c.n_classes(), classes }
    }
}

pub fn lattice_json(t: &Instance, lat: &CongLattice, labels: &[String]) -> LatticeJson {
    LatticeJson {
        family: t.spec.family.tag().to_string(),
        objects: t.spec.objects.clone(),
        field: t.spec.p,
        rank: t.top_rank(),
        n_elements: t.n(),
        elements: (0..t.n()).map(|x| t.label(x)).collect(),
        congruences: lat
            .congs
            .iter()
            .enumerate()
            .map(|(id, c)| CongJson { id, label: labels[id].clone(), classes: c.classes() })
            .collect(),
        covers: lat.covers.iter().map(|&(a, b)| [a, b]).collect(),
    }
}

/// Rebuilds the lattice from its JSON encoding.
pub fn lattice_from_json(j: &LatticeJson) -> CongLattice {
    let congs = j
        .congruences
        .iter()
        .map(|c| {
            let mut key = vec![0usize; j.n_elements];
            for (k, cl) in c.classes.iter().enumerate() {
                cl.iter().for_each(|&x| key[x] = k);
            }
            Congruence::from_key(j.n_elements, |x| key[x])
        })
        .collect();
    CongLattice::from_set(congs)
}

/// Hasse diagram as a bottom-to-top digraph; nodes in `filled` are drawn solid.
pub fn lattice_dot(lat: &CongLattice, labels: &[String], filled: &[bool]) -> String {
    let n = lat.len();
    // nodes are sorted by decreasing class count, so every cover goes from a lower to a higher id
    let mut height = vec![0usize; n];
    let mut by_upper = lat.covers.clone();
    by_upper.sort_unstable_by_key(|&(a, b)| (b, a));
    for (a, b) in by_upper {
        height[b] = height[b].max(height[a] + 1);
    }
    let mut s = String::from("digraph congruences {\n  rankdir=BT;\n  node [shape=box, style=rounded];\n");
    for i in 0..n {
        let style = if filled[i] { "rounded,filled" } else { "rounded" };
        let _ = writeln!(s, "  n{i} [label=\"{}\", style=\"{style}\"];", labels[i].replace('"', "'"));
    }
    let top = height.iter().copied().max().unwrap_or(0);
    for h in 0..=top {
        let nodes: Vec<String> = (0..n).filter(|&i| height[i] == h).map(|i| format!("n{i}")).collect();
        if nodes.len() > 1 {
            let _ = writeln!(s, "  {{ rank=same; {}; }}", nodes.join("; "));
        }
    }
    for &(a, b) in &lat.covers {
        let _ = writeln!(s, "  n{a} -> n{b};");
    }
    s.push_str("}\n");
    s
}

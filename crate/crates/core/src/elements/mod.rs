//! Concrete elements of the supported categories and their hom-set generators.

pub mod diagram;
pub mod map;
pub mod matrix;

use std::fmt;
use std::str::FromStr;

pub use diagram::{Blocks, Diagram};
pub use map::Map;
pub use matrix::Mat;

use crate::Error;

/// Geometric restriction on morphisms. For transformations "planar" means order-preserving
/// and "annular" means orientation-preserving; the `R` variants also admit reversing ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Geometry {
    Full,
    Planar,
    PlanarR,
    Annular,
    AnnularR,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    T,
    OpT,
    OprT,
    OripT,
    OriprT,
    P,
    Pb,
    Motzkin,
    OpP,
    OprP,
    OripP,
    OriprP,
    B,
    Tl,
    Tlpm,
    J,
    Jpm,
    L,
    Pl,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Map(Geometry),
    Diagram(Blocks, Geometry),
    Linear { projective: bool },
}

pub const ALL_FAMILIES: [Family; 19] = [
    Family::T,
    Family::OpT,
    Family::OprT,
    Family::OripT,
    Family::OriprT,
    Family::P,
    Family::Pb,
    Family::Motzkin,
    Family::OpP,
    Family::OprP,
    Family::OripP,
    Family::OriprP,
    Family::B,
    Family::Tl,
    Family::Tlpm,
    Family::J,
    Family::Jpm,
    Family::L,
    Family::Pl,
];

impl Family {
    pub fn tag(self) -> &'static str {
        use Family::*;
        match self {
            T => "T",
            OpT => "OP-T",
            OprT => "OPR-T",
            OripT => "OriP-T",
            OriprT => "OriPR-T",
            P => "P",
            Pb => "PB",
            Motzkin => "Motzkin",
            OpP => "OP-P",
            OprP => "OPR-P",
            OripP => "OriP-P",
            OriprP => "OriPR-P",
            B => "B",
            Tl => "TL",
            Tlpm => "TLpm",
            J => "J",
            Jpm => "Jpm",
            L => "L",
            Pl => "PL",
        }
    }

    pub fn kind(self) -> Kind {
        use Family::*;
        use Geometry::*;
        match self {
            T => Kind::Map(Full),
            OpT => Kind::Map(Planar),
            OprT => Kind::Map(PlanarR),
            OripT => Kind::Map(Annular),
            OriprT => Kind::Map(AnnularR),
            P => Kind::Diagram(Blocks::Any, Full),
            Pb => Kind::Diagram(Blocks::AtMostTwo, Full),
            Motzkin => Kind::Diagram(Blocks::AtMostTwo, Planar),
            OpP => Kind::Diagram(Blocks::Any, Planar),
            OprP => Kind::Diagram(Blocks::Any, PlanarR),
            OripP => Kind::Diagram(Blocks::Any, Annular),
            OriprP => Kind::Diagram(Blocks::Any, AnnularR),
            B => Kind::Diagram(Blocks::ExactlyTwo, Full),
            Tl => Kind::Diagram(Blocks::ExactlyTwo, Planar),
            Tlpm => Kind::Diagram(Blocks::ExactlyTwo, PlanarR),
            J => Kind::Diagram(Blocks::ExactlyTwo, Annular),
            Jpm => Kind::Diagram(Blocks::ExactlyTwo, AnnularR),
            L => Kind::Linear { projective: false },
            Pl => Kind::Linear { projective: true },
        }
    }

    /// Families whose objects must all share one parity.
    pub fn is_brauer_type(self) -> bool {
        matches!(self, Family::B | Family::Tl | Family::Tlpm | Family::J | Family::Jpm)
    }

    pub fn is_transformation_type(self) -> bool {
        matches!(self.kind(), Kind::Map(_))
    }

    pub fn is_linear(self) -> bool {
        matches!(self.kind(), Kind::Linear { .. })
    }

    /// Smallest possible rank of a morphism.
    pub fn min_rank(self, objects: &[usize]) -> usize {
        match self.kind() {
            Kind::Map(_) => 1,
            Kind::Diagram(Blocks::ExactlyTwo, _) => objects.first().map_or(0, |n| n % 2),
            _ => 0,
        }
    }

    /// Step between consecutive ranks.
    pub fn rank_step(self) -> usize {
        if self.is_brauer_type() {
            2
        } else {
            1
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Family, Error> {
        ALL_FAMILIES
            .iter()
            .copied()
            .find(|f| f.tag().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                let tags: Vec<&str> = ALL_FAMILIES.iter().map(|f| f.tag()).collect();
                Error::Validation(format!("unknown family '{s}' (expected one of {})", tags.join(", ")))
            })
    }
}

/// A finite full subcategory: a family, a list of object sizes, and a field for linear families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilySpec {
    pub family: Family,
    pub objects: Vec<usize>,
    pub p: Option<u8>,
}

impl FamilySpec {
    pub fn new(family: Family, objects: &[usize]) -> FamilySpec {
        FamilySpec { family, objects: objects.to_vec(), p: None }
    }

    pub fn linear(family: Family, objects: &[usize], p: u8) -> FamilySpec {
        FamilySpec { family, objects: objects.to_vec(), p: Some(p) }
    }

    pub fn validate(&self) -> Result<(), Error> {
        let f = self.family;
        if self.objects.is_empty() {
            return Err(Error::Validation("at least one object is required".into()));
        }
        if self.objects.iter().any(|&n| n == 0 || n > 12) {
            return Err(Error::Validation("object sizes must lie in 1..=12".into()));
        }
        if f.is_brauer_type() {
            let par = self.objects[0] % 2;
            if self.objects.iter().any(|&n| n % 2 != par) {
                return Err(Error::Validation(format!(
                    "mixed parity objects for {f}: the category is a disjoint union of its even and odd \
                     parts (no morphisms between sets of different parity), so treat each part separately"
                )));
            }
        }
        match (f.is_linear(), self.p) {
            (true, None) => return Err(Error::Validation(format!("{f} needs a field size p"))),
            (true, Some(p)) if ![2, 3, 5, 7].contains(&p) => {
                return Err(Error::Validation(format!("p = {p} is not a supported prime (2, 3, 5 or 7)")))
            }
            (false, Some(_)) => return Err(Error::Validation(format!("{f} does not take a field"))),
            _ => {}
        }
        Ok(())
    }

    pub fn name(&self) -> String {
        let objs: Vec<String> = self.objects.iter().map(|n| n.to_string()).collect();
        match self.p {
            Some(p) => format!("{}({};Z{})", self.family, objs.join(","), p),
            None => format!("{}({})", self.family, objs.join(",")),
        }
    }

    /// Generates every morphism, hom-set by hom-set. Fails once more than `limit` are produced.
    pub fn generate(&self, limit: usize) -> Result<Vec<Elem>, Error> {
        self.validate()?;
        let mut out: Vec<Elem> = Vec::new();
        let overflow = || Error::Guard(format!("{} has more than {limit} elements", self.name()));
        for (a, &m) in self.objects.iter().enumerate() {
            for (b, &n) in self.objects.iter().enumerate() {
                let (a8, b8) = (a as u8, b as u8);
                let ok = match self.family.kind() {
                    Kind::Map(g) => {
                        let mut v = Vec::new();
                        let keep = |f: &Map| match g {
                            Geometry::Full => true,
                            Geometry::Planar => f.is_order_preserving(),
                            Geometry::PlanarR => f.is_order_preserving() || f.is_order_reversing(),
                            Geometry::Annular => f.is_orientation_preserving(),
                            Geometry::AnnularR => f.is_orientation_preserving() || f.is_orientation_reversing(),
                        };
                        let ok = map::all_maps(a8, b8, m, n, keep, &mut v, limit.saturating_sub(out.len()));
                        out.extend(v.into_iter().map(Elem::Map));
                        ok
                    }
                    Kind::Diagram(blocks, g) => diagram::for_each_diagram(a8, b8, m, n, blocks, |d| {
                        let keep = match g {
                            Geometry::Full => true,
                            Geometry::Planar => d.is_planar(),
                            Geometry::PlanarR => d.is_planar() || d.is_anti_planar(),
                            Geometry::Annular => d.is_annular(),
                            Geometry::AnnularR => d.is_annular() || d.is_anti_annular(),
                        };
                        if keep {
                            out.push(Elem::Diag(d));
                        }
                        out.len() <= limit
                    }),
                    Kind::Linear { projective } => {
                        matrix::for_each_matrix(a8, b8, m, n, self.p.unwrap(), projective, |x| {
                            out.push(Elem::Mat(x));
                            out.len() <= limit
                        })
                    }
                };
                if !ok || out.len() > limit {
                    return Err(overflow());
                }
            }
        }
        Ok(out)
    }

    /// Identity-like element used to embed a group of degree `q` into the hom-set of object `obj`.
    /// For linear families `perm` is ignored and `mat` supplies the `q × q` block.
    pub fn natural(&self, obj: usize, q: usize, perm: &[usize], mat: Option<&[u8]>) -> Elem {
        let n = self.objects[obj];
        let o = obj as u8;
        match self.family.kind() {
            Kind::Map(_) => {
                let img = (0..n).map(|i| perm[i.min(q - 1)] as u8).collect();
                Elem::Map(Map { dom: o, cod: o, n: n as u8, img })
            }
            Kind::Diagram(blocks, _) => {
                let mut bl: Vec<Vec<usize>> = (0..q).map(|i| vec![i, n + perm[i]]).collect();
                if blocks == Blocks::ExactlyTwo {
                    for i in (q..n).step_by(2) {
                        bl.push(vec![i, i + 1]);
                        bl.push(vec![n + i, n + i + 1]);
                    }
                } else {
                    for i in q..n {
                        bl.push(vec![i]);
                        bl.push(vec![n + i]);
                    }
                }
                Elem::Diag(Diagram::from_blocks(o, o, n, n, &bl))
            }
            Kind::Linear { projective } => {
                let id: Vec<u8>;
                let a = match mat {
                    Some(a) => a,
                    None => {
                        id = (0..q * q).map(|k| (k / q == k % q) as u8).collect();
                        &id
                    }
                };
                Elem::Mat(Mat::embed(o, n, q, a, self.p.unwrap(), projective))
            }
        }
    }

    /// The reversal permutation `a_i ↦ a_{k+1-i}` of object `obj`.
    pub fn gamma(&self, obj: usize) -> Result<Elem, Error> {
        let k = self.objects[obj];
        self.perm_elem(obj, &(0..k).rev().collect::<Vec<_>>())
    }

    /// The rotation `a_i ↦ a_{i+1 mod k}` of object `obj`.
    pub fn delta(&self, obj: usize) -> Result<Elem, Error> {
        let k = self.objects[obj];
        self.perm_elem(obj, &(0..k).map(|i| (i + 1) % k).collect::<Vec<_>>())
    }

    fn perm_elem(&self, obj: usize, perm: &[usize]) -> Result<Elem, Error> {
        match self.family.kind() {
            Kind::Map(_) => Ok(Elem::Map(Map::from_perm(obj as u8, perm))),
            Kind::Diagram(..) => Ok(Elem::Diag(Diagram::from_perm(obj as u8, perm))),
            Kind::Linear { .. } => Err(Error::Precondition("permutations of points need a set object".into())),
        }
    }

    /// Smallest object that can carry a group of degree `q`.
    pub fn carrier(&self, q: usize) -> Option<usize> {
        self.objects
            .iter()
            .enumerate()
            .filter(|&(_, &n)| n >= q && (!self.family.is_brauer_type() || n % 2 == q % 2))
            .min_by_key(|&(i, &n)| (n, i))
            .map(|(i, _)| i)
    }
}

/// A morphism of one of the supported categories.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    Map(Map),
    Diag(Diagram),
    Mat(Mat),
}

impl Elem {
    pub fn dom(&self) -> usize {
        match self {
            Elem::Map(x) => x.dom as usize,
            Elem::Diag(x) => x.dom as usize,
            Elem::Mat(x) => x.dom as usize,
        }
    }

    pub fn cod(&self) -> usize {
        match self {
            Elem::Map(x) => x.cod as usize,
            Elem::Diag(x) => x.cod as usize,
            Elem::Mat(x) => x.cod as usize,
        }
    }

    /// Left-to-right composition; panics on mismatched element kinds.
    pub fn compose(&self, other: &Elem) -> Elem {
        match (self, other) {
            (Elem::Map(a), Elem::Map(b)) => Elem::Map(a.compose(b)),
            (Elem::Diag(a), Elem::Diag(b)) => Elem::Diag(a.compose(b)),
            (Elem::Mat(a), Elem::Mat(b)) => Elem::Mat(a.compose(b)),
            _ => panic!("cannot compose elements of different kinds"),
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            Elem::Map(x) => x.rank(),
            Elem::Diag(x) => x.rank(),
            Elem::Mat(x) => x.rank(),
        }
    }

    /// The involution `α ↦ α*` of diagram categories.
    pub fn star(&self) -> Result<Elem, Error> {
        match self {
            Elem::Diag(d) => Ok(Elem::Diag(d.star())),
            _ => Err(Error::Precondition("star is only defined on diagrams".into())),
        }
    }

    /// Horizontal sum of two diagrams, landing in the hom-set `dom -> cod`.
    pub fn oplus(&self, other: &Elem, dom: usize, cod: usize) -> Result<Elem, Error> {
        match (self, other) {
            (Elem::Diag(a), Elem::Diag(b)) => Ok(Elem::Diag(a.oplus(b, dom as u8, cod as u8))),
            _ => Err(Error::Precondition("oplus is only defined on diagrams".into())),
        }
    }

    /// The retraction of low-rank diagrams onto rank 0.
    pub fn retract_hat(&self, family: Family) -> Result<Elem, Error> {
        match self {
            Elem::Diag(d) => d
                .retract_hat(family.is_brauer_type())
                .map(Elem::Diag)
                .ok_or_else(|| Error::Precondition(format!("{d} lies above the retractable ideal"))),
            _ => Err(Error::Precondition("no hat retraction outside diagram categories".into())),
        }
    }

    /// Invariant determining the R-class: domain object, kernel, and (for diagrams) domain.
    pub fn r_invariant(&self) -> (usize, Vec<Vec<u8>>) {
        let inv = match self {
            Elem::Map(x) => vec![x.ker()],
            Elem::Diag(x) => vec![x.ker(), x.domain().iter().map(|&v| v as u8).collect()],
            Elem::Mat(x) => x.kernel(),
        };
        (self.dom(), inv)
    }

    /// Invariant determining the L-class: codomain object, image/cokernel, and (for diagrams) codomain.
    pub fn l_invariant(&self) -> (usize, Vec<Vec<u8>>) {
        let inv = match self {
            Elem::Map(x) => vec![x.image()],
            Elem::Diag(x) => vec![x.coker(), x.codomain().iter().map(|&v| v as u8).collect()],
            Elem::Mat(x) => x.row_space(),
        };
        (self.cod(), inv)
    }

    /// The permutation of `[q]` carried by an element of a maximal subgroup of degree `q`.
    pub fn perm(&self, q: usize) -> Option<Vec<usize>> {
        match self {
            Elem::Map(x) => {
                let p: Vec<usize> = x.img[..q].iter().map(|&i| i as usize).collect();
                p.iter().all(|&i| i < q).then_some(p)
            }
            Elem::Diag(x) => x.transversal_perm(q),
            Elem::Mat(_) => None,
        }
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elem::Map(x) => x.fmt(f),
            Elem::Diag(x) => x.fmt(f),
            Elem::Mat(x) => x.fmt(f),
        }
    }
}

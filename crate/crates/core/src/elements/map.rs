use std::fmt;

/// A transformation between finite chains `[m] -> [n]`, stored as its image list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Map {
    pub dom: u8,
    pub cod: u8,
    pub n: u8,
    pub img: Vec<u8>,
}

impl Map {
    pub fn identity(obj: u8, k: usize) -> Map {
        Map { dom: obj, cod: obj, n: k as u8, img: (0..k as u8).collect() }
    }

    pub fn from_perm(obj: u8, perm: &[usize]) -> Map {
        Map { dom: obj, cod: obj, n: perm.len() as u8, img: perm.iter().map(|&i| i as u8).collect() }
    }

    /// The kernel as a growth string on the domain.
    pub fn ker(&self) -> Vec<u8> {
        let mut relabel = vec![u8::MAX; self.n as usize];
        let mut next = 0u8;
        self.img
            .iter()
            .map(|&i| {
                let r = &mut relabel[i as usize];
                if *r == u8::MAX {
                    *r = next;
                    next += 1;
                }
                *r
            })
            .collect()
    }

    pub fn image(&self) -> Vec<u8> {
        let mut v = self.img.clone();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn compose(&self, other: &Map) -> Map {
        debug_assert_eq!(self.cod, other.dom);
        Map {
            dom: self.dom,
            cod: other.cod,
            n: other.n,
            img: self.img.iter().map(|&i| other.img[i as usize]).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        let mut seen = vec![false; self.n as usize];
        self.img.iter().filter(|&&i| !std::mem::replace(&mut seen[i as usize], true)).count()
    }

    pub fn is_order_preserving(&self) -> bool {
        self.img.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn is_order_reversing(&self) -> bool {
        self.img.windows(2).all(|w| w[0] >= w[1])
    }

    /// Cyclic shift of a non-decreasing sequence.
    pub fn is_orientation_preserving(&self) -> bool {
        orientation_preserving(&self.img)
    }

    pub fn is_orientation_reversing(&self) -> bool {
        let rev: Vec<u8> = self.img.iter().rev().copied().collect();
        orientation_preserving(&rev)
    }
}

fn orientation_preserving(s: &[u8]) -> bool {
    let descents = s.windows(2).filter(|w| w[0] > w[1]).count();
    match descents {
        0 => true,
        1 => s.last() <= s.first(),
        _ => false,
    }
}

impl fmt::Display for Map {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, x) in self.img.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", x + 1)?;
        }
        write!(f, "]")
    }
}

/// All maps `[m] -> [n]` in lexicographic order of image lists.
pub fn all_maps(dom: u8, cod: u8, m: usize, n: usize, mut keep: impl FnMut(&Map) -> bool, out: &mut Vec<Map>, limit: usize) -> bool {
    let mut img = vec![0u8; m];
    loop {
        let f = Map { dom, cod, n: n as u8, img: img.clone() };
        if keep(&f) {
            out.push(f);
            if out.len() > limit {
                return false;
            }
        }
        let mut i = m;
        loop {
            if i == 0 {
                return true;
            }
            i -= 1;
            img[i] += 1;
            if (img[i] as usize) < n {
                break;
            }
            img[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mk(v: &[u8]) -> Map {
        Map { dom: 0, cod: 0, n: 4, img: v.to_vec() }
    }

    #[test]
    fn orientation() {
        assert!(mk(&[1, 2, 3, 0]).is_orientation_preserving());
        assert!(mk(&[2, 3, 0, 1]).is_orientation_preserving());
        assert!(!mk(&[2, 3, 0, 3]).is_orientation_preserving());
        assert!(mk(&[3, 2, 1, 0]).is_orientation_reversing());
        assert!(mk(&[1, 1, 1, 1]).is_orientation_preserving());
        assert!(mk(&[1, 1, 1, 1]).is_orientation_reversing());
    }

    #[test]
    fn counts() {
        let mut v = Vec::new();
        assert!(all_maps(0, 0, 3, 3, |_| true, &mut v, usize::MAX));
        assert_eq!(v.len(), 27);
        let mut op = Vec::new();
        all_maps(0, 0, 3, 3, |f| f.is_order_preserving(), &mut op, usize::MAX);
        // binomial(5, 3)
        assert_eq!(op.len(), 10);
    }

    #[test]
    fn compose_rank() {
        let a = mk(&[1, 1, 2, 3]);
        let b = mk(&[0, 0, 0, 2]);
        assert_eq!(a.compose(&b).img, vec![0, 0, 0, 2]);
        assert_eq!(a.rank(), 3);
    }
}

use std::fmt;

/// A `rows × cols` matrix over `Z_p`, acting on row vectors from the right.
/// With `projective` set, the matrix is a normalised representative of its class modulo scalars.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat {
    pub dom: u8,
    pub cod: u8,
    pub rows: u8,
    pub cols: u8,
    pub p: u8,
    pub projective: bool,
    pub e: Vec<u8>,
}

pub fn inv_mod(a: u8, p: u8) -> u8 {
    let (a, p) = (a as u32, p as u32);
    (1..p).find(|&x| a * x % p == 1).expect("non-invertible") as u8
}

impl Mat {
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.e[i * self.cols as usize + j]
    }

    pub fn normalize(mut self) -> Mat {
        if self.projective {
            if let Some(&lead) = self.e.iter().find(|&&x| x != 0) {
                let s = inv_mod(lead, self.p) as u32;
                let p = self.p as u32;
                self.e.iter_mut().for_each(|x| *x = (*x as u32 * s % p) as u8);
            }
        }
        self
    }

    pub fn compose(&self, other: &Mat) -> Mat {
        debug_assert_eq!(self.cols, other.rows);
        let (r, k, c) = (self.rows as usize, self.cols as usize, other.cols as usize);
        let p = self.p as u32;
        let mut e = vec![0u8; r * c];
        for i in 0..r {
            for j in 0..c {
                let mut s = 0u32;
                for t in 0..k {
                    s += self.e[i * k + t] as u32 * other.e[t * c + j] as u32;
                }
                e[i * c + j] = (s % p) as u8;
            }
        }
        Mat { dom: self.dom, cod: other.cod, rows: self.rows, cols: other.cols, p: self.p, projective: self.projective, e }
            .normalize()
    }

    pub fn rank(&self) -> usize {
        row_echelon(&self.e, self.rows as usize, self.cols as usize, self.p).len()
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().all(|&x| x == 0)
    }

    /// Image of `x ↦ xα`, as a reduced echelon basis.
    pub fn row_space(&self) -> Vec<Vec<u8>> {
        row_echelon(&self.e, self.rows as usize, self.cols as usize, self.p)
    }

    /// Kernel of `x ↦ xα`, as a reduced echelon basis.
    pub fn kernel(&self) -> Vec<Vec<u8>> {
        let (r, c) = (self.rows as usize, self.cols as usize);
        let t: Vec<u8> = (0..c).flat_map(|j| (0..r).map(move |i| (i, j))).map(|(i, j)| self.get(i, j)).collect();
        let ech = row_echelon(&t, c, r, self.p);
        let pivots: Vec<usize> = ech.iter().map(|row| row.iter().position(|&x| x != 0).unwrap()).collect();
        let p = self.p;
        let mut basis = Vec::new();
        for free in (0..r).filter(|j| !pivots.contains(j)) {
            let mut v = vec![0u8; r];
            v[free] = 1;
            for (row, &pc) in ech.iter().zip(&pivots) {
                v[pc] = (p - row[free]) % p;
            }
            basis.push(v);
        }
        let flat: Vec<u8> = basis.concat();
        row_echelon(&flat, basis.len(), r, p)
    }

    /// Top-left `q × q` block.
    pub fn corner(&self, q: usize) -> Vec<u8> {
        (0..q).flat_map(|i| (0..q).map(move |j| (i, j))).map(|(i, j)| self.get(i, j)).collect()
    }

    /// `diag(a, 0)` on an object of dimension `n`, where `a` is `q × q`.
    pub fn embed(obj: u8, n: usize, q: usize, a: &[u8], p: u8, projective: bool) -> Mat {
        let mut e = vec![0u8; n * n];
        for i in 0..q {
            for j in 0..q {
                e[i * n + j] = a[i * q + j];
            }
        }
        Mat { dom: obj, cod: obj, rows: n as u8, cols: n as u8, p, projective, e }.normalize()
    }
}

/// Reduced row echelon basis of the row space.
pub fn row_echelon(e: &[u8], rows: usize, cols: usize, p: u8) -> Vec<Vec<u8>> {
    let p32 = p as u32;
    let mut m: Vec<Vec<u8>> = (0..rows).map(|i| e[i * cols..(i + 1) * cols].to_vec()).collect();
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, piv);
        let s = inv_mod(m[r][c], p) as u32;
        m[r].iter_mut().for_each(|x| *x = (*x as u32 * s % p32) as u8);
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let f = m[i][c] as u32;
                for j in 0..cols {
                    m[i][j] = ((m[i][j] as u32 + p32 * p32 - f * m[r][j] as u32) % p32) as u8;
                }
            }
        }
        r += 1;
    }
    m.truncate(r);
    m
}

/// Determinant of a square matrix over `Z_p`.
pub fn det(a: &[u8], q: usize, p: u8) -> u8 {
    let p32 = p as u32;
    let mut m: Vec<u32> = a.iter().map(|&x| x as u32).collect();
    let mut d = 1u32;
    for c in 0..q {
        let Some(piv) = (c..q).find(|&i| m[i * q + c] != 0) else { return 0 };
        if piv != c {
            for j in 0..q {
                m.swap(c * q + j, piv * q + j);
            }
            d = (p32 - d) % p32;
        }
        let pv = m[c * q + c];
        d = d * pv % p32;
        let inv = inv_mod(pv as u8, p) as u32;
        for i in c + 1..q {
            let f = m[i * q + c] * inv % p32;
            for j in c..q {
                m[i * q + j] = (m[i * q + j] + p32 * p32 - f * m[c * q + j]) % p32;
            }
        }
    }
    d as u8
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows as usize {
            if i > 0 {
                write!(f, ";")?;
            }
            for j in 0..self.cols as usize {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

/// Enumerates all matrices of the given shape (one representative per class when projective).
pub fn for_each_matrix(dom: u8, cod: u8, rows: usize, cols: usize, p: u8, projective: bool, mut emit: impl FnMut(Mat) -> bool) -> bool {
    let len = rows * cols;
    let mut e = vec![0u8; len];
    loop {
        let m = Mat { dom, cod, rows: rows as u8, cols: cols as u8, p, projective, e: e.clone() };
        let canonical = !projective || m.clone().normalize().e == e;
        if canonical && !emit(m) {
            return false;
        }
        let mut i = len;
        loop {
            if i == 0 {
                return true;
            }
            i -= 1;
            e[i] += 1;
            if e[i] < p {
                break;
            }
            e[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        let mut n = 0;
        for_each_matrix(0, 0, 2, 2, 3, false, |_| {
            n += 1;
            true
        });
        assert_eq!(n, 81);
        let mut n = 0;
        for_each_matrix(0, 0, 2, 2, 3, true, |_| {
            n += 1;
            true
        });
        // (81 - 1) / 2 + 1
        assert_eq!(n, 41);
    }

    #[test]
    fn rank_det() {
        let a = Mat { dom: 0, cod: 0, rows: 2, cols: 2, p: 7, projective: false, e: vec![1, 2, 2, 4] };
        assert_eq!(a.rank(), 1);
        assert_eq!(det(&a.e, 2, 7), 0);
        assert_eq!(det(&[0, 1, 1, 0], 2, 7), 6);
        assert_eq!(det(&[2, 1, 1, 1], 2, 5), 1);
    }
}

//! Matrices and subspaces over a prime field `F_p`.

use std::fmt;

/// Dense row-major matrix with entries in `0..p`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries((0..self.rows).map(|r| self.row(r))).finish()
    }
}

impl FpMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        FpMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn from_data(rows: usize, cols: usize, data: Vec<u32>) -> Self {
        assert_eq!(data.len(), rows * cols);
        FpMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn apply(&self, v: &[u32], p: u32) -> Vec<u32> {
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(0u32, |acc, (a, b)| (acc + a * b) % p)
            })
            .collect()
    }
}

pub fn inverse_mod(a: u32, p: u32) -> u32 {
    debug_assert!(!a.is_multiple_of(p));
    let mut result = 1u32;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

pub fn is_prime(p: u32) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Row-reduce `rows` (each of length `cols`) to reduced echelon form and drop
/// zero rows. Returns the rows and their pivot columns.
pub fn rref(mut rows: Vec<Vec<u32>>, cols: usize, p: u32) -> (Vec<Vec<u32>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(i) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, i);
        let inv = inverse_mod(rows[r][c], p);
        for v in rows[r].iter_mut() {
            *v = *v * inv % p;
        }
        for i in 0..rows.len() {
            let f = rows[i][c];
            if i != r && f != 0 {
                for j in 0..cols {
                    rows[i][j] = (rows[i][j] + (p - f) * rows[r][j]) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

pub fn rank(rows: Vec<Vec<u32>>, cols: usize, p: u32) -> usize {
    rref(rows, cols, p).1.len()
}

/// A subspace of `F_p^ambient` in its canonical reduced-echelon basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn span(vectors: Vec<Vec<u32>>, ambient: usize, p: u32) -> Self {
        let (basis, pivots) = rref(vectors, ambient, p);
        Subspace { ambient, basis, pivots }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Columns that are not pivots; the corresponding unit vectors span a
    /// complement.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.ambient).filter(|c| !self.pivots.contains(c)).collect()
    }

    /// `v` minus its projection along the echelon basis; zero exactly when
    /// `v` lies in the subspace.
    pub fn reduce(&self, v: &[u32], p: u32) -> Vec<u32> {
        let mut w = v.to_vec();
        for (row, &c) in self.basis.iter().zip(&self.pivots) {
            let f = w[c];
            if f != 0 {
                for (x, y) in w.iter_mut().zip(row) {
                    *x = (*x + (p - f) * y) % p;
                }
            }
        }
        w
    }

    pub fn image(&self, m: &FpMatrix, p: u32) -> Subspace {
        Subspace::span(self.basis.iter().map(|b| m.apply(b, p)).collect(), m.rows(), p)
    }

    pub fn sum(&self, other: &Subspace, p: u32) -> Subspace {
        let mut v = self.basis.clone();
        v.extend(other.basis.iter().cloned());
        Subspace::span(v, self.ambient, p)
    }

    /// All subspaces of `F_p^ambient` that contain `self`, as lifts of the
    /// subspaces of the quotient.
    pub fn superspaces(&self, p: u32) -> Vec<Subspace> {
        let free = self.free_columns();
        all_subspaces(free.len(), p)
            .into_iter()
            .map(|s| {
                let mut v = self.basis.clone();
                v.extend(s.basis.iter().map(|b| {
                    let mut lifted = vec![0; self.ambient];
                    for (&c, &x) in free.iter().zip(b) {
                        lifted[c] = x;
                    }
                    lifted
                }));
                Subspace::span(v, self.ambient, p)
            })
            .collect()
    }
}

/// Every subspace of `F_p^m`, by dimension and then by pivot set.
pub fn all_subspaces(m: usize, p: u32) -> Vec<Subspace> {
    let mut out = Vec::new();
    for k in 0..=m {
        for pivots in combinations(m, k) {
            // free slots: row r, column c > pivots[r] with c not a pivot
            let slots: Vec<(usize, usize)> = (0..k)
                .flat_map(|r| {
                    let pv = &pivots;
                    (pv[r] + 1..m).filter(move |c| !pv.contains(c)).map(move |c| (r, c))
                })
                .collect();
            let count = (p as usize).pow(slots.len() as u32);
            for mut code in 0..count {
                let mut basis = vec![vec![0u32; m]; k];
                for (r, &c) in pivots.iter().enumerate() {
                    basis[r][c] = 1;
                }
                for &(r, c) in &slots {
                    basis[r][c] = (code % p as usize) as u32;
                    code /= p as usize;
                }
                out.push(Subspace { ambient: m, basis, pivots: pivots.clone() });
            }
        }
    }
    out
}

fn combinations(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            rec(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, m, k, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Number of `k`-dimensional subspaces of `F_p^m`, from the product
    /// formula rather than from enumeration.
    fn gaussian_binomial(m: u32, k: u32, p: u64) -> u64 {
        let num: u64 = (0..k).map(|i| p.pow(m - i) - 1).product();
        let den: u64 = (0..k).map(|i| p.pow(i + 1) - 1).product();
        num / den
    }

    #[test]
    fn subspace_counts_match_gaussian_binomials() {
        for p in [2u32, 3, 5] {
            for m in 0..=4u32 {
                let all = all_subspaces(m as usize, p);
                let expected: u64 = (0..=m).map(|k| gaussian_binomial(m, k, p as u64)).sum();
                assert_eq!(all.len() as u64, expected, "p={p} m={m}");
                let mut canon: Vec<_> = all
                    .iter()
                    .map(|s| Subspace::span(s.basis().to_vec(), m as usize, p))
                    .collect();
                assert_eq!(canon, all);
                canon.dedup();
                assert_eq!(canon.len(), all.len());
            }
        }
    }

    #[test]
    fn superspaces_of_a_line() {
        let line = Subspace::span(vec![vec![1, 1, 0]], 3, 2);
        let sup = line.superspaces(2);
        // the line, three planes through it, the whole space
        assert_eq!(sup.len(), 5);
        assert!(sup.iter().all(|s| line.basis().iter().all(|b| s.reduce(b, 2).iter().all(|&x| x == 0))));
    }

    #[test]
    fn inverses() {
        for p in [2u32, 3, 5, 7] {
            for a in 1..p {
                assert_eq!(a * inverse_mod(a, p) % p, 1);
            }
        }
        assert!(is_prime(7) && !is_prime(6) && !is_prime(1));
    }
}

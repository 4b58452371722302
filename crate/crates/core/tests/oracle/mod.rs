//! A deliberately small brute-force reference: integer tensors, its own
//! flattening loops and a fraction-free row reduction over `i128`. It shares
//! no code with the crate under test.

/// Rank over the rationals of an integer matrix, by fraction-free elimination
/// with each row divided by the gcd of its entries.
pub fn rank(mut m: Vec<Vec<i128>>) -> usize {
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, p);
        for i in r + 1..m.len() {
            if m[i][c] == 0 {
                continue;
            }
            let (a, b) = (m[r][c], m[i][c]);
            let pivot_row = m[r].clone();
            for (x, &p) in m[i][c..].iter_mut().zip(&pivot_row[c..]) {
                *x = x.checked_mul(a).and_then(|y| y.checked_sub(p.checked_mul(b)?)).expect("overflow");
            }
            let g = m[i].iter().fold(0, |g, &x| gcd(g, x.abs()));
            if g > 1 {
                m[i].iter_mut().for_each(|x| *x /= g);
            }
        }
        r += 1;
    }
    r
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// A three-factor integer tensor, `v[i][j][k]`.
pub struct Tensor3 {
    pub d: [usize; 3],
    pub v: Vec<Vec<Vec<i128>>>,
}

impl Tensor3 {
    /// Builds from row-major coefficients, last index fastest.
    pub fn from_flat(d: [usize; 3], flat: &[i64]) -> Self {
        let v = (0..d[0])
            .map(|i| (0..d[1]).map(|j| (0..d[2]).map(|k| flat[(i * d[1] + j) * d[2] + k] as i128).collect()).collect())
            .collect();
        Self { d, v }
    }

    /// `(k1, k2, k3, k12, k13, k23, k123)`.
    pub fn invariants(&self) -> [usize; 7] {
        let [a, b, c] = self.d;
        let at = |i: usize, j: usize, k: usize| self.v[i][j][k];
        // Single-factor flattenings: rows are the chosen factor.
        let m1: Vec<Vec<i128>> = (0..a)
            .map(|i| (0..b).flat_map(|j| (0..c).map(move |k| (j, k))).map(|(j, k)| at(i, j, k)).collect())
            .collect();
        let m2: Vec<Vec<i128>> = (0..b)
            .map(|j| (0..a).flat_map(|i| (0..c).map(move |k| (i, k))).map(|(i, k)| at(i, j, k)).collect())
            .collect();
        let m3: Vec<Vec<i128>> = (0..c)
            .map(|k| (0..a).flat_map(|i| (0..b).map(move |j| (i, j))).map(|(i, j)| at(i, j, k)).collect())
            .collect();
        // Pair flattenings: rows are the pair, columns the remaining factor.
        let m12: Vec<Vec<i128>> = (0..a)
            .flat_map(|i| (0..b).map(move |j| (i, j)))
            .map(|(i, j)| (0..c).map(|k| at(i, j, k)).collect())
            .collect();
        let m13: Vec<Vec<i128>> = (0..a)
            .flat_map(|i| (0..c).map(move |k| (i, k)))
            .map(|(i, k)| (0..b).map(|j| at(i, j, k)).collect())
            .collect();
        let m23: Vec<Vec<i128>> = (0..b)
            .flat_map(|j| (0..c).map(move |k| (j, k)))
            .map(|(j, k)| (0..a).map(|i| at(i, j, k)).collect())
            .collect();
        [
            a - rank(m1),
            b - rank(m2),
            c - rank(m3),
            a * b - rank(m12),
            a * c - rank(m13),
            b * c - rank(m23),
            a * b * c - rank(self.triple_system()),
        ]
    }

    /// Linear conditions on `w` (indexed like `v`) that cut out the triple
    /// kernel: every contraction of `v` with `w` over two factors vanishes.
    fn triple_system(&self) -> Vec<Vec<i128>> {
        let [a, b, c] = self.d;
        let col = |i: usize, j: usize, k: usize| (i * b + j) * c + k;
        let mut rows = Vec::new();
        for k in 0..c {
            for l in 0..c {
                let mut r = vec![0; a * b * c];
                for i in 0..a {
                    for j in 0..b {
                        r[col(i, j, l)] += self.v[i][j][k];
                    }
                }
                rows.push(r);
            }
        }
        for j in 0..b {
            for l in 0..b {
                let mut r = vec![0; a * b * c];
                for i in 0..a {
                    for k in 0..c {
                        r[col(i, l, k)] += self.v[i][j][k];
                    }
                }
                rows.push(r);
            }
        }
        for i in 0..a {
            for l in 0..a {
                let mut r = vec![0; a * b * c];
                for j in 0..b {
                    for k in 0..c {
                        r[col(l, j, k)] += self.v[i][j][k];
                    }
                }
                rows.push(r);
            }
        }
        rows
    }
}

/// The seven three-qubit classes, by full invariant tuple.
pub const QUBIT_CLASSES: [(&str, [usize; 7]); 7] = [
    ("C0", [2, 2, 2, 4, 4, 4, 8]),
    ("C1", [1, 1, 1, 3, 3, 3, 4]),
    ("C2", [0, 0, 1, 3, 2, 2, 3]),
    ("C3", [0, 1, 0, 2, 3, 2, 3]),
    ("C4", [1, 0, 0, 2, 2, 3, 3]),
    ("C5", [0, 0, 0, 2, 2, 2, 1]),
    ("C6", [0, 0, 0, 2, 2, 2, 0]),
];

pub fn qubit_class(inv: &[usize; 7]) -> Option<&'static str> {
    QUBIT_CLASSES.iter().find(|(_, t)| t == inv).map(|(l, _)| *l)
}

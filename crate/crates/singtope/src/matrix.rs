//! The intersection matrix of a weighted tree and its definiteness test.

use crate::graph::WeightedGraph;
use num_bigint::BigInt;

/// Symmetric integer matrix with `M[i][i]` the weight of vertex `i` and
/// `M[i][j] = 1` exactly when `{i, j}` is an edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionMatrix {
    n: usize,
    entries: Vec<i64>,
}

impl IntersectionMatrix {
    pub fn from_graph(g: &WeightedGraph) -> Self {
        let n = g.vertex_count();
        let mut entries = vec![0i64; n * n];
        for v in 0..n {
            entries[v * n + v] = g.weight(v);
        }
        for &(u, v) in g.edges() {
            entries[u * n + v] = 1;
            entries[v * n + u] = 1;
        }
        IntersectionMatrix { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.n + j]
    }

    /// Leading principal minors Δ_1, …, Δ_n, exactly.
    pub fn leading_principal_minors(&self) -> Vec<BigInt> {
        let n = self.n;
        let mut a: Vec<BigInt> = self.entries.iter().map(|&x| BigInt::from(x)).collect();
        let mut minors = Vec::with_capacity(n);
        let mut prev = BigInt::from(1);
        for k in 0..n {
            let pivot = a[k * n + k].clone();
            minors.push(pivot.clone());
            if pivot == BigInt::from(0) {
                // Bareiss cannot continue past a zero pivot; the remaining
                // minors are computed one determinant at a time instead.
                for m in k + 1..n {
                    minors.push(minor_det(self, m + 1));
                }
                return minors;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let val = (&a[k * n + k] * &a[i * n + j] - &a[i * n + k] * &a[k * n + j]) / &prev;
                    a[i * n + j] = val;
                }
            }
            prev = pivot;
        }
        minors
    }
}

fn minor_det(m: &IntersectionMatrix, size: usize) -> BigInt {
    // Fraction-free elimination with column pivoting on a copy.
    let mut a: Vec<BigInt> = (0..size * size)
        .map(|idx| BigInt::from(m.get(idx / size, idx % size)))
        .collect();
    let mut prev = BigInt::from(1);
    let mut sign = 1i64;
    let zero = BigInt::from(0);
    for k in 0..size {
        if a[k * size + k] == zero {
            match (k + 1..size).find(|&r| a[r * size + k] != zero) {
                Some(r) => {
                    for c in 0..size {
                        a.swap(k * size + c, r * size + c);
                    }
                    sign = -sign;
                }
                None => return zero,
            }
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let val = (&a[k * size + k] * &a[i * size + j] - &a[i * size + k] * &a[k * size + j]) / &prev;
                a[i * size + j] = val;
            }
        }
        prev = a[k * size + k].clone();
    }
    a[(size - 1) * size + (size - 1)].clone() * sign
}

fn definite_i128(m: &IntersectionMatrix) -> Option<bool> {
    let n = m.n;
    let mut a: Vec<i128> = m.entries.iter().map(|&x| x as i128).collect();
    let mut prev: i128 = 1;
    for k in 0..n {
        let pivot = a[k * n + k];
        // sign(Δ_{k+1}) must be (−1)^{k+1}
        let ok = if k % 2 == 0 { pivot < 0 } else { pivot > 0 };
        if !ok {
            return Some(false);
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let lhs = a[k * n + k].checked_mul(a[i * n + j])?;
                let rhs = a[i * n + k].checked_mul(a[k * n + j])?;
                a[i * n + j] = lhs.checked_sub(rhs)? / prev;
            }
        }
        prev = pivot;
    }
    Some(true)
}

fn definite_bigint(m: &IntersectionMatrix) -> bool {
    let zero = BigInt::from(0);
    for (k, minor) in m.leading_principal_minors().into_iter().enumerate() {
        let ok = if k % 2 == 0 { minor < zero } else { minor > zero };
        if !ok {
            return false;
        }
    }
    true
}

/// True iff the form is negative definite, i.e. the leading principal
/// minors satisfy sign(Δ_k) = (−1)^k for every k. Fraction-free integer
/// elimination; an i128 fast path escalates to arbitrary precision on
/// overflow, so the answer is exact for any input.
pub fn is_negative_definite(m: &IntersectionMatrix) -> bool {
    definite_i128(m).unwrap_or_else(|| definite_bigint(m))
}

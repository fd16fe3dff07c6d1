//! Small dense integer linear algebra: Smith normal form with transforms,
//! Bareiss determinants, unimodular inverses and integer kernels.
//!
//! Matrices are row-major `Vec<Vec<i64>>`. All inputs here are tiny (fan
//! dimensions, character-group ranks), so no attention is paid to growth
//! beyond doing intermediate determinant work in `i128`.

use num_integer::Integer;

pub type Matrix = Vec<Vec<i64>>;

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            debug_assert_eq!(row.len(), inner);
            (0..cols)
                .map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &Matrix, v: &[i64]) -> Vec<i64> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

pub fn transpose(a: &Matrix, cols: usize) -> Matrix {
    (0..cols)
        .map(|j| a.iter().map(|row| row[j]).collect())
        .collect()
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn gcd_all(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

/// Determinant by fraction-free Gaussian elimination.
pub fn det(a: &Matrix) -> i64 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    let mut m: Vec<Vec<i128>> = a
        .iter()
        .map(|r| r.iter().map(|&x| i128::from(x)).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&i| m[i][k] != 0) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    i64::try_from(sign * m[n - 1][n - 1]).expect("determinant overflow")
}

/// Smith normal form `u * a * v = d` with `d` diagonal, nonnegative and
/// each diagonal entry dividing the next.
#[derive(Debug, Clone)]
pub struct Smith {
    pub diagonal: Vec<i64>,
    pub u: Matrix,
    pub v: Matrix,
    pub rank: usize,
}

#[allow(clippy::needless_range_loop)]
pub fn smith(a: &Matrix, cols: usize) -> Smith {
    let rows = a.len();
    let mut m = a.clone();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let steps = rows.min(cols);
    let mut rank = 0;

    for t in 0..steps {
        loop {
            // smallest nonzero entry of the trailing block
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if m[i][j] != 0 && pivot.is_none_or(|(pi, pj)| m[i][j].abs() < m[pi][pj].abs())
                    {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                return finish(m, u, v, rank, steps);
            };
            m.swap(t, pi);
            u.swap(t, pi);
            for row in m.iter_mut() {
                row.swap(t, pj);
            }
            for row in v.iter_mut() {
                row.swap(t, pj);
            }

            let p = m[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let q = m[i][t] / p;
                if q != 0 {
                    for j in 0..cols {
                        m[i][j] -= q * m[t][j];
                    }
                    for j in 0..rows {
                        u[i][j] -= q * u[t][j];
                    }
                }
                clean &= m[i][t] == 0;
            }
            for j in t + 1..cols {
                let q = m[t][j] / p;
                if q != 0 {
                    for i in 0..rows {
                        m[i][j] -= q * m[i][t];
                    }
                    for i in 0..cols {
                        v[i][j] -= q * v[i][t];
                    }
                }
                clean &= m[t][j] == 0;
            }
            if !clean {
                continue;
            }
            // divisibility: fold an offending row into the pivot row
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| m[i][j] % p != 0));
            if let Some(i) = offender {
                for j in 0..cols {
                    m[t][j] += m[i][j];
                }
                for j in 0..rows {
                    u[t][j] += u[i][j];
                }
                continue;
            }
            break;
        }
        if m[t][t] < 0 {
            for j in 0..cols {
                m[t][j] = -m[t][j];
            }
            for j in 0..rows {
                u[t][j] = -u[t][j];
            }
        }
        rank += 1;
    }
    finish(m, u, v, rank, steps)
}

fn finish(m: Matrix, u: Matrix, v: Matrix, rank: usize, steps: usize) -> Smith {
    Smith {
        diagonal: (0..steps).map(|i| m[i][i]).collect(),
        u,
        v,
        rank,
    }
}

/// Inverse of a unimodular matrix, or `None` if `|det| != 1`.
pub fn unimodular_inverse(a: &Matrix) -> Option<Matrix> {
    let n = a.len();
    let s = smith(a, n);
    if s.rank != n || s.diagonal.iter().any(|&d| d != 1) {
        return None;
    }
    // u a v = 1  =>  a^{-1} = v u
    Some(mat_mul(&s.v, &s.u))
}

/// Basis of the integer kernel `{x in Z^cols : a x = 0}`, one vector per entry.
pub fn kernel_basis(a: &Matrix, cols: usize) -> Vec<Vec<i64>> {
    let s = smith(a, cols);
    (s.rank..cols)
        .map(|j| (0..cols).map(|i| s.v[i][j]).collect())
        .collect()
}

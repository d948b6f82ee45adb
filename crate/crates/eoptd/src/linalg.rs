//! Small dense linear algebra helpers: exact Gaussian elimination over the
//! rationals (determinant, solve, inverse) and a few `f64` utilities used by
//! the floating-point evaluation paths.

use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::exact::{Exact, Rat};

/// Determinant by fraction-free-ish Gaussian elimination (exact).
pub fn det_rational(m: &[Vec<Rat>]) -> Rat {
    let n = m.len();
    let mut a: Vec<Vec<Rat>> = m.to_vec();
    let mut det = Rat::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rat::zero();
        };
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det *= &a[col][col];
        let inv = Rat::one() / &a[col][col];
        for j in col..n {
            a[col][j] = &a[col][j] * &inv;
        }
        for r in (col + 1)..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for j in col..n {
                let sub = &a[col][j] * &factor;
                a[r][j] -= sub;
            }
        }
    }
    det
}

/// Solves `A x = b` exactly; errors when `A` is singular.
pub fn solve_rational(a: &[Vec<Rat>], b: &[Rat]) -> Result<Vec<Rat>> {
    let n = a.len();
    let mut aug: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !aug[r][col].is_zero()) else {
            return Err(Error::Singular(format!("no pivot in column {col}")));
        };
        aug.swap(pivot, col);
        let inv = Rat::one() / &aug[col][col];
        for j in col..=n {
            aug[col][j] = &aug[col][j] * &inv;
        }
        for r in 0..n {
            if r == col || aug[r][col].is_zero() {
                continue;
            }
            let factor = aug[r][col].clone();
            for j in col..=n {
                let sub = &aug[col][j] * &factor;
                aug[r][j] -= sub;
            }
        }
    }
    Ok(aug.into_iter().map(|row| row[n].clone()).collect())
}

/// Exact inverse by Gauss-Jordan elimination.
pub fn invert_rational(a: &[Vec<Rat>]) -> Result<Vec<Vec<Rat>>> {
    let n = a.len();
    let mut aug: Vec<Vec<Rat>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            for j in 0..n {
                r.push(if i == j { Rat::one() } else { Rat::zero() });
            }
            r
        })
        .collect();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !aug[r][col].is_zero()) else {
            return Err(Error::Singular(format!("no pivot in column {col}")));
        };
        aug.swap(pivot, col);
        let inv = Rat::one() / &aug[col][col];
        for j in 0..2 * n {
            aug[col][j] = &aug[col][j] * &inv;
        }
        for r in 0..n {
            if r == col || aug[r][col].is_zero() {
                continue;
            }
            let factor = aug[r][col].clone();
            for j in 0..2 * n {
                let sub = &aug[col][j] * &factor;
                aug[r][j] -= sub;
            }
        }
    }
    Ok(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// `M v` for an exact matrix and a rational vector.
pub fn mat_vec_exact(m: &[Vec<Exact>], v: &[Rat]) -> Vec<Exact> {
    m.iter()
        .map(|row| {
            let mut acc = Exact::zero();
            for (mij, vj) in row.iter().zip(v) {
                acc = &acc + &mij.mul_rat(vj);
            }
            acc
        })
        .collect()
}

/// `f64` inverse by Gauss-Jordan with partial pivoting.
pub fn invert_f64(a: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let n = a.len();
    let mut aug: Vec<Vec<f64>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&r, &s| aug[r][col].abs().total_cmp(&aug[s][col].abs()))
            .unwrap();
        if aug[pivot][col].abs() < 1e-300 {
            return Err(Error::Singular(format!("no pivot in column {col}")));
        }
        aug.swap(pivot, col);
        let inv = 1.0 / aug[col][col];
        for j in 0..2 * n {
            aug[col][j] *= inv;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let factor = aug[r][col];
            if factor == 0.0 {
                continue;
            }
            for j in 0..2 * n {
                aug[r][j] -= factor * aug[col][j];
            }
        }
    }
    Ok(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Quadratic form `xᵀ M x`.
pub fn quadratic_form(m: &[Vec<f64>], x: &[f64]) -> f64 {
    m.iter().zip(x).map(|(row, xi)| xi * dot(row, x)).sum()
}

/// A random `k×k` orthogonal matrix composed from `k(k-1)/2` Givens
/// rotations with angles drawn from the given generator, optionally followed
/// by sign flips. Deterministic for a seeded generator.
pub fn random_orthogonal<R: Rng>(k: usize, rng: &mut R) -> Vec<Vec<f64>> {
    let mut q: Vec<Vec<f64>> = (0..k)
        .map(|i| (0..k).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    for i in 0..k {
        for j in (i + 1)..k {
            let theta = rng.gen_range(0.0..std::f64::consts::TAU);
            let (s, c) = theta.sin_cos();
            for row in q.iter_mut() {
                let (a, b) = (row[i], row[j]);
                row[i] = c * a - s * b;
                row[j] = s * a + c * b;
            }
        }
    }
    for i in 0..k {
        if rng.gen_bool(0.5) {
            for row in q.iter_mut() {
                row[i] = -row[i];
            }
        }
    }
    q
}

pub fn mat_vec_f64(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    m.iter().map(|row| dot(row, v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_int};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn det_and_solve_exact() {
        let a = vec![
            vec![rat_int(1), rat_int(1), rat_int(1)],
            vec![rat_int(1), rat(1, 2), Rat::zero()],
            vec![rat_int(1), Rat::zero(), Rat::zero()],
        ];
        // det = -1/2 by cofactor expansion along the last row
        assert_eq!(det_rational(&a), rat(-1, 2));
        let b = vec![rat_int(1), rat(2, 5), rat(1, 5)];
        let x = solve_rational(&a, &b).unwrap();
        // third equation pins x0 = 1/5
        assert_eq!(x[0], rat(1, 5));
        for (row, rhs) in a.iter().zip(&b) {
            let lhs: Rat = row.iter().zip(&x).map(|(aij, xj)| aij * xj).sum();
            assert_eq!(&lhs, rhs);
        }
    }

    #[test]
    fn det_singular_is_zero() {
        let a = vec![vec![rat_int(1), rat_int(2)], vec![rat_int(2), rat_int(4)]];
        assert_eq!(det_rational(&a), Rat::zero());
        assert!(solve_rational(&a, &[rat_int(1), rat_int(1)]).is_err());
    }

    #[test]
    fn rational_inverse_round_trip() {
        let a = vec![
            vec![rat_int(1), rat(2, 5), Rat::zero()],
            vec![rat(2, 5), rat(2, 5), Rat::zero()],
            vec![Rat::zero(), Rat::zero(), rat(2, 5)],
        ];
        let inv = invert_rational(&a).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let prod: Rat = (0..3).map(|t| &a[i][t] * &inv[t][j]).sum();
                assert_eq!(prod, if i == j { Rat::one() } else { Rat::zero() });
            }
        }
    }

    #[test]
    fn f64_inverse_round_trip() {
        let a = vec![
            vec![4.0, 1.0, 0.2],
            vec![1.0, 3.0, -0.5],
            vec![0.2, -0.5, 2.0],
        ];
        let inv = invert_f64(&a).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let prod: f64 = (0..3).map(|t| a[i][t] * inv[t][j]).sum();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((prod - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn random_orthogonal_is_orthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for k in 2..6 {
            let q = random_orthogonal(k, &mut rng);
            for i in 0..k {
                for j in 0..k {
                    let prod: f64 = (0..k).map(|t| q[t][i] * q[t][j]).sum();
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((prod - expect).abs() < 1e-12, "QᵀQ deviates at ({i},{j})");
                }
            }
        }
    }
}

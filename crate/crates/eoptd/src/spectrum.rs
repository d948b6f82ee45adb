//! Eigenvalue spectra of symmetric information matrices in closed form, the
//! E-criterion and the Φ_p family, and a cyclic Jacobi eigensolver used as a
//! numerical cross-check oracle.

use num_traits::One;

use crate::design::{InfoMatrix, SymmetricMoments};
use crate::error::{Error, Result};
use crate::exact::{rat_int, Exact, Rat};

/// Eigenvalues with multiplicities, sorted ascending, equal values merged.
///
/// Values are [`Exact`]: the two paired eigenvalues of the upper block are
/// `(1 + c + (k-1)b ± √D)/2`, which stay symbolic when `D` is not a perfect
/// square and collapse to rationals when it is (as happens at the optima,
/// where the reported multiplicity `k(k+1)/2` relies on exact merging).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spectrum {
    values: Vec<(Exact, usize)>,
}

impl Spectrum {
    fn from_parts(parts: Vec<(Exact, usize)>) -> Self {
        let mut values: Vec<(Exact, usize)> = Vec::new();
        for (v, mult) in parts {
            if mult == 0 {
                continue;
            }
            match values.iter_mut().find(|(u, _)| *u == v) {
                Some((_, m)) => *m += mult,
                None => values.push((v, mult)),
            }
        }
        values.sort_by(|(u, _), (v, _)| u.cmp(v));
        Spectrum { values }
    }

    pub fn values(&self) -> &[(Exact, usize)] {
        &self.values
    }

    /// Total multiplicity (the matrix dimension `m`).
    pub fn total_multiplicity(&self) -> usize {
        self.values.iter().map(|(_, m)| m).sum()
    }

    pub fn min(&self) -> &(Exact, usize) {
        &self.values[0]
    }

    pub fn max(&self) -> &(Exact, usize) {
        self.values.last().unwrap()
    }

    /// Expanded eigenvalue list as `f64`, ascending.
    pub fn to_f64_list(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.total_multiplicity());
        for (v, m) in &self.values {
            out.extend(std::iter::repeat_n(v.to_f64(), *m));
        }
        out
    }
}

/// All eigenvalues of the symmetric information matrix with moments
/// `(a, b, c)`:
///
/// ```text
/// λ₀   = (1 + c + (k-1)b + √D)/2    (simple)
/// λ₁   = (1 + c + (k-1)b - √D)/2    (simple)
/// c-b  with multiplicity k-1
/// a    with multiplicity k
/// b    with multiplicity k(k-1)/2
/// D    = [1 - c - (k-1)b]² + 4ka²
/// ```
///
/// For `k = 1` the `c-b` and `b` branches have multiplicity zero and drop
/// out. Coinciding values are merged.
pub fn symmetric_spectrum(mom: &SymmetricMoments, k: usize) -> Spectrum {
    let km1 = rat_int(k as i64 - 1);
    let kk = rat_int(k as i64);
    let inner = Rat::one() - &mom.c - &km1 * &mom.b;
    let d = &inner * &inner + rat_int(4) * &kk * &mom.a * &mom.a;
    let base = (Rat::one() + &mom.c + &km1 * &mom.b) / rat_int(2);
    let half = Rat::new(1.into(), 2.into());
    let lam0 = Exact::surd(base.clone(), half.clone(), d.clone());
    let lam1 = Exact::surd(base, -half, d);
    Spectrum::from_parts(vec![
        (lam0, 1),
        (lam1, 1),
        (Exact::from_rat(&mom.c - &mom.b), k - 1),
        (Exact::from_rat(mom.a.clone()), k),
        (Exact::from_rat(mom.b.clone()), k * (k - 1) / 2),
    ])
}

/// Minimum eigenvalue of the symmetric spectrum with its merged multiplicity.
pub fn lambda_min_symmetric(mom: &SymmetricMoments, k: usize) -> (Exact, usize) {
    symmetric_spectrum(mom, k).min().clone()
}

/// Kiefer's Φ_p criterion `(m⁻¹ Σ λ_i^p)^{1/p}` for `p ∈ [-∞, 1]`.
///
/// `p = -∞` gives the E-criterion `λ_min`; `p = 0` the geometric mean
/// `(det M)^{1/m}`. For `p < 0` the matrix must be nonsingular.
pub fn phi_p(m: &InfoMatrix, p: f64) -> Result<f64> {
    if p.is_nan() || p > 1.0 {
        return Err(Error::InvalidArgument(format!(
            "phi_p requires p in [-inf, 1], got {p}"
        )));
    }
    let eig = eigen_sym(&m.to_f64(), 1e-14)?;
    let dim = eig.values.len() as f64;
    let lambdas: Vec<f64> = eig.values.iter().map(|&l| l.max(0.0)).collect();
    let singular_floor = 1e-12 * lambdas.iter().cloned().fold(1.0_f64, f64::max);
    if p == f64::NEG_INFINITY {
        return Ok(eig.values[0]);
    }
    if p == 0.0 {
        // geometric mean; zero eigenvalues give zero
        if lambdas.iter().any(|&l| l <= 0.0) {
            return Ok(0.0);
        }
        let log_mean = lambdas.iter().map(|l| l.ln()).sum::<f64>() / dim;
        return Ok(log_mean.exp());
    }
    if p < 0.0 && lambdas.iter().any(|&l| l <= singular_floor) {
        return Err(Error::Singular(
            "phi_p with p < 0 requires a nonsingular information matrix".into(),
        ));
    }
    let mean = lambdas.iter().map(|l| l.powf(p)).sum::<f64>() / dim;
    Ok(mean.powf(1.0 / p))
}

/// Eigen-decomposition of a symmetric matrix: ascending eigenvalues and the
/// matching orthonormal eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    /// `vectors[c]` is the eigenvector for `values[c]`.
    pub vectors: Vec<Vec<f64>>,
}

const MAX_SWEEPS: usize = 100;

/// Cyclic Jacobi eigensolver (row-cyclic sweeps). Terminates when the
/// off-diagonal Frobenius norm drops below `tol · ‖M‖_F`; errors after 100
/// sweeps. Input asymmetry beyond `1e-12` is rejected.
pub fn eigen_sym(m: &[Vec<f64>], tol: f64) -> Result<EigenDecomposition> {
    let n = m.len();
    for (i, row) in m.iter().enumerate() {
        if row.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: row.len(),
            });
        }
        for j in 0..n {
            if (m[i][j] - m[j][i]).abs() > 1e-12 {
                return Err(Error::InvalidArgument(format!(
                    "matrix is not symmetric: |m[{i}][{j}] - m[{j}][{i}]| = {}",
                    (m[i][j] - m[j][i]).abs()
                )));
            }
        }
    }
    let frob: f64 = m
        .iter()
        .flat_map(|row| row.iter())
        .map(|v| v * v)
        .sum::<f64>()
        .sqrt();
    let threshold = tol.max(f64::EPSILON) * frob.max(f64::MIN_POSITIVE);

    let mut a: Vec<Vec<f64>> = m.to_vec();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();

    let off = |a: &[Vec<f64>]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                s += 2.0 * a[i][j] * a[i][j];
            }
        }
        s.sqrt()
    };

    let mut converged = frob == 0.0 || off(&a) <= threshold;
    let mut sweeps = 0;
    while !converged {
        if sweeps >= MAX_SWEEPS {
            return Err(Error::NoConvergence(MAX_SWEEPS));
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q].abs() <= threshold / (n as f64) {
                    continue;
                }
                // symmetric Schur rotation annihilating a[p][q]
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (1.0 + theta * theta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for j in 0..n {
                    let (apj, aqj) = (a[p][j], a[q][j]);
                    a[p][j] = c * apj - s * aqj;
                    a[q][j] = s * apj + c * aqj;
                }
                for i in 0..n {
                    let (aip, aiq) = (a[i][p], a[i][q]);
                    a[i][p] = c * aip - s * aiq;
                    a[i][q] = s * aip + c * aiq;
                }
                for i in 0..n {
                    let (vip, viq) = (v[i][p], v[i][q]);
                    v[i][p] = c * vip - s * viq;
                    v[i][q] = s * vip + c * viq;
                }
            }
        }
        converged = off(&a) <= threshold;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i][i].total_cmp(&a[j][j]));
    let values: Vec<f64> = order.iter().map(|&i| a[i][i]).collect();
    let vectors: Vec<Vec<f64>> = order
        .iter()
        .map(|&c| (0..n).map(|r| v[r][c]).collect())
        .collect();
    Ok(EigenDecomposition { values, vectors })
}

/// Merges a sorted `f64` eigenvalue list into `(value, multiplicity)` pairs
/// using the given merge tolerance.
pub fn merge_multiplicities(values: &[f64], tol: f64) -> Vec<(f64, usize)> {
    let mut out: Vec<(f64, usize)> = Vec::new();
    for &v in values {
        match out.last_mut() {
            Some((u, m)) if (v - *u).abs() <= tol => *m += 1,
            _ => out.push((v, 1)),
        }
    }
    out
}

//! The second-order response surface model: dimension bookkeeping, the
//! canonical monomial ordering, and evaluation of the regression vector.
//!
//! The regression vector is fixed to
//!
//! ```text
//! f(x) = (1, x₁², …, x_k², x₁, …, x_k, x₁x₂, x₁x₃, …, x_{k-1}x_k)
//! ```
//!
//! with cross terms ordered lexicographically by `(i, j)`, `i < j`. Every
//! other module in the crate depends on this ordering, so it is part of the
//! public contract.

use num_traits::One;
use std::ops::Mul;

use crate::error::{Error, Result};

/// Model dimensions: `k` predictors, `m = (k+1)(k+2)/2` regression functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModelSpec {
    k: usize,
    m: usize,
}

impl ModelSpec {
    pub fn new(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument(
                "the model requires at least one predictor (k >= 1)".into(),
            ));
        }
        Ok(ModelSpec {
            k,
            m: (k + 1) * (k + 2) / 2,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of regression functions.
    pub fn m(&self) -> usize {
        self.m
    }
}

/// The multi-indices of all monomials of total degree at most 2, in the
/// canonical order: constant, pure squares, linear terms, pairwise cross
/// terms in lexicographic `(i, j)` order.
pub fn monomial_exponents(spec: &ModelSpec) -> Vec<Vec<u8>> {
    let k = spec.k;
    let mut exps = Vec::with_capacity(spec.m);
    exps.push(vec![0u8; k]);
    for i in 0..k {
        let mut e = vec![0u8; k];
        e[i] = 2;
        exps.push(e);
    }
    for i in 0..k {
        let mut e = vec![0u8; k];
        e[i] = 1;
        exps.push(e);
    }
    for i in 0..k {
        for j in (i + 1)..k {
            let mut e = vec![0u8; k];
            e[i] = 1;
            e[j] = 1;
            exps.push(e);
        }
    }
    debug_assert_eq!(exps.len(), spec.m);
    exps
}

/// Evaluates `f(x)`; works for `f64`, rationals and exact surds alike.
pub fn regression_vector<T>(spec: &ModelSpec, x: &[T]) -> Result<Vec<T>>
where
    T: Clone + One + Mul<Output = T>,
{
    if x.len() != spec.k {
        return Err(Error::DimensionMismatch {
            expected: spec.k,
            got: x.len(),
        });
    }
    let mut f = Vec::with_capacity(spec.m);
    f.push(T::one());
    for xi in x {
        f.push(xi.clone() * xi.clone());
    }
    for xi in x {
        f.push(xi.clone());
    }
    for i in 0..spec.k {
        for j in (i + 1)..spec.k {
            f.push(x[i].clone() * x[j].clone());
        }
    }
    Ok(f)
}

/// `x^α` for a single multi-index.
pub fn monomial_value<T>(x: &[T], alpha: &[u8]) -> T
where
    T: Clone + One + Mul<Output = T>,
{
    let mut acc = T::one();
    for (xi, &e) in x.iter().zip(alpha) {
        for _ in 0..e {
            acc = acc * xi.clone();
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat_int, Rat};
    use proptest::prelude::*;

    #[test]
    fn new_rejects_k_zero() {
        assert!(ModelSpec::new(0).is_err());
        assert_eq!(ModelSpec::new(3).unwrap().m(), 10);
    }

    #[test]
    fn regression_vector_k2() {
        let spec = ModelSpec::new(2).unwrap();
        let f = regression_vector(&spec, &[1.0, 0.0]).unwrap();
        assert_eq!(f, vec![1.0, 1.0, 0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn regression_vector_k1_is_univariate_quadratic() {
        let spec = ModelSpec::new(1).unwrap();
        let t = 0.7;
        let f = regression_vector(&spec, &[t]).unwrap();
        assert_eq!(f, vec![1.0, t * t, t]);
    }

    #[test]
    fn regression_vector_all_ones_k3() {
        let spec = ModelSpec::new(3).unwrap();
        let x: Vec<Rat> = (0..3).map(|_| rat_int(1)).collect();
        let f = regression_vector(&spec, &x).unwrap();
        assert_eq!(f.len(), 10);
        assert!(f.iter().all(|v| *v == rat_int(1)));
    }

    #[test]
    fn regression_vector_at_origin() {
        let spec = ModelSpec::new(4).unwrap();
        let f = regression_vector(&spec, &[0.0; 4]).unwrap();
        assert_eq!(f[0], 1.0);
        assert!(f[1..].iter().all(|&v| v == 0.0));
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let spec = ModelSpec::new(3).unwrap();
        assert!(regression_vector(&spec, &[1.0, 2.0]).is_err());
    }

    #[test]
    fn exponent_order_matches_regression_vector() {
        for k in 1..=4 {
            let spec = ModelSpec::new(k).unwrap();
            let exps = monomial_exponents(&spec);
            assert_eq!(exps.len(), spec.m());
            let x: Vec<f64> = (0..k).map(|i| 0.3 + 0.4 * i as f64).collect();
            let f = regression_vector(&spec, &x).unwrap();
            for (fj, alpha) in f.iter().zip(&exps) {
                assert!((fj - monomial_value(&x, alpha)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn exponents_k1_and_k2() {
        let spec1 = ModelSpec::new(1).unwrap();
        assert_eq!(monomial_exponents(&spec1), vec![vec![0], vec![2], vec![1]]);
        let spec2 = ModelSpec::new(2).unwrap();
        assert_eq!(
            monomial_exponents(&spec2),
            vec![
                vec![0, 0],
                vec![2, 0],
                vec![0, 2],
                vec![1, 0],
                vec![0, 1],
                vec![1, 1]
            ]
        );
    }

    proptest! {
        /// Swapping two coordinates of x permutes the square and linear
        /// blocks, and maps cross terms onto cross terms.
        #[test]
        fn coordinate_swap_permutes_blocks(
            k in 2usize..6,
            i in 0usize..6,
            j in 0usize..6,
            seed in 0u64..1000,
        ) {
            let i = i % k;
            let j = j % k;
            let spec = ModelSpec::new(k).unwrap();
            let x: Vec<f64> = (0..k)
                .map(|t| ((seed + t as u64 * 37) % 19) as f64 / 19.0 - 0.5)
                .collect();
            let mut y = x.clone();
            y.swap(i, j);
            let fx = regression_vector(&spec, &x).unwrap();
            let fy = regression_vector(&spec, &y).unwrap();
            // squares and linear entries swap in place
            prop_assert_eq!(fx[1 + i], fy[1 + j]);
            prop_assert_eq!(fx[1 + k + i], fy[1 + k + j]);
            // the multisets of cross-term values agree
            let mut cx: Vec<f64> = fx[1 + 2 * k..].to_vec();
            let mut cy: Vec<f64> = fy[1 + 2 * k..].to_vec();
            cx.sort_by(f64::total_cmp);
            cy.sort_by(f64::total_cmp);
            prop_assert_eq!(cx, cy);
        }
    }
}

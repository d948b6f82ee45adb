#![allow(dead_code)] // each test binary uses a subset of these helpers

//! Shared helpers for the integration suites: seeded samplers for moment
//! triples satisfying the nonsingularity inequalities.

use eoptd::design::{check_moment_inequalities, SymmetricMoments};
use eoptd::exact::{rat, Rat};
use rand::Rng;

/// A random moment triple with `1 ≥ a ≥ c > b > 0` and `c + (k-1)b > ka²`,
/// exact by construction check.
pub fn random_valid_moments<R: Rng>(rng: &mut R, k: usize) -> SymmetricMoments {
    loop {
        let c_n = rng.gen_range(2i64..=500);
        let b_n = rng.gen_range(1i64..c_n);
        let c = rat(c_n, 1000);
        let b = rat(b_n, 1000);
        let bound = (c_n as f64 + (k as f64 - 1.0) * b_n as f64) / (1000.0 * k as f64);
        let a_hi = (bound.sqrt() * 1000.0).floor() as i64;
        if a_hi <= c_n {
            continue;
        }
        let a = rat(rng.gen_range(c_n..=a_hi.min(1000)), 1000);
        let mom = SymmetricMoments::new(a, b, c);
        if check_moment_inequalities(&mom, k) {
            return mom;
        }
    }
}

/// A random *rotatable* triple (`c = 3b` exactly) that still satisfies the
/// nonsingularity inequalities.
pub fn random_rotatable_moments<R: Rng>(rng: &mut R, k: usize) -> SymmetricMoments {
    loop {
        let b_cap = 1000 * (k as i64 + 2) / (9 * k as i64);
        let b_n = rng.gen_range(1i64..b_cap.max(2));
        let b = rat(b_n, 1000);
        let c = rat(3 * b_n, 1000);
        let bound = ((k as f64 + 2.0) * b_n as f64) / (1000.0 * k as f64);
        let a_hi = (bound.sqrt() * 1000.0).floor() as i64;
        if a_hi <= 3 * b_n {
            continue;
        }
        let a = rat(rng.gen_range(3 * b_n..=a_hi.min(1000)), 1000);
        let mom = SymmetricMoments::new(a, b, c);
        if check_moment_inequalities(&mom, k) {
            return mom;
        }
    }
}

/// A random valid triple bounded away from rotatability:
/// `|c - 3b| ≥ 1/100`.
pub fn random_nonrotatable_moments<R: Rng>(rng: &mut R, k: usize) -> SymmetricMoments {
    loop {
        let mom = random_valid_moments(rng, k);
        let diff = &mom.c - rat(3, 1) * &mom.b;
        let abs = if diff < Rat::new(0.into(), 1.into()) {
            -diff
        } else {
            diff
        };
        if abs >= rat(1, 100) {
            return mom;
        }
    }
}

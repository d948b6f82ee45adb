//! E-optimal designs on the unit ball `‖x‖₂ ≤ 1`: the three-set optimal
//! design, its moment identities, the dispersion function with its
//! block-inverse coefficients, the rotatability criterion `c = 3b`, and the
//! optimal design within the rotatable class for comparison.
//!
//! The optimal design is supported on the `2^k` inscribed cube vertices
//! `(±1/√k, …, ±1/√k)` (set `F₀`), the `2k` face centers `±e_i` (set
//! `F_{k-1}`), and the origin (`F_k`). Vertex coordinates are irrational,
//! so all moment work runs on their squares, which are the rationals `1/k`;
//! the coordinates themselves stay symbolic as [`Exact`] surds.

use num_traits::{One, Signed, Zero};

use crate::design::{symmetric_info_matrix, Design, Space, SymmetricMoments};
use crate::error::{Error, Result};
use crate::exact::{rat, rat_int, Exact, Rat};
use crate::linalg;
use crate::model::{regression_vector, ModelSpec};

/// The candidate support sets `F₀`, `F_{k-1}`, `F_k` on the unit ball.
#[derive(Clone, Copy, Debug)]
pub struct BallSupportSets {
    k: usize,
}

impl BallSupportSets {
    pub fn new(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("k must be at least 1".into()));
        }
        Ok(BallSupportSets { k })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `|F₀| = 2^k`, `|F_{k-1}| = 2k`, `|F_k| = 1`.
    pub fn cardinalities(&self) -> (u128, u128, u128) {
        (1u128 << self.k, 2 * self.k as u128, 1)
    }

    /// The `2^k` scaled cube vertices `(±1/√k, …)`, sign patterns in
    /// lexicographic order (`+` before `-`).
    pub fn vertices(&self) -> Vec<Vec<Exact>> {
        let k = self.k;
        (0..(1usize << k))
            .map(|bits| {
                (0..k)
                    .map(|i| {
                        let sign = if (bits >> (k - 1 - i)) & 1 == 0 {
                            1
                        } else {
                            -1
                        };
                        Exact::inv_sqrt(sign, k)
                    })
                    .collect()
            })
            .collect()
    }

    /// The `2k` face centers `±e_i`.
    pub fn face_centers(&self) -> Vec<Vec<Exact>> {
        let k = self.k;
        let mut out = Vec::with_capacity(2 * k);
        for i in 0..k {
            for sign in [1i64, -1] {
                let mut p = vec![Exact::zero(); k];
                p[i] = Exact::from_int(sign);
                out.push(p);
            }
        }
        out
    }

    pub fn center(&self) -> Vec<Exact> {
        vec![Exact::zero(); self.k]
    }
}

/// The optimal set masses `ξ(F₀) = k²/(k²+2k+2)`, `ξ(F_{k-1}) = k/(k²+2k+2)`,
/// `ξ(F_k) = (k+2)/(k²+2k+2)`.
pub fn optimal_ball_masses(k: usize) -> (Rat, Rat, Rat) {
    let ki = k as i64;
    let den = ki * ki + 2 * ki + 2;
    (rat(ki * ki, den), rat(ki, den), rat(ki + 2, den))
}

/// The E-optimal design on the unit ball, as an explicit design with
/// per-point weights `set mass / set cardinality`. Its moments are
/// `a = (k+1)/(k²+2k+2)`, `b = 1/(k²+2k+2)`, `c = 2/(k²+2k+2)` and its
/// minimum eigenvalue `1/(k²+2k+2)` has multiplicity `k(k+1)/2`.
///
/// For `k = 1` the vertex set and the face centers coincide at `±1` and are
/// merged, recovering the interval design with masses `1/5, 1/5, 3/5`.
pub fn optimal_ball_design(k: usize) -> Result<Design> {
    let sets = BallSupportSets::new(k)?;
    let (m0, m1, mk) = optimal_ball_masses(k);
    let (n0, n1, _) = sets.cardinalities();
    let mut points = Vec::new();
    let mut weights = Vec::new();
    let w0 = m0 / Rat::from_integer((n0 as i64).into());
    for p in sets.vertices() {
        points.push(p);
        weights.push(w0.clone());
    }
    let w1 = m1 / Rat::from_integer((n1 as i64).into());
    for p in sets.face_centers() {
        points.push(p);
        weights.push(w1.clone());
    }
    points.push(sets.center());
    weights.push(mk);
    Design::new(k, Space::Ball, points, weights)
}

/// Moments of a design supported on `F₀`, `F_{k-1}`, `F_k` with the given
/// set masses: `a = (ξ(F₀) + ξ(F_{k-1}))/k`, `b = ξ(F₀)/k²`,
/// `c = ξ(F₀)/k² + ξ(F_{k-1})/k`. The identity
/// `ξ(F_{k-1}) = k(a - kb) = k(c - b)` follows. For `k = 1` the crate-wide
/// convention `b = 0` applies.
pub fn ball_moments(k: usize, xi_f0: &Rat, xi_fkm1: &Rat) -> Result<SymmetricMoments> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if xi_f0.is_negative() || xi_fkm1.is_negative() || xi_f0 + xi_fkm1 > Rat::one() {
        return Err(Error::InvalidArgument(
            "set masses must be nonnegative with sum at most 1".into(),
        ));
    }
    let ki = rat_int(k as i64);
    let a = (xi_f0 + xi_fkm1) / &ki;
    let b_raw = xi_f0 / (&ki * &ki);
    let c = &b_raw + xi_fkm1 / &ki;
    let b = if k >= 2 { b_raw } else { Rat::zero() };
    Ok(SymmetricMoments::new(a, b, c))
}

/// The paired small eigenvalue `λ₁ = (1 + a - √((1-a)² + 4ka²))/2` of a ball
/// design (where `c - b` has been eliminated through the support identity).
pub fn lambda1_ball(a: &Rat, k: usize) -> Exact {
    let one = Rat::one();
    let inner = &one - a;
    let d = &inner * &inner + rat_int(4 * k as i64) * a * a;
    let half = rat(1, 2);
    Exact::surd((&one + a) / rat_int(2), -half, d)
}

/// Block-inverse parameters of `M⁻¹` for a nonsingular symmetric design:
/// the upper `(k+1)×(k+1)` block inverts to `[κ, q·1ᵀ; q·1, G]` with
/// `G = (d-e)I + e·11ᵀ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DispersionCoefficients {
    pub kappa: Rat,
    pub q: Rat,
    pub q0: Rat,
    pub e: Rat,
    pub d: Rat,
}

/// `Q₀ = c - b + (b - a²)k`, `κ = (c + (k-1)b)/Q₀`, `q = -a/Q₀`,
/// `e = (a² - b)/((c-b)Q₀)`, `d = Q₀⁻¹ - e(k-1)`.
pub fn dispersion_coefficients(mom: &SymmetricMoments, k: usize) -> Result<DispersionCoefficients> {
    if k < 2 {
        return Err(Error::InvalidArgument(
            "dispersion coefficients require k >= 2".into(),
        ));
    }
    let ki = rat_int(k as i64);
    let km1 = rat_int(k as i64 - 1);
    let q0 = &mom.c - &mom.b + (&mom.b - &mom.a * &mom.a) * &ki;
    if q0.is_zero() || mom.c == mom.b || mom.a.is_zero() || mom.b.is_zero() {
        return Err(Error::Singular(
            "dispersion requires a nonsingular symmetric information matrix".into(),
        ));
    }
    let kappa = (&mom.c + &km1 * &mom.b) / &q0;
    let q = -(&mom.a / &q0);
    let e = (&mom.a * &mom.a - &mom.b) / ((&mom.c - &mom.b) * &q0);
    let d = Rat::one() / &q0 - &e * &km1;
    Ok(DispersionCoefficients { kappa, q, q0, e, d })
}

/// The dispersion function `U(x,ξ) = fᵀ(x) M⁻¹(ξ) f(x)` via its closed-form
/// expansion
/// `κ + (a⁻¹ + 2q)‖x‖² + (1/(2b) + e)‖x‖⁴ + (d - e - 1/(2b)) Σ x_i⁴`.
pub fn dispersion(mom: &SymmetricMoments, k: usize, x: &[f64]) -> Result<f64> {
    if x.len() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            got: x.len(),
        });
    }
    let co = dispersion_coefficients(mom, k)?;
    let kappa = crate::exact::rat_to_f64(&co.kappa);
    let q = crate::exact::rat_to_f64(&co.q);
    let e = crate::exact::rat_to_f64(&co.e);
    let d = crate::exact::rat_to_f64(&co.d);
    let a = crate::exact::rat_to_f64(&mom.a);
    let b = crate::exact::rat_to_f64(&mom.b);
    let norm2: f64 = x.iter().map(|v| v * v).sum();
    let quartic: f64 = x.iter().map(|v| v.powi(4)).sum();
    Ok(kappa
        + (1.0 / a + 2.0 * q) * norm2
        + (0.5 / b + e) * norm2 * norm2
        + (d - e - 0.5 / b) * quartic)
}

/// The dispersion function evaluated the direct way: numerically invert the
/// full information matrix and form the quadratic form. Serves as the
/// independent route against the closed-form expansion.
pub fn dispersion_quadratic_form(
    spec: &ModelSpec,
    mom: &SymmetricMoments,
    x: &[f64],
) -> Result<f64> {
    let m = symmetric_info_matrix(spec, mom).to_f64();
    let inv = linalg::invert_f64(&m)?;
    let f = regression_vector(spec, x)?;
    Ok(linalg::quadratic_form(&inv, &f))
}

/// Rotatability criterion: `c = 3b` (exact when `tol = 0`).
pub fn is_rotatable(mom: &SymmetricMoments, tol: f64) -> bool {
    let diff = &mom.c - rat_int(3) * &mom.b;
    diff.is_zero() || crate::exact::rat_to_f64(&diff).abs() <= tol
}

/// Degree-≤4 moments of the uniform distribution on the sphere of radius
/// `r`: `a = r²/k`, `b = r⁴/(k(k+2))`, `c = 3r⁴/(k(k+2))` (rotatable).
pub fn uniform_sphere_moments(k: usize, r: &Rat) -> SymmetricMoments {
    let ki = k as i64;
    let r2 = r * r;
    let r4 = &r2 * &r2;
    let b = &r4 / rat_int(ki * (ki + 2));
    SymmetricMoments::new(r2 / rat_int(ki), b.clone(), rat_int(3) * b)
}

/// An E-optimal design within the rotatable class: `(1-α)δ₀ + α·U(∂B₂(r))`.
/// The uniform sphere component is not finitely supported, so the design is
/// returned through its moments.
#[derive(Clone, Debug)]
pub struct RotatableDesign {
    pub alpha: Rat,
    pub radius: Rat,
    pub moments: SymmetricMoments,
}

/// The optimal mixing weight on the ball of radius `r`:
///
/// ```text
/// α = k(k+1)(k+2) / ((k+1)r⁴ + k(k+2)²)   for r² ≤ k+2,
/// α = k(r²-1) / (r²(r²+k-1))              for r² ≥ k+2
/// ```
///
/// (both branches agree at `r² = k+2`). The resulting moments are
/// `a = αr²/k`, `b = αr⁴/(k(k+2))`, `c = 3b`.
pub fn rotatable_optimal(k: usize, r: &Rat) -> Result<RotatableDesign> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if !r.is_positive() {
        return Err(Error::InvalidArgument("radius must be positive".into()));
    }
    let ki = k as i64;
    let r2 = r * r;
    let r4 = &r2 * &r2;
    let alpha = if r2 <= rat_int(ki + 2) {
        rat_int(ki * (ki + 1) * (ki + 2))
            / (rat_int(ki + 1) * &r4 + rat_int(ki * (ki + 2) * (ki + 2)))
    } else {
        rat_int(ki) * (&r2 - Rat::one()) / (&r2 * (&r2 + rat_int(ki - 1)))
    };
    if alpha.is_negative() || alpha > Rat::one() {
        return Err(Error::InvalidArgument(format!(
            "mixing weight α = {alpha} out of [0,1]"
        )));
    }
    let uniform = uniform_sphere_moments(k, r);
    let moments = SymmetricMoments::new(
        &alpha * &uniform.a,
        &alpha * &uniform.b,
        &alpha * &uniform.c,
    );
    Ok(RotatableDesign {
        alpha,
        radius: r.clone(),
        moments,
    })
}

/// The price of rotatability on the unit ball.
#[derive(Clone, Debug)]
pub struct RotatableGap {
    /// `(k+1)/(k³+4k²+5k+1)`: best λ_min among rotatable designs.
    pub lambda_rotatable: Rat,
    /// `1/(k²+2k+2)`: the global optimum.
    pub lambda_optimal: Rat,
    /// `λ_rot/λ_opt < 1`.
    pub ratio: Rat,
}

pub fn rotatable_gap(k: usize) -> Result<RotatableGap> {
    if k < 2 {
        return Err(Error::InvalidArgument(
            "the rotatable comparison requires k >= 2".into(),
        ));
    }
    let ki = k as i64;
    let lambda_rotatable = rat(ki + 1, ki * ki * ki + 4 * ki * ki + 5 * ki + 1);
    let lambda_optimal = rat(1, ki * ki + 2 * ki + 2);
    let ratio = &lambda_rotatable / &lambda_optimal;
    Ok(RotatableGap {
        lambda_rotatable,
        lambda_optimal,
        ratio,
    })
}

/// λ_min of the optimal ball design: `1/(k²+2k+2)`.
pub fn optimal_ball_lambda(k: usize) -> Rat {
    let ki = k as i64;
    rat(1, ki * ki + 2 * ki + 2)
}

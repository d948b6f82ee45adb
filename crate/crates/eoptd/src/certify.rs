//! Equivalence-theorem certificates of E-optimality: explicit eigenbases of
//! the minimal eigenspace, certificate weights, the extremal polynomial
//! `d(x,ξ) = Σ w_i (qᵢᵀf(x))²/‖qᵢ‖²`, verification of `d ≤ λ_min` over the
//! design space with equality at support points, the dual Chebyshev gap, and
//! an independent projected-subgradient maximizer of `λ_min(M(ξ))`.

use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::design::{
    information_matrix, is_symmetric, moments_of, Design, Space, SymmetricMoments,
};
use crate::error::{Error, Result};
use crate::exact::{format_rat, rat, rat_int, rat_to_f64, Exact, Rat};
use crate::linalg::{dot, quadratic_form};
use crate::model::{regression_vector, ModelSpec};
use crate::spectrum::{eigen_sym, lambda_min_symmetric, merge_multiplicities};

/// An explicit certificate of E-optimality: `s = k(k+1)/2` eigenvectors of
/// the optimal information matrix for its minimal eigenvalue, squared norms,
/// and nonnegative weights summing to one. The vectors are stored
/// unnormalized (integer entries); evaluation divides by the squared norms.
#[derive(Clone, Debug)]
pub struct ExtremalCertificate {
    space: Space,
    k: usize,
    lambda: Rat,
    vectors: Vec<Vec<Rat>>,
    sq_norms: Vec<Rat>,
    weights: Vec<Rat>,
}

impl ExtremalCertificate {
    pub fn space(&self) -> Space {
        self.space
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn s(&self) -> usize {
        self.vectors.len()
    }

    /// The certified bound `λ_min(M(ξ*))`.
    pub fn lambda(&self) -> &Rat {
        &self.lambda
    }

    pub fn vectors(&self) -> &[Vec<Rat>] {
        &self.vectors
    }

    pub fn sq_norms(&self) -> &[Rat] {
        &self.sq_norms
    }

    pub fn weights(&self) -> &[Rat] {
        &self.weights
    }

    pub fn spec(&self) -> ModelSpec {
        ModelSpec::new(self.k).expect("certificate k is validated")
    }

    /// Moments of the optimal design this certificate belongs to.
    pub fn optimal_moments(&self) -> SymmetricMoments {
        match self.space {
            Space::Cube => SymmetricMoments::new(
                rat(2, 5),
                if self.k >= 2 { rat(1, 5) } else { Rat::zero() },
                rat(2, 5),
            ),
            Space::Ball => {
                let ki = self.k as i64;
                let den = ki * ki + 2 * ki + 2;
                SymmetricMoments::new(
                    rat(ki + 1, den),
                    if self.k >= 2 {
                        rat(1, den)
                    } else {
                        Rat::zero()
                    },
                    rat(2, den),
                )
            }
        }
    }
}

fn cross_unit_vectors(k: usize, m: usize) -> Vec<Vec<Rat>> {
    (2 * k + 1..m)
        .map(|idx| {
            let mut v = vec![Rat::zero(); m];
            v[idx] = Rat::one();
            v
        })
        .collect()
}

/// The cube certificate: eigenvectors supported on the constant/squares
/// block,
///
/// ```text
/// q₀ = (k, -2, …, -2, 0, …),      ‖q₀‖² = k² + 4k
/// q_r: +1 on x₁²…x_{k-r}², -(k-r) on x_{k-r+1}²,  ‖q_r‖² = (k-r)(k-r+1)
/// ```
///
/// plus the unit vectors on the cross coordinates, with weights
/// `((k+4)/(5k), 4/(5k), …, 4/(5k), 0, …, 0)`. The induced extremal
/// polynomial collapses to `d(x) = (1/5)(1 - (4/k) Σ x_i²(1-x_i²))`.
pub fn cube_certificate(k: usize) -> Result<ExtremalCertificate> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let spec = ModelSpec::new(k)?;
    let m = spec.m();
    let ki = k as i64;
    let mut vectors = Vec::with_capacity(k * (k + 1) / 2);
    let mut sq_norms = Vec::new();
    let mut weights = Vec::new();

    let mut q0 = vec![Rat::zero(); m];
    q0[0] = rat_int(ki);
    for i in 1..=k {
        q0[i] = rat_int(-2);
    }
    vectors.push(q0);
    sq_norms.push(rat_int(ki * ki + 4 * ki));
    weights.push(rat(ki + 4, 5 * ki));

    for r in 1..k {
        let kr = (k - r) as i64;
        let mut q = vec![Rat::zero(); m];
        for i in 1..=(k - r) {
            q[i] = Rat::one();
        }
        q[k - r + 1] = rat_int(-kr);
        vectors.push(q);
        sq_norms.push(rat_int(kr * (kr + 1)));
        weights.push(rat(4, 5 * ki));
    }

    for v in cross_unit_vectors(k, m) {
        vectors.push(v);
        sq_norms.push(Rat::one());
        weights.push(Rat::zero());
    }

    Ok(ExtremalCertificate {
        space: Space::Cube,
        k,
        lambda: rat(1, 5),
        vectors,
        sq_norms,
        weights,
    })
}

/// The ball certificate:
///
/// ```text
/// q₀ = (k, -(k+1), …, -(k+1), 0, …),  ‖q₀‖² = k² + k(k+1)²
/// q_r: +1 on x₁²…x_r², -r on x_{r+1}²,  ‖q_r‖² = r(r+1)
/// ```
///
/// plus the cross-coordinate unit vectors, with weights
/// `w₀ = (k²+3k+1)/(k(k²+2k+2))`, `p₁ = (k+1)/(k(k²+2k+2))` on the square
/// vectors and `p₂ = 2(k+1)/(k(k²+2k+2))` on the cross vectors. The extremal
/// polynomial collapses to
/// `d(x) = (1 - (2(k+1)/k)‖x‖²(1-‖x‖²)) / (k²+2k+2)`.
pub fn ball_certificate(k: usize) -> Result<ExtremalCertificate> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let spec = ModelSpec::new(k)?;
    let m = spec.m();
    let ki = k as i64;
    let den = ki * (ki * ki + 2 * ki + 2);
    let mut vectors = Vec::with_capacity(k * (k + 1) / 2);
    let mut sq_norms = Vec::new();
    let mut weights = Vec::new();

    let mut q0 = vec![Rat::zero(); m];
    q0[0] = rat_int(ki);
    for i in 1..=k {
        q0[i] = rat_int(-(ki + 1));
    }
    vectors.push(q0);
    sq_norms.push(rat_int(ki * ki + ki * (ki + 1) * (ki + 1)));
    weights.push(rat(ki * ki + 3 * ki + 1, den));

    for r in 1..k {
        let ri = r as i64;
        let mut q = vec![Rat::zero(); m];
        for i in 1..=r {
            q[i] = Rat::one();
        }
        q[r + 1] = rat_int(-ri);
        vectors.push(q);
        sq_norms.push(rat_int(ri * (ri + 1)));
        weights.push(rat(ki + 1, den));
    }

    for v in cross_unit_vectors(k, m) {
        vectors.push(v);
        sq_norms.push(Rat::one());
        weights.push(rat(2 * (ki + 1), den));
    }

    Ok(ExtremalCertificate {
        space: Space::Ball,
        k,
        lambda: rat(1, ki * ki + 2 * ki + 2),
        vectors,
        sq_norms,
        weights,
    })
}

fn check_domain_f64(space: Space, x: &[f64]) -> Result<()> {
    let ok = match space {
        Space::Cube => x.iter().all(|v| v.abs() <= 1.0 + 1e-9),
        Space::Ball => x.iter().map(|v| v * v).sum::<f64>() <= 1.0 + 1e-9,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "point {x:?} lies outside the {space}"
        )))
    }
}

/// The extremal polynomial `d(x) = Σ w_i (qᵢᵀf(x))²/‖qᵢ‖²` evaluated as
/// written (the raw sum over certificate vectors).
pub fn evaluate_extremal(cert: &ExtremalCertificate, x: &[f64]) -> Result<f64> {
    check_domain_f64(cert.space, x)?;
    let spec = cert.spec();
    let f = regression_vector(&spec, x)?;
    let mut acc = 0.0;
    for ((q, w), n2) in cert.vectors.iter().zip(&cert.weights).zip(&cert.sq_norms) {
        if w.is_zero() {
            continue;
        }
        let mut proj = 0.0;
        for (qi, fi) in q.iter().zip(&f) {
            if !qi.is_zero() {
                proj += rat_to_f64(qi) * fi;
            }
        }
        acc += rat_to_f64(w) * proj * proj / rat_to_f64(n2);
    }
    Ok(acc)
}

/// The raw sum evaluated in exact arithmetic.
pub fn evaluate_extremal_exact(cert: &ExtremalCertificate, x: &[Exact]) -> Result<Exact> {
    if !cert.space.contains(x) {
        return Err(Error::InvalidArgument(format!(
            "point lies outside the {}",
            cert.space
        )));
    }
    let spec = cert.spec();
    let f = regression_vector(&spec, x)?;
    let mut acc = Exact::zero();
    for ((q, w), n2) in cert.vectors.iter().zip(&cert.weights).zip(&cert.sq_norms) {
        if w.is_zero() {
            continue;
        }
        let mut proj = Exact::zero();
        for (qi, fi) in q.iter().zip(&f) {
            if !qi.is_zero() {
                proj = &proj + &fi.mul_rat(qi);
            }
        }
        acc = &acc + &(&proj * &proj).mul_rat(&(w / n2));
    }
    Ok(acc)
}

/// The closed form of the extremal polynomial:
/// cube `(1/5)(1 - (4/k)Σx_i²(1-x_i²))`,
/// ball `(1 - (2(k+1)/k)‖x‖²(1-‖x‖²)) / (k²+2k+2)`.
pub fn extremal_closed_form(cert: &ExtremalCertificate, x: &[f64]) -> f64 {
    let k = cert.k as f64;
    let lambda = rat_to_f64(&cert.lambda);
    match cert.space {
        Space::Cube => {
            let t: f64 = x.iter().map(|v| v * v * (1.0 - v * v)).sum();
            lambda * (1.0 - 4.0 * t / k)
        }
        Space::Ball => {
            let u: f64 = x.iter().map(|v| v * v).sum();
            lambda * (1.0 - 2.0 * (k + 1.0) / k * u * (1.0 - u))
        }
    }
}

/// Exact-arithmetic closed form, for rational/surd points.
pub fn extremal_closed_form_exact(cert: &ExtremalCertificate, x: &[Exact]) -> Exact {
    let ki = cert.k as i64;
    let one = Exact::one();
    let lambda = Exact::from_rat(cert.lambda.clone());
    match cert.space {
        Space::Cube => {
            let mut t = Exact::zero();
            for v in x {
                let sq = v * v;
                t = &t + &(&sq * &(&one - &sq));
            }
            (&one - &t.mul_rat(&rat(4, ki))) * lambda
        }
        Space::Ball => {
            let mut u = Exact::zero();
            for v in x {
                u = &u + &(v * v);
            }
            let shrink = (&u * &(&one - &u)).mul_rat(&rat(2 * (ki + 1), ki));
            (&one - &shrink) * lambda
        }
    }
}

/// Grid values per axis on `[-1, 1]`.
fn axis_value(j: usize, n: usize) -> f64 {
    -1.0 + 2.0 * j as f64 / (n - 1) as f64
}

fn walk_grid<F: FnMut(&[f64])>(space: Space, k: usize, n: usize, eval: &mut F) {
    fn rec<F: FnMut(&[f64])>(
        space: Space,
        k: usize,
        n: usize,
        axis: usize,
        sumsq: f64,
        coords: &mut [f64],
        eval: &mut F,
    ) {
        if axis == k {
            eval(coords);
            return;
        }
        for j in 0..n {
            let x = axis_value(j, n);
            let s2 = sumsq + x * x;
            if space == Space::Ball && s2 > 1.0 + 1e-12 {
                continue;
            }
            coords[axis] = x;
            rec(space, k, n, axis + 1, s2, coords, eval);
        }
    }
    let mut coords = vec![0.0; k];
    rec(space, k, n, 0, 0.0, &mut coords, eval);
}

/// Local coordinate ascent with step halving from a starting point;
/// terminates when the step drops below `1e-12`. Ball iterates are radially
/// rescaled back onto the ball when a move leaves it.
fn refine_max<F: Fn(&[f64]) -> f64>(
    space: Space,
    x0: &[f64],
    initial_step: f64,
    eval: &F,
) -> (f64, Vec<f64>) {
    let mut x = x0.to_vec();
    let mut best = eval(&x);
    let mut step = initial_step;
    let mut moves = 0usize;
    while step > 1e-12 && moves < 100_000 {
        let mut improved = false;
        for axis in 0..x.len() {
            for dir in [1.0, -1.0] {
                let mut cand = x.clone();
                cand[axis] += dir * step;
                match space {
                    Space::Cube => cand[axis] = cand[axis].clamp(-1.0, 1.0),
                    Space::Ball => {
                        let norm2: f64 = cand.iter().map(|v| v * v).sum();
                        if norm2 > 1.0 {
                            let scale = norm2.sqrt().recip();
                            for c in cand.iter_mut() {
                                *c *= scale;
                            }
                        }
                    }
                }
                let val = eval(&cand);
                if val > best {
                    best = val;
                    x = cand;
                    improved = true;
                    moves += 1;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (best, x)
}

/// Maximizes `eval` over a tensor grid (`n` points per axis) intersected
/// with the design space, then refines from the best grid point.
pub fn grid_maximize<F: Fn(&[f64]) -> f64>(
    space: Space,
    k: usize,
    n: usize,
    eval: F,
) -> (f64, Vec<f64>) {
    let mut best = f64::NEG_INFINITY;
    let mut arg = vec![0.0; k];
    walk_grid(space, k, n, &mut |x: &[f64]| {
        let v = eval(x);
        if v > best {
            best = v;
            arg.copy_from_slice(x);
        }
    });
    let step = 2.0 / (n - 1) as f64;
    refine_max(space, &arg, step, &eval)
}

/// Result of the dimension-reduced domain check used for large `k`.
#[derive(Clone, Debug)]
pub struct ReducedCheck {
    /// Maximum of the extremal polynomial over the design space (attained on
    /// the reduced variable's boundary).
    pub max_d: f64,
    pub pass: bool,
}

/// The closed forms depend on `x` only through `t = Σ x_i²(1-x_i²) ∈ [0, k/4]`
/// (cube) or `u = ‖x‖² ∈ [0, 1]` (ball), so `d ≤ λ` over the whole space
/// reduces to a one-dimensional inequality. This samples the reduced
/// variable on a rational grid and checks `d ≤ λ` in exact arithmetic.
pub fn reduced_domain_check(cert: &ExtremalCertificate, samples: usize) -> ReducedCheck {
    let ki = cert.k as i64;
    let lambda = &cert.lambda;
    let n = samples.max(2) as i64;
    let mut pass = true;
    let mut attained = false;
    match cert.space {
        Space::Cube => {
            // t ranges over [0, k/4]; d(t) = λ(1 - 4t/k)
            for j in 0..=n {
                let t = rat(ki, 4) * rat(j, n);
                let d = lambda * (Rat::one() - rat(4, ki) * &t);
                if &d > lambda {
                    pass = false;
                }
                if &d == lambda {
                    attained = true;
                }
            }
        }
        Space::Ball => {
            // u ranges over [0, 1]; d(u) = λ(1 - (2(k+1)/k)u(1-u))
            for j in 0..=n {
                let u = rat(j, n);
                let d = lambda * (Rat::one() - rat(2 * (ki + 1), ki) * &u * (Rat::one() - &u));
                if &d > lambda {
                    pass = false;
                }
                if &d == lambda {
                    attained = true;
                }
            }
        }
    }
    ReducedCheck {
        max_d: rat_to_f64(lambda),
        pass: pass && attained,
    }
}

/// Outcome of verifying a design against a certificate.
#[derive(Clone, Debug)]
pub struct VerificationReport {
    /// Exact minimum eigenvalue of the design's information matrix, when the
    /// design is symmetric (always the case for the constructed optima).
    pub lambda_min: Option<Exact>,
    pub lambda_min_f64: f64,
    pub multiplicity: usize,
    /// Maximum of the extremal polynomial over the design space.
    pub max_d: f64,
    /// `max_d - λ_min`; nonpositive (within tolerance) when optimal.
    pub gap: f64,
    /// Largest deviation of `d` from `λ_min` over the support points.
    pub support_equality_max_err: f64,
    pub pass: bool,
}

impl Serialize for VerificationReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("VerificationReport", 6)?;
        let lam = match &self.lambda_min {
            Some(Exact::Rational(r)) => format_rat(r),
            Some(other) => other.to_string(),
            None => format!("{}", self.lambda_min_f64),
        };
        st.serialize_field("lambda_min", &lam)?;
        st.serialize_field("multiplicity", &self.multiplicity)?;
        st.serialize_field("max_d", &self.max_d)?;
        st.serialize_field("gap", &self.gap)?;
        st.serialize_field("support_equality_max_err", &self.support_equality_max_err)?;
        st.serialize_field("pass", &self.pass)?;
        st.end()
    }
}

impl VerificationReport {
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}

/// Exact minimum eigenvalue and merged multiplicity of a design's
/// information matrix: through the closed-form spectrum when the design is
/// symmetric, otherwise through the Jacobi oracle with a `1e-10` merge
/// tolerance.
pub fn design_lambda_min(spec: &ModelSpec, design: &Design) -> Result<(Option<Exact>, f64, usize)> {
    if is_symmetric(spec, design, 0.0).symmetric {
        let mom = moments_of(spec, design)?;
        let (lam, mult) = lambda_min_symmetric(&mom, spec.k());
        let f = lam.to_f64();
        Ok((Some(lam), f, mult))
    } else {
        let m = information_matrix(spec, design)?;
        let eig = eigen_sym(&m.to_f64(), 1e-13)?;
        let merged = merge_multiplicities(&eig.values, 1e-10);
        let (lam, mult) = merged[0];
        Ok((None, lam, mult))
    }
}

fn certificate_structure_ok(cert: &ExtremalCertificate) -> bool {
    let total: Rat = cert.weights.iter().sum();
    if !total.is_one() || cert.weights.iter().any(|w| w.is_negative()) {
        return false;
    }
    // pairwise orthogonality, skipping zero entries
    for i in 0..cert.vectors.len() {
        for j in (i + 1)..cert.vectors.len() {
            let mut acc = Rat::zero();
            for (x, y) in cert.vectors[i].iter().zip(&cert.vectors[j]) {
                if !x.is_zero() && !y.is_zero() {
                    acc += x * y;
                }
            }
            if !acc.is_zero() {
                return false;
            }
        }
    }
    true
}

/// Largest eigen-residual `‖M q_i - λ q_i‖_∞` over the certificate vectors,
/// computed exactly against the design's information matrix and eigenvalue.
fn residual_max_exact(m: &[Vec<Exact>], lambda: &Exact, cert: &ExtremalCertificate) -> f64 {
    let dim = m.len();
    let mut worst: f64 = 0.0;
    for q in &cert.vectors {
        for row in 0..dim {
            let mut acc = Exact::zero();
            for (col, qc) in q.iter().enumerate() {
                if !qc.is_zero() {
                    acc = &acc + &m[row][col].mul_rat(qc);
                }
            }
            let expect = lambda.mul_rat(&q[row]);
            let resid = &acc - &expect;
            if !resid.is_zero() {
                worst = worst.max(resid.to_f64().abs());
            }
        }
    }
    worst
}

/// Verifies a design against a certificate:
///
/// 1. `λ_min(M(ξ))` with multiplicity (exact for symmetric designs);
/// 2. certificate structure (weights, orthogonality) and the eigen-residual
///    `M q_i = λ_min q_i` against the *given* design's matrix;
/// 3. `d(x) ≤ λ_min + tol` over the design space — tensor grid with local
///    refinement for `k ≤ 6`, the exact dimension-reduced check for larger
///    `k`;
/// 4. `|d(x_i) - λ_min| ≤ tol` at every support point (evaluated exactly).
pub fn verify_design(
    spec: &ModelSpec,
    design: &Design,
    cert: &ExtremalCertificate,
    grid_per_axis: usize,
    tol: f64,
) -> Result<VerificationReport> {
    if cert.k != spec.k() || design.k() != spec.k() {
        return Err(Error::DimensionMismatch {
            expected: spec.k(),
            got: cert.k,
        });
    }
    if design.space() != cert.space {
        return Err(Error::InvalidArgument(format!(
            "certificate is for the {}, design lives on the {}",
            cert.space,
            design.space()
        )));
    }
    if grid_per_axis < 3 {
        return Err(Error::InvalidArgument(
            "grid density must be at least 3".into(),
        ));
    }

    let (lambda_exact, lambda_f64, multiplicity) = design_lambda_min(spec, design)?;

    let structure_ok = certificate_structure_ok(cert);
    let m = information_matrix(spec, design)?;
    let residual = match &lambda_exact {
        Some(lam) => residual_max_exact(m.entries(), lam, cert),
        None => {
            let mf = m.to_f64();
            let mut worst: f64 = 0.0;
            for q in &cert.vectors {
                let qf: Vec<f64> = q.iter().map(rat_to_f64).collect();
                let mq = crate::linalg::mat_vec_f64(&mf, &qf);
                for (a, b) in mq.iter().zip(&qf) {
                    worst = worst.max((a - lambda_f64 * b).abs());
                }
            }
            worst
        }
    };

    let (max_d, boundary_ok) = if spec.k() <= 6 {
        let (max_d, _arg) = grid_maximize(cert.space, spec.k(), grid_per_axis, |x| {
            extremal_closed_form(cert, x)
        });
        (max_d, true)
    } else {
        let reduced = reduced_domain_check(cert, 2000);
        (reduced.max_d, reduced.pass)
    };

    let mut support_err: f64 = 0.0;
    for p in design.points() {
        let d = evaluate_extremal_exact(cert, p)?;
        let diff = match &lambda_exact {
            Some(lam) => {
                let delta = &d - lam;
                if delta.is_zero() {
                    0.0
                } else {
                    delta.to_f64().abs()
                }
            }
            None => (d.to_f64() - lambda_f64).abs(),
        };
        support_err = support_err.max(diff);
    }

    let gap = max_d - lambda_f64;
    let pass = structure_ok && boundary_ok && residual <= tol && gap <= tol && support_err <= tol;
    Ok(VerificationReport {
        lambda_min: lambda_exact,
        lambda_min_f64: lambda_f64,
        multiplicity,
        max_d,
        gap,
        support_equality_max_err: support_err,
        pass,
    })
}

/// The dual matrix `Z = Σ w_i q_i q_iᵀ/‖q_i‖²` of the certificate; it is
/// positive semidefinite with unit trace, so `P_Z(x) = fᵀ(x) Z f(x)` belongs
/// to the dual Chebyshev class.
pub fn dual_matrix(cert: &ExtremalCertificate) -> Vec<Vec<Rat>> {
    let m = cert.spec().m();
    let mut z = vec![vec![Rat::zero(); m]; m];
    for ((q, w), n2) in cert.vectors.iter().zip(&cert.weights).zip(&cert.sq_norms) {
        if w.is_zero() {
            continue;
        }
        let scale = w / n2;
        for i in 0..m {
            if q[i].is_zero() {
                continue;
            }
            for j in 0..m {
                if q[j].is_zero() {
                    continue;
                }
                z[i][j] += &q[i] * &q[j] * &scale;
            }
        }
    }
    z
}

/// Primal value, dual value and their difference.
#[derive(Clone, Debug)]
pub struct DualGap {
    pub primal: Option<Exact>,
    pub primal_f64: f64,
    /// `max_x |P_Z(x)|` over grid, refinement, and the support points.
    pub dual: f64,
    pub gap: f64,
}

/// Evaluates the duality gap between `λ_min(M(ξ))` and
/// `max_x |fᵀ(x) Z f(x)|` for the certificate's dual matrix. The maximum is
/// searched on a tensor grid with local refinement and additionally
/// evaluated exactly at the design's support points (where the theorem says
/// it is attained).
pub fn dual_gap(
    spec: &ModelSpec,
    design: &Design,
    cert: &ExtremalCertificate,
    grid_per_axis: usize,
) -> Result<DualGap> {
    if design.space() != cert.space || design.k() != cert.k || spec.k() != cert.k {
        return Err(Error::InvalidArgument(
            "design, certificate and model must agree on space and dimension".into(),
        ));
    }
    let z = dual_matrix(cert);
    let zf: Vec<Vec<f64>> = z
        .iter()
        .map(|row| row.iter().map(rat_to_f64).collect())
        .collect();
    let eval = |x: &[f64]| {
        let f = regression_vector(spec, x).expect("dimension checked");
        quadratic_form(&zf, &f).abs()
    };
    let (mut dual, _arg) = grid_maximize(cert.space, spec.k(), grid_per_axis, eval);

    // exact values at support points
    for p in design.points() {
        let f = regression_vector(spec, p)?;
        let mut acc = Exact::zero();
        for i in 0..f.len() {
            for j in 0..f.len() {
                if !z[i][j].is_zero() {
                    acc = &acc + &(&f[i] * &f[j]).mul_rat(&z[i][j]);
                }
            }
        }
        dual = dual.max(acc.to_f64().abs());
    }

    let (primal, primal_f64, _) = design_lambda_min(spec, design)?;
    Ok(DualGap {
        primal,
        primal_f64,
        dual,
        gap: dual - primal_f64,
    })
}

/// Step sizes `s_t = s₀/√t` for the subgradient ascent.
#[derive(Clone, Copy, Debug)]
pub struct StepSchedule {
    pub s0: f64,
}

impl Default for StepSchedule {
    fn default() -> Self {
        StepSchedule { s0: 0.5 }
    }
}

impl StepSchedule {
    pub fn step(&self, t: usize) -> f64 {
        self.s0 / (t as f64).sqrt()
    }
}

/// Euclidean projection onto the probability simplex (sorting method).
pub fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut theta = 0.0;
    for (j, &uj) in u.iter().enumerate() {
        cumulative += uj;
        let candidate = (cumulative - 1.0) / (j + 1) as f64;
        if uj - candidate > 0.0 {
            theta = candidate;
        }
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

/// Trace of a projected-subgradient run.
#[derive(Clone, Debug)]
pub struct OptimizerRun {
    /// Weights attaining the best objective seen.
    pub weights: Vec<f64>,
    pub best_lambda: f64,
    /// Monotone envelope: running maximum of `λ_min` per iteration.
    pub trace: Vec<f64>,
}

/// Projected subgradient ascent on the concave map
/// `w ↦ λ_min(Σ w_i f(x_i)f(x_i)ᵀ)` over the weight simplex. A subgradient
/// at `w` is `g_i = (qᵀf(x_i))²` for any unit eigenvector `q` of the
/// minimal eigenvalue (the Jacobi vector of the smallest eigenvalue, lowest
/// index on ties). Serves as an optimizer oracle independent of the
/// closed-form constructions.
pub fn numeric_e_optimizer(
    spec: &ModelSpec,
    candidates: &[Vec<f64>],
    iterations: usize,
    schedule: StepSchedule,
) -> Result<OptimizerRun> {
    let n = candidates.len();
    let m = spec.m();
    if n == 0 {
        return Err(Error::InvalidArgument("no candidate points".into()));
    }
    let fs: Vec<Vec<f64>> = candidates
        .iter()
        .map(|x| regression_vector(spec, x))
        .collect::<Result<_>>()?;

    let info = |w: &[f64]| -> Vec<Vec<f64>> {
        let mut mat = vec![vec![0.0; m]; m];
        for (f, &wi) in fs.iter().zip(w) {
            if wi == 0.0 {
                continue;
            }
            for i in 0..m {
                let s = wi * f[i];
                for j in i..m {
                    mat[i][j] += s * f[j];
                }
            }
        }
        for i in 0..m {
            for j in 0..i {
                mat[i][j] = mat[j][i];
            }
        }
        mat
    };

    let uniform = vec![1.0 / n as f64; n];
    let gram = info(&uniform);
    let eig = eigen_sym(&gram, 1e-13)?;
    let scale = eig.values.last().copied().unwrap_or(0.0).max(1.0);
    if eig.values[0] <= 1e-12 * scale {
        return Err(Error::InvalidArgument(
            "candidate points do not span the model (singular information matrix)".into(),
        ));
    }

    let mut w = uniform;
    let mut best = f64::NEG_INFINITY;
    let mut best_w = w.clone();
    let mut trace = Vec::with_capacity(iterations);
    for t in 1..=iterations {
        let eig = eigen_sym(&info(&w), 1e-13)?;
        let lambda = eig.values[0];
        if lambda > best {
            best = lambda;
            best_w = w.clone();
        }
        trace.push(best);
        let q = &eig.vectors[0];
        let step = schedule.step(t);
        let moved: Vec<f64> = w
            .iter()
            .zip(&fs)
            .map(|(&wi, f)| {
                let proj = dot(q, f);
                wi + step * proj * proj
            })
            .collect();
        w = project_simplex(&moved);
    }
    Ok(OptimizerRun {
        weights: best_w,
        best_lambda: best,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ball::optimal_ball_design;
    use crate::cube::{expand_design, minimal_support_design};
    use crate::design::symmetric_info_matrix;

    #[test]
    fn cube_certificate_small_k() {
        let cert = cube_certificate(2).unwrap();
        assert_eq!(cert.s(), 3);
        assert_eq!(*cert.lambda(), rat(1, 5));
        // α_r = w_r/‖q_r‖²: α₀ = 1/(5k²), α_r = 4/(5k(k-r+1)(k-r))
        let alpha0 = &cert.weights()[0] / &cert.sq_norms()[0];
        assert_eq!(alpha0, rat(1, 20));
        let alpha1 = &cert.weights()[1] / &cert.sq_norms()[1];
        assert_eq!(alpha1, rat(4, 20)); // 4/(5k(k-r+1)(k-r)) at k=2, r=1
        let total: Rat = cert.weights().iter().sum();
        assert!(total.is_one());
    }

    #[test]
    fn ball_certificate_example_weights() {
        let cert = ball_certificate(2).unwrap();
        assert_eq!(cert.weights()[0], rat(11, 20));
        assert_eq!(cert.weights()[1], rat(3, 20));
        assert_eq!(cert.weights()[2], rat(6, 20));
        assert_eq!(cert.sq_norms()[0], rat_int(22));
        assert_eq!(cert.sq_norms()[1], rat_int(2));
        assert_eq!(cert.sq_norms()[2], rat_int(1));
        assert_eq!(*cert.lambda(), rat(1, 10));
    }

    #[test]
    fn certificates_are_exact_eigenbases() {
        for k in 1..=7 {
            for cert in [cube_certificate(k).unwrap(), ball_certificate(k).unwrap()] {
                assert_eq!(cert.s(), k * (k + 1) / 2);
                assert!(certificate_structure_ok(&cert), "structure at k={k}");
                let spec = cert.spec();
                let m = symmetric_info_matrix(&spec, &cert.optimal_moments());
                let lam = Exact::from_rat(cert.lambda().clone());
                let resid = residual_max_exact(m.entries(), &lam, &cert);
                assert_eq!(resid, 0.0, "residual at k={k} on the {}", cert.space());
            }
        }
    }

    #[test]
    fn stored_norms_match_the_vectors() {
        for k in 1..=10 {
            for cert in [cube_certificate(k).unwrap(), ball_certificate(k).unwrap()] {
                for (q, n2) in cert.vectors().iter().zip(cert.sq_norms()) {
                    let actual: Rat = q.iter().map(|c| c * c).sum();
                    assert_eq!(&actual, n2, "k={k} on the {}", cert.space());
                }
            }
        }
    }

    #[test]
    fn raw_sum_matches_closed_form() {
        for k in 1..=4 {
            for cert in [cube_certificate(k).unwrap(), ball_certificate(k).unwrap()] {
                for trial in 0..50 {
                    let x: Vec<f64> = (0..k)
                        .map(|i| {
                            let base = ((trial * 7 + i * 13) % 21) as f64 / 10.0 - 1.0;
                            // keep ball points inside
                            base / (k as f64).sqrt()
                        })
                        .collect();
                    let raw = evaluate_extremal(&cert, &x).unwrap();
                    let closed = extremal_closed_form(&cert, &x);
                    assert!(
                        (raw - closed).abs() < 1e-12,
                        "k={k} {} x={x:?}: {raw} vs {closed}",
                        cert.space()
                    );
                }
            }
        }
    }

    #[test]
    fn closed_form_examples() {
        let cert = cube_certificate(2).unwrap();
        // x = (1/2, 0): d = (1/5)(1 - 2·(1/4)(3/4)) = 1/8
        let d = extremal_closed_form(&cert, &[0.5, 0.0]);
        assert!((d - 0.125).abs() < 1e-14);
        let cert3 = cube_certificate(3).unwrap();
        let d = extremal_closed_form(&cert3, &[1.0, 1.0, 0.5]);
        assert!((d - 0.15).abs() < 1e-14);
        // barycenters sit at the bound
        for x in [[1.0, -1.0], [0.0, 1.0], [0.0, 0.0]] {
            let d = evaluate_extremal(&cert, &x).unwrap();
            assert!((d - 0.2).abs() < 1e-14);
        }
        // ball: center and sphere attain the bound
        let bcert = ball_certificate(2).unwrap();
        assert!((evaluate_extremal(&bcert, &[0.0, 0.0]).unwrap() - 0.1).abs() < 1e-14);
        assert!((evaluate_extremal(&bcert, &[1.0, 0.0]).unwrap() - 0.1).abs() < 1e-14);
        // x = (1/√2, 0): d = (1/10)(1 - 3(1/2)(1/2)) = 1/40
        let d = evaluate_extremal(&bcert, &[std::f64::consts::FRAC_1_SQRT_2, 0.0]).unwrap();
        assert!((d - 0.025).abs() < 1e-12);
    }

    #[test]
    fn exact_evaluation_at_surd_points() {
        let cert = ball_certificate(3).unwrap();
        let vertex: Vec<Exact> = (0..3).map(|_| Exact::inv_sqrt(1, 3)).collect();
        let d = evaluate_extremal_exact(&cert, &vertex).unwrap();
        assert_eq!(d, Exact::from_rat(rat(1, 17)));
        let closed = extremal_closed_form_exact(&cert, &vertex);
        assert_eq!(closed, Exact::from_rat(rat(1, 17)));
    }

    #[test]
    fn domain_violation_rejected() {
        let cert = ball_certificate(2).unwrap();
        assert!(evaluate_extremal(&cert, &[0.9, 0.9]).is_err());
        let cube = cube_certificate(2).unwrap();
        assert!(evaluate_extremal(&cube, &[1.2, 0.0]).is_err());
    }

    #[test]
    fn verify_passes_on_optima() {
        for k in 1..=3usize {
            let spec = ModelSpec::new(k).unwrap();
            let design = expand_design(&minimal_support_design(k).unwrap()).unwrap();
            let cert = cube_certificate(k).unwrap();
            let report = verify_design(&spec, &design, &cert, 41, 1e-10).unwrap();
            assert!(report.pass, "cube k={k}: {report:?}");
            assert_eq!(report.lambda_min, Some(Exact::from_rat(rat(1, 5))));
            assert_eq!(report.multiplicity, k * (k + 1) / 2);
            assert_eq!(report.support_equality_max_err, 0.0);

            let design = optimal_ball_design(k).unwrap();
            let cert = ball_certificate(k).unwrap();
            let report = verify_design(&spec, &design, &cert, 41, 1e-10).unwrap();
            assert!(report.pass, "ball k={k}: {report:?}");
        }
    }

    #[test]
    fn verify_fails_on_perturbed_weights() {
        let k = 2;
        let spec = ModelSpec::new(k).unwrap();
        // shift mass between barycenter classes: masses (0.3, 0.3, 0.4)
        let sets = vec![
            (0usize, rat(3, 10)),
            (1usize, rat(3, 10)),
            (2usize, rat(4, 10)),
        ];
        let mut points = Vec::new();
        let mut weights = Vec::new();
        for (r, mass) in sets {
            let pts = crate::cube::barycenter_points(k, r).unwrap();
            let per = mass / rat_int(pts.len() as i64);
            for p in pts {
                points.push(p);
                weights.push(per.clone());
            }
        }
        let design = Design::from_int_points(k, Space::Cube, &points, weights).unwrap();
        let cert = cube_certificate(k).unwrap();
        let report = verify_design(&spec, &design, &cert, 41, 1e-10).unwrap();
        assert!(!report.pass);
        assert!(report.lambda_min_f64 < 0.2);
        assert!(report.gap > 1e-3);
    }

    #[test]
    fn report_serializes_to_schema() {
        let spec = ModelSpec::new(2).unwrap();
        let design = expand_design(&minimal_support_design(2).unwrap()).unwrap();
        let cert = cube_certificate(2).unwrap();
        let report = verify_design(&spec, &design, &cert, 21, 1e-10).unwrap();
        let json = report.to_json_string();
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(value["lambda_min"], "1/5");
        assert_eq!(value["multiplicity"], 3);
        assert_eq!(value["pass"], true);
    }

    #[test]
    fn dual_matrix_has_unit_trace() {
        for k in 1..=5 {
            for cert in [cube_certificate(k).unwrap(), ball_certificate(k).unwrap()] {
                let z = dual_matrix(&cert);
                let trace: Rat = (0..z.len()).map(|i| z[i][i].clone()).sum();
                assert!(trace.is_one(), "trace(Z) = {trace} at k={k}");
            }
        }
    }

    #[test]
    fn dual_gap_tiny_on_optima() {
        let k = 2;
        let spec = ModelSpec::new(k).unwrap();
        let design = expand_design(&minimal_support_design(k).unwrap()).unwrap();
        let cert = cube_certificate(k).unwrap();
        let gap = dual_gap(&spec, &design, &cert, 31).unwrap();
        assert!(gap.gap.abs() <= 1e-10, "gap = {}", gap.gap);
        assert_eq!(gap.primal, Some(Exact::from_rat(rat(1, 5))));
    }

    #[test]
    fn reduced_check_passes_for_large_k() {
        for k in [7usize, 12, 24] {
            let cube = reduced_domain_check(&cube_certificate(k).unwrap(), 500);
            assert!(cube.pass);
            let ball = reduced_domain_check(&ball_certificate(k).unwrap(), 500);
            assert!(ball.pass);
        }
    }

    #[test]
    fn simplex_projection_properties() {
        let w = project_simplex(&[0.4, 0.3, 0.6]);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(w.iter().all(|&x| x >= 0.0));
        // already on the simplex: unchanged
        let w = project_simplex(&[0.25, 0.75]);
        assert!((w[0] - 0.25).abs() < 1e-12 && (w[1] - 0.75).abs() < 1e-12);
        // heavily negative coordinates get zeroed
        let w = project_simplex(&[5.0, -3.0, -4.0]);
        assert!((w[0] - 1.0).abs() < 1e-12);
        assert_eq!(&w[1..], &[0.0, 0.0]);
    }

    #[test]
    fn optimizer_reaches_known_optimum_k2() {
        let spec = ModelSpec::new(2).unwrap();
        let mut candidates = Vec::new();
        for r in 0..=2 {
            for p in crate::cube::barycenter_points(2, r).unwrap() {
                candidates.push(p.iter().map(|&c| c as f64).collect::<Vec<f64>>());
            }
        }
        let run = numeric_e_optimizer(&spec, &candidates, 5000, StepSchedule::default()).unwrap();
        assert!(
            run.best_lambda >= 0.2 - 1e-3,
            "optimizer reached only {}",
            run.best_lambda
        );
        // trace is the running maximum: nondecreasing
        assert!(run.trace.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn optimizer_rejects_deficient_candidates() {
        let spec = ModelSpec::new(2).unwrap();
        let candidates = vec![vec![0.0, 0.0], vec![1.0, 0.0]];
        assert!(numeric_e_optimizer(&spec, &candidates, 10, StepSchedule::default()).is_err());
    }
}

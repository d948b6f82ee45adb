//! Approximate designs (finitely supported probability measures), their
//! information matrices, and the moment algebra of symmetric designs.
//!
//! All designs are held exactly: weights are rationals and coordinates are
//! [`Exact`] scalars, so the moment triple `(a, b, c)` of a symmetric design
//! and everything derived from it come out as exact rationals. Floating
//! point enters only through explicit `to_f64` conversions.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::exact::{format_rat, parse_rat, rat_pow, rat_to_f64, Exact, Rat};
use crate::model::{monomial_exponents, monomial_value, regression_vector, ModelSpec};

/// The design space: unit cube `‖x‖_∞ ≤ 1` or unit ball `‖x‖₂ ≤ 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    Cube,
    Ball,
}

impl Space {
    pub fn as_str(&self) -> &'static str {
        match self {
            Space::Cube => "cube",
            Space::Ball => "ball",
        }
    }

    pub fn parse(s: &str) -> Result<Space> {
        match s {
            "cube" => Ok(Space::Cube),
            "ball" => Ok(Space::Ball),
            other => Err(Error::Parse(format!(
                "unknown design space `{other}` (expected `cube` or `ball`)"
            ))),
        }
    }

    /// Exact membership test.
    pub fn contains(&self, point: &[Exact]) -> bool {
        let one = Exact::one();
        match self {
            Space::Cube => point.iter().all(|x| x.abs() <= one),
            Space::Ball => {
                let mut norm2 = Exact::zero();
                for x in point {
                    norm2 = &norm2 + &(x * x);
                }
                norm2 <= one
            }
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A finitely supported probability measure on the design space.
///
/// Construction merges duplicate support points (summing their weights),
/// drops zero-weight atoms, and validates that the weights are nonnegative
/// rationals summing exactly to one and that every point lies in the space.
#[derive(Clone, Debug, PartialEq)]
pub struct Design {
    k: usize,
    space: Space,
    points: Vec<Vec<Exact>>,
    weights: Vec<Rat>,
}

impl Design {
    pub fn new(k: usize, space: Space, points: Vec<Vec<Exact>>, weights: Vec<Rat>) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("k must be at least 1".into()));
        }
        if points.len() != weights.len() {
            return Err(Error::DimensionMismatch {
                expected: points.len(),
                got: weights.len(),
            });
        }
        if points.is_empty() {
            return Err(Error::InvalidArgument(
                "a design needs support points".into(),
            ));
        }
        for (i, p) in points.iter().enumerate() {
            if p.len() != k {
                return Err(Error::DimensionMismatch {
                    expected: k,
                    got: p.len(),
                });
            }
            if !space.contains(p) {
                return Err(Error::InvalidArgument(format!(
                    "support point #{i} lies outside the {space}"
                )));
            }
        }
        // all surd coordinates must live in one quadratic extension, or
        // moment comparison and point ordering would be undecidable
        let mut radicand: Option<&Rat> = None;
        for p in &points {
            for c in p {
                if let Exact::Surd { d, .. } = c {
                    match radicand {
                        None => radicand = Some(d),
                        Some(existing) if existing == d => {}
                        Some(existing) => {
                            return Err(Error::InvalidArgument(format!(
                                "coordinates mix radicands √{existing} and √{d}"
                            )));
                        }
                    }
                }
            }
        }
        if weights.iter().any(|w| w.is_negative()) {
            return Err(Error::InvalidArgument("negative design weight".into()));
        }
        let total: Rat = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidArgument(format!(
                "design weights sum to {total}, expected 1"
            )));
        }

        // Merge duplicate atoms and drop zero-weight ones.
        let mut order: Vec<usize> = (0..points.len()).collect();
        order.sort_by(|&i, &j| points[i].cmp(&points[j]));
        let mut merged_points: Vec<Vec<Exact>> = Vec::with_capacity(points.len());
        let mut merged_weights: Vec<Rat> = Vec::with_capacity(points.len());
        let mut merges = 0usize;
        for idx in order {
            if let Some(last) = merged_points.last() {
                if *last == points[idx] {
                    let w = merged_weights.last_mut().unwrap();
                    *w += &weights[idx];
                    merges += 1;
                    continue;
                }
            }
            merged_points.push(points[idx].clone());
            merged_weights.push(weights[idx].clone());
        }
        if merges > 0 {
            log::warn!("merged {merges} duplicate support point(s) while building a design");
        }
        let keep: Vec<bool> = merged_weights.iter().map(|w| !w.is_zero()).collect();
        let points = merged_points
            .into_iter()
            .zip(&keep)
            .filter_map(|(p, &k)| k.then_some(p))
            .collect::<Vec<_>>();
        let weights = merged_weights
            .into_iter()
            .zip(&keep)
            .filter_map(|(w, &k)| k.then_some(w))
            .collect::<Vec<_>>();
        if points.is_empty() {
            return Err(Error::InvalidArgument("all design weights are zero".into()));
        }
        Ok(Design {
            k,
            space,
            points,
            weights,
        })
    }

    /// Convenience constructor from integer-coordinate points.
    pub fn from_int_points(
        k: usize,
        space: Space,
        points: &[Vec<i8>],
        weights: Vec<Rat>,
    ) -> Result<Self> {
        let pts = points
            .iter()
            .map(|p| p.iter().map(|&c| Exact::from_int(c as i64)).collect())
            .collect();
        Design::new(k, space, pts, weights)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn points(&self) -> &[Vec<Exact>] {
        &self.points
    }

    pub fn weights(&self) -> &[Rat] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points_f64(&self) -> Vec<Vec<f64>> {
        self.points
            .iter()
            .map(|p| p.iter().map(Exact::to_f64).collect())
            .collect()
    }

    pub fn weights_f64(&self) -> Vec<f64> {
        self.weights.iter().map(rat_to_f64).collect()
    }

    /// The moment `∫ x^γ dξ`.
    pub fn moment(&self, gamma: &[u8]) -> Exact {
        let mut acc = Exact::zero();
        for (p, w) in self.points.iter().zip(&self.weights) {
            acc = &acc + &monomial_value(p, gamma).mul_rat(w);
        }
        acc
    }

    pub fn to_json_string(&self) -> Result<String> {
        let file: DesignFile = self.try_into()?;
        serde_json::to_string_pretty(&file)
            .map_err(|e| Error::Parse(format!("serialization failed: {e}")))
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: DesignFile = serde_json::from_str(s)
            .map_err(|e| Error::Parse(format!("invalid design JSON: {e}")))?;
        file.try_into()
    }
}

/// On-disk design representation: rationals as `p/q` strings, ball vertex
/// coordinates as `{"sign": ±1, "inv_sqrt_k": true}` objects with a float
/// rendering alongside.
#[derive(Serialize, Deserialize)]
struct DesignFile {
    k: usize,
    space: Space,
    points: Vec<Vec<CoordRepr>>,
    weights: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CoordRepr {
    Rational(String),
    InvSqrtK {
        sign: i8,
        inv_sqrt_k: bool,
        #[serde(skip_serializing_if = "Option::is_none")]
        float: Option<f64>,
    },
}

impl TryFrom<&Design> for DesignFile {
    type Error = Error;

    fn try_from(d: &Design) -> Result<DesignFile> {
        let inv_k = Rat::new(1.into(), (d.k as i64).into());
        let points = d
            .points
            .iter()
            .map(|p| {
                p.iter()
                    .map(|c| match c {
                        Exact::Rational(r) => Ok(CoordRepr::Rational(format_rat(r))),
                        Exact::Surd { a, b, d: rad } => {
                            let sign_one = b.is_one() || (-b).is_one();
                            if a.is_zero() && sign_one && *rad == inv_k {
                                Ok(CoordRepr::InvSqrtK {
                                    sign: if b.is_one() { 1 } else { -1 },
                                    inv_sqrt_k: true,
                                    float: Some(c.to_f64()),
                                })
                            } else {
                                Err(Error::Unsupported(format!(
                                    "coordinate {c} has no JSON representation"
                                )))
                            }
                        }
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DesignFile {
            k: d.k,
            space: d.space,
            points,
            weights: d.weights.iter().map(format_rat).collect(),
        })
    }
}

impl TryFrom<DesignFile> for Design {
    type Error = Error;

    fn try_from(f: DesignFile) -> Result<Design> {
        let points = f
            .points
            .iter()
            .map(|p| {
                p.iter()
                    .map(|c| match c {
                        CoordRepr::Rational(s) => Ok(Exact::Rational(parse_rat(s)?)),
                        CoordRepr::InvSqrtK {
                            sign, inv_sqrt_k, ..
                        } => {
                            if !inv_sqrt_k || (*sign != 1 && *sign != -1) {
                                return Err(Error::Parse(
                                    "coordinate object must have sign ±1 and inv_sqrt_k=true"
                                        .into(),
                                ));
                            }
                            Ok(Exact::inv_sqrt(*sign, f.k))
                        }
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let weights = f
            .weights
            .iter()
            .map(|w| parse_rat(w))
            .collect::<Result<Vec<_>>>()?;
        Design::new(f.k, f.space, points, weights)
    }
}

/// The moment triple of a symmetric design: `a = ∫x₁²`, `b = ∫x₁²x₂²`,
/// `c = ∫x₁⁴`.
///
/// For `k = 1` there is no `b` moment; the convention throughout the crate
/// is `b = 0` there, which is inert because every use of `b` carries a
/// multiplicity or coefficient that vanishes at `k = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricMoments {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
}

impl SymmetricMoments {
    pub fn new(a: Rat, b: Rat, c: Rat) -> Self {
        SymmetricMoments { a, b, c }
    }
}

/// The information matrix `M(ξ) = Σ ω_i f(x_i) f(x_i)ᵀ`.
#[derive(Clone, Debug, PartialEq)]
pub struct InfoMatrix {
    spec: ModelSpec,
    entries: Vec<Vec<Exact>>,
}

impl InfoMatrix {
    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    pub fn entries(&self) -> &[Vec<Exact>] {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        self.entries
            .iter()
            .map(|row| row.iter().map(Exact::to_f64).collect())
            .collect()
    }

    /// Entries as rationals; errors when any entry is irrational.
    pub fn to_rational(&self) -> Result<Vec<Vec<Rat>>> {
        self.entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| {
                        e.as_rational().cloned().ok_or_else(|| {
                            Error::InvalidArgument(format!("irrational matrix entry {e}"))
                        })
                    })
                    .collect()
            })
            .collect()
    }

    pub fn trace(&self) -> Exact {
        let mut acc = Exact::zero();
        for i in 0..self.dim() {
            acc = &acc + &self.entries[i][i];
        }
        acc
    }
}

/// `M(ξ)` by direct weighted summation of outer products; exact.
pub fn information_matrix(spec: &ModelSpec, design: &Design) -> Result<InfoMatrix> {
    if design.k() != spec.k() {
        return Err(Error::DimensionMismatch {
            expected: spec.k(),
            got: design.k(),
        });
    }
    let m = spec.m();
    let mut entries = vec![vec![Exact::zero(); m]; m];
    for (p, w) in design.points().iter().zip(design.weights()) {
        let f = regression_vector(spec, p)?;
        for i in 0..m {
            for j in i..m {
                let term = (&f[i] * &f[j]).mul_rat(w);
                entries[i][j] = &entries[i][j] + &term;
            }
        }
    }
    for i in 0..m {
        for j in 0..i {
            entries[i][j] = entries[j][i].clone();
        }
    }
    Ok(InfoMatrix {
        spec: *spec,
        entries,
    })
}

/// The structured information matrix of a symmetric design: block form
/// `[1, a·1ᵀ; a·1, H(c;b)]` ⊕ `a·I_k` ⊕ `b·I_{k(k-1)/2}` with
/// `H(c;b) = (c-b)I + b·11ᵀ`. For `k = 1` the cross block is empty.
pub fn symmetric_info_matrix(spec: &ModelSpec, mom: &SymmetricMoments) -> InfoMatrix {
    let k = spec.k();
    let m = spec.m();
    let mut e = vec![vec![Exact::zero(); m]; m];
    e[0][0] = Exact::one();
    for i in 1..=k {
        e[0][i] = Exact::from_rat(mom.a.clone());
        e[i][0] = Exact::from_rat(mom.a.clone());
        for j in 1..=k {
            e[i][j] = Exact::from_rat(if i == j { mom.c.clone() } else { mom.b.clone() });
        }
    }
    for i in (k + 1)..=(2 * k) {
        e[i][i] = Exact::from_rat(mom.a.clone());
    }
    for i in (2 * k + 1)..m {
        e[i][i] = Exact::from_rat(mom.b.clone());
    }
    InfoMatrix {
        spec: *spec,
        entries: e,
    }
}

/// Report of the symmetry test.
#[derive(Clone, Debug)]
pub struct SymmetryReport {
    pub symmetric: bool,
    pub violation: Option<String>,
}

fn monomial_str(gamma: &[u8]) -> String {
    let parts: Vec<String> = gamma
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| {
            if e == 1 {
                format!("x{}", i + 1)
            } else {
                format!("x{}^{}", i + 1, e)
            }
        })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// Checks whether all moments appearing in `M(ξ)` (products `x^α x^β` of two
/// model monomials, total degree ≤ 4) are permutation-invariant and whether
/// every moment with an odd exponent vanishes. The check enumerates the
/// complete list of such monomials rather than sampling. With `tol = 0` the
/// comparison is exact.
pub fn is_symmetric(spec: &ModelSpec, design: &Design, tol: f64) -> SymmetryReport {
    let exps = monomial_exponents(spec);
    let mut gammas: BTreeSet<Vec<u8>> = BTreeSet::new();
    for i in 0..exps.len() {
        for j in i..exps.len() {
            let gamma: Vec<u8> = exps[i].iter().zip(&exps[j]).map(|(&a, &b)| a + b).collect();
            gammas.insert(gamma);
        }
    }

    let near_zero = |v: &Exact| v.is_zero() || v.to_f64().abs() <= tol;

    // moments grouped by the multiset of exponents
    let mut groups: std::collections::BTreeMap<Vec<u8>, (Vec<u8>, Exact)> =
        std::collections::BTreeMap::new();
    for gamma in &gammas {
        let moment = design.moment(gamma);
        if gamma.iter().any(|&e| e % 2 == 1) {
            if !near_zero(&moment) {
                return SymmetryReport {
                    symmetric: false,
                    violation: Some(format!(
                        "odd moment ∫ {} dξ = {} (must vanish)",
                        monomial_str(gamma),
                        moment
                    )),
                };
            }
            continue;
        }
        let mut key = gamma.clone();
        key.sort_unstable_by(|x, y| y.cmp(x));
        match groups.get(&key) {
            None => {
                groups.insert(key, (gamma.clone(), moment));
            }
            Some((ref_gamma, ref_moment)) => {
                let diff = &moment - ref_moment;
                if !near_zero(&diff) {
                    return SymmetryReport {
                        symmetric: false,
                        violation: Some(format!(
                            "moment ∫ {} dξ = {} differs from ∫ {} dξ = {}",
                            monomial_str(gamma),
                            moment,
                            monomial_str(ref_gamma),
                            ref_moment
                        )),
                    };
                }
            }
        }
    }
    SymmetryReport {
        symmetric: true,
        violation: None,
    }
}

/// Extracts `(a, b, c)` from a symmetric design by weighted summation.
/// Errors (naming the offending moment) when the design is not symmetric.
pub fn moments_of(spec: &ModelSpec, design: &Design) -> Result<SymmetricMoments> {
    let report = is_symmetric(spec, design, 0.0);
    if !report.symmetric {
        return Err(Error::SymmetryViolation(
            report.violation.unwrap_or_default(),
        ));
    }
    let k = spec.k();
    let rational = |e: Exact, what: &str| {
        e.as_rational()
            .cloned()
            .ok_or_else(|| Error::InvalidArgument(format!("moment {what} is not rational")))
    };
    let mut g_a = vec![0u8; k];
    g_a[0] = 2;
    let a = rational(design.moment(&g_a), "a")?;
    let mut g_c = vec![0u8; k];
    g_c[0] = 4;
    let c = rational(design.moment(&g_c), "c")?;
    let b = if k >= 2 {
        let mut g_b = vec![0u8; k];
        g_b[0] = 2;
        g_b[1] = 2;
        rational(design.moment(&g_b), "b")?
    } else {
        Rat::zero()
    };
    Ok(SymmetricMoments { a, b, c })
}

/// Closed-form determinant of the symmetric information matrix:
/// `aᵏ · b^{k(k-1)/2} · (c-b)^{k-1} · [c + (k-1)b - ka²]`,
/// which specializes to `a(c - a²)` for `k = 1`.
pub fn determinant_symmetric(spec: &ModelSpec, mom: &SymmetricMoments) -> Rat {
    let k = spec.k();
    let ki = k as i64;
    let tail = &mom.c + &mom.b * Rat::from_integer((ki - 1).into())
        - Rat::from_integer(ki.into()) * &mom.a * &mom.a;
    rat_pow(&mom.a, k)
        * rat_pow(&mom.b, k * (k - 1) / 2)
        * rat_pow(&(&mom.c - &mom.b), k - 1)
        * tail
}

/// The nonsingularity inequalities for symmetric moments:
/// `1 ≥ a ≥ c > b > 0` and `c + b(k-1) > ka²`.
pub fn check_moment_inequalities(mom: &SymmetricMoments, k: usize) -> bool {
    let one = Rat::one();
    let ki = k as i64;
    one >= mom.a
        && mom.a >= mom.c
        && mom.c > mom.b
        && mom.b > Rat::zero()
        && &mom.c + &mom.b * Rat::from_integer((ki - 1).into())
            > Rat::from_integer(ki.into()) * &mom.a * &mom.a
}

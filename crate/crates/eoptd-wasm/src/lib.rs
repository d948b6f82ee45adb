//! Wasm bindings for the browser demo. Three interactive operations:
//!
//! 1. [`design_summary`] — construct the E-optimal design for a chosen
//!    space and dimension and report masses, support counts and the exact
//!    minimum eigenvalue;
//! 2. [`extremal_surface`] — sample the equivalence-theorem polynomial
//!    `d(x, ξ*)` on a grid over the two-dimensional design space (the
//!    surface whose maximum certifies optimality);
//! 3. [`rotatable_curve`] — the efficiency of the best rotatable design
//!    against the global optimum as a function of the dimension.
//!
//! Every function returns a JSON string (or a flat `Float64Array`), so the
//! page needs no framework. Errors come back as `{"error": "..."}`.

use wasm_bindgen::prelude::*;

use eoptd::ball::{optimal_ball_design, optimal_ball_masses, rotatable_gap};
use eoptd::certify::{ball_certificate, cube_certificate, extremal_closed_form};
use eoptd::cube::{expand_design, minimal_support_design};
use eoptd::design::{moments_of, Design, Space};
use eoptd::exact::rat_to_f64;
use eoptd::model::ModelSpec;
use eoptd::spectrum::lambda_min_symmetric;

fn err_json(msg: impl std::fmt::Display) -> String {
    serde_json::json!({ "error": msg.to_string() }).to_string()
}

/// Masses, support structure and the exact optimal value for the chosen
/// space and dimension. Works from the set masses (never expanding the
/// design, whose support grows exponentially in `k`); for `k = 2` the
/// support points are included with their weights for plotting.
#[wasm_bindgen]
pub fn design_summary(space: &str, k: u32) -> String {
    let k = k as usize;
    let space = match Space::parse(space) {
        Ok(s) => s,
        Err(e) => return err_json(e),
    };
    let summary = (|| -> Result<serde_json::Value, eoptd::Error> {
        let spec = ModelSpec::new(k)?;
        let set_json = |name: String, n: u128, mass: &eoptd::Rat| {
            serde_json::json!({
                "set": name,
                "points": n as u64,
                "mass": mass.to_string(),
                "mass_float": rat_to_f64(mass),
            })
        };
        let (sets, mom, support): (Vec<serde_json::Value>, _, u64) = match space {
            Space::Cube => {
                let sol = minimal_support_design(k)?;
                let sets = sol
                    .positive_sets()
                    .iter()
                    .map(|(r, m)| {
                        let n = eoptd::cube::BarycenterClass::new(k, *r)
                            .unwrap()
                            .cardinality();
                        set_json(format!("E_{r}"), n, m)
                    })
                    .collect();
                let support = sol.support_count() as u64;
                (sets, sol.moments(), support)
            }
            Space::Ball => {
                let (m0, m1, mk) = optimal_ball_masses(k);
                let sets = vec![
                    set_json("F_0".into(), 1u128 << k, &m0),
                    set_json(format!("F_{}", k - 1), 2 * k as u128, &m1),
                    set_json(format!("F_{k}"), 1, &mk),
                ];
                let support = if k == 1 {
                    3
                } else {
                    (1u64 << k) + 2 * k as u64 + 1
                };
                (sets, eoptd::ball::ball_moments(k, &m0, &m1)?, support)
            }
        };
        let (lambda, multiplicity) = lambda_min_symmetric(&mom, k);
        let mut value = serde_json::json!({
            "space": space.as_str(),
            "k": k,
            "m": spec.m(),
            "sets": sets,
            "support_points": support,
            "lambda_min": lambda.to_string(),
            "lambda_min_float": lambda.to_f64(),
            "multiplicity": multiplicity,
        });
        if k == 2 {
            let design: Design = match space {
                Space::Cube => expand_design(&minimal_support_design(k)?)?,
                Space::Ball => optimal_ball_design(k)?,
            };
            let check = moments_of(&spec, &design)?;
            debug_assert_eq!(check, mom);
            let pts: Vec<serde_json::Value> = design
                .points_f64()
                .iter()
                .zip(design.weights_f64())
                .map(|(p, w)| serde_json::json!({ "x": p[0], "y": p[1], "w": w }))
                .collect();
            value["points"] = serde_json::Value::Array(pts);
        }
        Ok(value)
    })();
    match summary {
        Ok(v) => v.to_string(),
        Err(e) => err_json(e),
    }
}

/// The extremal polynomial `d(x, ξ*)` for `k = 2`, sampled on an `n × n`
/// grid over `[-1, 1]²` (row-major; `NaN` outside the ball). Its maximum
/// over the space equals `λ_min`, attained exactly on the support.
#[wasm_bindgen]
pub fn extremal_surface(space: &str, n: u32) -> Vec<f64> {
    let n = (n as usize).max(2);
    let Ok(space) = Space::parse(space) else {
        return vec![];
    };
    let cert = match space {
        Space::Cube => cube_certificate(2),
        Space::Ball => ball_certificate(2),
    };
    let Ok(cert) = cert else { return vec![] };
    let mut out = Vec::with_capacity(n * n);
    for row in 0..n {
        // row 0 at y = +1 so the canvas renders with y upward
        let y = 1.0 - 2.0 * row as f64 / (n - 1) as f64;
        for col in 0..n {
            let x = -1.0 + 2.0 * col as f64 / (n - 1) as f64;
            let inside = match space {
                Space::Cube => true,
                Space::Ball => x * x + y * y <= 1.0 + 1e-12,
            };
            out.push(if inside {
                extremal_closed_form(&cert, &[x, y])
            } else {
                f64::NAN
            });
        }
    }
    out
}

/// `λ_min` of the optimal design as a float, for scaling the surface plot.
#[wasm_bindgen]
pub fn lambda_min_value(space: &str, k: u32) -> f64 {
    let k = k as usize;
    match Space::parse(space) {
        Ok(Space::Cube) => 0.2,
        Ok(Space::Ball) => {
            let kf = k as f64;
            1.0 / (kf * kf + 2.0 * kf + 2.0)
        }
        Err(_) => f64::NAN,
    }
}

/// Efficiency curve of the best rotatable design on the unit ball:
/// arrays of `k`, `λ_rot`, `λ_opt` and their ratio for `k = 2..=k_max`.
#[wasm_bindgen]
pub fn rotatable_curve(k_max: u32) -> String {
    let k_max = (k_max as usize).clamp(2, 200);
    let mut ks = Vec::new();
    let mut rot = Vec::new();
    let mut opt = Vec::new();
    let mut ratio = Vec::new();
    for k in 2..=k_max {
        match rotatable_gap(k) {
            Ok(g) => {
                ks.push(k as f64);
                rot.push(rat_to_f64(&g.lambda_rotatable));
                opt.push(rat_to_f64(&g.lambda_optimal));
                ratio.push(rat_to_f64(&g.ratio));
            }
            Err(e) => return err_json(e),
        }
    }
    serde_json::json!({ "k": ks, "lambda_rotatable": rot, "lambda_optimal": opt, "ratio": ratio })
        .to_string()
}

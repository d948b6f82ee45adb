//! `eoptd` — construct E-optimal designs for the second-order response
//! surface model on the cube or ball, verify optimality certificates,
//! reproduce the minimal-support tables, and compare against the best
//! rotatable designs.

use std::io::Write;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use eoptd::ball::{
    is_rotatable, optimal_ball_design, optimal_ball_lambda, optimal_ball_masses, rotatable_gap,
    rotatable_optimal,
};
use eoptd::certify::{ball_certificate, cube_certificate, verify_design};
use eoptd::cube::{
    conjecture_design, diophantine_pairs, enumerate_feasible_triples, expand_design,
    minimal_support_design, solve_pair, solve_triple, TripleSolution,
};
use eoptd::design::{moments_of, Design, Space};
use eoptd::exact::{format_rat, parse_rat, rat_to_f64, Exact, Rat};
use eoptd::model::ModelSpec;
use eoptd::spectrum::{lambda_min_symmetric, symmetric_spectrum};

#[derive(Parser)]
#[command(
    name = "eoptd",
    version,
    about = "E-optimal designs for second-order response surface models"
)]
struct Cli {
    /// Random seed for stochastic subroutines (current commands are fully
    /// deterministic; accepted for reproducible scripting).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
    /// Render numbers as floats instead of exact rationals.
    #[arg(long)]
    float: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Construct an E-optimal design on the given space.
    Design {
        /// Design space: `cube` or `ball`.
        space: String,
        /// Number of predictors.
        #[arg(long)]
        k: usize,
        /// Cube only: barycenter depths `r1,r2,r3` (or `s,t` for a two-set
        /// design) instead of the minimal-support choice.
        #[arg(long)]
        triple: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Verify a design file against the matching optimality certificate.
    Verify {
        /// Design JSON file (bare design schema or `design --format json`
        /// output).
        file: std::path::PathBuf,
        /// Grid points per axis (0 = automatic: 101 for k ≤ 3, 21 for
        /// k ≤ 6; larger k uses the exact reduced check).
        #[arg(long, default_value_t = 0)]
        grid: usize,
        /// Verification tolerance.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Reproduce the design tables as CSV.
    Table {
        /// Which table: `table1` (minimal-support designs), `table2`
        /// (structured designs), or `diophantine` (two-set solutions).
        which: String,
        /// Range of dimensions, e.g. `1..24` or `5`. Capped by EOPTD_KMAX
        /// (default 24).
        #[arg(long)]
        k: Option<String>,
        /// Write to this file instead of stdout.
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
    /// Compare the E-optimal design on the unit ball against the best
    /// rotatable design.
    CompareRotatable {
        #[arg(long)]
        k: usize,
        /// Sphere radius of the rotatable design (rational, e.g. `1` or
        /// `3/2`).
        #[arg(long, default_value = "1")]
        r: String,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Design {
            space,
            k,
            triple,
            output,
        } => cmd_design(&space, k, triple.as_deref(), &output),
        Command::Verify {
            file,
            grid,
            tol,
            output,
        } => cmd_verify(&file, grid, tol, &output),
        Command::Table { which, k, out } => cmd_table(&which, k.as_deref(), out.as_deref()),
        Command::CompareRotatable { k, r, output } => cmd_compare_rotatable(k, &r, &output),
    }
}

fn emit(output: &OutputArgs, content: &str) -> Result<()> {
    match &output.out {
        Some(path) => std::fs::write(path, content)
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(content.as_bytes())?;
            if !content.ends_with('\n') {
                stdout.write_all(b"\n")?;
            }
        }
    }
    Ok(())
}

fn emit_table(out: Option<&std::path::Path>, content: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, content)
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => print!("{content}"),
    }
    Ok(())
}

fn render_rat(r: &Rat, float: bool) -> String {
    if float {
        format!("{}", rat_to_f64(r))
    } else {
        format_rat(r)
    }
}

fn render_exact(e: &Exact, float: bool) -> String {
    match (e, float) {
        (_, true) => format!("{}", e.to_f64()),
        (Exact::Rational(r), false) => format_rat(r),
        (other, false) => other.to_string(),
    }
}

fn parse_depths(s: &str) -> Result<Vec<usize>> {
    let depths: Vec<usize> = s
        .split(',')
        .map(|t| t.trim().parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| anyhow!("--triple expects comma-separated depths, e.g. 0,3,5"))?;
    if depths.len() != 2 && depths.len() != 3 {
        bail!("--triple expects two or three depths");
    }
    Ok(depths)
}

fn cube_solution(k: usize, triple: Option<&str>) -> Result<TripleSolution> {
    match triple {
        None => Ok(minimal_support_design(k)?),
        Some(spec) => {
            let depths = parse_depths(spec)?;
            let solved = if depths.len() == 2 {
                solve_pair(k, depths[0], depths[1])
            } else {
                solve_triple(k, depths[0], depths[1], depths[2])
            };
            solved.map_err(|err| {
                let feasible: Vec<String> = enumerate_feasible_triples(k)
                    .iter()
                    .map(|s| {
                        format!(
                            "({}) with masses {}",
                            s.depths()
                                .iter()
                                .map(|d| d.to_string())
                                .collect::<Vec<_>>()
                                .join(","),
                            s.masses_string()
                        )
                    })
                    .collect();
                anyhow!(
                    "{err}\nfeasible depth sets for k={k}:\n  {}",
                    feasible.join("\n  ")
                )
            })
        }
    }
}

fn spectrum_json(mom: &eoptd::design::SymmetricMoments, k: usize) -> serde_json::Value {
    let spectrum = symmetric_spectrum(mom, k);
    serde_json::Value::Array(
        spectrum
            .values()
            .iter()
            .map(|(v, mult)| {
                serde_json::json!({
                    "value": render_exact(v, false),
                    "value_float": v.to_f64(),
                    "multiplicity": mult,
                })
            })
            .collect(),
    )
}

fn design_json(design: &Design, mom: &eoptd::design::SymmetricMoments) -> Result<String> {
    let k = design.k();
    let (lambda, multiplicity) = lambda_min_symmetric(mom, k);
    let design_value: serde_json::Value = serde_json::from_str(&design.to_json_string()?)?;
    let combined = serde_json::json!({
        "design": design_value,
        "spectrum": spectrum_json(mom, k),
        "lambda_min": render_exact(&lambda, false),
        "multiplicity": multiplicity,
        "support_points": design.len(),
    });
    Ok(serde_json::to_string_pretty(&combined)?)
}

fn design_csv(design: &Design, float: bool) -> String {
    let k = design.k();
    let mut csv = String::new();
    for i in 1..=k {
        csv.push_str(&format!("x{i},"));
    }
    csv.push_str("weight\n");
    for (p, w) in design.points().iter().zip(design.weights()) {
        for c in p {
            csv.push_str(&render_exact(c, float));
            csv.push(',');
        }
        csv.push_str(&render_rat(w, float));
        csv.push('\n');
    }
    csv
}

/// Support-point export cap: the ball support has 2^k + 2k + 1 points.
const BALL_EXPORT_KMAX: usize = 16;

fn cmd_design(
    space: &str,
    k: usize,
    triple: Option<&str>,
    output: &OutputArgs,
) -> Result<ExitCode> {
    let space = Space::parse(space)?;
    ModelSpec::new(k)?;
    // moments and set masses come from the exact mass formulas; the design
    // is expanded to explicit points only for the per-point export formats
    let (mom, support, set_lines, expand): (_, u128, _, Box<dyn Fn() -> Result<Design>>) =
        match space {
            Space::Cube => {
                let sol = cube_solution(k, triple)?;
                let mom = sol.moments();
                let lines: Vec<String> = sol
                    .positive_sets()
                    .iter()
                    .map(|(r, m)| {
                        format!(
                            "  E_{r}: mass {} over {} points",
                            render_rat(m, output.float),
                            eoptd::cube::BarycenterClass::new(k, *r)
                                .unwrap()
                                .cardinality()
                        )
                    })
                    .collect();
                let support = sol.support_count();
                (
                    mom,
                    support,
                    lines,
                    Box::new(move || Ok(expand_design(&sol)?)),
                )
            }
            Space::Ball => {
                if triple.is_some() {
                    bail!("--triple applies to the cube only");
                }
                let (m0, m1, mk) = optimal_ball_masses(k);
                let mom = eoptd::ball::ball_moments(k, &m0, &m1)?;
                let lines = vec![
                    format!(
                        "  F_0 (vertices, {} points): mass {}",
                        1u128 << k,
                        render_rat(&m0, output.float)
                    ),
                    format!(
                        "  F_{} (face centers, {} points): mass {}",
                        k - 1,
                        2 * k,
                        render_rat(&m1, output.float)
                    ),
                    format!("  F_{k} (center): mass {}", render_rat(&mk, output.float)),
                ];
                let support = if k == 1 {
                    3
                } else {
                    (1u128 << k) + 2 * k as u128 + 1
                };
                let expand = Box::new(move || {
                    if k > BALL_EXPORT_KMAX {
                        bail!(
                            "per-point export of the ball design needs 2^{k} vertices; \
                             use --format text for k > {BALL_EXPORT_KMAX}"
                        );
                    }
                    Ok(optimal_ball_design(k)?)
                });
                (mom, support, lines, expand)
            }
        };
    let (lambda, multiplicity) = lambda_min_symmetric(&mom, k);

    match output.format {
        Format::Json => emit(output, &design_json(&expand()?, &mom)?)?,
        Format::Csv => emit(output, &design_csv(&expand()?, output.float))?,
        Format::Text => {
            let mut text = String::new();
            text.push_str(&format!("space: {space}\nk: {k}\n"));
            text.push_str("set masses:\n");
            for line in &set_lines {
                text.push_str(line);
                text.push('\n');
            }
            text.push_str(&format!("support points: {support}\n"));
            text.push_str(&format!(
                "moments: a = {}, b = {}, c = {}\n",
                render_rat(&mom.a, output.float),
                render_rat(&mom.b, output.float),
                render_rat(&mom.c, output.float)
            ));
            text.push_str(&format!(
                "lambda_min: {} (multiplicity {multiplicity})\n",
                render_exact(&lambda, output.float)
            ));
            emit(output, &text)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn load_design(path: &std::path::Path) -> Result<Design> {
    let raw =
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    // accept both the bare design schema and `design --format json` output
    let value: serde_json::Value = serde_json::from_str(&raw).context("invalid JSON")?;
    let design_value = value.get("design").cloned().unwrap_or(value);
    Ok(Design::from_json_str(&serde_json::to_string(
        &design_value,
    )?)?)
}

fn cmd_verify(
    path: &std::path::Path,
    grid: usize,
    tol: f64,
    output: &OutputArgs,
) -> Result<ExitCode> {
    if tol <= 0.0 {
        bail!("--tol must be positive");
    }
    let design = load_design(path)?;
    let k = design.k();
    let spec = ModelSpec::new(k)?;
    let cert = match design.space() {
        Space::Cube => cube_certificate(k)?,
        Space::Ball => ball_certificate(k)?,
    };
    let grid = if grid == 0 {
        if k <= 3 {
            101
        } else {
            21
        }
    } else {
        grid
    };
    let report = verify_design(&spec, &design, &cert, grid, tol)?;
    match output.format {
        Format::Text => {
            let lam = match &report.lambda_min {
                Some(e) => render_exact(e, output.float),
                None => format!("{}", report.lambda_min_f64),
            };
            let text = format!(
                "space: {}\nk: {k}\nlambda_min: {lam} (multiplicity {})\nmax d over space: {}\ngap: {}\nsupport equality max error: {}\nverdict: {}\n",
                design.space(),
                report.multiplicity,
                report.max_d,
                report.gap,
                report.support_equality_max_err,
                if report.pass { "PASS" } else { "FAIL" }
            );
            emit(output, &text)?;
        }
        _ => emit(output, &report.to_json_string())?,
    }
    Ok(if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn kmax() -> Result<usize> {
    match std::env::var("EOPTD_KMAX") {
        Ok(v) => {
            let k: usize = v
                .parse()
                .map_err(|_| anyhow!("EOPTD_KMAX must be a positive integer, got `{v}`"))?;
            // support counts are u128; C(k, k/2)·2^k stays in range up to here
            if k > 64 {
                bail!("EOPTD_KMAX cannot exceed 64");
            }
            Ok(k)
        }
        Err(_) => Ok(24),
    }
}

fn parse_range(s: Option<&str>, default_lo: usize, cap: usize) -> Result<(usize, usize)> {
    let (lo, hi) = match s {
        None => (default_lo, cap),
        Some(text) => match text.split_once("..") {
            Some((a, b)) => (
                a.trim().parse().context("invalid range start")?,
                b.trim().parse().context("invalid range end")?,
            ),
            None => {
                let k: usize = text.trim().parse().context("invalid dimension")?;
                (k, k)
            }
        },
    };
    if lo < 1 || hi < lo {
        bail!("invalid dimension range {lo}..{hi}");
    }
    if hi > cap {
        bail!("requested k up to {hi} exceeds the cap {cap} (override with EOPTD_KMAX)");
    }
    Ok((lo, hi))
}

fn table_row(sol: &TripleSolution, k: usize) -> String {
    let sets = sol.positive_sets();
    let mut depths: Vec<String> = sets.iter().map(|(r, _)| r.to_string()).collect();
    let mut masses: Vec<String> = sets.iter().map(|(_, m)| format_rat(m)).collect();
    while depths.len() < 3 {
        depths.push(String::new());
        masses.push(String::new());
    }
    format!(
        "{k},{},{},{},1/5\n",
        depths.join(","),
        masses.join(","),
        sol.support_count()
    )
}

fn cmd_table(which: &str, range: Option<&str>, out: Option<&std::path::Path>) -> Result<ExitCode> {
    let cap = kmax()?;
    match which {
        "table1" => {
            let (lo, hi) = parse_range(range, 1, cap)?;
            let mut csv = String::from("k,r1,r2,r3,xi1,xi2,xi3,N,lambda_min\n");
            for k in lo..=hi {
                csv.push_str(&table_row(&minimal_support_design(k)?, k));
            }
            emit_table(out, &csv)?;
        }
        "table2" => {
            let (lo, hi) = parse_range(range, 1, cap)?;
            if lo == 3 && hi == 3 {
                bail!("the structured design is undefined for k = 3");
            }
            let mut csv = String::from("k,r1,r2,r3,xi1,xi2,xi3,N,lambda_min\n");
            for k in lo..=hi {
                if k == 3 {
                    eprintln!("note: skipping k=3 (structured design undefined there)");
                    continue;
                }
                csv.push_str(&table_row(&conjecture_design(k)?, k));
            }
            emit_table(out, &csv)?;
        }
        "diophantine" => {
            let (lo, hi) = parse_range(range, 1, cap)?;
            let mut csv = String::from("k,s,t\n");
            for k in lo..=hi {
                for (s, t) in diophantine_pairs(k) {
                    csv.push_str(&format!("{k},{s},{t}\n"));
                }
            }
            emit_table(out, &csv)?;
        }
        other => bail!("unknown table `{other}` (expected table1, table2 or diophantine)"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_compare_rotatable(k: usize, r: &str, output: &OutputArgs) -> Result<ExitCode> {
    let radius = parse_rat(r)?;
    let gap = rotatable_gap(k)?;
    let rotatable = rotatable_optimal(k, &radius)?;
    let (lam_rot, rot_mult) = lambda_min_symmetric(&rotatable.moments, k);
    let spec = ModelSpec::new(k)?;
    let optimal = optimal_ball_design(k)?;
    let optimal_moments = moments_of(&spec, &optimal)?;
    let optimal_rotatable = is_rotatable(&optimal_moments, 0.0);
    let three_b = eoptd::exact::rat(3, 1) * &optimal_moments.b;

    match output.format {
        Format::Json => {
            let value = serde_json::json!({
                "k": k,
                "radius": format_rat(&radius),
                "alpha": format_rat(&rotatable.alpha),
                "lambda_rotatable": render_exact(&lam_rot, false),
                "lambda_rotatable_multiplicity": rot_mult,
                "lambda_optimal": format_rat(&optimal_ball_lambda(k)),
                "efficiency_ratio": format_rat(&gap.ratio),
                "rotatable_design_rotatable": is_rotatable(&rotatable.moments, 0.0),
                "optimal_design_rotatable": optimal_rotatable,
            });
            emit(output, &serde_json::to_string_pretty(&value)?)?;
        }
        _ => {
            let mut text = String::new();
            text.push_str(&format!(
                "k: {k}\nradius: {}\n",
                render_rat(&radius, output.float)
            ));
            text.push_str(&format!(
                "rotatable design: alpha = {}, lambda_min = {} (multiplicity {rot_mult}), c = 3b: rotatable\n",
                render_rat(&rotatable.alpha, output.float),
                render_exact(&lam_rot, output.float),
            ));
            text.push_str(&format!(
                "globally optimal design: lambda_min = {}, {}\n",
                render_rat(&optimal_ball_lambda(k), output.float),
                if optimal_rotatable {
                    "rotatable".to_string()
                } else {
                    format!(
                        "not rotatable: c = {} ≠ 3b = {}",
                        render_rat(&optimal_moments.c, output.float),
                        render_rat(&three_b, output.float)
                    )
                }
            ));
            text.push_str(&format!(
                "unit-ball efficiency of best rotatable design: {}\n",
                render_rat(&gap.ratio, output.float)
            ));
            emit(output, &text)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

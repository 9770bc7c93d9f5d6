//! Command-line front end. Everything except process exit lives here so the
//! binary stays a two-liner and tests can drive commands in-process.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::eigen::{EigenSolver, PROFILE_INTERVALS};
use crate::error::{Error, Result};
use crate::gap::{self, GapRow};
use crate::inequalities::{self as ineq, CatalogId};
use crate::plot::{emit_plot_data, emit_samples, sample};
use crate::quotient::{build_quotient_curves, z_y_direct};
use crate::rearrangement;
use crate::report::{all_passed, num, VerificationReport};
use crate::space::SpaceSpec;
use crate::suite::{self, AppendixOptions, Profile};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const THREADS_ENV: &str = "ROSS_SPECTRA_THREADS";

/// Exit status when every check passed.
pub const EXIT_PASSED: i32 = 0;
/// Exit status when at least one check failed (the report is still written).
pub const EXIT_FAILED: i32 = 1;
/// Exit status for usage and domain errors.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "ross-spectra", version, about = "Dirichlet spectra of geodesic balls and annuli in rank-one symmetric spaces")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Relative eigenvalue tolerance for ball-spectrum, radius-for-lambda1 and verify-gap.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Grid size: monotonicity nodes, appendix radii, or plot samples.
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// Write the output here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Directory for `r,value` CSV files, one per curve.
    #[arg(long = "plot-data", global = true)]
    pub plot_data: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    #[value(name = "KH")]
    Kh,
    #[value(name = "KP")]
    Kp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProfileArg {
    Quick,
    Full,
}

#[derive(Debug, Clone, Args)]
pub struct SpaceArgs {
    #[arg(long)]
    pub k: u32,
    #[arg(long)]
    pub n: u32,
}

#[derive(Debug, Clone, Args)]
pub struct AnnulusArgs {
    #[command(flatten)]
    pub space: SpaceArgs,
    #[arg(long = "r-in", allow_negative_numbers = true)]
    pub r_in: f64,
    #[arg(long = "r-out", allow_negative_numbers = true)]
    pub r_out: f64,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Eigenvalues and ground-state summary of a geodesic ball.
    BallSpectrum {
        #[arg(long, value_enum, default_value_t = Family::Kh)]
        space: Family,
        #[command(flatten)]
        kn: SpaceArgs,
        #[arg(long, allow_negative_numbers = true)]
        radius: f64,
        /// Projective (compact) type; same as `--space KP`.
        #[arg(long)]
        compact: bool,
    },
    /// Radius of the ball with the given first eigenvalue.
    RadiusForLambda1 {
        #[command(flatten)]
        kn: SpaceArgs,
        #[arg(long, allow_negative_numbers = true)]
        lambda: f64,
    },
    /// Gap bound and linear eigenvalue estimate on a grid of radii.
    VerifyGap {
        #[command(flatten)]
        kn: SpaceArgs,
        #[arg(long = "r-min", allow_negative_numbers = true)]
        r_min: f64,
        #[arg(long = "r-max", allow_negative_numbers = true)]
        r_max: f64,
        #[arg(long, allow_negative_numbers = true)]
        step: f64,
    },
    /// Monotonicity of G, B, q, psi and the ground state on one ball.
    VerifyMonotonicity {
        #[command(flatten)]
        kn: SpaceArgs,
        #[arg(long, allow_negative_numbers = true)]
        radius: f64,
        #[arg(long)]
        compact: bool,
    },
    /// Cross-product lemma, roots, printed polynomial, series certificates and Z_y scans.
    VerifyAppendix {
        #[command(flatten)]
        kn: SpaceArgs,
        #[arg(long = "series-order", default_value_t = ineq::DEFAULT_SERIES_ORDER)]
        series_order: usize,
    },
    /// lambda_2(annulus) <= lambda_2(B_1) with every intermediate check.
    PpwAnnulus {
        #[command(flatten)]
        annulus: AnnulusArgs,
    },
    /// Chiti comparison of the rearranged annulus ground state with the ball's.
    Chiti {
        #[command(flatten)]
        annulus: AnnulusArgs,
    },
    /// The acceptance grid.
    Suite {
        #[arg(long, value_enum, default_value_t = ProfileArg::Quick)]
        profile: ProfileArg,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::BallSpectrum { .. } => "ball-spectrum",
            Command::RadiusForLambda1 { .. } => "radius-for-lambda1",
            Command::VerifyGap { .. } => "verify-gap",
            Command::VerifyMonotonicity { .. } => "verify-monotonicity",
            Command::VerifyAppendix { .. } => "verify-appendix",
            Command::PpwAnnulus { .. } => "ppw-annulus",
            Command::Chiti { .. } => "chiti",
            Command::Suite { .. } => "suite",
        }
    }
}

/// Everything a command produced, before formatting.
#[derive(Debug, Clone, Serialize)]
pub struct Document {
    pub command: String,
    pub inputs: Value,
    pub passed: bool,
    pub reports: Vec<VerificationReport>,
    pub result: Value,
    #[serde(skip)]
    pub csv_table: Option<(Vec<&'static str>, Vec<Vec<f64>>)>,
    #[serde(skip)]
    pub sections: Vec<(String, usize)>,
}

impl Document {
    fn new(command: &str, inputs: Value, reports: Vec<VerificationReport>, result: Value) -> Self {
        Self { command: command.into(), inputs, passed: all_passed(&reports), reports, result, csv_table: None, sections: Vec::new() }
    }

    pub fn exit_code(&self) -> i32 {
        exit_code(&self.reports)
    }

    /// Sorted-key JSON with the tool version and the `B_2` selection.
    pub fn to_json(&self) -> String {
        let mut v = serde_json::to_value(self).unwrap_or(Value::Null);
        if let Value::Object(map) = &mut v {
            let sel = ineq::select_b2_form();
            map.insert(
                "tool".into(),
                json!({
                    "name": "ross-spectra",
                    "version": VERSION,
                    "b2_form": sel.form.map(|f| f.formula()),
                    "b2_selection": sel.summary(),
                }),
            );
        }
        // serde_json's default map is ordered, so keys come out sorted
        let mut s = serde_json::to_string_pretty(&v).unwrap_or_default();
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        if let Some((header, rows)) = &self.csv_table {
            out.push_str(&header.join(","));
            out.push('\n');
            for row in rows {
                let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
                out.push_str(&cells.join(","));
                out.push('\n');
            }
            return out;
        }
        out.push_str("section,check_id,space,passed,worst_margin,tolerance,radius\n");
        let mut section_of = Vec::new();
        for (name, count) in &self.sections {
            section_of.extend(std::iter::repeat_n(name.as_str(), *count));
        }
        for (i, r) in self.reports.iter().enumerate() {
            let section = section_of.get(i).copied().unwrap_or(self.command.as_str());
            let space = r.space.map(|s| s.to_string()).unwrap_or_default();
            let radius = r.parameters.get("radius").map(|v| v.to_string()).unwrap_or_default();
            let _ = writeln!(out, "{section},{},{space},{},{},{},{radius}", r.check_id, r.passed, r.worst_margin, r.tolerance());
        }
        out
    }
}

/// `0` when every report passed, `1` otherwise.
pub fn exit_code(reports: &[VerificationReport]) -> i32 {
    if all_passed(reports) {
        EXIT_PASSED
    } else {
        EXIT_FAILED
    }
}

/// Result of one invocation: exit status plus what goes to stdout/stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parse and run; never exits the process.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASSED };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code, stdout: String::new(), stderr: text }
            } else {
                Outcome { code, stdout: text, stderr: String::new() }
            };
        }
    };
    if let Err(e) = configure_threads() {
        return Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {e}\n") };
    }
    match execute(&cli).and_then(|doc| deliver(&cli.global, &doc).map(|s| (doc.exit_code(), s))) {
        Ok((code, stdout)) => Outcome { code, stdout, stderr: String::new() },
        Err(e) => Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

/// Honour `ROSS_SPECTRA_THREADS` (a positive integer) for the global pool.
fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Error::Domain(format!("{THREADS_ENV} must be a positive integer (got {raw:?})")))?;
    // a second call in the same process finds the pool already built
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

fn deliver(global: &GlobalArgs, doc: &Document) -> Result<String> {
    let text = match global.format {
        Format::Json => doc.to_json(),
        Format::Csv => doc.to_csv(),
    };
    match &global.out {
        Some(path) => {
            fs::write(path, &text).map_err(|source| Error::Io { path: path.clone(), source })?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn solver(global: &GlobalArgs) -> Result<EigenSolver> {
    let mut s = EigenSolver::default();
    if let Some(tol) = global.tol {
        if !(tol > 0.0) || !tol.is_finite() {
            return Err(Error::Domain(format!("--tol must be positive (got {tol})")));
        }
        s.tol = tol;
    }
    Ok(s)
}

fn plot_dir(global: &GlobalArgs) -> Result<Option<PathBuf>> {
    match &global.plot_data {
        None => Ok(None),
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|source| Error::Io { path: dir.clone(), source })?;
            Ok(Some(dir.clone()))
        }
    }
}

fn plot_samples(global: &GlobalArgs) -> usize {
    global.grid.unwrap_or(400).max(1)
}

fn space_of(kn: &SpaceArgs, compact: bool) -> Result<SpaceSpec> {
    if compact {
        SpaceSpec::compact(kn.k, kn.n)
    } else {
        SpaceSpec::noncompact(kn.k, kn.n)
    }
}

fn curve_file(dir: &Path, name: &str) -> PathBuf {
    dir.join(format!("{name}.csv"))
}

/// Run a parsed command.
pub fn execute(cli: &Cli) -> Result<Document> {
    let g = &cli.global;
    let name = cli.command.name();
    match &cli.command {
        Command::BallSpectrum { space, kn, radius, compact } => {
            let sp = space_of(kn, *compact || *space == Family::Kp)?;
            let b = solver(g)?.ball_spectrum(&sp, *radius, PROFILE_INTERVALS)?;
            if let Some(dir) = plot_dir(g)? {
                emit_plot_data(&b.g1, &curve_file(&dir, "g1"))?;
                emit_plot_data(&b.g2, &curve_file(&dir, "g2"))?;
            }
            let result = json!({
                "space": sp.to_string(),
                "k": sp.k,
                "n": sp.n,
                "compact": sp.is_compact(),
                "radius": num(b.radius),
                "lambda1": num(b.lambda1),
                "lambda2": num(b.lambda2),
                "lambda02": num(b.lambda02),
                "grid_intervals": b.g1.len() - 1,
                "seed_radius": num(b.g1.grid[0]),
            });
            let inputs = json!({"space": sp.to_string(), "radius": num(*radius), "tol": g.tol.map(num)});
            Ok(Document::new(name, inputs, vec![suite::ball_invariants_report(&b)], result))
        }
        Command::RadiusForLambda1 { kn, lambda } => {
            let sp = space_of(kn, false)?;
            let s = solver(g)?;
            let tol = s.tol * lambda.abs().max(1.0);
            let r = s.radius_for_lambda1(&sp, *lambda, tol)?;
            let check = s.lambda1_ball(&sp, r)?;
            let result = json!({"radius": num(r), "lambda1_at_radius": num(check), "space": sp.to_string()});
            Ok(Document::new(name, json!({"space": sp.to_string(), "lambda": num(*lambda)}), vec![], result))
        }
        Command::VerifyGap { kn, r_min, r_max, step } => {
            let sp = space_of(kn, false)?;
            let radii = gap::radius_grid(*r_min, *r_max, *step)?;
            let rows = gap::gap_rows_with(&solver(g)?, &sp, &radii)?;
            let reports = vec![gap::gap_report(&sp, &rows), gap::estimate_report(&sp, &rows)];
            if let Some(dir) = plot_dir(g)? {
                let gm: Vec<(f64, f64)> = rows.iter().map(|r| (r.radius, r.margin)).collect();
                let em: Vec<(f64, f64)> = rows.iter().map(|r| (r.radius, r.estimate_margin(&sp))).collect();
                emit_samples(&gm, &curve_file(&dir, "gap_margin"))?;
                emit_samples(&em, &curve_file(&dir, "estimate_margin"))?;
            }
            let table: Vec<Value> = rows.iter().map(|r| gap_row_json(&sp, r)).collect();
            let inputs = json!({"space": sp.to_string(), "r_min": num(*r_min), "r_max": num(*r_max), "step": num(*step)});
            let mut doc = Document::new(name, inputs, reports, json!({ "rows": table }));
            doc.csv_table = Some((
                vec!["R", "lambda1", "lambda2", "sphere_lambda1", "margin"],
                rows.iter().map(|r| vec![r.radius, r.lambda1, r.lambda2, r.sphere_lambda1, r.margin]).collect(),
            ));
            Ok(doc)
        }
        Command::VerifyMonotonicity { kn, radius, compact } => {
            let sp = space_of(kn, *compact)?;
            let grid = g.grid.unwrap_or(2000);
            let ball = EigenSolver::default().ball_spectrum(&sp, *radius, PROFILE_INTERVALS)?;
            let reports = crate::quotient::verify_monotonicity(&ball, grid)?;
            if let Some(dir) = plot_dir(g)? {
                let curves = build_quotient_curves(&ball)?;
                for (file, p) in [("G", &curves.g), ("G_prime", &curves.gp), ("q", &curves.q), ("p", &curves.p), ("B", &curves.b), ("psi", &curves.psi)] {
                    emit_plot_data(p, &curve_file(&dir, file))?;
                }
            }
            let result = json!({"lambda1": num(ball.lambda1), "lambda2": num(ball.lambda2), "radius": num(*radius)});
            let inputs = json!({"space": sp.to_string(), "radius": num(*radius), "grid": grid});
            Ok(Document::new(name, inputs, reports, result))
        }
        Command::VerifyAppendix { kn, series_order } => {
            let sp = space_of(kn, false)?;
            let mut opts = AppendixOptions { series_order: *series_order, ..Default::default() };
            if let Some(n) = g.grid {
                opts.lemma_r_points = n;
            }
            let (mut reports, certs) = suite::appendix_reports(&sp, &opts)?;
            if (sp.k, sp.n) == (2, 2) {
                reports.push(suite::group4_report()?);
            }
            if let Some(dir) = plot_dir(g)? {
                appendix_curves(&sp, &dir, plot_samples(g))?;
            }
            let result = json!({ "series_certificates": certs });
            let inputs = json!({"space": sp.to_string(), "series_order": series_order, "lemma_r_points": opts.lemma_r_points});
            Ok(Document::new(name, inputs, reports, result))
        }
        Command::PpwAnnulus { annulus } | Command::Chiti { annulus } => {
            let sp = space_of(&annulus.space, false)?;
            let (a, b) = (annulus.r_in, annulus.r_out);
            let p = rearrangement::ppw_pipeline(&sp, a, b)?;
            let report = if matches!(cli.command, Command::Chiti { .. }) {
                rearrangement::chiti_report(&sp, &p)
            } else {
                rearrangement::ppw_report(&sp, &p)
            };
            if let Some(dir) = plot_dir(g)? {
                let [u, us, z] = &p.profiles;
                emit_plot_data(&u.profile, &curve_file(&dir, "u1"))?;
                emit_plot_data(&us.profile, &curve_file(&dir, "u1_star"))?;
                emit_plot_data(&z.profile, &curve_file(&dir, "z"))?;
                let diff = sample(|r| z.profile.value_at(r) - us.profile.value_at(r), 0.0, p.b1_radius, plot_samples(g));
                emit_samples(&diff, &curve_file(&dir, "chiti_difference"))?;
            }
            let result = json!({
                "lambda1_omega": num(p.annulus.lambda1),
                "lambda2_omega_candidate": num(p.annulus.lambda2_candidate),
                "b1_radius": num(p.b1_radius),
                "lambda2_b1": num(p.ball.lambda2),
                "margin": num(p.margin),
                "chiti": p.chiti,
            });
            let inputs = json!({"space": sp.to_string(), "r_in": num(a), "r_out": num(b)});
            Ok(Document::new(name, inputs, vec![report], result))
        }
        Command::Suite { profile } => {
            let prof = match profile {
                ProfileArg::Quick => Profile::Quick,
                ProfileArg::Full => Profile::Full,
            };
            let sections = suite::run_suite(prof)?;
            let summary: Vec<Value> = sections
                .iter()
                .map(|s| json!({"name": s.name, "passed": s.passed, "reports": s.reports.len()}))
                .collect();
            let index: Vec<(String, usize)> = sections.iter().map(|s| (s.name.clone(), s.reports.len())).collect();
            let reports: Vec<VerificationReport> = sections.into_iter().flat_map(|s| s.reports).collect();
            let mut doc = Document::new(name, json!({ "profile": prof }), reports, json!({ "sections": summary }));
            doc.sections = index;
            Ok(doc)
        }
    }
}

fn gap_row_json(space: &SpaceSpec, r: &GapRow) -> Value {
    json!({
        "R": num(r.radius),
        "lambda1": num(r.lambda1),
        "lambda2": num(r.lambda2),
        "sphere_lambda1": num(r.sphere_lambda1),
        "margin": num(r.margin),
        "estimate_margin": num(r.estimate_margin(space)),
    })
}

/// The curves behind the appendix figures.
fn appendix_curves(space: &SpaceSpec, dir: &Path, n: usize) -> Result<()> {
    let form = ineq::selected_b2_form();
    let c = ineq::catalog(form);
    let b2a2 = sample(|r| ineq::cross2_normalized(c.eval(CatalogId::B2, r), c.eval(CatalogId::A2, r)), 0.5, 3.0, n);
    emit_samples(&b2a2, &curve_file(dir, "b2_cross_a2"))?;
    let a1b2 = sample(|r| {
        let v = ineq::lemma_vectors(space, r, form);
        ineq::cross2_normalized(v.a1b1, v.b2)
    }, 0.5, 4.0, n);
    emit_samples(&a1b2, &curve_file(dir, "a1b1_cross_b2"))?;
    emit_samples(&sample(ineq::group4_g, 1.0, 2.0, n), &curve_file(dir, "group4_g"))?;
    let f = sample(|r| ineq::f_poly_value(space.k, space.n, r).unwrap_or(f64::NAN), 0.5, 3.0, n);
    emit_samples(&f, &curve_file(dir, "f_product"))?;
    let solver = EigenSolver::default();
    let (l1, l2) = (solver.lambda1_ball(space, 1.0)?, solver.lambda2_ball(space, 1.0)?);
    let z1 = sample(|r| z_y_direct(space, l1, l2, r.max(1e-3), 1.0).unwrap_or(f64::NAN), 1e-3, 1.0, n);
    emit_samples(&z1, &curve_file(dir, "z1"))?;
    Ok(())
}

/// Helper for the binary.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let out = run(argv);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    out.code
}

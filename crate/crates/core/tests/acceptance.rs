//! One line per acceptance criterion. Runs without the test harness so the
//! lines are always printed; exits nonzero if any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use ross_spectra::eigen::{EigenSolver, PROFILE_INTERVALS};
use ross_spectra::gap::radius_grid;
use ross_spectra::hyper::rat;
use ross_spectra::inequalities::{self as ineq, series_certificate};
use ross_spectra::quotient::verify_monotonicity;
use ross_spectra::rearrangement::{chiti_report, ppw_pipeline, ppw_report, NEAR_BALL_R_IN};
use ross_spectra::report::VerificationReport;
use ross_spectra::suite::{self, AppendixOptions, ORACLE_PAIRS, PPW_ANNULI, SPACES};
use ross_spectra::{Result, SpaceSpec};

struct Verdict {
    passed: bool,
    detail: String,
}

fn from_reports(reports: &[VerificationReport]) -> Verdict {
    let failed: Vec<String> = reports
        .iter()
        .filter(|r| !r.passed)
        .map(|r| format!("{}{} ({:.3e})", r.check_id, r.space.map(|s| format!(" {s}")).unwrap_or_default(), r.worst_margin))
        .collect();
    let worst = reports.iter().map(|r| r.worst_margin).fold(f64::INFINITY, f64::min);
    if failed.is_empty() {
        Verdict { passed: true, detail: format!("{} reports, worst margin {worst:.3e}", reports.len()) }
    } else {
        Verdict { passed: false, detail: format!("failed: {}", failed.join(", ")) }
    }
}

fn criterion(number: u32, title: &str, limit: Duration, f: impl FnOnce() -> Result<Verdict>) -> bool {
    let start = Instant::now();
    let verdict = f().unwrap_or_else(|e| Verdict { passed: false, detail: format!("error: {e}") });
    let elapsed = start.elapsed();
    let in_time = elapsed <= limit;
    let passed = verdict.passed && in_time;
    let timing = if in_time {
        format!("{:.1}s", elapsed.as_secs_f64())
    } else {
        format!("{:.1}s exceeds the {}s budget", elapsed.as_secs_f64(), limit.as_secs())
    };
    println!("criterion {number:>2} {}: {title}: {}; {timing}", if passed { "PASS" } else { "FAIL" }, verdict.detail);
    passed
}

fn noncompact(k: u32, n: u32) -> Result<SpaceSpec> {
    SpaceSpec::noncompact(k, n)
}

fn gap_grid() -> Result<Vec<(SpaceSpec, Vec<ross_spectra::gap::GapRow>, Vec<VerificationReport>)>> {
    suite::gap_reports(&SPACES, &radius_grid(0.1, 5.0, 0.1)?)
}

fn main() {
    let secs = Duration::from_secs;
    let mut all = true;

    all &= criterion(1, "Euclidean calibration at R = 0.01", secs(5), || {
        let reports = [(2, 2), (4, 2), (8, 2)]
            .iter()
            .map(|&(k, n)| suite::calibration_report(&noncompact(k, n)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(from_reports(&reports))
    });

    all &= criterion(2, "shooting vs finite-volume oracle on 12 pairs", secs(60), || {
        let rep = suite::oracle_report(&ORACLE_PAIRS)?;
        Ok(from_reports(&[rep]))
    });

    // criteria 3 and 9 share the eigenvalue table
    let start = Instant::now();
    let gap = gap_grid();
    let table_time = start.elapsed();
    all &= criterion(3, "gap bound on R = 0.1..5.0 for six spaces", secs(300).saturating_sub(table_time), || {
        let gap = gap.as_ref().map_err(|e| ross_spectra::Error::Domain(e.to_string()))?;
        let reports: Vec<VerificationReport> = gap.iter().map(|(_, _, r)| r[0].clone()).collect();
        let rows: usize = gap.iter().map(|(_, rows, _)| rows.len()).sum();
        let mut v = from_reports(&reports);
        v.detail = format!("{rows} radii, {}, table {:.1}s", v.detail, table_time.as_secs_f64());
        Ok(v)
    });

    all &= criterion(4, "monotonicity on six spaces x R in {0.5, 1, 2}, compact (2,2) at pi/4", secs(300), || {
        let mut reports = Vec::new();
        for (k, n) in SPACES {
            let space = noncompact(k, n)?;
            for radius in [0.5, 1.0, 2.0] {
                reports.extend(suite::monotonicity_reports(&space, radius, 2000)?);
            }
        }
        let compact = SpaceSpec::compact(2, 2)?;
        let ball = EigenSolver::default().ball_spectrum(&compact, std::f64::consts::FRAC_PI_4, PROFILE_INTERVALS)?;
        let compact_reports = verify_monotonicity(&ball, 2000)?;
        let g_ok = compact_reports.iter().any(|r| r.check_id == "g_prime_nonnegative" && r.passed);
        reports.extend(compact_reports);
        let mut v = from_reports(&reports);
        v.passed &= g_ok;
        Ok(v)
    });

    all &= criterion(5, "appendix numbers: roots, printed polynomial, exact series", secs(60), || {
        let r2 = ineq::find_root_r2()?;
        let r1 = ineq::find_root_r1(2, 2)?;
        let poly = ineq::f_poly_check(1.4)?;
        let base = series_certificate("hh2_a1b1_cross_a3b3", ineq::DEFAULT_SERIES_ORDER)?;
        let exact = base.coefficients.coeff(1) == rat(76832, 45) && base.coefficients.coeff(3) == rat(-551936, 135);
        let passed = (r2 - 1.35).abs() <= 0.05 && (r1 - 1.57).abs() <= 0.05 && poly.passed && exact;
        Ok(Verdict {
            passed,
            detail: format!(
                "r2 = {r2:.4}, r1(2,2) = {r1:.4}, polynomial worst {:.2e}, series {}",
                poly.worst_margin,
                if exact { "76832/45, -551936/135" } else { "mismatch" }
            ),
        })
    });

    all &= criterion(6, "cross-product lemma grid and Z_y scans at R in {1, 2}", secs(600), || {
        let opts = AppendixOptions::default();
        let mut reports = Vec::new();
        for (k, n) in SPACES {
            let (reps, _) = suite::appendix_reports(&noncompact(k, n)?, &opts)?;
            reports.extend(reps.into_iter().filter(|r| {
                matches!(r.check_id.as_str(), "cross_product_positivity" | "z1_increasing" | "no_bad_critical_points")
            }));
        }
        if reports.len() != SPACES.len() * (1 + 2 * opts.scan_radii.len()) {
            return Ok(Verdict { passed: false, detail: format!("expected lemma and scan reports, got {}", reports.len()) });
        }
        Ok(from_reports(&reports))
    });

    all &= criterion(7, "decomposition residual constant in r", secs(30), || {
        let form = ineq::selected_b2_form();
        let reports = SPACES
            .iter()
            .map(|&(k, n)| suite::decomposition_report(&noncompact(k, n)?, form))
            .collect::<Result<Vec<_>>>()?;
        let mut v = from_reports(&reports);
        v.detail = format!("B2 = {}; {}", form.formula(), v.detail);
        Ok(v)
    });

    all &= criterion(8, "PPW on 20 annuli, near-ball equality, Chiti single crossing", secs(600), || {
        let results: Vec<Result<(VerificationReport, VerificationReport, bool)>> = std::thread::scope(|s| {
            let handles: Vec<_> = PPW_ANNULI
                .iter()
                .map(|&(k, n, a, b)| {
                    s.spawn(move || {
                        let space = noncompact(k, n)?;
                        let p = ppw_pipeline(&space, a, b)?;
                        let near_ok = a >= NEAR_BALL_R_IN || p.margin <= 1e-3 * p.ball.lambda2;
                        Ok((ppw_report(&space, &p), chiti_report(&space, &p), near_ok))
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("annulus thread")).collect()
        });
        let mut reports = Vec::new();
        let mut near = true;
        for r in results {
            let (ppw, chiti, near_ok) = r?;
            reports.push(ppw);
            reports.push(chiti);
            near &= near_ok;
        }
        let mut v = from_reports(&reports);
        v.passed &= near;
        if !near {
            v.detail.push_str("; near-ball margin above 1e-3 lambda_2");
        }
        Ok(v)
    });

    all &= criterion(9, "linear eigenvalue estimate on the gap grid", secs(30), || {
        let gap = gap.as_ref().map_err(|e| ross_spectra::Error::Domain(e.to_string()))?;
        let reports: Vec<VerificationReport> = gap.iter().map(|(_, _, r)| r[1].clone()).collect();
        Ok(from_reports(&reports))
    });

    all &= criterion(10, "suite --profile quick is byte-identical across runs", secs(600), || {
        let bin = env!("CARGO_BIN_EXE_ross-spectra");
        let runs = (0..2)
            .map(|_| Command::new(bin).args(["suite", "--profile", "quick"]).output())
            .collect::<std::io::Result<Vec<_>>>()
            .map_err(|e| ross_spectra::Error::Domain(format!("could not run the binary: {e}")))?;
        let codes: Vec<Option<i32>> = runs.iter().map(|o| o.status.code()).collect();
        let same = runs[0].stdout == runs[1].stdout;
        Ok(Verdict {
            passed: same && codes.iter().all(|c| *c == Some(0)),
            detail: format!("{} bytes, identical: {same}, exit codes {codes:?}", runs[0].stdout.len()),
        })
    });

    if !all {
        std::process::exit(1);
    }
}

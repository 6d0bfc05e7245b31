//! End-to-end verification: every headline property of the constructed
//! families, checked at pinned tolerances. Backs both the `verify`
//! subcommand and the acceptance test target.
//!
//! The limits being verified are asymptotic (gamma -> infinity) without
//! explicit constants, so most checks are trend assertions across a gamma
//! sweep at desk scale; exact anchors (eigen-data, the linear g-type point
//! at gamma = a/2) are checked at tight tolerances.

use crate::bessel;
use crate::bubble;
use crate::config::Tolerances;
use crate::diagnostics::{self, Problem};
use crate::nonlinearity::NonlinearitySpec;
use crate::oracle;
use crate::radial_ode;
use crate::shooting::{self, ShootingResult};
use crate::sweep::{self, SweepRow};
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::time::Instant;

pub struct CriterionOutcome {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CriterionOutcome {
    pub fn line(&self) -> String {
        format!(
            "criterion {} [{}] {}: {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.detail
        )
    }
}

/// Everything a verify run produces: per-criterion outcomes and the three
/// sweep tables (the reproducibility artifacts).
pub struct AcceptanceRun {
    pub outcomes: Vec<CriterionOutcome>,
    pub csv_t1: String,
    pub csv_nodal: String,
    pub csv_gtype: String,
}

impl AcceptanceRun {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }
}

const T1_GAMMAS: [f64; 4] = [6.0, 8.0, 10.0, 12.0];
const NODAL_GAMMAS: [f64; 3] = [8.0, 10.0, 12.0];
const GTYPE_GAMMAS: [f64; 3] = [6.0, 9.0, 12.0];
const GTYPE_A: f64 = 2.0;

fn strictly_decreasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[1] < w[0])
}

fn non_increasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[1] <= w[0])
}

fn fmt_seq(xs: &[f64]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| format!("{x:.3e}")).collect();
    format!("[{}]", parts.join(", "))
}

struct Check {
    ok: bool,
    detail: String,
}

fn check(ok: bool, detail: String) -> Check {
    Check { ok, detail }
}

fn combine(id: usize, name: &'static str, checks: Vec<Check>) -> CriterionOutcome {
    let passed = checks.iter().all(|c| c.ok);
    let mut detail = String::new();
    for c in &checks {
        if !detail.is_empty() {
            detail.push_str("; ");
        }
        if !c.ok {
            detail.push_str("FAILED ");
        }
        detail.push_str(&c.detail);
    }
    CriterionOutcome {
        id,
        name,
        passed,
        detail,
    }
}

/// Criterion 1: fast Bessel zeros against the exact-rational oracle, and the
/// v1 normalization quadrature.
fn criterion_1() -> CriterionOutcome {
    let start = Instant::now();
    let mut checks = Vec::new();
    let mut worst: f64 = 0.0;
    for k in 1..=3 {
        let fast = bessel::bessel_zero(k).unwrap();
        let slow = oracle::j0_zero_oracle(k);
        worst = worst.max((fast - slow).abs());
    }
    checks.push(check(
        worst <= 1e-12,
        format!("zeros 1..3 vs oracle, max diff {worst:.2e} (tol 1e-12)"),
    ));
    let e1 = bessel::eigen_data(1).unwrap();
    let norm = 2.0
        * PI
        * crate::quad::integrate(
            |r| {
                let v = e1.eval(r).unwrap();
                v * v * r
            },
            0.0,
            1.0,
            1e-12,
        );
    checks.push(check(
        (norm - 1.0).abs() <= 1e-10,
        format!("v1 normalization quadrature {norm:.12} (tol 1e-10)"),
    ));
    let dt = start.elapsed().as_secs_f64();
    checks.push(check(dt < 1.0, format!("runtime {dt:.2}s (< 1s)")));
    combine(1, "eigen-oracle agreement", checks)
}

/// Criterion 2: the integrator reproduces the extended first eigenfunction,
/// and halving the tolerance moves u(1) by at most 50 tol.
fn criterion_2() -> CriterionOutcome {
    let start = Instant::now();
    let mut checks = Vec::new();
    let spec = NonlinearitySpec::adimurthi_druet(bessel::lambda1(), -1e6);
    let gamma = bessel::v1_at_zero();
    let p = radial_ode::integrate(&spec, gamma, 3.0, 1e-12).unwrap();
    let mut sup: f64 = 0.0;
    let mut r = 0.02;
    while r <= 3.0 {
        sup = sup.max((p.u_at_r(r) - bessel::vbar1(r).unwrap()).abs());
        r += 0.02;
    }
    checks.push(check(
        sup <= 1e-8,
        format!("round-trip sup|u - vbar1| on [0,3] = {sup:.2e} (tol 1e-8)"),
    ));
    let tol = 1e-10;
    let a = radial_ode::integrate(&spec, 1.0, 1.2, tol).unwrap().u_at_r(1.0);
    let b = radial_ode::integrate(&spec, 1.0, 1.2, tol / 2.0)
        .unwrap()
        .u_at_r(1.0);
    checks.push(check(
        (a - b).abs() <= 50.0 * tol,
        format!(
            "tol-halving shift of u(1) = {:.2e} (tol {:.1e})",
            (a - b).abs(),
            50.0 * tol
        ),
    ));
    let dt = start.elapsed().as_secs_f64();
    checks.push(check(dt < 5.0, format!("runtime {dt:.2}s (< 5s)")));
    combine(2, "integrator round-trip", checks)
}

/// Criterion 3: the positive family at l = 1 over gamma in {6, 8, 10, 12}.
fn criterion_3(rows: &[SweepRow], tols: &Tolerances, elapsed: f64) -> CriterionOutcome {
    let mut checks = Vec::new();
    let mut ok_rows = Vec::new();
    for row in rows {
        match &row.outcome {
            Ok(pair) => ok_rows.push(pair),
            Err(e) => {
                checks.push(check(false, format!("gamma {} failed: {e}", row.gamma)));
            }
        }
    }
    if ok_rows.len() == rows.len() {
        let resid_ok = ok_rows
            .iter()
            .all(|(res, _)| res.boundary_residual <= 1e-10 * res.gamma);
        checks.push(check(
            resid_ok,
            format!(
                "boundary residuals {} (tol 1e-10*gamma)",
                fmt_seq(
                    &ok_rows
                        .iter()
                        .map(|(r, _)| r.boundary_residual)
                        .collect::<Vec<_>>()
                )
            ),
        ));

        let mut ident_worst: f64 = 0.0;
        for (res, _) in &ok_rows {
            let (lhs, rhs) = diagnostics::energy_identity_sides(res, tols.quad_tol).unwrap();
            ident_worst = ident_worst.max((lhs - rhs).abs() / lhs.abs().max(rhs.abs()));
        }
        checks.push(check(
            ident_worst <= 1e-7,
            format!("energy identity rel. mismatch {ident_worst:.2e} (tol 1e-7)"),
        ));

        let e_resid: Vec<f64> = ok_rows.iter().map(|(_, rep)| rep.energy_residual).collect();
        checks.push(check(
            strictly_decreasing(&e_resid) && *e_resid.last().unwrap() < 1.0,
            format!("|energy - (4pi+1)| {} strictly decreasing, last < 1.0", fmt_seq(&e_resid)),
        ));

        let l2_target = (1.0 / bessel::lambda1()).sqrt();
        let l2_resid: Vec<f64> = ok_rows
            .iter()
            .map(|(_, rep)| (rep.l2_norm - l2_target).abs())
            .collect();
        checks.push(check(
            strictly_decreasing(&l2_resid),
            format!("|l2 - {l2_target:.5}| {} strictly decreasing", fmt_seq(&l2_resid)),
        ));

        let law_resid: Vec<f64> = ok_rows
            .iter()
            .map(|(_, rep)| (rep.beta_law_ratio.unwrap() - 1.0).abs())
            .collect();
        checks.push(check(
            non_increasing(&law_resid) && law_resid.last().unwrap() < law_resid.first().unwrap(),
            format!("|beta_law_ratio - 1| {} monotone to 1", fmt_seq(&law_resid)),
        ));

        let betas: Vec<f64> = ok_rows.iter().map(|(_, rep)| rep.beta).collect();
        checks.push(check(
            strictly_decreasing(&betas),
            format!("beta {} strictly decreasing", fmt_seq(&betas)),
        ));
    }
    checks.push(check(
        elapsed < 60.0,
        format!("runtime {elapsed:.1}s (< 60s)"),
    ));
    combine(3, "positive family laws (l = 1)", checks)
}

/// Criterion 4: first-order bubble expansion of the positive family.
fn criterion_4(rows: &[SweepRow]) -> CriterionOutcome {
    let mut checks = Vec::new();
    let results: Vec<&ShootingResult> = rows
        .iter()
        .filter_map(|r| r.outcome.as_ref().ok().map(|(res, _)| res))
        .collect();
    if results.len() != rows.len() {
        checks.push(check(false, "not all positive solves succeeded".into()));
        return combine(4, "positive-family bubble expansion", checks);
    }
    let tau_devs: Vec<f64> = results
        .iter()
        .map(|res| bubble::tau_deviation(res, 10.0, 400).unwrap())
        .collect();
    checks.push(check(
        strictly_decreasing(&tau_devs),
        format!("sup|tau - T0| on y<=10 {} decreasing", fmt_seq(&tau_devs)),
    ));
    let inner: Vec<f64> = results
        .iter()
        .map(|res| bubble::inner_residual_t1(res, 1.0).unwrap().max_residual)
        .collect();
    let ratio = inner.last().unwrap() / inner.first().unwrap();
    checks.push(check(
        ratio <= 3.0 && inner.iter().all(|v| v.is_finite()),
        format!(
            "scaled inner residual {} bounded: gamma12/gamma6 ratio {ratio:.2} (<= 3)",
            fmt_seq(&inner)
        ),
    ));
    combine(4, "positive-family bubble expansion", checks)
}

/// Criterion 5: the nodal family k = 2, l = 1 over gamma in {8, 10, 12};
/// gamma = 8 sits below the threshold (lambda_tilde <= 0) and must surface
/// as a flagged failure row while the rest of the sweep completes.
fn criterion_5(rows: &[SweepRow], elapsed: f64) -> CriterionOutcome {
    let mut checks = Vec::new();
    let successes: Vec<_> = rows
        .iter()
        .filter_map(|r| r.outcome.as_ref().ok().map(|pair| (r.gamma, pair)))
        .collect();
    checks.push(check(
        successes.len() >= 2,
        format!(
            "{} of {} gammas solved (threshold failures are flagged rows)",
            successes.len(),
            rows.len()
        ),
    ));
    if successes.len() >= 2 {
        let nodal_ok = successes.iter().all(|(_, (res, _))| {
            let interior = res
                .zeros
                .iter()
                .filter(|z| z.r < 1.0 - 1e-9 && z.r > 0.0)
                .count();
            interior == 1 && (res.zeros.last().unwrap().r - 1.0).abs() <= 1e-9
        });
        checks.push(check(
            nodal_ok,
            "exactly 2 nodal regions in (0,1) for every success".into(),
        ));

        let r2 = bessel::eigen_data(2).unwrap().r_k;
        let r2_dev: Vec<f64> = successes
            .iter()
            .map(|(_, (res, _))| (res.r_k_gamma.unwrap() - r2).abs())
            .collect();
        checks.push(check(
            strictly_decreasing(&r2_dev),
            format!("|r_2_gamma - r_2| {} decreasing", fmt_seq(&r2_dev)),
        ));

        let gap_resid: Vec<f64> = successes
            .iter()
            .map(|(_, (_, rep))| (rep.gap_law_ratio.unwrap() - 1.0).abs())
            .collect();
        checks.push(check(
            strictly_decreasing(&gap_resid),
            format!("|gap_law_ratio - 1| {} decreasing", fmt_seq(&gap_resid)),
        ));

        let e_resid: Vec<f64> = successes
            .iter()
            .map(|(_, (_, rep))| rep.energy_residual)
            .collect();
        checks.push(check(
            strictly_decreasing(&e_resid),
            format!("|energy - (4pi+1)| {} decreasing", fmt_seq(&e_resid)),
        ));
    }
    checks.push(check(
        elapsed < 90.0,
        format!("runtime {elapsed:.1}s (< 90s)"),
    ));
    combine(5, "nodal family laws (k = 2, l = 1)", checks)
}

/// Criterion 6: the g-type family at a = 2 with the exact linear anchor at
/// gamma = a/2 and the sweep trends.
fn criterion_6(rows: &[SweepRow], tols: &Tolerances, elapsed: f64) -> CriterionOutcome {
    let start_anchor = Instant::now();
    let mut checks = Vec::new();
    let lambda1 = bessel::lambda1();

    // anchor: at gamma = a/2 = 1 the equation is exactly linear
    let anchor = shooting::solve_gtype(
        GTYPE_A,
        0.5 * GTYPE_A,
        NonlinearitySpec::gtype_default(GTYPE_A, 0.0),
        &tols.solve_options(),
    )
    .unwrap();
    checks.push(check(
        (anchor.beta() - lambda1).abs() <= 1e-8,
        format!(
            "anchor beta = {:.12} vs lambda_1 = {lambda1:.12} (tol 1e-8)",
            anchor.beta()
        ),
    ));
    let scale = GTYPE_A / (2.0 * bessel::v1_at_zero());
    let e1 = bessel::eigen_data(1).unwrap();
    let mut sup: f64 = 0.0;
    let mut r = 0.01;
    while r <= 1.0 {
        sup = sup.max((anchor.profile.u_at_r(r) - scale * e1.eval(r).unwrap()).abs());
        r += 0.01;
    }
    checks.push(check(
        sup <= 1e-8,
        format!("anchor profile sup dev from (a/2v1(0)) v1 = {sup:.2e} (tol 1e-8)"),
    ));
    let _ = start_anchor;

    let successes: Vec<_> = rows
        .iter()
        .filter_map(|r| r.outcome.as_ref().ok())
        .collect();
    if successes.len() != rows.len() {
        checks.push(check(false, "not all g-type solves succeeded".into()));
    } else {
        let beta_dev: Vec<f64> = successes
            .iter()
            .map(|(res, _)| (res.beta() - lambda1).abs())
            .collect();
        checks.push(check(
            strictly_decreasing(&beta_dev),
            format!("|beta - lambda_1| {} decreasing", fmt_seq(&beta_dev)),
        ));

        let e_resid: Vec<f64> = successes.iter().map(|(_, rep)| rep.energy_residual).collect();
        checks.push(check(
            strictly_decreasing(&e_resid),
            format!(
                "|energy - {:.4}| {} decreasing",
                4.0 * PI + GTYPE_A * GTYPE_A * lambda1 / (4.0 * bessel::v1_at_zero().powi(2)),
                fmt_seq(&e_resid)
            ),
        ));

        let second: Vec<f64> = successes
            .iter()
            .map(|(res, _)| bubble::tau_second_order_deviation(res, GTYPE_A, 10.0, 400).unwrap())
            .collect();
        checks.push(check(
            strictly_decreasing(&second),
            format!(
                "sup|gamma(tau - T0) - {GTYPE_A} S0| {} decreasing",
                fmt_seq(&second)
            ),
        ));

        let mass_scaled: Vec<f64> = successes
            .iter()
            .map(|(res, _)| {
                let scales = bubble::scales_for(res).unwrap();
                let mass = bubble::nonlinear_mass(&res.profile, scales.log_rho1).unwrap();
                let g = res.gamma;
                (mass - 4.0 * PI / g - 2.0 * PI * GTYPE_A / (g * g)).abs() * g.powi(3)
            })
            .collect();
        let bound = 3.0 * mass_scaled.first().unwrap().max(1e-2);
        checks.push(check(
            mass_scaled.iter().all(|v| v.is_finite() && *v <= bound),
            format!(
                "mass-law residual * gamma^3 {} bounded (<= {bound:.2e})",
                fmt_seq(&mass_scaled)
            ),
        ));
    }
    checks.push(check(
        elapsed < 60.0,
        format!("runtime {elapsed:.1}s (< 60s)"),
    ));
    combine(6, "g-type family laws (a = 2)", checks)
}

/// Criterion 7: profile-level PDE residual on every accepted profile,
/// measured in the log-radius frame (the r^2-weighted form of
/// u'' + u'/r + f(u); the unweighted comparison is not finite-precision
/// checkable at the inner end of the window).
fn criterion_7(all: &[(&str, &ShootingResult)]) -> CriterionOutcome {
    let mut checks = Vec::new();
    let mut worst_ratio: f64 = 0.0;
    let mut worst_label = "";
    let mut all_ok = true;
    for (label, res) in all {
        let scales = bubble::scales_for(res).unwrap();
        let r_lo = 10.0 * scales.log_rho.exp();
        let (max_res, max_rhs) = diagnostics::pde_residual(&res.profile, r_lo, 0.9).unwrap();
        let ratio = max_res / (1e-5 * max_rhs);
        if ratio > worst_ratio {
            worst_ratio = ratio;
            worst_label = label;
        }
        if max_res > 1e-5 * max_rhs {
            all_ok = false;
        }
    }
    checks.push(check(
        all_ok,
        format!(
            "residual <= 1e-5 * max r^2|f| on [10 rho, 0.9] for {} profiles (worst: {worst_label} at {:.2}% of bound)",
            all.len(),
            100.0 * worst_ratio
        ),
    ));
    combine(7, "profile-level PDE residual", checks)
}

/// Criterion 8: a second full pass over the three sweeps emits byte-identical
/// CSV tables.
fn criterion_8(tols: &Tolerances, first: (&str, &str, &str)) -> CriterionOutcome {
    let rerun_t1 = sweep::sweep_csv(&sweep::run_sweep(
        &Problem::TheoremOne { l: 1.0 },
        &T1_GAMMAS,
        tols,
    ));
    let rerun_nodal = sweep::sweep_csv(&sweep::run_sweep(
        &Problem::Nodal { l: 1.0, k: 2 },
        &NODAL_GAMMAS,
        tols,
    ));
    let rerun_gtype = sweep::sweep_csv(&sweep::run_sweep(
        &Problem::GType { a: GTYPE_A },
        &GTYPE_GAMMAS,
        tols,
    ));
    let same =
        rerun_t1 == first.0 && rerun_nodal == first.1 && rerun_gtype == first.2;
    let mut detail = String::new();
    write!(
        detail,
        "re-ran all three sweeps: byte-identical = {same} ({} bytes total)",
        rerun_t1.len() + rerun_nodal.len() + rerun_gtype.len()
    )
    .unwrap();
    combine(8, "determinism of sweep CSVs", vec![check(same, detail)])
}

/// Run the full acceptance battery.
pub fn run_all(tols: &Tolerances) -> AcceptanceRun {
    let mut outcomes = Vec::new();
    outcomes.push(criterion_1());
    outcomes.push(criterion_2());

    let t = Instant::now();
    let t1_rows = sweep::run_sweep(&Problem::TheoremOne { l: 1.0 }, &T1_GAMMAS, tols);
    let t1_elapsed = t.elapsed().as_secs_f64();
    outcomes.push(criterion_3(&t1_rows, tols, t1_elapsed));
    outcomes.push(criterion_4(&t1_rows));

    let t = Instant::now();
    let nodal_rows = sweep::run_sweep(&Problem::Nodal { l: 1.0, k: 2 }, &NODAL_GAMMAS, tols);
    let nodal_elapsed = t.elapsed().as_secs_f64();
    outcomes.push(criterion_5(&nodal_rows, nodal_elapsed));

    let t = Instant::now();
    let gtype_rows = sweep::run_sweep(&Problem::GType { a: GTYPE_A }, &GTYPE_GAMMAS, tols);
    let gtype_elapsed = t.elapsed().as_secs_f64();
    outcomes.push(criterion_6(&gtype_rows, tols, gtype_elapsed));

    let mut accepted: Vec<(&str, &ShootingResult)> = Vec::new();
    for (label, rows) in [
        ("t1", &t1_rows),
        ("nodal", &nodal_rows),
        ("gtype", &gtype_rows),
    ] {
        for row in rows.iter() {
            if let Ok((res, _)) = &row.outcome {
                accepted.push((label, res));
            }
        }
    }
    outcomes.push(criterion_7(&accepted));

    let csv_t1 = sweep::sweep_csv(&t1_rows);
    let csv_nodal = sweep::sweep_csv(&nodal_rows);
    let csv_gtype = sweep::sweep_csv(&gtype_rows);
    outcomes.push(criterion_8(
        tols,
        (&csv_t1, &csv_nodal, &csv_gtype),
    ));

    AcceptanceRun {
        outcomes,
        csv_t1,
        csv_nodal,
        csv_gtype,
    }
}

//! Scratch diagnostics probe (temporary).

use mtshoot::bessel;
use mtshoot::diagnostics::{self, Problem};
use mtshoot::nonlinearity::NonlinearitySpec;
use mtshoot::shooting::{self, SolveOptions, TheoremOneConfig};

#[test]
#[ignore]
fn probe_t1() {
    for gamma in [6.0, 8.0, 10.0, 12.0] {
        let cfg = TheoremOneConfig::new(1.0, gamma).unwrap();
        let res = shooting::solve_theorem1(&cfg, &SolveOptions::default()).unwrap();
        let rep = diagnostics::report(&res, &Problem::TheoremOne { l: 1.0 }, 1e-9).unwrap();
        println!(
            "gamma {gamma}: lambda_bar {:.6} log_beta {:.6} beta {:.3e} resid {:.2e} energy {:.6} l2 {:.6} law {:.4} weak {:.3e} inner {:.3e} trace_len {}",
            cfg.lambda_bar,
            res.log_beta(),
            res.beta(),
            res.boundary_residual,
            rep.dirichlet_energy,
            rep.l2_norm,
            rep.beta_law_ratio.unwrap(),
            rep.weak_limit_dev,
            rep.inner_res.unwrap(),
            res.bracket_trace.len(),
        );
        let scan: Vec<String> = res
            .bracket_trace
            .iter()
            .take(12)
            .map(|(lb, r)| format!("({lb:.3},{r:.4})"))
            .collect();
        println!("  scan: {}", scan.join(" "));
    }
}

#[test]
#[ignore]
fn probe_nodal_base() {
    // where does the 2nd zero of the continued base profile sit vs r_2?
    let alpha2 = bessel::eigen_data(2).unwrap().alpha_k;
    let r2 = bessel::eigen_data(2).unwrap().r_k;
    let l_tilde = 1.0 / alpha2;
    println!("l_tilde {l_tilde:.6}, r2 {r2:.6}");
    for gamma in [10.0, 12.0, 14.0, 16.0, 18.0, 20.0, 22.0, 24.0] {
        let cfg = match TheoremOneConfig::new(l_tilde, gamma) {
            Ok(c) => c,
            Err(e) => {
                println!("gamma {gamma}: {e}");
                continue;
            }
        };
        let res = match shooting::solve_theorem1(&cfg, &SolveOptions::default()) {
            Ok(r) => r,
            Err(e) => {
                println!("gamma {gamma}: solve failed {e}");
                continue;
            }
        };
        let profile = mtshoot::radial_ode::integrate(&res.spec, gamma, 4.0, 1e-12).unwrap();
        let zeros: Vec<f64> = profile.zeros.iter().map(|z| z.r).collect();
        println!(
            "gamma {gamma}: lambda_tilde {:.4} zeros {:?}",
            cfg.lambda_bar, zeros
        );
    }
}

#[test]
#[ignore]
fn probe_beta_law_large_gamma() {
    for gamma in [14.0, 16.0, 20.0, 24.0] {
        let cfg = TheoremOneConfig::new(1.0, gamma).unwrap();
        let res = shooting::solve_theorem1(&cfg, &SolveOptions::default()).unwrap();
        let rep = diagnostics::report(&res, &Problem::TheoremOne { l: 1.0 }, 1e-9).unwrap();
        println!(
            "gamma {gamma}: law_ratio {:.4} energy {:.5} l2 {:.5}",
            rep.beta_law_ratio.unwrap(),
            rep.dirichlet_energy,
            rep.l2_norm
        );
    }
}

#[test]
#[ignore]
fn probe_r_of_beta_monotone() {
    // is R(log beta) monotone across a wide range (branch uniqueness)?
    for gamma in [6.0, 12.0] {
        let cfg = TheoremOneConfig::new(1.0, gamma).unwrap();
        println!("gamma {gamma} lambda_bar {:.4}:", cfg.lambda_bar);
        let mut lb = -14.0;
        let mut prev = f64::INFINITY;
        let mut monotone = true;
        while lb <= 2.0 {
            let r = shooting::first_zero_of_beta(cfg.lambda_bar, gamma, lb, 1e-11).unwrap();
            if r > prev + 1e-12 {
                monotone = false;
                println!("  NOT monotone at log_beta {lb}: R {r} > prev {prev}");
            }
            if (r - 1.0).abs() < 0.3 {
                println!("  log_beta {lb:.2}: R {r:.6}");
            }
            prev = r;
            lb += 0.5;
        }
        println!("  monotone decreasing: {monotone}");
    }
}

#[test]
#[ignore]
fn probe_gtype_tol() {
    let a = 2.0;
    let spec = NonlinearitySpec::gtype_default(a, 0.0);
    for tol in [1e-10, 1e-11, 1e-12] {
        let r = shooting::solve_gtype(
            a,
            6.0,
            spec,
            &SolveOptions {
                ode_tol: tol,
                ..SolveOptions::default()
            },
        )
        .unwrap();
        println!("tol {tol:e}: beta {:.15}", r.beta());
    }
}

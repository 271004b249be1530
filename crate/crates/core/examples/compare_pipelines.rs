//! Numeric against symbolic base parameters on the suspension.
use inertial_base::dynamics::assemble_observation;
use inertial_base::invariance::{random_params, reduced_model_residual};
use inertial_base::numeric_base::base_parameters_of;
use inertial_base::symbolic::run_plan;
use inertial_base::{sla, PrecisionLevel};

fn main() -> Result<(), inertial_base::Error> {
    let digits: u32 = std::env::args().nth(1).map_or(30, |s| s.parse().expect("digits"));
    let level = PrecisionLevel::decimal(digits)?;
    let f = sla::sla_defaults();
    let ev = run_plan(&f.mechanism, &f.plan)?.evaluate(f.mechanism.geometry(), level)?;
    let w = assemble_observation(&f.mechanism, &f.trajectory, level)?.w;
    let num = base_parameters_of(&w, level, ev.kept.len(), true, Some(&ev.eliminated))?;
    let diff = ev.max_beta_diff(&num)?;
    let res = reduced_model_residual(&w, &num, &random_params(70, 20, 1, level));
    let s = inertial_base::svd::svd(&w, level)?.sigma_f64();
    println!("digits {digits}: max |beta_num - beta_sym| {:.3e}", diff.to_f64());
    println!("reduced-model residual {res:.3e}");
    println!("sigma1/sigma41 {:.3e}, V22 condition {:.1}", s[0] / s[40], num.v22_condition);
    Ok(())
}

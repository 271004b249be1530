//! What double precision makes of the suspension: no clear gap in the
//! spectrum, and a forced rank gives a badly conditioned grouping.
use inertial_base::dynamics::assemble_observation;
use inertial_base::model::param_label;
use inertial_base::numeric_base::{base_parameters, DpDiagnostic};
use inertial_base::svd::svd;
use inertial_base::{sla, PrecisionLevel};

fn main() -> Result<(), inertial_base::Error> {
    let level = PrecisionLevel::DoubleNative;
    let f = sla::sla_defaults();
    let s = svd(&assemble_observation(&f.mechanism, &f.trajectory, level)?.w, level)?;
    let dp = DpDiagnostic::from_sigma(s.sigma_f64(), 1e-10);
    println!("rank at relative tolerance 1e-10: {}", dp.rank);
    for k in 36..46 {
        println!("sigma{k:02}/sigma{:02} = {:.3e}", k + 1, dp.gap_after(k));
    }
    let sol = base_parameters(&s, sla::BASE_COUNT, true, None)?;
    let (mut big, mut at) = (0.0, (0, 0));
    for i in 0..sol.beta.rows() {
        for j in 0..sol.beta.cols() {
            let v = sol.beta[(i, j)].to_f64().abs();
            if v > big {
                (big, at) = (v, (i, j));
            }
        }
    }
    println!(
        "forced rank 41: V22 condition {:.3e}, largest |beta| {big:.3e} ({} on {})",
        sol.v22_condition,
        param_label(sol.partition.eliminated[at.1]),
        param_label(sol.partition.kept[at.0])
    );
    Ok(())
}

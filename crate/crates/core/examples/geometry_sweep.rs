//! The symbolic base parameters are rational functions of the geometry, so
//! one plan serves every geometry: here the lower-arm hinge offset is varied.
use inertial_base::model::parse_param_label;
use inertial_base::symbolic::run_plan;
use inertial_base::{sla, PrecisionLevel};

fn main() -> Result<(), inertial_base::Error> {
    let f = sla::sla_defaults();
    let sol = run_plan(&f.mechanism, &f.plan)?;
    let (iyy1, m7) = (parse_param_label("Iyy1", 7)?, parse_param_label("m7", 7)?);
    let mut g = f.mechanism.geometry().clone();
    for d13 in ["0.05", "0.082", "0.11"] {
        g.set("D13", d13)?;
        let ev = sol.evaluate(&g, PrecisionLevel::DoubleNative)?;
        let col = |k| ev.eliminated.iter().position(|&e| e == k).expect("eliminated");
        println!("D13 = {d13}: b01 = mx1 {:+.7}*Iyy1 {:+.7}*m7", ev.beta[(0, col(iyy1))].to_f64(), ev.beta[(0, col(m7))].to_f64());
    }
    Ok(())
}

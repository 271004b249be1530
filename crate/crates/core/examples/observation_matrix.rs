//! Builds the observation matrix of the suspension along the default
//! excitation and prints its shape and the largest column of each body.
use inertial_base::dynamics::assemble_observation;
use inertial_base::model::param_label;
use inertial_base::{sla, PrecisionLevel};

fn main() -> Result<(), inertial_base::Error> {
    let digits: PrecisionLevel = std::env::args().nth(1).unwrap_or("native".into()).parse()?;
    let f = sla::sla_defaults();
    let obs = assemble_observation(&f.mechanism, &f.trajectory, digits)?;
    println!("W is {} x {} at {digits} digits", obs.w.rows(), obs.w.cols());
    for b in 0..f.mechanism.n_bodies() {
        let (j, n) = (10 * b..10 * b + 10)
            .map(|j| (j, obs.w.col(j).iter().map(|x| x.abs().to_f64()).fold(0.0, f64::max)))
            .fold((0, 0.0), |a, c| if c.1 > a.1 { c } else { a });
        println!("body {}: largest column {} ({n:.3e})", b + 1, param_label(j));
    }
    Ok(())
}

//! The transfer plan changes the parameters but not the motion: torques and
//! the Lagrangian (up to a constant) agree for random states and parameters.
use inertial_base::dynamics::Dynamics;
use inertial_base::invariance::{kinetics_preservation, random_params, random_states};
use inertial_base::symbolic::run_plan;
use inertial_base::{sla, PrecisionLevel};

fn main() -> Result<(), inertial_base::Error> {
    let level = PrecisionLevel::DoubleNative;
    let f = sla::sla_defaults();
    let sol = run_plan(&f.mechanism, &f.plan)?;
    let d = Dynamics::new(&f.mechanism, level)?;
    let states = random_states(&d, &f.mechanism, &f.trajectory, 20, 1)?;
    let r = kinetics_preservation(&d, &f.mechanism, &sol, &states, &random_params(70, 10, 2, level))?;
    println!("max relative torque difference {:.3e}", r.torque);
    println!("max spread of L(phi) - L(phi') {:.3e}", r.lagrangian);
    Ok(())
}

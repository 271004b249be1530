//! Base parameters from the SVD at 30 digits, with the regrouped parameters
//! pinned to those of the transfer plan so the table lines up with it.
use inertial_base::dynamics::assemble_observation;
use inertial_base::numeric_base::base_parameters_of;
use inertial_base::{sla, PrecisionLevel};

fn main() -> Result<(), inertial_base::Error> {
    let level = PrecisionLevel::Decimal(30);
    let f = sla::sla_defaults();
    let w = assemble_observation(&f.mechanism, &f.trajectory, level)?.w;
    let sol = base_parameters_of(&w, level, sla::BASE_COUNT, false, Some(&f.pin_indices()))?;
    println!("V22 condition {:.3e}", sol.v22_condition);
    for line in sol.render(8) {
        println!("{line}");
    }
    Ok(())
}

//! Certifies the rank of the suspension's observation matrix by rebuilding it
//! at 30 and 60 digits and checking that the leading singular values agree
//! while the trailing ones collapse.
use inertial_base::dynamics::assemble_observation;
use inertial_base::numeric_base::certify_rank;
use inertial_base::{sla, PrecisionLevel};

fn main() -> Result<(), inertial_base::Error> {
    let f = sla::sla_defaults();
    let ladder = [PrecisionLevel::Decimal(30), PrecisionLevel::Decimal(60)];
    let (report, _) = certify_rank(|l| assemble_observation(&f.mechanism, &f.trajectory, l).map(|o| o.w), &ladder)?;
    println!("{:>3} {:>14} {:>14}", "k", "30 digits", "60 digits");
    for k in 0..report.levels[0].sigma.len() {
        println!("{:3} {:14.6e} {:14.6e}", k + 1, report.levels[0].sigma[k].to_f64(), report.levels[1].sigma[k].to_f64());
    }
    println!("certified rank {:?}, drift {:.2e}", report.rank, report.drift);
    Ok(())
}

//! Runs the suspension transfer plan and prints the base parameters with the
//! amount moved at every step.
use inertial_base::sla;
use inertial_base::symbolic::run_plan;

fn main() -> Result<(), inertial_base::Error> {
    let f = sla::sla_defaults();
    let sol = run_plan(&f.mechanism, &f.plan)?;
    println!("struck:      {:?}", sol.struck.iter().map(|&i| inertial_base::model::param_label(i)).collect::<Vec<_>>());
    for r in &sol.log {
        println!("step {:2} {:10} {} -> {}  {}", r.step, r.kind, r.donor, r.acceptor, r.amounts.iter().map(|a| a.render()).collect::<Vec<_>>().join("; "));
    }
    println!();
    for line in sol.render() {
        println!("{line}");
    }
    Ok(())
}

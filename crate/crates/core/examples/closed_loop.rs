//! Position, velocity and acceleration of a closed-loop mechanism from its
//! independent coordinate.
use std::path::Path;

use inertial_base::kinematics::Kinematics;
use inertial_base::{load_mechanism, GeomParams, PScalar, PrecisionLevel};

fn main() -> Result<(), inertial_base::Error> {
    let level = PrecisionLevel::Decimal(40);
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/fourbar");
    let m = load_mechanism(&path, &GeomParams::default())?;
    let k = Kinematics::new(&m, level)?;
    let mut guess = m.initial_q(level)?;
    let s = |v: f64| vec![PScalar::from_f64(v, level)];
    for step in 0..6 {
        let q1 = 0.2 * step as f64;
        let st = k.solve_state(&s(q1), &s(1.0), &s(0.0), &guess)?;
        let res = inertial_base::kinematics::inf_norm(&k.residual(&st.q), level);
        let labels: Vec<String> = (0..st.q.len()).map(|c| m.coord_label(c)).collect();
        println!("q = {:.4?} {labels:?}, residual {:.1e}", st.q.iter().map(PScalar::to_f64).collect::<Vec<_>>(), res.to_f64());
        guess = st.q;
    }
    Ok(())
}

//! Randomized checks that a reparametrization leaves the dynamics unchanged.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dynamics::{Dynamics, TrajectoryConfig};
use crate::kinematics::State;
use crate::linalg::Matrix;
use crate::numeric_base::BaseParamSolution;
use crate::symbolic::SymbolicSolution;
use crate::{Error, Mechanism, PScalar, ParamVector, PrecisionLevel};

/// Valid states: positions taken at random times along `traj`, rates and
/// accelerations drawn uniformly.
pub fn random_states(
    dynamics: &Dynamics,
    mech: &Mechanism,
    traj: &TrajectoryConfig,
    count: usize,
    seed: u64,
) -> Result<Vec<State>, Error> {
    let level = dynamics.level();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let period = traj.period(level)?.to_f64();
    let guess = mech.initial_q(level)?;
    let mut out = Vec::with_capacity(count);
    for j in 0..count {
        let t = PScalar::from_f64(rng.gen_range(0.0..period), level);
        let (q, _, _) = traj.eval(&t, level)?;
        let qd: Vec<PScalar> = q.iter().map(|_| PScalar::from_f64(rng.gen_range(-3.0..3.0), level)).collect();
        let qdd: Vec<PScalar> = q.iter().map(|_| PScalar::from_f64(rng.gen_range(-20.0..20.0), level)).collect();
        let s = dynamics
            .kinematics()
            .solve_state(&q, &qd, &qdd, &guess)
            .map_err(|e| Error::Kinematics { sample: j, source: Box::new(e) })?;
        out.push(s);
    }
    Ok(out)
}

/// Parameter vectors with entries uniform in [-1, 1].
pub fn random_params(n_params: usize, count: usize, seed: u64, level: PrecisionLevel) -> Vec<ParamVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| ParamVector::from_f64(&(0..n_params).map(|_| rng.gen_range(-1.0..1.0)).collect::<Vec<_>>(), level))
        .collect()
}

#[derive(Clone, Debug)]
pub struct KineticsReport {
    pub states: usize,
    pub params: usize,
    /// Max of |τ(φ) − τ(φ′)| / max(|τ(φ)|, 1) over all generalized forces.
    pub torque: f64,
    /// Max over φ of the spread of L(φ) − L(φ′) across states, relative to max |L(φ)|.
    /// The difference may be a nonzero constant (potential of a fixed point).
    pub lagrangian: f64,
}

impl KineticsReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "states": self.states,
            "params": self.params,
            "max_torque_rel_diff": format!("{:e}", self.torque),
            "max_lagrangian_spread": format!("{:e}", self.lagrangian),
        })
    }
}

/// Compares inverse dynamics and the Lagrangian under φ and the plan-transformed φ′.
pub fn kinetics_preservation(
    dynamics: &Dynamics,
    mech: &Mechanism,
    sol: &SymbolicSolution,
    states: &[State],
    params: &[ParamVector],
) -> Result<KineticsReport, Error> {
    let mut torque = 0f64;
    let mut lagrangian = 0f64;
    for phi in params {
        let phi2 = sol.transform(phi, mech.geometry())?;
        let mut dl = Vec::with_capacity(states.len());
        let mut lmax = 0f64;
        for s in states {
            let a = dynamics.inverse_dynamics(s, phi)?;
            let b = dynamics.inverse_dynamics(s, &phi2)?;
            for (x, y) in a.iter().zip(&b) {
                let r = (x - y).abs().to_f64() / x.abs().to_f64().max(1.0);
                torque = torque.max(r);
            }
            let l1 = dynamics.lagrangian(s, phi);
            let l2 = dynamics.lagrangian(s, &phi2);
            lmax = lmax.max(l1.abs().to_f64());
            dl.push(l1 - l2);
        }
        if let Some(first) = dl.first() {
            let spread = dl.iter().map(|d| (d - first).abs().to_f64()).fold(0.0, f64::max);
            lagrangian = lagrangian.max(spread / lmax.max(1.0));
        }
    }
    Ok(KineticsReport { states: states.len(), params: params.len(), torque, lagrangian })
}

/// Max over φ of ‖W·φ − W_b·φ_b‖∞ / (‖W‖∞·‖φ‖∞).
pub fn reduced_model_residual(w: &Matrix, sol: &BaseParamSolution, params: &[ParamVector]) -> f64 {
    let wb = sol.reduced_matrix(w);
    let wn = w.norm_inf().to_f64();
    let mut worst = 0f64;
    for phi in params {
        let full = w.mul_vec(&phi.0);
        let red = wb.mul_vec(&sol.reduce(&phi.0));
        let num = full.iter().zip(&red).map(|(a, b)| (a - b).abs().to_f64()).fold(0.0, f64::max);
        let pn = phi.0.iter().map(|x| x.abs().to_f64()).fold(0.0, f64::max);
        worst = worst.max(num / (wn * pn).max(f64::MIN_POSITIVE));
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::{run_plan, Plan};
    use crate::GeomParams;
    use std::path::Path;

    #[test]
    fn pendulum_plan_preserves_kinetics() {
        let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/pendulum");
        let m = crate::load_mechanism(&dir, &GeomParams::default()).unwrap();
        let sol = run_plan(&m, &Plan::from_path(&dir).unwrap()).unwrap();
        let lv = PrecisionLevel::DoubleNative;
        let d = Dynamics::new(&m, lv).unwrap();
        let traj = TrajectoryConfig::default_for(m.dof());
        let states = random_states(&d, &m, &traj, 5, 3).unwrap();
        let params = random_params(m.n_params(), 4, 4, lv);
        let r = kinetics_preservation(&d, &m, &sol, &states, &params).unwrap();
        assert!(r.torque < 1e-12, "{}", r.torque);
        assert!(r.lagrangian < 1e-12, "{}", r.lagrangian);
    }
}

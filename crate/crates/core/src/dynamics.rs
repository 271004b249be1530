//! Inverse dynamics, Lagrangian, regressor rows and the observation matrix.
//!
//! Inertia is taken about each body's reference point and first moments are
//! `m·r` in body coordinates, so every quantity here is linear in the
//! parameter vector. Generalized forces on the independent coordinates are the
//! tree wrenches projected on partial velocities built from the orthogonal
//! complement of the constraint Jacobian.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::expr::Expr;
use crate::kinematics::{BodyState, Kinematics, State};
use crate::linalg::{Mat3, Matrix, Vec3};
use crate::model::{GeomParams, InertialParams, Mechanism, ParamVector, PARAMS_PER_BODY};
use crate::precision::{PScalar, PrecisionLevel};
use crate::Error;

/// Force and moment about the body reference point, ground coordinates.
#[derive(Clone, Debug)]
pub struct Wrench {
    pub force: Vec3,
    pub moment: Vec3,
}

/// Partial velocities of one body for one independent coordinate.
#[derive(Clone, Debug)]
struct Partial {
    vel: Vec3,
    omega: Vec3,
}

/// d'Alembert wrench required to produce the body's motion under gravity `g`.
pub fn body_wrench(b: &BodyState, p: &InertialParams, g: &Vec3) -> Wrench {
    let c = b.rot.mul_vec(&p.first_moment);
    let io = b.rot.mul(&p.inertia).mul(&b.rot.transpose());
    let ag = b.acc.sub(g);
    let force = ag.scale(&p.m).add(&b.alpha.cross(&c)).add(&b.omega.cross(&b.omega.cross(&c)));
    let moment = io.mul_vec(&b.alpha).add(&b.omega.cross(&io.mul_vec(&b.omega))).add(&c.cross(&ag));
    Wrench { force, moment }
}

fn unit_params(k: usize, level: PrecisionLevel) -> InertialParams {
    let mut v = vec![PScalar::zero(level); PARAMS_PER_BODY];
    v[k] = PScalar::one(level);
    InertialParams::from_slice(&v)
}

/// Dynamics of a mechanism evaluated at one precision level.
#[derive(Clone, Debug)]
pub struct Dynamics {
    kin: Kinematics,
    gravity: Vec3,
    n_bodies: usize,
    units: Vec<InertialParams>,
}

impl Dynamics {
    pub fn new(mech: &Mechanism, level: PrecisionLevel) -> Result<Self, Error> {
        Ok(Dynamics {
            kin: Kinematics::new(mech, level)?,
            gravity: mech.gravity(level)?,
            n_bodies: mech.n_bodies(),
            units: (0..PARAMS_PER_BODY).map(|k| unit_params(k, level)).collect(),
        })
    }

    /// Same mechanism with gravity replaced.
    pub fn with_gravity(mut self, g: Vec3) -> Self {
        self.gravity = g;
        self
    }

    pub fn kinematics(&self) -> &Kinematics {
        &self.kin
    }

    pub fn level(&self) -> PrecisionLevel {
        self.kin.level()
    }

    pub fn dof(&self) -> usize {
        self.kin.independent().len()
    }

    pub fn n_params(&self) -> usize {
        PARAMS_PER_BODY * self.n_bodies
    }

    /// `partials[i][b]`: motion of body `b` per unit rate of independent coordinate `i`.
    fn partials(&self, q: &[PScalar]) -> Result<Vec<Vec<Partial>>, Error> {
        let r = self.kin.orthogonal_complement(q)?;
        let z = vec![PScalar::zero(self.level()); self.kin.n_coords()];
        Ok((0..self.dof())
            .map(|i| {
                let col = r.col(i);
                self.kin
                    .bodies(q, &col, &z)
                    .into_iter()
                    .map(|b| Partial { vel: b.vel, omega: b.omega })
                    .collect()
            })
            .collect())
    }

    fn project(&self, partials: &[Vec<Partial>], body: usize, w: &Wrench) -> Vec<PScalar> {
        partials
            .iter()
            .map(|p| w.force.dot(&p[body].vel) + w.moment.dot(&p[body].omega))
            .collect()
    }

    /// Generalized forces on the independent coordinates.
    pub fn inverse_dynamics(&self, state: &State, phi: &ParamVector) -> Result<Vec<PScalar>, Error> {
        assert_eq!(phi.len(), self.n_params(), "parameter vector length");
        let bodies = self.kin.bodies(&state.q, &state.qd, &state.qdd);
        let partials = self.partials(&state.q)?;
        let mut tau = vec![PScalar::zero(self.level()); self.dof()];
        for b in 1..=self.n_bodies {
            let w = body_wrench(&bodies[b], &phi.body(b), &self.gravity);
            for (t, x) in tau.iter_mut().zip(self.project(&partials, b, &w)) {
                *t += x;
            }
        }
        Ok(tau)
    }

    /// `dof × 10·n_bodies` block whose column `k` is the response to the unit parameter `e_k`.
    pub fn regressor_row(&self, state: &State) -> Result<Matrix, Error> {
        let bodies = self.kin.bodies(&state.q, &state.qd, &state.qdd);
        let partials = self.partials(&state.q)?;
        let mut k = Matrix::zeros(self.dof(), self.n_params(), self.level());
        for b in 1..=self.n_bodies {
            for (j, unit) in self.units.iter().enumerate() {
                let w = body_wrench(&bodies[b], unit, &self.gravity);
                for (i, x) in self.project(&partials, b, &w).into_iter().enumerate() {
                    k[(i, PARAMS_PER_BODY * (b - 1) + j)] = x;
                }
            }
        }
        Ok(k)
    }

    /// Kinetic minus potential energy (accelerations ignored).
    pub fn lagrangian(&self, state: &State, phi: &ParamVector) -> PScalar {
        let level = self.level();
        let z = vec![PScalar::zero(level); self.kin.n_coords()];
        let bodies = self.kin.bodies(&state.q, &state.qd, &z);
        let half = PScalar::from_f64(0.5, level);
        let mut l = PScalar::zero(level);
        for b in 1..=self.n_bodies {
            let (s, p) = (&bodies[b], phi.body(b));
            let c = s.rot.mul_vec(&p.first_moment);
            let io: Mat3 = s.rot.mul(&p.inertia).mul(&s.rot.transpose());
            l += half.clone() * &p.m * s.vel.dot(&s.vel);
            l += s.vel.dot(&s.omega.cross(&c));
            l += half.clone() * s.omega.dot(&io.mul_vec(&s.omega));
            l += self.gravity.dot(&s.pos.scale(&p.m).add(&c));
        }
        l
    }

    /// Observation matrix over a trajectory, positions continued sample to sample.
    pub fn assemble_observation(&self, traj: &TrajectoryConfig, guess: &[PScalar]) -> Result<ObservationMatrix, Error> {
        let level = self.level();
        let n = traj.samples;
        let mut states = Vec::with_capacity(n);
        let mut seed = guess.to_vec();
        for j in 0..n {
            let t = traj.sample_time(j, level)?;
            let (q, qd, qdd) = traj.eval(&t, level)?;
            if q.len() != self.dof() {
                return Err(Error::Validation(format!(
                    "trajectory drives {} coordinates, mechanism has {} degrees of freedom",
                    q.len(),
                    self.dof()
                )));
            }
            let state = self
                .kin
                .solve_state(&q, &qd, &qdd, &seed)
                .map_err(|e| Error::Kinematics { sample: j, source: Box::new(e) })?;
            seed = state.q.clone();
            states.push(state);
        }
        let blocks = states
            .par_iter()
            .enumerate()
            .map(|(j, s)| self.regressor_row(s).map_err(|e| Error::Kinematics { sample: j, source: Box::new(e) }))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ObservationMatrix { w: Matrix::vstack(&blocks), states, level })
    }
}

/// Stacked regressor rows with the states they were evaluated at.
#[derive(Clone, Debug)]
pub struct ObservationMatrix {
    pub w: Matrix,
    pub states: Vec<State>,
    pub level: PrecisionLevel,
}

/// One term `amplitude · sin(frequency · t)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Harmonic {
    pub amplitude: String,
    pub frequency: String,
}

impl Harmonic {
    pub fn new(amplitude: &str, frequency: &str) -> Self {
        Harmonic { amplitude: amplitude.into(), frequency: frequency.into() }
    }
}

/// Finite sine series per independent coordinate, sampled uniformly on `[0, T)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrajectoryConfig {
    pub coords: Vec<Vec<Harmonic>>,
    pub period: String,
    pub samples: usize,
}

impl TrajectoryConfig {
    /// Two-coordinate excitation used for the suspension; further coordinates get their own incommensurate series.
    pub fn default_for(dof: usize) -> Self {
        let mut coords = vec![
            vec![Harmonic::new("0.5", "3.0"), Harmonic::new("0.1", "10.0")],
            vec![Harmonic::new("0.3", "sqrt(2)"), Harmonic::new("0.7", "sqrt(17)")],
        ];
        for k in 2..dof {
            coords.push(vec![
                Harmonic::new("0.4", &format!("sqrt({})", 3 * k + 2)),
                Harmonic::new("0.2", &format!("{}", k + 5)),
            ]);
        }
        coords.truncate(dof);
        TrajectoryConfig { coords, period: "2*pi".into(), samples: 100 }
    }

    fn scalar(text: &str, level: PrecisionLevel) -> Result<PScalar, Error> {
        Expr::parse(text)?.eval(&GeomParams::default(), level)
    }

    pub fn period(&self, level: PrecisionLevel) -> Result<PScalar, Error> {
        Self::scalar(&self.period, level)
    }

    /// `t_j = j·T/N`.
    pub fn sample_time(&self, j: usize, level: PrecisionLevel) -> Result<PScalar, Error> {
        Ok(self.period(level)? * PScalar::from_int(j as i64, level) / PScalar::from_int(self.samples as i64, level))
    }

    /// Positions, rates and accelerations of the independent coordinates at `t`.
    pub fn eval(&self, t: &PScalar, level: PrecisionLevel) -> Result<(Vec<PScalar>, Vec<PScalar>, Vec<PScalar>), Error> {
        let mut q = Vec::with_capacity(self.coords.len());
        let mut qd = Vec::with_capacity(self.coords.len());
        let mut qdd = Vec::with_capacity(self.coords.len());
        for series in &self.coords {
            let (mut x, mut v, mut a) = (PScalar::zero(level), PScalar::zero(level), PScalar::zero(level));
            for h in series {
                let amp = Self::scalar(&h.amplitude, level)?;
                let w = Self::scalar(&h.frequency, level)?;
                let arg = w.clone() * t;
                let (s, c) = (arg.sin(), arg.cos());
                x += amp.clone() * &s;
                v += amp.clone() * &w * c;
                a -= amp * w.square() * s;
            }
            q.push(x);
            qd.push(v);
            qdd.push(a);
        }
        Ok((q, qd, qdd))
    }
}

/// Free-function forms of the [`Dynamics`] methods.
pub fn inverse_dynamics(mech: &Mechanism, state: &State, phi: &ParamVector, level: PrecisionLevel) -> Result<Vec<PScalar>, Error> {
    Dynamics::new(mech, level)?.inverse_dynamics(state, phi)
}

pub fn lagrangian(mech: &Mechanism, state: &State, phi: &ParamVector, level: PrecisionLevel) -> Result<PScalar, Error> {
    Ok(Dynamics::new(mech, level)?.lagrangian(state, phi))
}

pub fn regressor_row(mech: &Mechanism, state: &State, level: PrecisionLevel) -> Result<Matrix, Error> {
    Dynamics::new(mech, level)?.regressor_row(state)
}

pub fn trajectory_eval(config: &TrajectoryConfig, t: &PScalar) -> Result<(Vec<PScalar>, Vec<PScalar>, Vec<PScalar>), Error> {
    config.eval(t, t.level())
}

pub fn assemble_observation(mech: &Mechanism, traj: &TrajectoryConfig, level: PrecisionLevel) -> Result<ObservationMatrix, Error> {
    let dynamics = Dynamics::new(mech, level)?;
    dynamics.assemble_observation(traj, &mech.initial_q(level)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::load_mechanism;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const DP: PrecisionLevel = PrecisionLevel::DoubleNative;

    fn fixture(name: &str) -> Mechanism {
        let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
        load_mechanism(&path, &GeomParams::default()).unwrap()
    }

    fn sv(v: &[f64], level: PrecisionLevel) -> Vec<PScalar> {
        v.iter().map(|&x| PScalar::from_f64(x, level)).collect()
    }

    fn state(q: &[f64], qd: &[f64], qdd: &[f64]) -> State {
        State { q: sv(q, DP), qd: sv(qd, DP), qdd: sv(qdd, DP) }
    }

    fn random_phi(rng: &mut ChaCha8Rng, n: usize, level: PrecisionLevel) -> ParamVector {
        ParamVector::from_f64(&(0..n).map(|_| rng.gen_range(-1.0..1.0)).collect::<Vec<_>>(), level)
    }

    #[test]
    fn pendulum_closed_form() {
        let m = fixture("pendulum");
        let d = Dynamics::new(&m, DP).unwrap();
        // point mass 2 kg at local (0.7, 0, 0.1)
        let (mass, x, z) = (2.0, 0.7, 0.1);
        let iyy = mass * (x * x + z * z);
        let phi = ParamVector::from_f64(&[mass, mass * x, 0.0, mass * z, mass * z * z, 0.0, -mass * x * z, iyy, 0.0, mass * x * x], DP);
        for &(q, qd, qdd) in &[(0.0, 0.0, 0.0), (0.3, 1.2, -0.7), (-1.1, -2.0, 3.0)] {
            let tau = d.inverse_dynamics(&state(&[q], &[qd], &[qdd]), &phi).unwrap()[0].to_f64();
            let expect = iyy * qdd - 9.81 * (mass * x * f64::cos(q) + mass * z * f64::sin(q));
            assert!((tau - expect).abs() < 1e-12, "{tau} vs {expect}");
            let l = d.lagrangian(&state(&[q], &[qd], &[0.0]), &phi).to_f64();
            let expect_l = 0.5 * iyy * qd * qd - 9.81 * (-mass * x * f64::sin(q) + mass * z * f64::cos(q));
            assert!((l - expect_l).abs() < 1e-12);
        }
    }

    #[test]
    fn pendulum_regressor_columns() {
        let m = fixture("pendulum");
        let d = Dynamics::new(&m, DP).unwrap();
        let k = d.regressor_row(&state(&[0.4], &[1.5], &[-0.8])).unwrap();
        let nonzero: Vec<usize> = (0..10).filter(|&j| k[(0, j)].to_f64() != 0.0).collect();
        assert_eq!(nonzero, [1, 3, 7]);
    }

    #[test]
    fn zero_parameters_and_rest() {
        let m = fixture("sla");
        let d = Dynamics::new(&m, DP).unwrap();
        let q0 = m.initial_q(DP).unwrap();
        let rest = d.kinematics().solve_state(&sv(&[0.2, 0.1], DP), &sv(&[0.0, 0.0], DP), &sv(&[0.0, 0.0], DP), &q0).unwrap();
        let tau = d.inverse_dynamics(&rest, &ParamVector::zeros(7, DP)).unwrap();
        assert!(tau.iter().all(PScalar::is_zero));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let no_g = d.clone().with_gravity(Vec3::zero(DP));
        let tau = no_g.inverse_dynamics(&rest, &random_phi(&mut rng, 70, DP)).unwrap();
        assert!(tau.iter().all(|t| t.to_f64().abs() < 1e-14));
    }

    #[test]
    fn regressor_is_exactly_linear() {
        let m = fixture("sla");
        let lvl = PrecisionLevel::Decimal(30);
        let d = Dynamics::new(&m, lvl).unwrap();
        let q0 = m.initial_q(lvl).unwrap();
        let st = d.kinematics().solve_state(&sv(&[0.3, -0.5], lvl), &sv(&[1.1, 2.0], lvl), &sv(&[-3.0, 0.5], lvl), &q0).unwrap();
        let k = d.regressor_row(&st).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let phi = random_phi(&mut rng, 70, lvl);
            let tau = d.inverse_dynamics(&st, &phi).unwrap();
            let kphi = k.mul_vec(&phi.0);
            for (a, b) in tau.iter().zip(&kphi) {
                assert!((a.clone() - b).abs().to_f64() <= 1e-23);
            }
        }
    }

    /// d/dt ∂L/∂q̇ − ∂L/∂q by finite differences against inverse dynamics.
    fn lagrange_check(name: &str) {
        let m = fixture(name);
        let d = Dynamics::new(&m, DP).unwrap();
        let n = d.dof();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let phi = random_phi(&mut rng, m.n_params(), DP);
        let q: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let qd: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let qdd: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let l = |q: &[f64], qd: &[f64]| d.lagrangian(&state(q, qd, &vec![0.0; n]), &phi).to_f64();
        // L is quadratic in the rates, so a unit central step is exact
        let dl_dqd = |q: &[f64], qd: &[f64], i: usize| {
            let (mut p, mut m) = (qd.to_vec(), qd.to_vec());
            p[i] += 1.0;
            m[i] -= 1.0;
            (l(q, &p) - l(q, &m)) / 2.0
        };
        let tau = d.inverse_dynamics(&state(&q, &qd, &qdd), &phi).unwrap();
        let h = 1e-4;
        for i in 0..n {
            let at = |t: f64| {
                let qt: Vec<f64> = (0..n).map(|k| q[k] + qd[k] * t + 0.5 * qdd[k] * t * t).collect();
                let vt: Vec<f64> = (0..n).map(|k| qd[k] + qdd[k] * t).collect();
                dl_dqd(&qt, &vt, i)
            };
            let ddt = (at(h) - at(-h)) / (2.0 * h);
            let hq = 1e-6;
            let (mut qp, mut qm) = (q.clone(), q.clone());
            qp[i] += hq;
            qm[i] -= hq;
            let dl_dq = (l(&qp, &qd) - l(&qm, &qd)) / (2.0 * hq);
            let lhs = ddt - dl_dq;
            assert!((lhs - tau[i].to_f64()).abs() < 1e-6, "{name} coordinate {i}: {lhs} vs {}", tau[i]);
        }
    }

    #[test]
    fn lagrange_equations_pendulum() {
        lagrange_check("pendulum");
    }

    #[test]
    fn lagrange_equations_twolink() {
        lagrange_check("twolink");
    }

    #[test]
    fn trajectory_start_and_derivatives() {
        let cfg = TrajectoryConfig::default_for(2);
        let (q, qd, _) = cfg.eval(&PScalar::zero(DP), DP).unwrap();
        assert_eq!((q[0].to_f64(), q[1].to_f64()), (0.0, 0.0));
        assert!((qd[0].to_f64() - 2.5).abs() < 1e-15);
        assert!((qd[1].to_f64() - (0.3 * 2f64.sqrt() + 0.7 * 17f64.sqrt())).abs() < 1e-14);
        let h = 1e-4;
        for &t in &[0.3, 1.7, 5.2] {
            let at = |t: f64| cfg.eval(&PScalar::from_f64(t, DP), DP).unwrap();
            let (qp, qm, (q0, _, a)) = (at(t + h).0, at(t - h).0, at(t));
            for k in 0..2 {
                let fd = (qp[k].to_f64() - 2.0 * q0[k].to_f64() + qm[k].to_f64()) / (h * h);
                assert!((fd - a[k].to_f64()).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn single_sample_observation() {
        let m = fixture("pendulum");
        let mut cfg = TrajectoryConfig::default_for(1);
        cfg.samples = 1;
        let obs = assemble_observation(&m, &cfg, DP).unwrap();
        assert_eq!((obs.w.rows(), obs.w.cols()), (1, 10));
        let k = regressor_row(&m, &obs.states[0], DP).unwrap();
        assert_eq!(obs.w.row(0), k.row(0));
    }

    #[test]
    fn doubling_samples_extends() {
        let m = fixture("fourbar");
        let mut cfg = TrajectoryConfig::default_for(1);
        cfg.samples = 5;
        let a = assemble_observation(&m, &cfg, DP).unwrap();
        cfg.samples = 10;
        cfg.period = "4*pi".into();
        let b = assemble_observation(&m, &cfg, DP).unwrap();
        for i in 0..5 {
            assert_eq!(a.w.row(i), b.w.row(i));
        }
    }
}

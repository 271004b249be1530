//! Position, velocity and acceleration analysis of tree-plus-loop mechanisms.
//!
//! Bodies are placed by a recursive pass over the spanning tree. Each closing
//! joint contributes point-coincidence rows and, for R and U joints, axis
//! perpendicularity rows. Dependent coordinates are resolved by Newton
//! iteration on the residual; velocities and accelerations by linear solves
//! with the dependent block of the constraint Jacobian.

use crate::linalg::{condition_inf, Lu, Mat3, Matrix, Vec3};
use crate::model::{JointKind, Mechanism};
use crate::precision::{PScalar, PrecisionLevel};
use crate::Error;

/// Newton iteration cap.
pub const MAX_NEWTON_ITERATIONS: usize = 200;

/// Full-coordinate state.
#[derive(Clone, Debug, PartialEq)]
pub struct State {
    pub q: Vec<PScalar>,
    pub qd: Vec<PScalar>,
    pub qdd: Vec<PScalar>,
}

/// Placement and motion of one body, all in ground coordinates.
#[derive(Clone, Debug)]
pub struct BodyState {
    pub rot: Mat3,
    pub pos: Vec3,
    pub omega: Vec3,
    pub vel: Vec3,
    pub alpha: Vec3,
    pub acc: Vec3,
}

impl BodyState {
    fn ground(level: PrecisionLevel) -> Self {
        BodyState {
            rot: Mat3::identity(level),
            pos: Vec3::zero(level),
            omega: Vec3::zero(level),
            vel: Vec3::zero(level),
            alpha: Vec3::zero(level),
            acc: Vec3::zero(level),
        }
    }

    /// Position, velocity and acceleration of a point fixed in the body (local coordinates).
    fn point(&self, local: &Vec3) -> [Vec3; 3] {
        let d = self.rot.mul_vec(local);
        let wd = self.omega.cross(&d);
        let p = self.pos.add(&d);
        let v = self.vel.add(&wd);
        let a = self.acc.add(&self.alpha.cross(&d)).add(&self.omega.cross(&wd));
        [p, v, a]
    }

    /// Direction, rate and second derivative of a unit vector fixed in the body.
    fn direction(&self, local: &Vec3) -> [Vec3; 3] {
        let u = self.rot.mul_vec(local);
        let wu = self.omega.cross(&u);
        let a = self.alpha.cross(&u).add(&self.omega.cross(&wu));
        [u, wu, a]
    }
}

#[derive(Clone, Debug)]
struct JointGeom {
    kind: JointKind,
    parent: usize,
    child: usize,
    rp: Vec3,
    rc: Vec3,
    r0: Mat3,
    axes: Vec<Vec3>,
    offset: Option<usize>,
    rows: Vec<usize>,
    /// (vector fixed in parent, vector fixed in child) pairs kept perpendicular.
    perp: Vec<(Vec3, Vec3)>,
}

/// Mechanism geometry evaluated at one precision level.
#[derive(Clone, Debug)]
pub struct Kinematics {
    level: PrecisionLevel,
    n_bodies: usize,
    n_coords: usize,
    tree: Vec<JointGeom>,
    loops: Vec<JointGeom>,
    independent: Vec<usize>,
    dependent: Vec<usize>,
    n_rows: usize,
}

fn unit(level: PrecisionLevel, k: usize) -> Vec3 {
    let mut v = Vec3::zero(level);
    v.0[k] = PScalar::one(level);
    v
}

/// Two unit vectors completing `a` to an orthogonal triad.
fn perpendiculars(a: &Vec3) -> (Vec3, Vec3) {
    let level = a.level();
    let f = a.to_f64();
    let k = (0..3).min_by(|&i, &j| f[i].abs().total_cmp(&f[j].abs())).expect("three entries");
    let b1 = a.cross(&unit(level, k));
    let b1 = b1.scale(&(PScalar::one(level) / b1.norm()));
    let b2 = a.cross(&b1);
    (b1, b2)
}

impl Kinematics {
    pub fn new(mech: &Mechanism, level: PrecisionLevel) -> Result<Self, Error> {
        let geom = |j: &crate::model::Joint| -> Result<JointGeom, Error> {
            let r0 = match &j.rotation {
                Some(r) => mech.eval_mat(r, level)?,
                None => Mat3::identity(level),
            };
            let axes = if j.kind == JointKind::S {
                (0..3).map(|k| unit(level, k)).collect()
            } else {
                j.axes.iter().map(|a| mech.eval_vec(a, level)).collect::<Result<Vec<_>, _>>()?
            };
            let mut perp = Vec::new();
            if !j.in_tree() {
                match j.kind {
                    JointKind::U => perp.push((r0.mul_vec(&axes[0]), axes[1].clone())),
                    JointKind::R => {
                        let (b1, b2) = perpendiculars(&axes[0]);
                        perp.push((r0.mul_vec(&b1), axes[0].clone()));
                        perp.push((r0.mul_vec(&b2), axes[0].clone()));
                    }
                    _ => {}
                }
            }
            Ok(JointGeom {
                kind: j.kind,
                parent: j.parent,
                child: j.child,
                rp: mech.eval_vec(&j.parent_point, level)?,
                rc: mech.eval_vec(&j.child_point, level)?,
                r0,
                axes,
                offset: j.coord_offset,
                rows: if j.in_tree() { Vec::new() } else { j.active_closure_rows() },
                perp,
            })
        };
        let tree = mech.tree_joints().map(geom).collect::<Result<Vec<_>, _>>()?;
        let loops = mech.loop_joints().map(geom).collect::<Result<Vec<_>, _>>()?;
        let n_rows = loops.iter().map(|l| l.rows.len()).sum();
        Ok(Kinematics {
            level,
            n_bodies: mech.n_bodies(),
            n_coords: mech.n_coords(),
            tree,
            loops,
            independent: mech.independent().to_vec(),
            dependent: mech.dependent().to_vec(),
            n_rows,
        })
    }

    pub fn level(&self) -> PrecisionLevel {
        self.level
    }

    pub fn n_coords(&self) -> usize {
        self.n_coords
    }

    /// Number of closure equations.
    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn independent(&self) -> &[usize] {
        &self.independent
    }

    pub fn dependent(&self) -> &[usize] {
        &self.dependent
    }

    /// Newton tolerance on the closure residual.
    pub fn tolerance(&self) -> PScalar {
        match self.level {
            PrecisionLevel::DoubleNative => PScalar::from_f64(1e-10, self.level),
            _ => self.level.tol_scalar(5),
        }
    }

    /// Recursive placement of every body (index 0 is the ground).
    pub fn bodies(&self, q: &[PScalar], qd: &[PScalar], qdd: &[PScalar]) -> Vec<BodyState> {
        let level = self.level;
        let mut out: Vec<Option<BodyState>> = vec![None; self.n_bodies + 1];
        out[0] = Some(BodyState::ground(level));
        for j in &self.tree {
            let p = out[j.parent].as_ref().expect("tree order places parents first");
            let off = j.offset.expect("tree joint");
            let d = p.rot.mul_vec(&j.rp);
            let wd = p.omega.cross(&d);
            let cg = p.pos.add(&d);
            let vcp = p.vel.add(&wd);
            let acp = p.acc.add(&p.alpha.cross(&d)).add(&p.omega.cross(&wd));
            let base = p.rot.mul(&j.r0);
            let child = if j.kind == JointKind::P {
                let u = base.mul_vec(&j.axes[0]);
                let (qk, qdk, qddk) = (&q[off], &qd[off], &qdd[off]);
                let e = u.scale(qk).sub(&base.mul_vec(&j.rc));
                let dd = d.add(&e);
                let wdd = p.omega.cross(&dd);
                let uq = u.scale(qdk);
                BodyState {
                    rot: base.clone(),
                    pos: cg.add(&e),
                    omega: p.omega.clone(),
                    vel: p.vel.add(&wdd).add(&uq),
                    alpha: p.alpha.clone(),
                    acc: p
                        .acc
                        .add(&p.alpha.cross(&dd))
                        .add(&p.omega.cross(&wdd))
                        .add(&p.omega.cross(&uq).scale(&PScalar::from_int(2, level)))
                        .add(&u.scale(qddk)),
                }
            } else {
                let mut rot = base;
                let mut omega = p.omega.clone();
                let mut alpha = p.alpha.clone();
                for (k, a) in j.axes.iter().enumerate() {
                    let w = rot.mul_vec(a);
                    let wq = w.scale(&qd[off + k]);
                    alpha = alpha.add(&w.scale(&qdd[off + k])).add(&omega.cross(&wq));
                    omega = omega.add(&wq);
                    rot = rot.mul(&Mat3::rotation(a, &q[off + k]));
                }
                let e = rot.mul_vec(&j.rc).neg();
                let we = omega.cross(&e);
                BodyState {
                    pos: cg.add(&e),
                    vel: vcp.add(&we),
                    acc: acp.add(&alpha.cross(&e)).add(&omega.cross(&we)),
                    rot,
                    omega,
                    alpha,
                }
            };
            out[j.child] = Some(child);
        }
        out.into_iter().map(|b| b.expect("every body placed")).collect()
    }

    /// Closure residual and its first two time derivatives.
    pub fn closure(&self, q: &[PScalar], qd: &[PScalar], qdd: &[PScalar]) -> [Vec<PScalar>; 3] {
        let bodies = self.bodies(q, qd, qdd);
        let mut out = [Vec::with_capacity(self.n_rows), Vec::with_capacity(self.n_rows), Vec::with_capacity(self.n_rows)];
        for l in &self.loops {
            let (bp, bc) = (&bodies[l.parent], &bodies[l.child]);
            let gp = bp.point(&l.rp);
            let gc = bc.point(&l.rc);
            let mut rows: Vec<[PScalar; 3]> = (0..3)
                .map(|i| [gc[0].0[i].clone() - &gp[0].0[i], gc[1].0[i].clone() - &gp[1].0[i], gc[2].0[i].clone() - &gp[2].0[i]])
                .collect();
            for (lp, lc) in &l.perp {
                let [u1, u1d, u1dd] = bp.direction(lp);
                let [u2, u2d, u2dd] = bc.direction(lc);
                let two = PScalar::from_int(2, self.level);
                rows.push([
                    u1.dot(&u2),
                    u1d.dot(&u2) + u1.dot(&u2d),
                    u1dd.dot(&u2) + two * u1d.dot(&u2d) + u1.dot(&u2dd),
                ]);
            }
            for &r in &l.rows {
                for (k, o) in out.iter_mut().enumerate() {
                    o.push(rows[r][k].clone());
                }
            }
        }
        out
    }

    pub fn residual(&self, q: &[PScalar]) -> Vec<PScalar> {
        let z = self.zeros();
        let [r, _, _] = self.closure(q, &z, &z);
        r
    }

    fn zeros(&self) -> Vec<PScalar> {
        vec![PScalar::zero(self.level); self.n_coords]
    }

    /// Constraint Jacobian, one velocity pass per coordinate.
    pub fn jacobian(&self, q: &[PScalar]) -> Matrix {
        let z = self.zeros();
        let mut jac = Matrix::zeros(self.n_rows, self.n_coords, self.level);
        for k in 0..self.n_coords {
            let mut e = z.clone();
            e[k] = PScalar::one(self.level);
            let [_, v, _] = self.closure(q, &e, &z);
            for (i, x) in v.into_iter().enumerate() {
                jac[(i, k)] = x;
            }
        }
        jac
    }

    fn dependent_lu(&self, jac: &Matrix) -> Result<Lu, Error> {
        let jd = jac.select_cols(&self.dependent);
        let limit = 10f64.powi(self.level.digits() as i32 - 4);
        let cond = condition_inf(&jd).map(|c| c.to_f64()).unwrap_or(f64::INFINITY);
        if !(cond <= limit) {
            return Err(Error::SingularJacobian { condition: cond });
        }
        Lu::new(&jd).ok_or(Error::SingularJacobian { condition: f64::INFINITY })
    }

    /// Newton solve for the dependent coordinates with the independent ones held fixed.
    pub fn solve_position(&self, q_ind: &[PScalar], guess: &[PScalar]) -> Result<Vec<PScalar>, Error> {
        assert_eq!(q_ind.len(), self.independent.len(), "independent coordinate count");
        assert_eq!(guess.len(), self.n_coords, "coordinate count");
        let mut q: Vec<PScalar> = guess.iter().map(|x| x.convert(self.level)).collect();
        for (&i, v) in self.independent.iter().zip(q_ind) {
            q[i] = v.convert(self.level);
        }
        if self.n_rows == 0 {
            return Ok(q);
        }
        let tol = self.tolerance();
        let mut converged = false;
        let mut res = inf_norm(&self.residual(&q), self.level);
        for _ in 0..MAX_NEWTON_ITERATIONS {
            let met = res <= tol;
            let lu = self.dependent_lu(&self.jacobian(&q))?;
            let phi = self.residual(&q);
            let step = lu.solve(&phi);
            for (&d, s) in self.dependent.iter().zip(step) {
                q[d] -= s;
            }
            res = inf_norm(&self.residual(&q), self.level);
            if !res.is_finite() {
                break;
            }
            if met {
                // one polishing step past the tolerance
                converged = true;
                break;
            }
        }
        if converged || res <= tol {
            Ok(q)
        } else {
            Err(Error::NonConvergence { iterations: MAX_NEWTON_ITERATIONS, residual: res.to_f64() })
        }
    }

    /// Dependent rates and accelerations from independent ones.
    pub fn solve_velocity_acceleration(
        &self,
        q: &[PScalar],
        qd_ind: &[PScalar],
        qdd_ind: &[PScalar],
    ) -> Result<(Vec<PScalar>, Vec<PScalar>), Error> {
        let mut qd = self.zeros();
        let mut qdd = self.zeros();
        for (k, &i) in self.independent.iter().enumerate() {
            qd[i] = qd_ind[k].convert(self.level);
            qdd[i] = qdd_ind[k].convert(self.level);
        }
        if self.n_rows == 0 {
            return Ok((qd, qdd));
        }
        let lu = self.dependent_lu(&self.jacobian(q))?;
        let z = self.zeros();
        // residual rate with dependent rates zero is J_ind·qd_ind
        let [_, v, _] = self.closure(q, &qd, &z);
        for (&d, s) in self.dependent.iter().zip(lu.solve(&v)) {
            qd[d] = -s;
        }
        let [_, _, a] = self.closure(q, &qd, &qdd);
        for (&d, s) in self.dependent.iter().zip(lu.solve(&a)) {
            qdd[d] = -s;
        }
        Ok((qd, qdd))
    }

    /// Basis of the constraint nullspace with identity rows at the independent coordinates.
    pub fn orthogonal_complement(&self, q: &[PScalar]) -> Result<Matrix, Error> {
        let dof = self.independent.len();
        let mut r = Matrix::zeros(self.n_coords, dof, self.level);
        for (k, &i) in self.independent.iter().enumerate() {
            r[(i, k)] = PScalar::one(self.level);
        }
        if self.n_rows == 0 {
            return Ok(r);
        }
        let jac = self.jacobian(q);
        let lu = self.dependent_lu(&jac)?;
        let sol = lu.solve_matrix(&jac.select_cols(&self.independent));
        for (a, &d) in self.dependent.iter().enumerate() {
            for k in 0..dof {
                r[(d, k)] = -sol[(a, k)].clone();
            }
        }
        Ok(r)
    }

    /// Full state from independent coordinates, rates and accelerations.
    pub fn solve_state(
        &self,
        q_ind: &[PScalar],
        qd_ind: &[PScalar],
        qdd_ind: &[PScalar],
        guess: &[PScalar],
    ) -> Result<State, Error> {
        let q = self.solve_position(q_ind, guess)?;
        let (qd, qdd) = self.solve_velocity_acceleration(&q, qd_ind, qdd_ind)?;
        Ok(State { q, qd, qdd })
    }
}

/// Infinity norm of a vector (zero for an empty one).
pub fn inf_norm(v: &[PScalar], level: PrecisionLevel) -> PScalar {
    v.iter().fold(PScalar::zero(level), |m, x| m.max(x.abs()))
}

pub fn solve_position(mech: &Mechanism, q_ind: &[PScalar], guess: &[PScalar], level: PrecisionLevel) -> Result<Vec<PScalar>, Error> {
    Kinematics::new(mech, level)?.solve_position(q_ind, guess)
}

pub fn solve_velocity_acceleration(
    mech: &Mechanism,
    q: &[PScalar],
    qd_ind: &[PScalar],
    qdd_ind: &[PScalar],
    level: PrecisionLevel,
) -> Result<(Vec<PScalar>, Vec<PScalar>), Error> {
    Kinematics::new(mech, level)?.solve_velocity_acceleration(q, qd_ind, qdd_ind)
}

pub fn orthogonal_complement(mech: &Mechanism, q: &[PScalar], level: PrecisionLevel) -> Result<Matrix, Error> {
    Kinematics::new(mech, level)?.orthogonal_complement(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::GeomParams;

    fn fixture(name: &str) -> Mechanism {
        let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
        crate::model::load_mechanism(&path, &GeomParams::default()).unwrap()
    }

    fn s(v: f64, level: PrecisionLevel) -> PScalar {
        PScalar::from_f64(v, level)
    }

    #[test]
    fn pendulum_is_unconstrained() {
        let m = fixture("pendulum");
        let lvl = PrecisionLevel::DoubleNative;
        let k = Kinematics::new(&m, lvl).unwrap();
        let q = k.solve_position(&[s(0.7, lvl)], &[s(0.0, lvl)]).unwrap();
        assert_eq!(q[0].to_f64(), 0.7);
        let r = k.orthogonal_complement(&q).unwrap();
        assert_eq!(r.to_f64(), vec![vec![1.0]]);
    }

    #[test]
    fn parallelogram_branch() {
        let m = fixture("fourbar");
        let lvl = PrecisionLevel::DoubleNative;
        let k = Kinematics::new(&m, lvl).unwrap();
        let guess = m.initial_q(lvl).unwrap();
        let q = k.solve_position(&[s(0.0, lvl)], &guess).unwrap();
        assert!(q.iter().all(|x| x.to_f64().abs() < 1e-14));
        let q = k.solve_position(&[s(0.4, lvl)], &guess).unwrap();
        // coupler keeps its orientation, follower turns with the crank
        assert!((q[1].to_f64() + 0.4).abs() < 1e-10);
        assert!((q[2].to_f64() - 0.4).abs() < 1e-10);
        let (qd, qdd) = k.solve_velocity_acceleration(&q, &[s(2.0, lvl)], &[s(0.0, lvl)]).unwrap();
        let bodies = k.bodies(&q, &qd, &qdd);
        assert!(bodies[2].omega.max_abs().to_f64() < 1e-12);
    }

    #[test]
    fn rest_state() {
        let m = fixture("sla");
        let lvl = PrecisionLevel::DoubleNative;
        let k = Kinematics::new(&m, lvl).unwrap();
        let q0 = m.initial_q(lvl).unwrap();
        assert!(inf_norm(&k.residual(&q0), lvl).to_f64() < 1e-15);
        let z = [s(0.0, lvl), s(0.0, lvl)];
        let (qd, qdd) = k.solve_velocity_acceleration(&q0, &z, &z).unwrap();
        assert!(qd.iter().chain(&qdd).all(PScalar::is_zero));
    }

    #[test]
    fn sla_closes_at_30_digits() {
        let m = fixture("sla");
        let lvl = PrecisionLevel::Decimal(30);
        let k = Kinematics::new(&m, lvl).unwrap();
        let q0 = m.initial_q(lvl).unwrap();
        let q = k.solve_position(&[s(0.3, lvl), s(0.0, lvl)], &q0).unwrap();
        assert!(inf_norm(&k.residual(&q), lvl).to_f64() <= 1e-25);
        let (qd, qdd) = k.solve_velocity_acceleration(&q, &[s(1.3, lvl), s(-0.4, lvl)], &[s(0.2, lvl), s(2.0, lvl)]).unwrap();
        let [_, v, a] = k.closure(&q, &qd, &qdd);
        assert!(inf_norm(&v, lvl).to_f64() <= 1e-25);
        assert!(inf_norm(&a, lvl).to_f64() <= 1e-25);
        let r = k.orthogonal_complement(&q).unwrap();
        let jr = k.jacobian(&q).mul(&r);
        assert!(jr.max_abs().to_f64() <= 1e-25);
    }

    #[test]
    fn jacobian_matches_finite_difference() {
        let m = fixture("sla");
        let lvl = PrecisionLevel::Decimal(40);
        let k = Kinematics::new(&m, lvl).unwrap();
        let q: Vec<PScalar> = (0..k.n_coords()).map(|i| s(0.05 * i as f64 - 0.2, lvl)).collect();
        let jac = k.jacobian(&q);
        let h = s(1e-15, lvl);
        for c in 0..k.n_coords() {
            let mut qp = q.clone();
            let mut qm = q.clone();
            qp[c] += &h;
            qm[c] -= &h;
            let (rp, rm) = (k.residual(&qp), k.residual(&qm));
            for i in 0..k.n_rows() {
                let fd = (rp[i].clone() - &rm[i]) / (h.clone() * s(2.0, lvl));
                assert!((fd - &jac[(i, c)]).abs().to_f64() < 1e-20, "row {i} col {c}");
            }
        }
    }

    #[test]
    fn acceleration_bias_matches_finite_difference() {
        // d/dt of the velocity residual along a path equals the acceleration residual
        let m = fixture("sla");
        let lvl = PrecisionLevel::Decimal(40);
        let k = Kinematics::new(&m, lvl).unwrap();
        let n = k.n_coords();
        let q: Vec<PScalar> = (0..n).map(|i| s(0.03 * i as f64 - 0.1, lvl)).collect();
        let qd: Vec<PScalar> = (0..n).map(|i| s(0.2 - 0.07 * i as f64, lvl)).collect();
        let qdd: Vec<PScalar> = (0..n).map(|i| s(0.11 * i as f64 - 0.5, lvl)).collect();
        let h = s(1e-12, lvl);
        let at = |t: &PScalar| {
            let qq: Vec<_> = (0..n).map(|i| q[i].clone() + qd[i].clone() * t + qdd[i].clone() * t.square() / s(2.0, lvl)).collect();
            let vv: Vec<_> = (0..n).map(|i| qd[i].clone() + qdd[i].clone() * t).collect();
            k.closure(&qq, &vv, &qdd)
        };
        let [_, vp, _] = at(&h);
        let [_, vm, _] = at(&-h.clone());
        let [_, _, a] = k.closure(&q, &qd, &qdd);
        for i in 0..k.n_rows() {
            let fd = (vp[i].clone() - &vm[i]) / (h.clone() * s(2.0, lvl));
            assert!((fd - &a[i]).abs().to_f64() < 1e-18, "row {i}");
        }
    }
}

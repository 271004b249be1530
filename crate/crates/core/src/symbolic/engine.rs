//! Elimination and multipole-transfer plans over symbolic inertial parameters.
//!
//! Every body starts with the unit forms of its own ten parameters. Steps
//! either strike parameters that cannot influence the motion, or move a
//! point mass, a dipole or a quadrupole across a joint so that one chosen
//! parameter (the zero-target) vanishes. The amount moved is solved exactly.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::linear_form::LinearForm;
use super::ratexpr::RatExpr;
use crate::linalg::Matrix;
use crate::numeric_base::BaseParamSolution;
use crate::model::{param_label, parse_param_label, ExprText, Joint, JointKind, PARAMS_PER_BODY};
use crate::precision::{PScalar, PrecisionLevel};
use crate::{Error, GeomParams, Mechanism, ParamVector};

const M: usize = 0;
const FIRST: [usize; 3] = [1, 2, 3];
// Tensor slot of entry (i, j).
const TENSOR: [[usize; 3]; 3] = [[4, 5, 6], [5, 7, 8], [6, 8, 9]];

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PlanStep {
    Eliminate { body: usize, condition: u8 },
    Monopole(Transfer),
    Dipole(Transfer),
    Quadrupole(Transfer),
}

/// One transfer across a joint. Points and direction are in the donor and
/// acceptor body frames; when omitted they default to the joint geometry.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Transfer {
    pub joint: String,
    pub condition: u8,
    pub donor: usize,
    pub acceptor: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub donor_point: Option<[ExprText; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub acceptor_point: Option<[ExprText; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<[ExprText; 3]>,
    pub targets: Vec<String>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
pub struct Plan {
    #[serde(default)]
    pub name: String,
    pub steps: Vec<PlanStep>,
}

impl Plan {
    pub fn from_json(text: &str) -> Result<Plan, Error> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_path(path: &Path) -> Result<Plan, Error> {
        let path = if path.is_dir() {
            path.join("plan.json")
        } else {
            path.to_path_buf()
        };
        Plan::from_json(&std::fs::read_to_string(&path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?)
    }
}

/// Solved amount of one transfer step.
#[derive(Clone, Debug, PartialEq)]
pub struct TransferRecord {
    pub step: usize,
    pub joint: String,
    pub kind: &'static str,
    pub donor: usize,
    pub acceptor: usize,
    pub targets: Vec<usize>,
    pub amounts: Vec<LinearForm>,
}

#[derive(Clone, Debug)]
pub struct SymbolicSolution {
    pub n_bodies: usize,
    pub forms: Vec<LinearForm>,
    pub struck: BTreeSet<usize>,
    pub annihilated: BTreeSet<usize>,
    pub log: Vec<TransferRecord>,
}

/// Numeric view of a symbolic solution: `φ_b = φ1 + β·φ2`.
#[derive(Clone, Debug)]
pub struct EvaluatedSolution {
    pub kept: Vec<usize>,
    pub eliminated: Vec<usize>,
    pub beta: Matrix,
    pub level: PrecisionLevel,
}

type Vec3R = [RatExpr; 3];
type Mat3R = [[RatExpr; 3]; 3];

fn vec_r(e: &[crate::expr::Expr; 3]) -> Result<Vec3R, Error> {
    Ok([
        RatExpr::from_expr(&e[0])?,
        RatExpr::from_expr(&e[1])?,
        RatExpr::from_expr(&e[2])?,
    ])
}

fn vec_text(e: &[ExprText; 3]) -> Result<Vec3R, Error> {
    Ok([
        RatExpr::from_expr(&e[0].parse()?)?,
        RatExpr::from_expr(&e[1].parse()?)?,
        RatExpr::from_expr(&e[2].parse()?)?,
    ])
}

fn dot(a: &Vec3R, b: &Vec3R) -> RatExpr {
    a[0].mul(&b[0]).add(&a[1].mul(&b[1])).add(&a[2].mul(&b[2]))
}

fn cross_is_zero(a: &Vec3R, b: &Vec3R) -> bool {
    (0..3).all(|i| {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        a[j].mul(&b[k]).sub(&a[k].mul(&b[j])).is_zero()
    })
}

fn sub3(a: &Vec3R, b: &Vec3R) -> Vec3R {
    [a[0].sub(&b[0]), a[1].sub(&b[1]), a[2].sub(&b[2])]
}

fn add_scaled(a: &Vec3R, b: &Vec3R, t: &RatExpr) -> Vec3R {
    [a[0].add(&b[0].mul(t)), a[1].add(&b[1].mul(t)), a[2].add(&b[2].mul(t))]
}

fn mat_vec(m: &Mat3R, v: &Vec3R) -> Vec3R {
    std::array::from_fn(|i| m[i][0].mul(&v[0]).add(&m[i][1].mul(&v[1])).add(&m[i][2].mul(&v[2])))
}

fn transpose(m: &Mat3R) -> Mat3R {
    std::array::from_fn(|i| std::array::from_fn(|j| m[j][i].clone()))
}

fn identity() -> Mat3R {
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { RatExpr::one() } else { RatExpr::zero() }))
}

/// Parameter change of a unit point mass at `p`.
fn point_mass_delta(p: &Vec3R) -> [RatExpr; 10] {
    let mut d: [RatExpr; 10] = Default::default();
    d[M] = RatExpr::one();
    let pp = dot(p, p);
    for i in 0..3 {
        d[FIRST[i]] = p[i].clone();
        for j in i..3 {
            let diag = if i == j { pp.clone() } else { RatExpr::zero() };
            d[TENSOR[i][j]] = diag.sub(&p[i].mul(&p[j]));
        }
    }
    d
}

/// Parameter change of a unit dipole along `u` located at `p`.
fn dipole_delta(p: &Vec3R, u: &Vec3R) -> [RatExpr; 10] {
    let mut d: [RatExpr; 10] = Default::default();
    let pu = dot(p, u).mul(&RatExpr::int(2));
    for i in 0..3 {
        d[FIRST[i]] = u[i].clone();
        for j in i..3 {
            let diag = if i == j { pu.clone() } else { RatExpr::zero() };
            d[TENSOR[i][j]] = diag.sub(&p[i].mul(&u[j])).sub(&u[i].mul(&p[j]));
        }
    }
    d
}

/// Parameter change of a unit quadrupole symmetric about `u`.
fn quadrupole_delta(u: &Vec3R) -> Result<[RatExpr; 10], Error> {
    let mut d: [RatExpr; 10] = Default::default();
    let uu = dot(u, u);
    for i in 0..3 {
        for j in i..3 {
            let diag = if i == j { RatExpr::one() } else { RatExpr::zero() };
            d[TENSOR[i][j]] = diag.sub(&u[i].mul(&u[j]).div(&uu)?);
        }
    }
    Ok(d)
}

struct Engine<'a> {
    mech: &'a Mechanism,
    forms: Vec<LinearForm>,
    struck: BTreeSet<usize>,
    annihilated: BTreeSet<usize>,
    log: Vec<TransferRecord>,
}

/// Joint geometry seen from one body.
struct Side {
    point: Vec3R,
    axis: Option<Vec3R>,
}

impl<'a> Engine<'a> {
    fn slot(&self, body: usize, k: usize) -> usize {
        (body - 1) * PARAMS_PER_BODY + k
    }

    fn apply(&mut self, body: usize, delta: &[RatExpr; 10], amount: &LinearForm) {
        if body == 0 {
            return;
        }
        for (k, d) in delta.iter().enumerate() {
            if d.is_zero() {
                continue;
            }
            let s = self.slot(body, k);
            self.forms[s] = self.forms[s].add(&amount.scale(d));
        }
    }

    fn joint(&self, id: &str) -> Result<&'a Joint, Error> {
        self.mech
            .joint(id)
            .ok_or_else(|| Error::RuleViolation(format!("unknown joint '{id}'")))
    }

    fn rotation(joint: &Joint) -> Result<Mat3R, Error> {
        match &joint.rotation {
            None => Ok(identity()),
            Some(r) => Ok([vec_r(&r[0])?, vec_r(&r[1])?, vec_r(&r[2])?]),
        }
    }

    /// Rotation taking vectors in `from`'s frame to `to`'s frame at the
    /// joint's reference configuration.
    fn frame_map(joint: &Joint, from: usize) -> Result<Mat3R, Error> {
        let r0 = Engine::rotation(joint)?;
        Ok(if from == joint.child { r0 } else { transpose(&r0) })
    }

    fn side(joint: &Joint, body: usize) -> Result<Side, Error> {
        let point = vec_r(joint.point_on(body).expect("body on joint"))?;
        let axis = match joint.kind {
            JointKind::R | JointKind::P => {
                let a = vec_r(&joint.axes[0])?;
                Some(if body == joint.child {
                    a
                } else {
                    mat_vec(&Engine::rotation(joint)?, &a)
                })
            }
            _ => None,
        };
        Ok(Side { point, axis })
    }

    fn ground_joint(&self, body: usize) -> Option<&'a Joint> {
        self.mech
            .joints()
            .iter()
            .find(|j| (j.parent == 0 && j.child == body) || (j.child == 0 && j.parent == body))
    }

    fn eliminate(&mut self, body: usize, condition: u8) -> Result<(), Error> {
        if body == 0 || body > self.mech.n_bodies() {
            return Err(Error::RuleViolation(format!("no body {body}")));
        }
        let joint = self
            .ground_joint(body)
            .ok_or_else(|| Error::RuleViolation(format!("body {body} has no joint to ground")))?;
        let side = Engine::side(joint, body)?;
        let struck: Vec<usize> = match condition {
            1 => {
                if joint.kind == JointKind::P || !side.point.iter().all(RatExpr::is_zero) {
                    return Err(Error::RuleViolation(format!(
                        "condition 1 needs the reference point of body {body} fixed to ground"
                    )));
                }
                vec![M]
            }
            2 | 5 => {
                let axis = match (joint.kind, &side.axis) {
                    (JointKind::R, Some(a)) => a,
                    _ => {
                        return Err(Error::RuleViolation(format!(
                            "condition {condition} needs body {body} hinged to ground by a revolute joint"
                        )))
                    }
                };
                let nz: Vec<usize> = (0..3).filter(|&i| !axis[i].is_zero()).collect();
                if nz.len() != 1 {
                    return Err(Error::RuleViolation(format!(
                        "hinge axis of body {body} is not aligned with a body axis"
                    )));
                }
                let k = nz[0];
                if condition == 2 {
                    vec![FIRST[k]]
                } else {
                    let mut v: Vec<usize> = TENSOR.iter().flatten().copied().filter(|&s| s != TENSOR[k][k]).collect();
                    v.sort();
                    v.dedup();
                    v
                }
            }
            c => {
                return Err(Error::RuleViolation(format!(
                    "elimination condition {c} is not in the rule table"
                )))
            }
        };
        for k in struck {
            let s = self.slot(body, k);
            if self.annihilated.contains(&s) || !self.struck.insert(s) {
                return Err(Error::RuleViolation(format!("{} already removed", param_label(s))));
            }
        }
        Ok(())
    }

    fn transfer(&mut self, index: usize, kind: &'static str, t: &Transfer) -> Result<(), Error> {
        let joint = self.joint(&t.joint)?;
        let (d, a) = (t.donor, t.acceptor);
        if joint.other(d) != Some(a) {
            return Err(Error::RuleViolation(format!(
                "joint {} does not connect bodies {d} and {a}",
                joint.id
            )));
        }
        if d == 0 {
            return Err(Error::RuleViolation("ground cannot donate".into()));
        }
        let allowed: &[u8] = match (joint.kind, kind) {
            (JointKind::S | JointKind::U, "monopole") => &[1],
            (JointKind::R, "monopole") => &[1],
            (JointKind::R, "dipole") => &[2],
            (JointKind::R, "quadrupole") => &[5],
            (JointKind::P, "quadrupole") => &[6],
            _ => &[],
        };
        if !allowed.contains(&t.condition) {
            return Err(Error::RuleViolation(format!(
                "{kind} transfer under condition {} is not admissible across {:?} joint {}",
                t.condition, joint.kind, joint.id
            )));
        }
        let targets = t
            .targets
            .iter()
            .map(|l| parse_param_label(l, self.mech.n_bodies()))
            .collect::<Result<Vec<_>, _>>()?;
        for &s in &targets {
            let body = s / PARAMS_PER_BODY + 1;
            if body != d && body != a {
                return Err(Error::RuleViolation(format!(
                    "target {} is not on the donor or acceptor",
                    param_label(s)
                )));
            }
            if self.struck.contains(&s) || self.annihilated.contains(&s) {
                return Err(Error::RuleViolation(format!("{} already removed", param_label(s))));
            }
        }
        let ds = Engine::side(joint, d)?;
        let as_ = Engine::side(joint, a)?;
        let map = Engine::frame_map(joint, d)?;

        // Attachment point on the donor, and its offset along the axis.
        let donor_point = match &t.donor_point {
            Some(p) => vec_text(p)?,
            None => ds.point.clone(),
        };
        let offset = sub3(&donor_point, &ds.point);
        let along = match &ds.axis {
            Some(ax) if joint.kind == JointKind::R => {
                if !cross_is_zero(&offset, ax) {
                    return Err(Error::RuleViolation(format!(
                        "transfer point is off the axis of joint {}",
                        joint.id
                    )));
                }
                dot(&offset, ax).div(&dot(ax, ax))?
            }
            _ => {
                if !offset.iter().all(RatExpr::is_zero) {
                    return Err(Error::RuleViolation(format!(
                        "transfer point differs from the centre of joint {}",
                        joint.id
                    )));
                }
                RatExpr::zero()
            }
        };
        let acceptor_point = match &as_.axis {
            Some(ax) => add_scaled(&as_.point, ax, &along),
            None => as_.point.clone(),
        };
        if let Some(p) = &t.acceptor_point {
            if a != 0 && sub3(&vec_text(p)?, &acceptor_point).iter().any(|e| !e.is_zero()) {
                return Err(Error::RuleViolation(format!(
                    "acceptor point does not coincide with the donor point across joint {}",
                    joint.id
                )));
            }
        }

        let direction = match (&t.direction, &ds.axis) {
            (Some(u), Some(ax)) => {
                let u = vec_text(u)?;
                if !cross_is_zero(&u, ax) || u.iter().all(RatExpr::is_zero) {
                    return Err(Error::RuleViolation(format!(
                        "direction is not along the axis of joint {}",
                        joint.id
                    )));
                }
                Some(u)
            }
            (None, Some(ax)) => Some(ax.clone()),
            (Some(_), None) => {
                return Err(Error::RuleViolation(format!(
                    "joint {} has no axis to transfer along",
                    joint.id
                )))
            }
            (None, None) => None,
        };

        if t.condition == 6 {
            return self.transfer_tensor(index, joint, t, &map, targets);
        }
        if targets.len() != 1 {
            return Err(Error::RuleViolation(format!(
                "{kind} transfer annihilates exactly one parameter"
            )));
        }
        let (delta_d, delta_a) = match kind {
            "monopole" => (point_mass_delta(&donor_point), point_mass_delta(&acceptor_point)),
            "dipole" => {
                let u = direction.expect("axis present");
                let ua = mat_vec(&map, &u);
                (dipole_delta(&donor_point, &u), dipole_delta(&acceptor_point, &ua))
            }
            _ => {
                let u = direction.expect("axis present");
                let ua = mat_vec(&map, &u);
                (quadrupole_delta(&u)?, quadrupole_delta(&ua)?)
            }
        };
        let target = targets[0];
        let k = target % PARAMS_PER_BODY;
        let response = if target / PARAMS_PER_BODY + 1 == d {
            delta_d[k].neg()
        } else {
            delta_a[k].clone()
        };
        if response.is_zero() {
            return Err(Error::Unsolvable(format!(
                "{} does not respond to this {kind} transfer",
                param_label(target)
            )));
        }
        let amount = self.forms[target].scale(&RatExpr::one().div(&response)?.neg());
        self.apply(d, &delta_d, &amount.neg());
        self.apply(a, &delta_a, &amount);
        debug_assert!(self.forms[target].is_zero());
        self.annihilated.insert(target);
        self.log.push(TransferRecord {
            step: index,
            joint: joint.id.clone(),
            kind,
            donor: d,
            acceptor: a,
            targets,
            amounts: vec![amount],
        });
        Ok(())
    }

    /// Moves the whole second-moment tensor across a joint that locks rotation.
    fn transfer_tensor(
        &mut self,
        index: usize,
        joint: &Joint,
        t: &Transfer,
        map: &Mat3R,
        targets: Vec<usize>,
    ) -> Result<(), Error> {
        let d = t.donor;
        let expected: BTreeSet<usize> = [4, 5, 6, 7, 8, 9].iter().map(|&k| self.slot(d, k)).collect();
        if targets.iter().copied().collect::<BTreeSet<_>>() != expected || targets.len() != 6 {
            return Err(Error::RuleViolation(
                "a full quadrupole transfer annihilates all six tensor entries of the donor".into(),
            ));
        }
        let tensor: [[LinearForm; 3]; 3] =
            std::array::from_fn(|i| std::array::from_fn(|j| self.forms[self.slot(d, TENSOR[i][j])].clone()));
        if t.acceptor != 0 {
            for i in 0..3 {
                for j in i..3 {
                    let mut acc = LinearForm::zero();
                    for (k, row) in tensor.iter().enumerate() {
                        for (l, entry) in row.iter().enumerate() {
                            acc = acc.add(&entry.scale(&map[i][k].mul(&map[j][l])));
                        }
                    }
                    let s = self.slot(t.acceptor, TENSOR[i][j]);
                    self.forms[s] = self.forms[s].add(&acc);
                }
            }
        }
        let mut amounts = Vec::new();
        for &s in &targets {
            amounts.push(self.forms[s].clone());
            self.forms[s] = LinearForm::zero();
            self.annihilated.insert(s);
        }
        self.log.push(TransferRecord {
            step: index,
            joint: joint.id.clone(),
            kind: "quadrupole",
            donor: d,
            acceptor: t.acceptor,
            targets,
            amounts,
        });
        Ok(())
    }
}

/// Runs `plan` on the unit forms of `mech`. The first failing step aborts.
pub fn run_plan(mech: &Mechanism, plan: &Plan) -> Result<SymbolicSolution, Error> {
    let n = mech.n_params();
    let mut e = Engine {
        mech,
        forms: (0..n).map(LinearForm::unit).collect(),
        struck: BTreeSet::new(),
        annihilated: BTreeSet::new(),
        log: Vec::new(),
    };
    for (index, step) in plan.steps.iter().enumerate() {
        let r = match step {
            PlanStep::Eliminate { body, condition } => e.eliminate(*body, *condition),
            PlanStep::Monopole(t) => e.transfer(index, "monopole", t),
            PlanStep::Dipole(t) => e.transfer(index, "dipole", t),
            PlanStep::Quadrupole(t) => e.transfer(index, "quadrupole", t),
        };
        r.map_err(|source| Error::PlanStep {
            index,
            source: Box::new(source),
        })?;
    }
    // later steps must not revive an earlier zero-target
    if let Some(&s) = e.annihilated.iter().find(|&&s| !e.forms[s].is_zero()) {
        return Err(Error::RuleViolation(format!(
            "{} was annihilated but became nonzero again",
            param_label(s)
        )));
    }
    Ok(SymbolicSolution {
        n_bodies: mech.n_bodies(),
        forms: e.forms,
        struck: e.struck,
        annihilated: e.annihilated,
        log: e.log,
    })
}

impl SymbolicSolution {
    /// Slots that carry a base parameter, ascending.
    pub fn kept(&self) -> Vec<usize> {
        (0..self.forms.len())
            .filter(|s| !self.struck.contains(s) && !self.annihilated.contains(s))
            .collect()
    }

    /// Struck and annihilated slots, ascending.
    pub fn eliminated(&self) -> Vec<usize> {
        self.struck.union(&self.annihilated).copied().collect()
    }

    pub fn base_forms(&self) -> Vec<(usize, &LinearForm)> {
        self.kept().into_iter().map(|s| (s, &self.forms[s])).collect()
    }

    /// One line per base parameter, `b01 = mx1 + ...`.
    pub fn render(&self) -> Vec<String> {
        self.base_forms()
            .iter()
            .enumerate()
            .map(|(i, (s, f))| format!("b{:02} = {}", i + 1, f.render_led_by(Some(*s))))
            .collect()
    }

    /// Coefficients at `geom` arranged as `φ_b = φ1 + β·φ2`.
    pub fn evaluate(&self, geom: &GeomParams, level: PrecisionLevel) -> Result<EvaluatedSolution, Error> {
        let kept = self.kept();
        let eliminated = self.eliminated();
        let mut beta = Matrix::zeros(kept.len(), eliminated.len(), level);
        for (i, &s) in kept.iter().enumerate() {
            let f = &self.forms[s];
            for (j, c) in f.iter() {
                let v = c.eval(geom)?;
                if let Ok(col) = eliminated.binary_search(&j) {
                    beta[(i, col)] = PScalar::from_rational(&v, level);
                } else if v != i32::from(j == s) {
                    return Err(Error::Unsolvable(format!(
                        "base parameter on {} mixes kept parameter {}",
                        param_label(s),
                        param_label(j)
                    )));
                }
            }
            if f.coeff(s).eval(geom)? != 1 {
                return Err(Error::Unsolvable(format!(
                    "base parameter on {} lost its own parameter",
                    param_label(s)
                )));
            }
        }
        Ok(EvaluatedSolution {
            kept,
            eliminated,
            beta,
            level,
        })
    }

    /// Parameters after the plan: base forms on kept slots, zero elsewhere.
    pub fn transform(&self, phi: &ParamVector, geom: &GeomParams) -> Result<ParamVector, Error> {
        let level = phi.0.first().map_or(PrecisionLevel::DoubleNative, PScalar::level);
        let mut out = ParamVector::zeros(self.n_bodies, level);
        for s in self.kept() {
            let mut acc = PScalar::zero(level);
            for (j, c) in self.forms[s].eval(geom)? {
                acc += PScalar::from_rational(&c, level) * &phi.0[j];
            }
            out.0[s] = acc;
        }
        Ok(out)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let kept = self.kept();
        serde_json::json!({
            "base_parameters": kept.iter().enumerate().map(|(i, &s)| serde_json::json!({
                "name": format!("b{:02}", i + 1),
                "slot": param_label(s),
                "terms": self.forms[s].iter().map(|(j, c)| serde_json::json!({
                    "parameter": param_label(j),
                    "coefficient": c.to_string(),
                })).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "struck": self.struck.iter().map(|&s| param_label(s)).collect::<Vec<_>>(),
            "annihilated": self.annihilated.iter().map(|&s| param_label(s)).collect::<Vec<_>>(),
            "transfers": self.log.iter().map(|r| serde_json::json!({
                "step": r.step,
                "joint": r.joint,
                "kind": r.kind,
                "donor": r.donor,
                "acceptor": r.acceptor,
                "targets": r.targets.iter().map(|&s| param_label(s)).collect::<Vec<_>>(),
                "amounts": r.amounts.iter().map(LinearForm::render).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

impl EvaluatedSolution {
    /// Max entrywise |β − β_num|; both must use the same kept/eliminated split.
    pub fn max_beta_diff(&self, num: &BaseParamSolution) -> Result<PScalar, Error> {
        if self.kept != num.partition.kept || self.eliminated != num.partition.eliminated {
            let labels = |v: &[usize]| v.iter().map(|&i| param_label(i)).collect::<Vec<_>>().join(",");
            return Err(Error::Validation(format!(
                "pin sets differ: symbolic eliminates [{}], numeric eliminates [{}]",
                labels(&self.eliminated),
                labels(&num.partition.eliminated)
            )));
        }
        let level = num.level;
        let mut worst = PScalar::zero(level);
        for i in 0..self.beta.rows() {
            for j in 0..self.beta.cols() {
                worst = worst.max((&self.beta[(i, j)].convert(level) - &num.beta[(i, j)]).abs());
            }
        }
        Ok(worst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::param_index;
    use std::path::PathBuf;

    fn fixture(name: &str) -> PathBuf {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
    }

    fn sla() -> (Mechanism, Plan) {
        let m = crate::load_mechanism(&fixture("sla"), &GeomParams::default()).unwrap();
        let p = Plan::from_path(&fixture("sla")).unwrap();
        (m, p)
    }

    fn idx(label: &str) -> usize {
        parse_param_label(label, 7).unwrap()
    }

    #[test]
    fn empty_plan_keeps_unit_forms() {
        let (m, _) = sla();
        let s = run_plan(&m, &Plan::default()).unwrap();
        assert_eq!(s.kept().len(), 70);
        assert!(s.forms.iter().enumerate().all(|(k, f)| *f == LinearForm::unit(k)));
    }

    #[test]
    fn sla_plan_counts() {
        let (m, p) = sla();
        let s = run_plan(&m, &p).unwrap();
        assert_eq!(s.struck.len(), 13);
        assert_eq!(s.annihilated.len(), 16);
        assert_eq!(s.kept().len(), 41);
        assert!(s.base_forms().iter().all(|(_, f)| !f.is_zero()));
    }

    #[test]
    fn sla_plan_amounts() {
        let (m, p) = sla();
        let s = run_plan(&m, &p).unwrap();
        let amount = |joint: &str| {
            s.log.iter().find(|r| r.joint == joint).unwrap().amounts[0].clone()
        };
        let iyy2 = LinearForm::unit(idx("Iyy2")).scale(&RatExpr::parse("1/D22^2").unwrap());
        assert_eq!(amount("0-2"), iyy2);
        let want = LinearForm::unit(idx("Iyy1"))
            .add(&LinearForm::unit(idx("m7")).scale(&RatExpr::parse("D13^2").unwrap()))
            .scale(&RatExpr::parse("1/(D12+D13)^2").unwrap());
        assert_eq!(amount("0-1"), want);
        let mx1 = &s.forms[idx("mx1")];
        assert_eq!(mx1.coeff(idx("Iyy1")), RatExpr::parse("1/(D12+D13)").unwrap());
        let my3 = &s.forms[idx("my3")];
        assert_eq!(my3.coeff(idx("mx5")), RatExpr::int(-1));
        assert_eq!(my3.coeff(idx("m5")), RatExpr::var("DKy"));
        let ixy3 = &s.forms[idx("Ixy3")];
        assert_eq!(ixy3.coeff(idx("mx5")), RatExpr::var("DKx"));
        assert_eq!(ixy3.coeff(idx("m5")), RatExpr::parse("-DKx*DKy").unwrap());
        assert_eq!(s.forms[idx("Iyy5")].coeff(idx("Izz5")), RatExpr::int(-1));
        assert_eq!(s.forms[idx("Ixz6")].coeff(idx("Ixz7")), RatExpr::one());
        let m3 = &s.forms[idx("m3")];
        assert_eq!(m3.coeff(idx("m7")), RatExpr::parse("1-D13^2/(D12+D13)^2").unwrap());
        assert_eq!(m3.coeff(idx("Iyy4")), RatExpr::parse("-1/L10^2").unwrap());
    }

    #[test]
    fn repeat_runs_are_identical() {
        let (m, p) = sla();
        let a = run_plan(&m, &p).unwrap();
        let b = run_plan(&m, &p).unwrap();
        assert_eq!(a.render(), b.render());
        assert_eq!(a.to_json(), b.to_json());
    }

    #[test]
    fn evaluation_matches_caption_geometry() {
        let (m, p) = sla();
        let s = run_plan(&m, &p).unwrap();
        let e = s.evaluate(m.geometry(), PrecisionLevel::Decimal(30)).unwrap();
        let b = |kept: &str, elim: &str| {
            let i = e.kept.iter().position(|&k| k == idx(kept)).unwrap();
            let j = e.eliminated.iter().position(|&k| k == idx(elim)).unwrap();
            e.beta[(i, j)].to_f64()
        };
        assert!((b("mx1", "Iyy1") - 1.0 / 0.4016).abs() < 1e-12);
        assert!((b("mx4", "Iyy4") + 1.0 / 0.319).abs() < 1e-12);
        assert!((b("mz3", "m1") + 0.2135).abs() < 1e-12);
    }

    #[test]
    fn pendulum_plan_strikes_seven() {
        let m = crate::load_mechanism(&fixture("pendulum"), &GeomParams::default()).unwrap();
        let p = Plan::from_path(&fixture("pendulum")).unwrap();
        let s = run_plan(&m, &p).unwrap();
        let kept: Vec<usize> = s.kept();
        assert_eq!(kept, vec![1, 3, 7]);
        assert_eq!(param_index(1, "Iyy", 1).unwrap(), 7);
    }

    fn single(step: PlanStep) -> Result<SymbolicSolution, Error> {
        let (m, _) = sla();
        run_plan(&m, &Plan { name: String::new(), steps: vec![step] })
    }

    fn transfer(joint: &str, condition: u8, donor: usize, acceptor: usize, target: &str) -> Transfer {
        Transfer {
            joint: joint.into(),
            condition,
            donor,
            acceptor,
            donor_point: None,
            acceptor_point: None,
            direction: None,
            targets: vec![target.into()],
        }
    }

    #[test]
    fn inadmissible_steps_fail_with_index() {
        // body 3 has no joint to ground
        let e = single(PlanStep::Eliminate { body: 3, condition: 1 }).unwrap_err();
        assert!(matches!(e, Error::PlanStep { index: 0, ref source } if matches!(**source, Error::RuleViolation(_))));
        // hub frame axis of body 4's ground joint is not a revolute
        assert!(single(PlanStep::Eliminate { body: 4, condition: 2 }).is_err());
        // dipole across a spherical joint
        assert!(single(PlanStep::Dipole(transfer("1-3", 2, 1, 3, "mx1"))).is_err());
        // point off the centre of a spherical joint
        let mut t = transfer("1-3", 1, 1, 3, "m1");
        t.donor_point = Some(["1".into(), "0".into(), "0".into()]);
        assert!(single(PlanStep::Monopole(t)).is_err());
        // bodies not connected by the named joint
        assert!(single(PlanStep::Monopole(transfer("1-3", 1, 2, 3, "m2"))).is_err());
    }

    #[test]
    fn unresponsive_target_is_unsolvable() {
        // a point mass at the origin of body 2 cannot change Iyy2
        let mut t = transfer("2-3", 1, 2, 3, "Iyy2");
        t.donor_point = Some(["0".into(), "0".into(), "0".into()]);
        let e = single(PlanStep::Monopole(t)).unwrap_err();
        assert!(matches!(e, Error::PlanStep { ref source, .. } if matches!(**source, Error::Unsolvable(_))));
    }
}

//! Mechanism description, inertial parameter layout and model-file ingestion.
//!
//! A model file is JSON with the top-level keys `bodies`, `joints`,
//! `geometry`, `gravity`, `independent_coords` and `tree_joints`. Point
//! coordinates, axes and rotations may be numbers or expressions over the
//! geometry symbols (`"D12+D13"`, `"-L7/2"`). See `fixtures/sla/model.json`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use rug::ops::Pow;
use rug::Rational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::expr::Expr;
use crate::linalg::{Mat3, Vec3};
use crate::precision::{parse_decimal_rational, PScalar, PrecisionLevel};
use crate::Error;

/// Inertial parameter names in per-body order.
pub const PARAM_NAMES: [&str; 10] = ["m", "mx", "my", "mz", "Ixx", "Ixy", "Ixz", "Iyy", "Iyz", "Izz"];

/// Parameters per body.
pub const PARAMS_PER_BODY: usize = 10;

/// Flat index of parameter `name` of `body` (bodies numbered from 1; ground excluded).
pub fn param_index(body: usize, name: &str, n_bodies: usize) -> Result<usize, Error> {
    if body == 0 || body > n_bodies {
        return Err(Error::UnknownParameter(format!("body {body} out of range 1..={n_bodies}")));
    }
    let k = PARAM_NAMES
        .iter()
        .position(|p| *p == name)
        .ok_or_else(|| Error::UnknownParameter(format!("unknown parameter name '{name}'")))?;
    Ok(PARAMS_PER_BODY * (body - 1) + k)
}

/// Inverse of [`param_index`]: `(body, name)`.
pub fn param_of_index(index: usize) -> (usize, &'static str) {
    (index / PARAMS_PER_BODY + 1, PARAM_NAMES[index % PARAMS_PER_BODY])
}

/// Human label such as `mx5`.
pub fn param_label(index: usize) -> String {
    let (b, n) = param_of_index(index);
    format!("{n}{b}")
}

/// Parses a label such as `Iyy4` back to its flat index.
pub fn parse_param_label(label: &str, n_bodies: usize) -> Result<usize, Error> {
    let split = label
        .find(|c: char| c.is_ascii_digit())
        .ok_or_else(|| Error::UnknownParameter(format!("parameter label '{label}' lacks a body number")))?;
    let body: usize = label[split..]
        .parse()
        .map_err(|_| Error::UnknownParameter(format!("bad body number in '{label}'")))?;
    param_index(body, &label[..split], n_bodies)
}

/// Geometry symbol table. A symbol without a value stays purely symbolic.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct GeomParams {
    entries: BTreeMap<String, Option<Rational>>,
}

impl GeomParams {
    pub fn set(&mut self, name: &str, value: &str) -> Result<(), Error> {
        let r = parse_decimal_rational(value)?;
        self.entries.insert(name.to_string(), Some(r));
        Ok(())
    }

    pub fn set_rational(&mut self, name: &str, value: Rational) {
        self.entries.insert(name.to_string(), Some(value));
    }

    pub fn declare_symbolic(&mut self, name: &str) {
        self.entries.entry(name.to_string()).or_insert(None);
    }

    pub fn get(&self, name: &str) -> Option<&Rational> {
        self.entries.get(name).and_then(Option::as_ref)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains_key(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    /// Overlays every bound value of `other`.
    pub fn merge(&mut self, other: &GeomParams) {
        for (k, v) in &other.entries {
            match v {
                Some(_) => {
                    self.entries.insert(k.clone(), v.clone());
                }
                None => self.declare_symbolic(k),
            }
        }
    }

    /// Canonical decimal-or-fraction text of a bound value.
    pub fn value_text(&self, name: &str) -> Option<String> {
        self.get(name).map(rational_text)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Option<&Rational>)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_ref()))
    }
}

/// Exact text of a rational: a terminating decimal when possible, else `p/q`.
pub fn rational_text(r: &Rational) -> String {
    let mut den = r.denom().clone();
    let mut k = 0u32;
    let two = rug::Integer::from(2);
    let five = rug::Integer::from(5);
    while den.is_divisible(&two) {
        den /= 2;
        k += 1;
    }
    let mut k5 = 0u32;
    while den.is_divisible(&five) {
        den /= 5;
        k5 += 1;
    }
    if den != 1 {
        return format!("{}/{}", r.numer(), r.denom());
    }
    let scale = k.max(k5);
    let scaled = r.clone() * Rational::from(rug::Integer::from(10).pow(scale));
    let n = scaled.numer().clone();
    let neg = n < 0;
    let digits = n.abs().to_string();
    let s = scale as usize;
    let body = if s == 0 {
        digits
    } else if digits.len() > s {
        format!("{}.{}", &digits[..digits.len() - s], &digits[digits.len() - s..])
    } else {
        format!("0.{}{}", "0".repeat(s - digits.len()), digits)
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

/// A number-or-expression slot in the model file (JSON number or string).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExprText(pub String);

impl ExprText {
    pub fn parse(&self) -> Result<Expr, Error> {
        Expr::parse(&self.0)
    }
}

impl From<&str> for ExprText {
    fn from(s: &str) -> Self {
        ExprText(s.to_string())
    }
}

impl fmt::Display for ExprText {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum NumOrStr {
    Num(serde_json::Number),
    Str(String),
}

impl<'de> Deserialize<'de> for ExprText {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(match NumOrStr::deserialize(d)? {
            NumOrStr::Num(n) => ExprText(n.to_string()),
            NumOrStr::Str(s) => ExprText(s),
        })
    }
}

impl Serialize for ExprText {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum JointKind {
    R,
    P,
    S,
    U,
}

impl JointKind {
    /// Coordinates contributed when the joint is part of the spanning tree.
    pub fn coords(self) -> usize {
        match self {
            JointKind::R | JointKind::P => 1,
            JointKind::U => 2,
            JointKind::S => 3,
        }
    }

    pub fn axis_count(self) -> usize {
        match self {
            JointKind::R | JointKind::P => 1,
            JointKind::U => 2,
            JointKind::S => 0,
        }
    }

    /// Residual rows when the joint closes a loop (point + axis conditions).
    pub fn closure_rows(self) -> Option<usize> {
        match self {
            JointKind::S => Some(3),
            JointKind::U => Some(4),
            JointKind::R => Some(5),
            JointKind::P => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BodyDef {
    pub id: usize,
    #[serde(default)]
    pub name: String,
}

/// Joint as written in the model file.
///
/// `axes` are unit vectors in the child frame at zero joint coordinates.
/// For U joints the first axis is carried by the parent side and the second by
/// the child. `rotation` is the child frame orientation relative to the
/// parent at zero coordinates (identity when absent). S joints in the tree use
/// intrinsic X-Y-Z angles.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JointDef {
    pub id: String,
    pub kind: JointKind,
    pub parent: usize,
    pub child: usize,
    pub parent_point: [ExprText; 3],
    pub child_point: [ExprText; 3],
    #[serde(default)]
    pub axes: Vec<[ExprText; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotation: Option<[[ExprText; 3]; 3]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub initial: Vec<ExprText>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closure_rows: Option<Vec<usize>>,
}

fn default_gravity() -> [ExprText; 3] {
    [ExprText("0".into()), ExprText("0".into()), ExprText("-9.81".into())]
}

/// Serialized geometry value: number, string expression-free literal, or null.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeomValue(pub Option<String>);

impl<'de> Deserialize<'de> for GeomValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(serde_json::Number),
            Str(String),
            Null(()),
        }
        Ok(GeomValue(match Raw::deserialize(d)? {
            Raw::Num(n) => Some(n.to_string()),
            Raw::Str(s) => Some(s),
            Raw::Null(()) => None,
        }))
    }
}

impl Serialize for GeomValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match &self.0 {
            Some(v) => s.serialize_str(v),
            None => s.serialize_none(),
        }
    }
}

/// On-disk model document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    #[serde(default)]
    pub name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    pub bodies: Vec<BodyDef>,
    pub joints: Vec<JointDef>,
    #[serde(default)]
    pub geometry: BTreeMap<String, GeomValue>,
    #[serde(default = "default_gravity")]
    pub gravity: [ExprText; 3],
    pub independent_coords: Vec<String>,
    pub tree_joints: Vec<String>,
}

/// Parsed joint.
#[derive(Clone, Debug)]
pub struct Joint {
    pub id: String,
    pub kind: JointKind,
    pub parent: usize,
    pub child: usize,
    pub parent_point: [Expr; 3],
    pub child_point: [Expr; 3],
    pub axes: Vec<[Expr; 3]>,
    pub rotation: Option<[[Expr; 3]; 3]>,
    pub initial: Vec<Expr>,
    pub closure_rows: Option<Vec<usize>>,
    /// First coordinate slot in the full coordinate vector (tree joints only).
    pub coord_offset: Option<usize>,
}

impl Joint {
    pub fn in_tree(&self) -> bool {
        self.coord_offset.is_some()
    }

    /// Rows kept when closing a loop.
    pub fn active_closure_rows(&self) -> Vec<usize> {
        match &self.closure_rows {
            Some(r) => r.clone(),
            None => (0..self.kind.closure_rows().unwrap_or(0)).collect(),
        }
    }

    pub fn point_on(&self, body: usize) -> Option<&[Expr; 3]> {
        if body == self.parent {
            Some(&self.parent_point)
        } else if body == self.child {
            Some(&self.child_point)
        } else {
            None
        }
    }

    pub fn other(&self, body: usize) -> Option<usize> {
        if body == self.parent {
            Some(self.child)
        } else if body == self.child {
            Some(self.parent)
        } else {
            None
        }
    }
}

/// Validated, immutable mechanism.
#[derive(Clone, Debug)]
pub struct Mechanism {
    file: ModelFile,
    geometry: GeomParams,
    gravity: [Expr; 3],
    joints: Vec<Joint>,
    tree_order: Vec<usize>,
    loop_joints: Vec<usize>,
    n_coords: usize,
    independent: Vec<usize>,
    dependent: Vec<usize>,
    n_bodies: usize,
}

/// Loads a model file (or a directory containing `model.json`).
pub fn load_mechanism(path: &Path, overrides: &GeomParams) -> Result<Mechanism, Error> {
    let file = if path.is_dir() { path.join("model.json") } else { path.to_path_buf() };
    let text = std::fs::read_to_string(&file).map_err(|e| Error::Io(format!("{}: {e}", file.display())))?;
    Mechanism::from_json(&text, overrides)
}

impl Mechanism {
    pub fn from_json(text: &str, overrides: &GeomParams) -> Result<Mechanism, Error> {
        let file: ModelFile = serde_json::from_str(text).map_err(|e| Error::Parse(format!("model file: {e}")))?;
        Mechanism::from_file(file, overrides)
    }

    pub fn from_file(mut file: ModelFile, overrides: &GeomParams) -> Result<Mechanism, Error> {
        let mut geometry = GeomParams::default();
        for (k, v) in &file.geometry {
            match &v.0 {
                Some(text) => geometry.set(k, text)?,
                None => geometry.declare_symbolic(k),
            }
        }
        geometry.merge(overrides);
        file.geometry = geometry
            .iter()
            .map(|(k, v)| (k.to_string(), GeomValue(v.map(rational_text))))
            .collect();

        // bodies: ids 0..=n, unique
        let mut ids = BTreeSet::new();
        for b in &file.bodies {
            if !ids.insert(b.id) {
                return Err(Error::Validation(format!("duplicate body id {}", b.id)));
            }
        }
        let n_total = ids.len();
        if n_total == 0 || ids.iter().copied().ne(0..n_total) {
            return Err(Error::Validation("body ids must be 0..=n with 0 the ground".into()));
        }
        let n_bodies = n_total - 1;

        let parse3 = |a: &[ExprText; 3]| -> Result<[Expr; 3], Error> { Ok([a[0].parse()?, a[1].parse()?, a[2].parse()?]) };
        let mut joints = Vec::with_capacity(file.joints.len());
        let mut joint_ids = BTreeSet::new();
        for j in &file.joints {
            if !joint_ids.insert(j.id.clone()) {
                return Err(Error::Validation(format!("duplicate joint id '{}'", j.id)));
            }
            if j.parent >= n_total || j.child >= n_total {
                return Err(Error::Validation(format!("joint '{}' references an unknown body", j.id)));
            }
            if j.parent == j.child {
                return Err(Error::Validation(format!("joint '{}' connects body {} to itself", j.id, j.parent)));
            }
            if j.axes.len() != j.kind.axis_count() {
                return Err(Error::Validation(format!(
                    "joint '{}' of kind {:?} needs {} axes, has {}",
                    j.id,
                    j.kind,
                    j.kind.axis_count(),
                    j.axes.len()
                )));
            }
            let rotation = match &j.rotation {
                Some(r) => Some([parse3(&r[0])?, parse3(&r[1])?, parse3(&r[2])?]),
                None => None,
            };
            joints.push(Joint {
                id: j.id.clone(),
                kind: j.kind,
                parent: j.parent,
                child: j.child,
                parent_point: parse3(&j.parent_point)?,
                child_point: parse3(&j.child_point)?,
                axes: j.axes.iter().map(parse3).collect::<Result<_, _>>()?,
                rotation,
                initial: j.initial.iter().map(ExprText::parse).collect::<Result<_, _>>()?,
                closure_rows: j.closure_rows.clone(),
                coord_offset: None,
            });
        }

        // spanning tree
        let mut tree_set = BTreeSet::new();
        let mut parent_joint: Vec<Option<usize>> = vec![None; n_total];
        for tid in &file.tree_joints {
            let ji = joints
                .iter()
                .position(|j| &j.id == tid)
                .ok_or_else(|| Error::Validation(format!("tree joint '{tid}' is not defined")))?;
            if !tree_set.insert(ji) {
                return Err(Error::Validation(format!("tree joint '{tid}' listed twice")));
            }
            let c = joints[ji].child;
            if c == 0 {
                return Err(Error::Validation(format!("tree joint '{tid}' has the ground as child")));
            }
            if parent_joint[c].replace(ji).is_some() {
                return Err(Error::Validation(format!("body {c} has two parent joints in the tree")));
            }
        }
        for (b, pj) in parent_joint.iter().enumerate().skip(1) {
            if pj.is_none() {
                return Err(Error::Validation(format!("body {b} is not reached by the spanning tree")));
            }
        }
        // topological order from the ground; detects cycles
        let mut placed = vec![false; n_total];
        placed[0] = true;
        let mut tree_order = Vec::new();
        while tree_order.len() < n_bodies {
            let before = tree_order.len();
            for b in 1..n_total {
                let ji = parent_joint[b].expect("checked above");
                if !placed[b] && placed[joints[ji].parent] {
                    placed[b] = true;
                    tree_order.push(ji);
                }
            }
            if tree_order.len() == before {
                return Err(Error::Validation("tree joints contain a cycle".into()));
            }
        }
        let mut n_coords = 0;
        for &ji in &tree_order {
            joints[ji].coord_offset = Some(n_coords);
            n_coords += joints[ji].kind.coords();
        }
        let loop_joints: Vec<usize> = (0..joints.len()).filter(|i| !tree_set.contains(i)).collect();
        let mut n_eq = 0;
        for &li in &loop_joints {
            let j = &joints[li];
            let max_rows = j.kind.closure_rows().ok_or_else(|| {
                Error::Validation(format!("joint '{}': {:?} joints cannot close a loop", j.id, j.kind))
            })?;
            let rows = j.active_closure_rows();
            if rows.is_empty() || rows.iter().any(|&r| r >= max_rows) || rows.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Validation(format!("joint '{}': invalid closure_rows", j.id)));
            }
            n_eq += rows.len();
        }
        for (ji, j) in joints.iter().enumerate() {
            if tree_set.contains(&ji) && !j.initial.is_empty() && j.initial.len() != j.kind.coords() {
                return Err(Error::Validation(format!("joint '{}': initial has wrong length", j.id)));
            }
        }

        // independent coordinates
        let mut independent = Vec::new();
        for spec in &file.independent_coords {
            let (jid, k) = match spec.split_once(':') {
                Some((a, b)) => (a, b.parse::<usize>().map_err(|_| Error::Validation(format!("bad coordinate '{spec}'")))?),
                None => (spec.as_str(), 0),
            };
            let j = joints
                .iter()
                .find(|j| j.id == jid)
                .ok_or_else(|| Error::Validation(format!("independent coordinate '{spec}' names an unknown joint")))?;
            let off = j
                .coord_offset
                .ok_or_else(|| Error::Validation(format!("independent coordinate '{spec}' is not on a tree joint")))?;
            if k >= j.kind.coords() {
                return Err(Error::Validation(format!("independent coordinate '{spec}' out of range")));
            }
            if independent.contains(&(off + k)) {
                return Err(Error::Validation(format!("independent coordinate '{spec}' listed twice")));
            }
            independent.push(off + k);
        }
        if n_coords < n_eq || independent.len() != n_coords - n_eq {
            return Err(Error::Validation(format!(
                "{} independent coordinates declared but the mechanism has {} tree coordinates and {} closure equations",
                independent.len(),
                n_coords,
                n_eq
            )));
        }
        let dependent = (0..n_coords).filter(|c| !independent.contains(c)).collect();

        let gravity = parse3(&file.gravity)?;
        let mech = Mechanism {
            file,
            geometry,
            gravity,
            joints,
            tree_order,
            loop_joints,
            n_coords,
            independent,
            dependent,
            n_bodies,
        };
        mech.check_units()?;
        Ok(mech)
    }

    /// Unit axes and orthonormal rotations, checked wherever geometry is numeric.
    fn check_units(&self) -> Result<(), Error> {
        let lvl = PrecisionLevel::DoubleNative;
        for j in &self.joints {
            for a in &j.axes {
                if let Ok(v) = self.eval_vec(a, lvl) {
                    let n = v.norm().to_f64();
                    if (n - 1.0).abs() > 1e-12 {
                        return Err(Error::Validation(format!("joint '{}': axis has norm {n}, not 1", j.id)));
                    }
                }
            }
            if let Some(r) = &j.rotation {
                if let Ok(m) = self.eval_mat(r, lvl) {
                    if m.orthonormality_defect() > 1e-12 || (m.det().to_f64() - 1.0).abs() > 1e-12 {
                        return Err(Error::Validation(format!("joint '{}': rotation is not proper orthonormal", j.id)));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.file.name
    }

    pub fn geometry(&self) -> &GeomParams {
        &self.geometry
    }

    /// Number of moving bodies (ground excluded).
    pub fn n_bodies(&self) -> usize {
        self.n_bodies
    }

    pub fn n_params(&self) -> usize {
        PARAMS_PER_BODY * self.n_bodies
    }

    pub fn n_coords(&self) -> usize {
        self.n_coords
    }

    pub fn dof(&self) -> usize {
        self.independent.len()
    }

    pub fn n_loops(&self) -> usize {
        self.loop_joints.len()
    }

    pub fn joints(&self) -> &[Joint] {
        &self.joints
    }

    pub fn joint(&self, id: &str) -> Option<&Joint> {
        self.joints.iter().find(|j| j.id == id)
    }

    /// Tree joints in root-to-leaf order.
    pub fn tree_joints(&self) -> impl Iterator<Item = &Joint> {
        self.tree_order.iter().map(|&i| &self.joints[i])
    }

    pub fn loop_joints(&self) -> impl Iterator<Item = &Joint> {
        self.loop_joints.iter().map(|&i| &self.joints[i])
    }

    pub fn independent(&self) -> &[usize] {
        &self.independent
    }

    pub fn dependent(&self) -> &[usize] {
        &self.dependent
    }

    pub fn gravity(&self, level: PrecisionLevel) -> Result<Vec3, Error> {
        self.eval_vec(&self.gravity, level)
    }

    pub fn eval(&self, e: &Expr, level: PrecisionLevel) -> Result<PScalar, Error> {
        e.eval(&self.geometry, level)
    }

    pub fn eval_vec(&self, v: &[Expr; 3], level: PrecisionLevel) -> Result<Vec3, Error> {
        Ok(Vec3([self.eval(&v[0], level)?, self.eval(&v[1], level)?, self.eval(&v[2], level)?]))
    }

    pub fn eval_mat(&self, m: &[[Expr; 3]; 3], level: PrecisionLevel) -> Result<Mat3, Error> {
        let r = |i: usize| -> Result<[PScalar; 3], Error> {
            Ok([self.eval(&m[i][0], level)?, self.eval(&m[i][1], level)?, self.eval(&m[i][2], level)?])
        };
        Ok(Mat3([r(0)?, r(1)?, r(2)?]))
    }

    /// Initial full-coordinate guess from the joints' `initial` entries (zero elsewhere).
    pub fn initial_q(&self, level: PrecisionLevel) -> Result<Vec<PScalar>, Error> {
        let mut q = vec![PScalar::zero(level); self.n_coords];
        for j in self.tree_joints() {
            let off = j.coord_offset.expect("tree joint");
            for (k, e) in j.initial.iter().enumerate() {
                q[off + k] = self.eval(e, level)?;
            }
        }
        Ok(q)
    }

    /// Human label of coordinate slot `c`, e.g. `0-4:1`.
    pub fn coord_label(&self, c: usize) -> String {
        for j in self.tree_joints() {
            let off = j.coord_offset.expect("tree joint");
            if c >= off && c < off + j.kind.coords() {
                return if j.kind.coords() == 1 { j.id.clone() } else { format!("{}:{}", j.id, c - off) };
            }
        }
        format!("#{c}")
    }

    /// Document with overrides resolved into `geometry`.
    pub fn to_file(&self) -> &ModelFile {
        &self.file
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.file).expect("model serializes")
    }

    /// SHA-256 of the canonical JSON form.
    pub fn digest(&self) -> String {
        use sha2::{Digest, Sha256};
        hex::encode(Sha256::digest(serde_json::to_vec(&self.file).expect("model serializes")))
    }
}

/// Flat inertial parameter vector, 10 entries per moving body.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamVector(pub Vec<PScalar>);

impl ParamVector {
    pub fn zeros(n_bodies: usize, level: PrecisionLevel) -> Self {
        ParamVector(vec![PScalar::zero(level); PARAMS_PER_BODY * n_bodies])
    }

    pub fn unit(n_bodies: usize, k: usize, level: PrecisionLevel) -> Self {
        let mut v = Self::zeros(n_bodies, level);
        v.0[k] = PScalar::one(level);
        v
    }

    pub fn from_f64(vals: &[f64], level: PrecisionLevel) -> Self {
        ParamVector(vals.iter().map(|&v| PScalar::from_f64(v, level)).collect())
    }

    pub fn body(&self, body: usize) -> InertialParams {
        let s = &self.0[PARAMS_PER_BODY * (body - 1)..PARAMS_PER_BODY * body];
        InertialParams::from_slice(s)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// The ten inertial parameters of one body, inertia about the body reference point.
#[derive(Clone, Debug, PartialEq)]
pub struct InertialParams {
    pub m: PScalar,
    pub first_moment: Vec3,
    pub inertia: Mat3,
}

impl InertialParams {
    pub fn from_slice(s: &[PScalar]) -> Self {
        let [m, mx, my, mz, ixx, ixy, ixz, iyy, iyz, izz] = <&[PScalar; 10]>::try_from(s).expect("10 parameters").clone();
        InertialParams {
            m,
            first_moment: Vec3([mx, my, mz]),
            inertia: Mat3([[ixx, ixy.clone(), ixz.clone()], [ixy, iyy, iyz.clone()], [ixz, iyz, izz]]),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
            && self.first_moment.0.iter().all(PScalar::is_zero)
            && self.inertia.0.iter().flatten().all(PScalar::is_zero)
    }
}

//! Built-in short/long-arm suspension: model, transfer plan, excitation
//! trajectory and the reference coefficient table.
//!
//! Bodies: 1 lower arm, 2 upper arm, 3 hub, 4 tie rod, 5 wheel, 6 damper
//! body, 7 damper rod. Independent coordinates are the lower arm angle and
//! the wheel spin. Dimensions not fixed by the named geometry (hinge
//! inclinations, tie-rod and damper mounts) are frozen in the model file.

use crate::dynamics::TrajectoryConfig;
use crate::model::parse_param_label;
use crate::symbolic::Plan;
use crate::{Error, GeomParams, Mechanism};

pub const MODEL_JSON: &str = include_str!("../../../fixtures/sla/model.json");
pub const PLAN_JSON: &str = include_str!("../../../fixtures/sla/plan.json");
pub const EXPECTED_CSV: &str = include_str!("../../../fixtures/sla/expected_coefficients.csv");

/// Parameters regrouped into the others (struck or annihilated by the plan).
pub const PIN_SET: [&str; 29] = [
    "m1", "my1", "Ixx1", "Ixy1", "Ixz1", "Iyy1", "Iyz1", "Izz1", "m2", "my2", "Ixx2", "Ixy2", "Ixz2", "Iyy2",
    "Iyz2", "Izz2", "m4", "Iyy4", "m5", "mx5", "Izz5", "m6", "m7", "Ixx7", "Ixy7", "Ixz7", "Iyy7", "Iyz7", "Izz7",
];

/// Parameters with no influence on the motion.
pub const NO_EFFECT: [&str; 13] = [
    "my1", "Ixx1", "Ixy1", "Ixz1", "Iyz1", "Izz1", "my2", "Ixx2", "Ixy2", "Ixz2", "Iyz2", "Izz2", "m6",
];

pub const BASE_COUNT: usize = 41;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    Published,
    Derived,
}

/// One coefficient of a base parameter expression.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpectedCoefficient {
    /// Base parameter name, `b01`..
    pub base: String,
    pub parameter: String,
    pub value: f64,
    pub source: Source,
}

#[derive(Clone, Debug)]
pub struct SlaFixture {
    pub mechanism: Mechanism,
    pub plan: Plan,
    pub trajectory: TrajectoryConfig,
    pub expected: Vec<ExpectedCoefficient>,
}

fn parse_expected(text: &str) -> Result<Vec<ExpectedCoefficient>, Error> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        if f.len() != 4 {
            return Err(Error::Parse(format!("expected table line {}: four fields needed", n + 1)));
        }
        let value = f[2]
            .parse()
            .map_err(|_| Error::Parse(format!("expected table line {}: bad number '{}'", n + 1, f[2])))?;
        let source = match f[3] {
            "published" => Source::Published,
            "derived" => Source::Derived,
            s => return Err(Error::Parse(format!("expected table line {}: unknown source '{s}'", n + 1))),
        };
        out.push(ExpectedCoefficient {
            base: f[0].to_string(),
            parameter: f[1].to_string(),
            value,
            source,
        });
    }
    Ok(out)
}

/// The fixture with its default geometry.
pub fn sla_defaults() -> SlaFixture {
    sla_with(&GeomParams::default()).expect("built-in fixture is valid")
}

/// The fixture with some geometry symbols overridden.
pub fn sla_with(overrides: &GeomParams) -> Result<SlaFixture, Error> {
    Ok(SlaFixture {
        mechanism: Mechanism::from_json(MODEL_JSON, overrides)?,
        plan: Plan::from_json(PLAN_JSON)?,
        trajectory: TrajectoryConfig::default_for(2),
        expected: parse_expected(EXPECTED_CSV)?,
    })
}

impl SlaFixture {
    pub fn pin_indices(&self) -> Vec<usize> {
        labels_to_indices(&PIN_SET)
    }

    pub fn no_effect_indices(&self) -> Vec<usize> {
        labels_to_indices(&NO_EFFECT)
    }
}

fn labels_to_indices(labels: &[&str]) -> Vec<usize> {
    let mut v: Vec<usize> = labels
        .iter()
        .map(|l| parse_param_label(l, 7).expect("valid label"))
        .collect();
    v.sort_unstable();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::run_plan;

    #[test]
    fn fixture_shape() {
        let f = sla_defaults();
        let m = &f.mechanism;
        assert_eq!((m.n_bodies(), m.n_params(), m.dof(), m.n_loops()), (7, 70, 2, 3));
        let g = m.geometry();
        for (k, v) in [("D22", "0.2501"), ("D12", "0.3196"), ("D13", "0.082"), ("D31", "0.1301"), ("L7", "0.427"), ("L10", "0.319"), ("DKx", "-0.0168"), ("DKy", "-0.018"), ("DKz", "-0.2285")] {
            assert_eq!(g.get(k), Some(&crate::precision::parse_decimal_rational(v).unwrap()), "{k}");
        }
        assert_eq!(f.expected.iter().filter(|e| e.source == Source::Published).count(), 18);
    }

    #[test]
    fn plan_matches_pin_set() {
        let f = sla_defaults();
        let s = run_plan(&f.mechanism, &f.plan).unwrap();
        assert_eq!(s.eliminated(), f.pin_indices());
        assert_eq!(s.struck.iter().copied().collect::<Vec<_>>(), f.no_effect_indices());
        assert_eq!(s.kept().len(), BASE_COUNT);
    }

    #[test]
    fn wheel_offsets_reproduce_table_entries() {
        // DKx, DKy and DKz + L7/2 appear directly as hub coefficients
        let g = sla_defaults().mechanism.geometry().clone();
        let v = |k: &str| g.get(k).unwrap().to_f64();
        assert!((v("DKx") + 0.0168).abs() < 1e-15);
        assert!((v("DKz") + v("L7") / 2.0 + 0.015).abs() < 1e-12);
        assert!((-v("DKx") * v("DKy") + 0.0003024).abs() < 1e-12);
    }
}

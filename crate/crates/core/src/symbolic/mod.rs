//! Exact symbolic reduction of inertial parameters by eliminations and
//! multipole transfers.

pub mod engine;
pub mod linear_form;
pub mod poly;
pub mod ratexpr;

pub use engine::{run_plan, EvaluatedSolution, Plan, PlanStep, SymbolicSolution, Transfer};
pub use linear_form::LinearForm;
pub use ratexpr::RatExpr;

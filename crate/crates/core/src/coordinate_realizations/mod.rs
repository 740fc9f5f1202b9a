//! Numeric oracle: expression-tree vector fields and one-forms over
//! coordinate charts, differentiated with forward-mode dual numbers, and
//! the verification suite for every explicit catalog table.

mod checks;
mod expr;
mod fields;
mod tables;

pub use checks::{
    check_structure, enlarged_algebra_check, killing_residual, sample_chart_point,
    StructureReport,
};
pub use expr::{parse_sexpr, Dual, Expr, COORD_NAMES};
pub use fields::{
    contract, killing_residual_metric, lie_bracket_eval, lie_derivative_one_form, ChartField,
    CoordinateMetric,
};
pub use tables::{bind_params, random_pattern_h, realization, FieldRef, Realization, Relation};

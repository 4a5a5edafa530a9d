//! Exact base-field arithmetic: ℚ, real number fields, ℚ(t), algebraic
//! reals, and Laurent-series completions used for henselian lifting.

pub mod algebraic;
pub mod factor;
pub mod numberfield;
pub mod poly;
pub mod rat;
pub mod ratfunc;
pub mod series;
pub mod value;

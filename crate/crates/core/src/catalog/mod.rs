//! Normal forms of the table rows and commuting pairs, invariant
//! extraction, and a necessary-conditions classifier.

mod classify;
mod id;
mod pairs;
mod table;

pub use classify::{builtin_forms, classify, extract_invariants, signature, Classification, GermInvariants, Signature};
pub use id::{format_jet1, format_jet2, Family, NormalFormId, PairKind, Param, Row};
pub use pairs::{exponent_data, make_pair, pair_instances, ExponentData};
pub use table::{first_integral, make_normal_form, row_instances, separatrix_charts};

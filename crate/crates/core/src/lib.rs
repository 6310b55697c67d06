//! Exact counting of commuting pairs in the radical of `End(P_{Q,d})` over
//! finite fields, with count-preserving quiver rewrites, closed forms and
//! polynomial fitting.

pub mod algebra;
pub mod cache;
pub mod canonical;
pub mod closed_form;
pub mod count;
pub mod error;
pub mod field;
pub mod lab;
pub mod quiver;
pub mod reduce;
pub mod verify;

pub use algebra::{adjoint_matrix, build_basis, radical_power_indices, AlgebraBasis, RadicalVector, SlotList, StructureConstants};
pub use canonical::canonical_hash;
pub use closed_form::{a3_count_poly, base_count_poly, gaussian_binomial, Classification, PolyQ};
pub use count::{
    count_commuting, count_conjugacy_classes_un, count_overline, count_weakened, naive_pair_count, CountOptions,
    CountResult, Engine, Mode,
};
pub use error::{Error, Result};
pub use field::{nullity, FieldTable, FqMatrix};
pub use lab::{degree_bound, interpolate, screen_conjectures, FitReport, SampleSet};
pub use quiver::{parse_quiver, Path, Quiver, SummandVector};
pub use reduce::{dispatch_count, normalize, ReductionStep, ReductionTrace, Rule};

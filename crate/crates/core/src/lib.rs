//! Balanced configurations of plane vectors.
//!
//! A configuration `v_0, …, v_{m-1}` is *balanced* when, for every `i`, the
//! multiset `{det(v_i, v_j) : j != i}` is symmetric about zero, and *uniform*
//! when no two members are linearly dependent. Every uniform balanced
//! configuration has odd size `m = 2n + 1` and is a linear image of the
//! `m`-th roots of unity; [`canonical::canonicalize`] computes that map.
//!
//! - [`geom`]: scalars (exact rationals or `f64`), vectors, determinants, labeling.
//! - [`balance`]: verdicts, the pairing map and the cyclic determinant identities.
//! - [`recurrence`]: the model sequences `u_i(t)`, `w_i(t)` and their closure parameters.
//! - [`canonical`]: frame maps, reconstruction from three vectors, canonical forms.
//! - [`search`]: seeded maps and perturbations, exhaustive small-grid enumeration.

pub mod balance;
pub mod canonical;
pub mod geom;
pub mod recurrence;
pub mod search;

pub use balance::{
    build_pairing, even_m_witness, is_balanced, is_uniform, step_constants, verify_antisymmetry,
    BalanceError, BalanceReport, PairingMap, StepConstants, Tol, UniformReport,
};
pub use canonical::{
    canonicalize, extract_t, frame_map, gl2_equivalent, match_k, reconstruct_from_triple,
    CanonError, CanonOptions, CanonicalForm, LinearMap2,
};
pub use geom::{
    argument, cyclic_index, det2, label_by_increasing_arguments, roots_of_unity, AnyConfiguration,
    Configuration, GeomError, LabeledConfiguration, Mode, PlaneVector, Scalar,
};
pub use recurrence::{
    check_parity_degrees, model_configuration, numeric_sequences, symbolic_sequences, t_grid,
    wn_equation_roots, IntPoly, PolyPair, RecurrenceError, RootGrid,
};
pub use search::{enumerate_balanced, perturb, random_invertible, SearchSpec};

pub use num_rational::BigRational;

//! Quadratic residues, character sums and sumset decompositions over F_p.
//!
//! * [`field`]: prime moduli, field elements, the Legendre symbol and subsets of F_p.
//! * [`charsum`]: complete character sums of products of shifts, their
//!   normalized extremes and equidistribution histograms.
//! * [`sumset`]: representation profiles, moments, additive energy.
//! * [`bounds`]: inequality checks on concrete sets and closed-form bound evaluators.
//! * [`search`]: exhaustive branch-and-bound search for `A + B = R_p`.

pub mod bitset;
pub mod bounds;
pub mod charsum;
pub mod error;
pub mod field;
pub mod parallel;
pub mod search;
pub mod sumset;

pub use bitset::BitSet;
pub use bounds::{
    admissible_size_range, certify, check_lemma_ab_bound, check_lemma_p_ab, check_subset_residues,
    generate_residue_instance, proposition_delta_bounds, residue_instance_panel,
    theorem2_lower_bound, theorem3_bounds, verify_theorem2_step, BoundsCertificate, CheckEntry,
    DeltaBounds, SizeRange, SizeRules, Theorem2StepReport, Theorem3Bounds,
};
pub use charsum::{
    char_sum, check_wan, check_weil, ck_empirical, horizontal_sweep, shift_reduced_sum,
    vertical_histogram, CharSumRecord, CkEstimate, Histogram, KTuple, Mode, SweepReport,
};
pub use error::{Error, Result};
pub use field::{legendre, residue_set, validate_prime, FpElement, FpSet, LegendreTable, Prime};
pub use search::{
    search, search_symmetric, search_target, verify_conjecture_range, Decomposition, RangeRow,
    SearchConfig, SearchReport, Verdict,
};
pub use sumset::{
    build_profile, check_holder, check_kappa_one, check_kappa_two, check_tau_bound, random_pair,
    random_pair_panel, RepProfile,
};

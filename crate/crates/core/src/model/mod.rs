//! Levy triplets and measures.

pub mod component;
pub mod decompose;
pub mod measure;
pub mod triplet;

pub use component::{Atom, Kernel, LevyComponent, MeasureParts, Piece, PowerTerm, Side, TypeAlphaBetaDensity};
pub use decompose::{decompose_pro35, decompose_thm25, dominates, CompensatedSplit, Domination};
pub use measure::{
    activity_index, has_finite_variation_jumps, leading_singularity, small_jump_mean, split_pm, truncated_moment, variation_integral, ExtendedReal, FiniteMeasure, LevyMeasure,
};
pub use triplet::{sum_triplets, validate_triplet, LevyTriplet};

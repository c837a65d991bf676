//! Separable-stability certificates at finite depth.
//!
//! A verdict is assembled from three ingredients: a search for separable classes
//! with non-loxodromic image (which rules stability out), the ratio score of
//! translation length to word length, and a nested-plane certificate along the
//! orbit path of every tested class. `CERTIFIED_AT_DEPTH` records exactly what was
//! tested and is not a proof of stability.

mod census;
mod nesting;
mod score;
mod verdict;

pub use census::{automorphism_census, automorphism_census_with_cap, default_test_set, CensusResult, DEFAULT_CENSUS_CAP};
pub use nesting::{nesting_certificate, NestingOutcome, NestingParams, NestingStatus};
pub use score::{class_translation_length, score, score_classes, ScoreRecord};
pub use verdict::{
    certify, certify_classes, CertifyParams, NestingSummary, RejectionKind, StabilityVerdict, VerdictKind, Witness,
};

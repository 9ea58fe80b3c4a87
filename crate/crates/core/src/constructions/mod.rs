//! Explicit strings and models, and the experiments built on them.

pub mod antistochastic;
pub mod bundle;
pub mod hereditary;
pub mod improve;
pub mod partition;
pub mod theorem3;

pub use antistochastic::{
    antistochastic, antistochastic_witnesses, l_shape, shape_report, witness_profile, ShapeReport,
    Witness,
};
pub use bundle::Bundle;
pub use hereditary::{hereditary_check, HereditaryParams, HereditaryReport, PointReport, Stage};
pub use improve::{default_thresholds, improve_sequence, trace_csv, ImprovementTrace, StopReason};
pub use partition::{strongify_partition, total_at_scale, PartitionRecord};
pub use theorem3::{
    mss_omega_report, profile_translation_check, theorem3_bundle, theorem3_string, MssParams,
    Theorem3Bundle, Theorem3String, TranslationRecord,
};

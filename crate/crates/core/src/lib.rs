//! Opacity of regular secrets under natural and Orwellian observation,
//! non-interference and intransitive non-interference, the reductions between
//! them, and a brute-force oracle for cross-checking.
//!
//! Systems are deterministic [`Lts`]s whose accepting set [`F`] recognizes the
//! behaviour and [`F_PHI`] the secret.

pub mod alphabet;
pub mod automata;
pub mod error;
pub mod fixtures;
pub mod interference;
pub mod model;
pub mod observation;
pub mod opacity;
pub mod oracle;
pub mod reductions;
pub mod regex;

pub use alphabet::{Event, EventId, PartitionedAlphabet, Role, Word};
pub use automata::{incorporate_secret, is_subset, product, EpsilonNfa, Inclusion, Lts, StateId, F, F_PHI};
pub use error::{Error, Result};
pub use interference::{check_ini, check_ni, IniMethod, InterferenceVerdict};
pub use model::{parse_model, render_model};
pub use observation::{factorize, project_natural, project_orwellian, ObservationKind};
pub use opacity::{check_opacity_natural, check_opacity_orwellian, check_opacity_static, disclosing_class, OpacityVerdict, SubVerdict};
pub use oracle::{enumerate_language, exactness_bound, oracle_check_opacity};
pub use reductions::{ini_to_opacity, opacity_to_ini, opacity_to_ni, ReductionOutput};
pub use regex::compile_regex;

//! Legal-model semantics of rule configurations, their encoding as normal
//! logic programs and a small grounder and stable-model solver.

pub mod config;
pub mod error;
pub mod ground;
pub mod legal;
pub mod lemma4;
pub mod program;
pub mod solve;
pub mod term;

pub use config::{parse_config, Config, DefRule, Literal, ModKind, Modifier};
pub use error::{AspError, ConfigError, SolveError, SyntaxError};
pub use legal::{check_legal_model, is_legal_model, legal_models, minimal_only, LegalModel, Violation};
pub use lemma4::{answer_set_models, verify_lemma4, Lemma4Report};
pub use program::{emit_asp, parse_program, AspProgram, AspRule};
pub use solve::{answer_sets, ground_program};
pub use term::{parse_term, Term};

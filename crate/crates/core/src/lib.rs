//! Executable reductions between description logics with cardinality
//! restrictions, nominals and the two-variable counting logic C², together
//! with a bounded finite-model finder that checks them.
//!
//! * [`syntax`]: concepts, T_C Boxes and T_I Boxes, their grammar and sizes.
//! * [`semantics`]: finite interpretations and model checking.
//! * [`model_finder`]: bounded, exhaustive model search backed by [`sat`].
//! * [`c2`]: the translation into C² and a C² evaluator over finite structures.
//! * [`reductions`]: cardinality restrictions to nominals and back, and
//!   spy-point internalisation of inclusion axioms.
//! * [`generators`]: exponential torus terminologies, domino encodings and a
//!   brute-force tiler, plus seeded random corpora.

pub mod c2;
pub mod generators;
pub mod model_finder;
pub mod reductions;
pub mod sat;
pub mod semantics;
pub mod syntax;

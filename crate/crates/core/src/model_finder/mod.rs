//! Bounded model search.
//!
//! [`find_model`] decides, for every domain size `1..=k` in turn, whether the
//! terminology has a model of exactly that size, by encoding the question
//! propositionally and handing it to the [`crate::sat`] solver. The search is
//! exhaustive within the bound: [`Verdict::NoModelUpTo`] means no
//! interpretation over the terminology's signature with at most `k` elements
//! is a model. It is not an inconsistency proof beyond the bound.
//!
//! In single-worker mode the witness is canonical: the first model in the
//! order "domain size ascending, then lexicographic valuation order", where
//! the valuation lists concept memberships (names sorted, elements
//! ascending, absent before present), then role edges (names sorted, pairs
//! row-major), then nominal placements (names sorted, lowest element first).

mod encode;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use crate::sat::SolveResult;
use crate::semantics::{is_model, Interpretation, SemanticsError};
use crate::syntax::{Name, TBoxRef};

use encode::Encoding;

#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Largest domain size searched, at least 1.
    pub max_domain_size: usize,
    /// Distinct individual names must denote distinct elements.
    pub unique_names: bool,
    /// Wall-clock budget for the whole search.
    pub deadline: Option<Duration>,
    /// Individual names interpreted in addition to those of the terminology.
    /// They matter only under the unique name assumption.
    pub individuals: BTreeSet<Name>,
    /// Number of domain sizes searched concurrently. Witnesses are canonical
    /// only with a single worker.
    pub workers: usize,
}

impl SearchOptions {
    pub fn new(max_domain_size: usize) -> Self {
        SearchOptions { max_domain_size, unique_names: false, deadline: None, individuals: BTreeSet::new(), workers: 1 }
    }

    pub fn unique_names(mut self, on: bool) -> Self {
        self.unique_names = on;
        self
    }

    pub fn deadline(mut self, budget: Duration) -> Self {
        self.deadline = Some(budget);
        self
    }

    pub fn individual(mut self, name: Name) -> Self {
        self.individuals.insert(name);
        self
    }

    pub fn workers(mut self, n: usize) -> Self {
        self.workers = n.max(1);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// A model with at most `max_domain_size` elements. `canonical` is set
    /// when it is the first model in the canonical search order.
    Consistent { model: Interpretation, canonical: bool },
    /// No model has at most this many elements.
    NoModelUpTo(usize),
}

impl Verdict {
    pub fn is_consistent(&self) -> bool {
        matches!(self, Verdict::Consistent { .. })
    }

    pub fn model(&self) -> Option<&Interpretation> {
        match self {
            Verdict::Consistent { model, .. } => Some(model),
            Verdict::NoModelUpTo(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SearchError {
    #[error("the maximum domain size must be at least 1")]
    ZeroBound,
    #[error("deadline exceeded; no model with up to {exhausted_up_to} elements")]
    DeadlineExceeded { exhausted_up_to: usize },
    #[error("`{0}` is used as more than one kind of symbol")]
    SignatureClash(Name),
    #[error("internal error: search produced a non-model ({0})")]
    Unsound(String),
}

enum SizeOutcome {
    Model(Interpretation),
    None,
    Interrupted,
}

struct Search<'t> {
    tbox: TBoxRef<'t>,
    concepts: BTreeSet<Name>,
    roles: BTreeSet<Name>,
    individuals: BTreeSet<Name>,
    unique_names: bool,
    deadline: Option<Instant>,
}

impl<'t> Search<'t> {
    fn try_size(&self, size: usize, canonical: bool) -> SizeOutcome {
        let mut enc = Encoding::new(self.tbox, size, &self.concepts, &self.roles, &self.individuals, self.unique_names);
        enc.solver.set_deadline(self.deadline);
        match enc.solver.solve() {
            SolveResult::Unsat => SizeOutcome::None,
            SolveResult::Interrupted => SizeOutcome::Interrupted,
            SolveResult::Sat => {
                if canonical && !enc.minimise() {
                    return SizeOutcome::Interrupted;
                }
                SizeOutcome::Model(enc.decode())
            }
        }
    }
}

/// Searches for a model of `tbox` with at most `opts.max_domain_size`
/// elements. Only names of the terminology (plus `opts.individuals`) are
/// interpreted.
pub fn find_model<'t>(tbox: impl Into<TBoxRef<'t>>, opts: &SearchOptions) -> Result<Verdict, SearchError> {
    let tbox = tbox.into();
    if opts.max_domain_size == 0 {
        return Err(SearchError::ZeroBound);
    }
    let mut sig = tbox.signature();
    sig.individuals.extend(opts.individuals.iter().cloned());
    if let Some(n) = sig.clashes().into_iter().next() {
        return Err(SearchError::SignatureClash(n));
    }
    let search = Search {
        tbox,
        concepts: sig.concepts,
        roles: sig.roles,
        individuals: sig.individuals,
        unique_names: opts.unique_names,
        deadline: opts.deadline.map(|d| Instant::now() + d),
    };
    let workers = opts.workers.max(1);
    let canonical = workers == 1;
    let sizes: Vec<usize> = (1..=opts.max_domain_size).collect();
    let mut exhausted = 0;
    for batch in sizes.chunks(workers) {
        if search.deadline.is_some_and(|d| Instant::now() >= d) {
            return Err(SearchError::DeadlineExceeded { exhausted_up_to: exhausted });
        }
        let outcomes: Vec<SizeOutcome> = if batch.len() == 1 {
            vec![search.try_size(batch[0], canonical)]
        } else {
            let search = &search;
            std::thread::scope(|s| {
                let handles: Vec<_> = batch.iter().map(|&m| s.spawn(move || search.try_size(m, canonical))).collect();
                handles.into_iter().map(|h| h.join().expect("search worker panicked")).collect()
            })
        };
        // Sizes are reported in ascending order, so the first model found is the smallest.
        for (&size, outcome) in batch.iter().zip(outcomes) {
            match outcome {
                SizeOutcome::None => exhausted = size,
                SizeOutcome::Interrupted => return Err(SearchError::DeadlineExceeded { exhausted_up_to: exhausted }),
                SizeOutcome::Model(model) => {
                    verify(&model, &search)?;
                    return Ok(Verdict::Consistent { model, canonical });
                }
            }
        }
    }
    Ok(Verdict::NoModelUpTo(opts.max_domain_size))
}

/// Re-checks a witness with the model checker, independently of the encoding.
fn verify(model: &Interpretation, search: &Search<'_>) -> Result<(), SearchError> {
    let holds = is_model(model, search.tbox).map_err(|e: SemanticsError| SearchError::Unsound(e.to_string()))?;
    if !holds {
        return Err(SearchError::Unsound("witness violates the terminology".into()));
    }
    if search.unique_names {
        let places: BTreeSet<usize> = model.nominals().map(|(_, e)| e).collect();
        if places.len() != model.nominals().count() {
            return Err(SearchError::Unsound("witness violates the unique name assumption".into()));
        }
    }
    Ok(())
}

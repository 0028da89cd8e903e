//! Combinatorial Thompson sampling for semi-bandits with probabilistically
//! triggered arms, paired with approximation oracles that decompose into
//! exact sub-problems.
//!
//! The crate is organised as:
//! - [`model`]: arms, actions, rewards, triggering probabilities and smoothness;
//! - [`posterior`]: Beta and Gaussian posteriors over arm means;
//! - [`oracle`]: greedy, k-center, vertex cover, Max-Cut and Christofides oracles;
//! - [`policy`]: the round loop of the sampling and baseline policies;
//! - [`suite`]: outcome laws, environments and instance generators;
//! - [`harness`]: regret ledgers, checkers and output files;
//! - [`experiment`]: the batch driver used by the command-line tool.

pub mod error;
pub mod experiment;
pub mod harness;
pub mod model;
pub mod oracle;
pub mod policy;
pub mod posterior;
pub mod suite;

pub use error::{Error, Result};
pub use harness::{Benchmark, RegretLedger};
pub use model::{Action, MeanVector, ProblemInstance, ProblemKind};
pub use policy::{run_episode, EpisodeConfig, PolicyKind};

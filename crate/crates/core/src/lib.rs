//! Zero-sum wireless secret-sharing game between two legitimate users
//! (Alice and Bob) and an eavesdropper (Eve).
//!
//! Alice and Bob exchange `N` unicast packets without retry and XOR them
//! into a shared secret; Eve reconstructs the secret only if she receives
//! every packet. Alice and Bob choose how to split the sending, Eve chooses
//! where to stand. This crate builds the resulting 3 x (N+1) capture-
//! probability matrix, finds and verifies pure and mixed Nash equilibria
//! with exact rational arithmetic, and validates the analytic probabilities
//! against a seeded Monte Carlo packet-exchange simulator.

pub mod analysis;
pub mod channel;
pub mod game;
pub mod linalg;
pub mod scalar;
pub mod sim;
pub mod solver;

pub use channel::{
    success_probability, triple_from_model, validate_assumption, ChannelError, ChannelModel,
    ChannelTriple, GeometryParams, ValidationReport,
};
pub use game::{
    build_utility_matrix, eve_capture_probability, legit_strategies, packet_counts, EveStrategy,
    GameError, GameSpec, LegitStrategy, UtilityMatrix,
};
pub use scalar::{Scalar, ScalarError};

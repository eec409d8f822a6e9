//! Index calculus, obstruction-gluing models, exact identity checks and Z/2 chain
//! verification for cobordism maps in embedded contact homology.

pub mod chain_engine;
pub mod error;
pub mod gluing_model;
pub mod identity_verifier;
pub mod linalg;
pub mod orbit_calculus;
pub mod poly;
pub mod sample;
pub mod scalar;

pub use error::{ChainError, GluingError, IdentityError, OrbitError, ParseError};
pub use scalar::{GaussRat, Scalar, Tolerance};

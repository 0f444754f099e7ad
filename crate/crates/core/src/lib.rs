//! Combinatorial and geometric rigidity of bar-joint frameworks constrained to
//! algebraic surfaces.
//!
//! The crate is organised bottom-up:
//!
//! * [`graph`] and [`sparsity`]: simple graphs and the `(2,k)` counting
//!   conditions, decided by a pebble game with a brute-force oracle.
//! * [`moves`], [`inverse`], [`reducer`], [`generator`]: the construction
//!   moves, their inverses, certificate-producing reduction to a base graph
//!   and seeded forward generation of tight graphs.
//! * [`rational`], [`poly`], [`surface`], [`presets`]: exact rational
//!   arithmetic, polynomials and surfaces with rational parametrizations.
//! * [`linalg`] and [`rigidity`]: exact and floating rank of the surface
//!   rigidity matrix and the resulting rigidity verdicts.
//!
//! ```
//! use surfrig::presets::preset;
//! use surfrig::rational::q;
//! use surfrig::{analyze, generate, reduce, replay, AnalyzeOptions};
//!
//! # fn main() -> surfrig::Result<()> {
//! let (g, _) = generate(10, 1, 42)?;
//! let cert = reduce(&g, 1)?;
//! assert_eq!(replay(&cert)?, g);
//!
//! let torus = preset("torus", &[("R", q(2)), ("r", q(1))])?;
//! let report = analyze(&g, &torus, &AnalyzeOptions::default())?;
//! assert!(report.isostatic);
//! # Ok(())
//! # }
//! ```

pub mod error;
pub mod generator;
pub mod graph;
pub mod inverse;
pub mod linalg;
pub mod moves;
pub mod poly;
pub mod presets;
pub mod rational;
pub mod reducer;
pub mod rigidity;
pub mod sparsity;
pub mod surface;

pub use error::{Error, Result};
pub use generator::generate;
pub use graph::SimpleGraph;
pub use moves::{ConstructionStep, Move};
pub use presets::SurfaceRegistry;
pub use reducer::{reduce, replay, Base, Certificate};
pub use rigidity::{analyze, compute_type, AnalyzeOptions, Framework, RigidityReport};
pub use sparsity::{is_sparse, is_sparse_bruteforce, SparsityVerdict};
pub use surface::{Point3, Surface};

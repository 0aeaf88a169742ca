//! Self-adjoint extensions of `-d²/dx²` on the interval `[-a, a]`.
//!
//! Every extension is labelled by a 2×2 unitary matrix `U` built from an
//! overall phase `ψ ∈ [0, π]` and a unit four-vector `m`. The crate computes
//! the spectrum of each extension, its eigenfunctions, the associated
//! Legendre functions that appear in the supersymmetric partner chain, the
//! chain itself, and a finite-element oracle used to cross-check all of the
//! closed forms.

pub mod eigenfunctions;
pub mod extensions;
pub mod grid;
pub mod legendre;
pub mod oracle;
pub mod quad;
pub mod roots;
pub mod spectral;
pub mod susy;

pub use num_complex::Complex64;

pub use eigenfunctions::{CanonicalGroundState, Coefficients, Eigenfunction};
pub use extensions::{BoundaryMatrix, ExtensionClass, ExtensionParams, ParityMechanism};
pub use oracle::{Discretization, OracleSpectrum, StencilOrder};
pub use spectral::{Branch, EnergyLevel, LevelKind, RootFindConfig, Spectrum};
pub use susy::{SusyChain, SusyLevel};

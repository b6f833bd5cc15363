//! Exact-arithmetic symbolic engine for polynomial realisations of Lie
//! superalgebras inside Weyl superalgebras.
//!
//! The crate is organised bottom-up:
//!
//! - [`scalars`]: rationals and the fraction field ℚ(α, λ, …) of multivariate
//!   polynomials in formal parameters, plus Bernoulli numbers.
//! - [`superpoly`]: the supersymmetric algebra S(V) for V = 𝕂^{m|n}, with
//!   multi-indices, Koszul signs and super partial derivatives.
//! - [`weyl`]: the Weyl superalgebra 𝒜(V) of normal-ordered differential
//!   operators acting on S(V).
//! - [`liesuper`]: finite-dimensional Lie superalgebras given by exact
//!   structure constants, with ℤ-gradings, characters and the symmetrised
//!   iterated-adjoint operators s^K.
//! - [`uenv`]: the universal enveloping algebra U(𝔤) in PBW normal form, the
//!   symmetrisation isomorphism σ: S(𝔤) → U(𝔤), and the Berezin closed form
//!   for the left-regular action.
//! - [`realise`]: graded polynomial realisations π_λ: 𝔤 → 𝒜(𝔤₋), Verma-module
//!   actions, singular vectors and annihilator slices.
//! - [`jordan`]: Jordan superpairs, the TKK construction and its inverse,
//!   Bessel operators, and trace-form transformed representations.
//! - [`catalog`]: built-in algebras and pairs (D(2,1;α) flagship, sl(2),
//!   gl(1|1), Heisenberg, a 5-graded example, Jordan algebra ℚ, spin factor)
//!   together with text / JSON / LaTeX emitters.
//!
//! All arithmetic is exact; there is no floating point anywhere.

pub mod scalars;
pub mod superpoly;
pub mod weyl;
mod linalg;
pub mod liesuper;
pub mod uenv;
pub mod realise;
pub mod jordan;
pub mod catalog;

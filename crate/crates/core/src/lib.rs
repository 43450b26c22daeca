//! Construction and certification of counterexamples to uniqueness in sampled
//! Gabor phase retrieval.
//!
//! Signals live canonically on the Fock side: a signal `f` is handled through
//! its Bargmann image, a finite sum of atoms `c·zⁿ·e^{βz}` ([`fock`]). The
//! Gabor transform is evaluated from that image ([`gabor::gabor_eval`]) and
//! cross-checked against direct numerical integration ([`quadrature`]).
//!
//! Gabor transform convention used throughout:
//!
//! ```text
//! G f(x, ω) = e^{-πixω} · Bf(x - iω) · e^{-π(x² + ω²)/2}
//! ```
//!
//! which is the Gabor integral `2^{1/4} ∫ f(t) e^{-π(t-x)²} e^{-2πitω} dt`
//! exactly. The frequently quoted variant with `G f(x, -ω)` on the left and
//! `Bf(x + iω)` on the right is the same identity after `ω ↦ -ω`.

pub mod counterexamples;
pub mod fock;
pub mod gabor;
pub mod probe;
pub mod quadrature;
pub mod signals;

mod error;
mod special;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// `2^{1/4}`, the normalisation of the Gaussian window.
pub const FOURTH_ROOT_TWO: f64 = 1.189_207_115_002_721;

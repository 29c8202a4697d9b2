//! Σ_F- and Π_F-completions, the Dialectica fibration and the canonical
//! functors between them.

mod functor;
mod pi;
mod sigma;

pub use functor::{comparison_pi, comparison_sigma, opposite_functor, pi_functor, sigma_functor, sigma_unit};
pub use pi::{dialectica, pi_completion, pi_direct, pi_direct_iso, Dialectica, PiArrow, PiCompletion, PiDirect};
pub use sigma::{sigma_completion, sigma_pullback_presentation, SigmaArrow, SigmaCompletion, SigmaObject};

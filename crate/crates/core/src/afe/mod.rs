//! `L(s, χ)` for rational `s` by the approximate functional equation
//!
//! ```text
//! Γ((s+δ)/2) L(s, χ) = δ_{q,1} π^{s/2} (α^{(s−1)/2}/(s−1) − α^{s/2}/s)
//!     + Σ χ(n) n^{−s} Γ((s+δ)/2, πn²α/q)
//!     + ω (π/q)^{s−1/2} Σ χ̄(n) n^{s−1} Γ((1−s+δ)/2, πn²/(αq))
//! ```
//!
//! for primitive `χ`, with imprimitive characters reduced to their primitive
//! part. Also `Γ(a)` for rational `a`.

mod eval;
mod gamma;
mod plan;

pub use eval::{
    afe_eval, afe_eval_with_plan, completed_eval, lfunc_eval, lfunc_eval_with_plan, LValue,
};
pub use gamma::gamma_rational;
pub use plan::{choose_truncation, tail_bound, AFEPlan, LValueRequest, Series, MAX_AFE_TERMS};

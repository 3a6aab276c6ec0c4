//! Joint inference for the mediator and outcome regressions and the
//! resulting causal effects.

mod delta;
mod effects;
mod mediate;
mod stack;

pub use delta::{delta_intervals, EffectEstimates, Z_975};
pub use effects::{
    effect_map_g0, effect_map_g1, embed_g0, embed_g1, jacobian_g0, jacobian_g1, EffectKind,
    InteractionParams,
};
pub use mediate::{
    effects_from_stack, mediate, MediationRequest, MediationResult, MethodChoice, MethodEstimate,
    MethodOutcome, MethodResult,
};
pub use stack::{sandwich_covariance, stack_fits, IndexMap, StackedFit};

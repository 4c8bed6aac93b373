//! Monte Carlo estimators for the tail and approximation statements.

mod breiman;
mod curves;
mod hill;
mod lemmas;
mod scenario;
mod tail;

pub use breiman::breiman_ratio;
pub use curves::{one_big_jump_curve, ConditionalDistanceCurve, OneBigJumpReport};
pub use hill::{hill, HillEstimate};
pub use lemmas::{maximal_product_bound, multiple_jump_trend, CountLaw, MaximalProductBound, MultipleJumpPoint, WeightRule};
pub use scenario::{Replicate, Scenario};
pub use tail::{analytic_prediction, integral_tail, tail_equivalence, tail_prob, tail_probs, RatioPoint, TailEstimate};

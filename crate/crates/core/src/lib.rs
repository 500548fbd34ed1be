//! Local cuts for 0/1 programs without an LP over the local polytope.
//!
//! A point is separated from `conv{x ∈ {0,1}^k : x ∈ X}` by projecting it
//! with Frank-Wolfe, using only a linear minimization oracle over `X`
//! ([`fw::separate_lazy_afw`]). The run stops as soon as a valid violated
//! inequality can be read off the current iterate, long before the
//! projection converges.
//!
//! Modules, bottom up:
//!
//! - [`oracle`]: the oracle trait, enumeration and knapsack DP oracles, row
//!   reduction at an LP point.
//! - [`fw`]: vanilla and lazy away-step Frank-Wolfe separators.
//! - [`lifting`]: sequential down/up lifting of reduced cuts.
//! - [`lp`]: a dense bounded simplex with warm row addition, a membership
//!   LP and a cut pool.
//! - [`mkp`]: MKP/GAP instances, file formats and the root cut loop.
//! - [`cli`]: the `fwcut` binary.
//!
//! Runnable examples (`cargo run --release --example <name>`):
//! `separate_point`, `knapsack_oracles`, `vanilla_bound`, `lift_cut`,
//! `membership_lp`, `root_gap`, `generate_chu_beasley`.

pub mod cli;
pub mod fw;
pub mod lifting;
pub mod lp;
pub mod mkp;
pub mod oracle;

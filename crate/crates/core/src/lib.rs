//! Non-asymptotic tail bounds for martingale sums normed by `1/n`, and a
//! Monte Carlo harness that certifies them.
//!
//! `Q_n(x) = P(S(n)/n > x)` where `S(n)` is a sum of `n` martingale
//! differences. The crate is organised as
//!
//! * [`tails`]: tail functions, the product composition and the `W[T]` operator;
//! * [`phi`]: class-Φ functions, conjugates, the envelope `φ̄` and B(φ) norms;
//! * [`bounds`]: every closed-form and operator-form upper bound on `Q_n(x)`;
//! * [`sim`]: martingale-difference generators and Monte Carlo estimators;
//! * [`validate`]: domination checks, scaling fits and Lorentz norms;
//! * [`scenario`]: the scenario and report file formats used by the CLI.

// `!(x > 0.0)` is how NaN gets rejected along with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod error;
pub mod numerics;
pub mod phi;
pub mod scenario;
pub mod sim;
pub mod stats;
pub mod tails;
pub mod validate;

pub use error::{Error, Result};
pub use phi::{ConvexFunction, PhiFunction};
pub use sim::{DiscreteDist, Generator, IidLaw, MartingaleSpec, MonteCarloEstimate, SignRule};
pub use tails::TailFunction;

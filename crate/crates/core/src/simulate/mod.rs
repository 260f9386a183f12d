//! Samplers for the approximation model λ̃_s.
//!
//! - [`nhpp_sample`]: inversion sampler of a Poisson process with cumulative
//!   intensity c·Λ(v), the building block of the three-stream algorithm.
//! - [`simulate_algorithm1`]: the three-stream construction that splits λ̃_s
//!   into Φ₁ (δ-weighted repaired components), Φ₂ (minimally repaired
//!   block, an NHPP) and Φ₃ (the most repaired component), each from
//!   pre-generated failure streams.
//! - [`simulate_thinning`]: thinning of the exact conditional intensity λ̃_s,
//!   which feeds every accepted event back into the intensity.
//!
//! The two model simulators are not assumed to agree; their rate curves are
//! compared in reports.

mod algorithm1;
mod nhpp;
mod thinning;

pub use algorithm1::{simulate_algorithm1, simulate_algorithm1_traced, Algorithm1Trace, Source};
pub use nhpp::{nhpp_from_uniforms, nhpp_sample, NhppStream};
pub use thinning::{simulate_thinning, simulate_thinning_traced, ThinningTrace};

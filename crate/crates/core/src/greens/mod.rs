//! Scattering Green's-tensor traces of a planar cavity bounded by two
//! chiral mirrors.
//!
//! Only the position-dependent (mirror-induced) part of the tensor is
//! computed; the free-space part is dropped since it exerts no force.

mod matrix;
mod round_trip;
mod traces;

pub use matrix::{Mat2, ReflectionMatrix2x2};
pub use round_trip::CavityRoundTrip;
pub use traces::{
    trace_curl_g_imaginary, trace_curl_g_real, trace_g_imaginary, trace_g_real, traces_imaginary,
    traces_real, xi2_trace_g_imaginary, xi2_trace_g_imaginary_from, xi_trace_curl_g_imaginary,
    xi_trace_curl_g_imaginary_from, FrequencyBranch, GreensConfig,
    GreensTraces, Order, ReflectionPath,
};

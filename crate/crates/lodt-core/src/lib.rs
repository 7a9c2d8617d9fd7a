//! Simulator and verification harness for location-oblivious data transfer:
//! a protocol in which a sender hands over one subsystem of an entangled
//! qudit pair and transmits the other at light speed along one of two agreed
//! lines, so that the receiver learns the encoded datum at a spacetime
//! location the sender cannot predict.
//!
//! The crate is `no_std` (with `alloc`) and splits into:
//!
//! * [`geometry`]: Minkowski intervals, causal order, light-cone meets.
//! * [`qudit`]: generalized Bell states and measurement distributions.
//! * [`engine`]: discrete-event execution over causal sites, transcript
//!   validation, and exhaustive learning certification.
//! * [`strategy`]: the strategy catalogue and Monte Carlo analysis.
//! * [`classical`]: the classical-broadcast variant used as a contrast case.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod geometry;
pub mod qudit;

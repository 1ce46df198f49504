//! Chessboard PPT density matrices on `2⊗2⊗d` and the polygonal, conical,
//! cylindrical and spherical entanglement witnesses that detect them.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is pure
//! numerics over small dense complex matrices; file formats, the command
//! line and the threaded scan driver live in `chesswit-cli`.
//!
//! Layout conventions shared by every module:
//!
//! * Parties are numbered 1, 2, 3. The first two are qubits, the third has
//!   dimension `d ≥ 2`.
//! * The basis state `|i j k⟩` sits at flat index `i·d2·d3 + j·d3 + k`.
//! * `σ0 = I`, `σ1 = σx`, `σ2 = σy`, `σ3 = σz`, and `|z;+⟩ = |0⟩`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod chessboard;
pub mod error;
pub mod frgeom;
pub mod montecarlo;
pub mod optimality;
pub mod tensorops;
pub mod witness;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// `x` reduced to `[0, period)`.
pub(crate) fn rem_euclid(x: f64, period: f64) -> f64 {
    let r = libm::fmod(x, period);
    if r < 0.0 {
        r + period
    } else {
        r
    }
}

//! Deterministic simulator of a pulsed qubit-reset protocol for a
//! fixed-frequency transmon coupled to a lossy readout resonator.
//!
//! The crate is organized in layers:
//!
//! * [`hilbert`] — dense complex operator algebra on the truncated
//!   transmon ⊗ resonator Hilbert space.
//! * [`device`] — physical device parameters and construction of the
//!   rotating-frame Hamiltonian and collapse operators.
//! * [`pulse`] — time-domain pulse envelopes and reset-sequence assembly.
//! * [`lindblad`] — fixed-step RK4 master-equation integration of a
//!   [`pulse::Schedule`].
//! * [`fitting`] — Lorentzian / quadratic / damped-sinusoid least squares
//!   and first-minimum extraction.
//! * [`readout`] — synthetic IQ single-shot generation, linear
//!   discriminant training and assignment fidelity.
//! * [`experiments`] — end-to-end virtual experiments (spectroscopy,
//!   time Rabi, reset traces, trigger-rate scans, thermal population).
//! * [`config`] / [`report`] — run configuration parsing and CSV/JSON
//!   emission for the CLI.
//!
//! Unit conventions, used everywhere: time in ns, input frequencies are
//! ordinary frequencies in GHz (values quoted as ω/2π), lifetimes in µs in
//! device parameters and converted to ns internally. Hamiltonians are
//! assembled in angular units (rad/ns); the single conversion point is
//! [`device::build_hamiltonian`].

pub mod config;
pub mod device;
pub mod error;
pub mod experiments;
pub mod fitting;
pub mod hilbert;
pub mod lindblad;
pub mod pulse;
pub mod readout;
pub mod report;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// 2π, the one conversion factor between ordinary (GHz) and angular
/// (rad/ns) frequency units.
pub const TAU: f64 = std::f64::consts::TAU;

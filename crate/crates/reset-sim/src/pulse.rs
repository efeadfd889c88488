//! Time-domain pulse envelopes and composition of the reset sequence.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::device::{derived_frequencies, DeviceParams};
use crate::{Error, Result, TAU};

/// Envelope shape. Square envelopes carry optional linear rise/fall ramps;
/// gaussian envelopes are peak-normalized and truncated at ±2σ around the
/// pulse center.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EnvelopeKind {
    Square { ramp_ns: f64 },
    Gaussian { sigma_ns: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    #[serde(flatten)]
    pub kind: EnvelopeKind,
    pub duration_ns: f64,
}

impl Envelope {
    pub fn square(duration_ns: f64, ramp_ns: f64) -> Self {
        Self {
            kind: EnvelopeKind::Square { ramp_ns },
            duration_ns,
        }
    }

    pub fn gaussian(duration_ns: f64, sigma_ns: f64) -> Self {
        Self {
            kind: EnvelopeKind::Gaussian { sigma_ns },
            duration_ns,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.duration_ns <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "envelope.duration_ns",
                constraint: "duration must be positive",
                value: self.duration_ns,
            });
        }
        match self.kind {
            EnvelopeKind::Square { ramp_ns } => {
                if ramp_ns < 0.0 || 2.0 * ramp_ns > self.duration_ns {
                    return Err(Error::InvalidParameter {
                        name: "envelope.ramp_ns",
                        constraint: "0 <= 2*ramp <= duration",
                        value: ramp_ns,
                    });
                }
            }
            EnvelopeKind::Gaussian { sigma_ns } => {
                if sigma_ns <= 0.0 || 4.0 * sigma_ns > self.duration_ns {
                    return Err(Error::InvalidParameter {
                        name: "envelope.sigma_ns",
                        constraint: "sigma > 0 and 4*sigma <= duration",
                        value: sigma_ns,
                    });
                }
            }
        }
        Ok(())
    }

    /// Dimensionless shape in [0, 1] at time `t` relative to pulse start.
    /// Zero outside `[0, duration]`.
    pub fn shape(&self, t: f64) -> f64 {
        if t < 0.0 || t > self.duration_ns {
            return 0.0;
        }
        match self.kind {
            EnvelopeKind::Square { ramp_ns } => {
                if ramp_ns == 0.0 {
                    1.0
                } else if t < ramp_ns {
                    t / ramp_ns
                } else if t > self.duration_ns - ramp_ns {
                    (self.duration_ns - t) / ramp_ns
                } else {
                    1.0
                }
            }
            EnvelopeKind::Gaussian { sigma_ns } => {
                let center = self.duration_ns / 2.0;
                let x = t - center;
                if x.abs() > 2.0 * sigma_ns {
                    0.0
                } else {
                    (-x * x / (2.0 * sigma_ns * sigma_ns)).exp()
                }
            }
        }
    }
}

/// Which transition the pulse carrier addresses. The nominal carrier
/// frequency comes from [`derived_frequencies`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Carrier {
    Ge,
    Ef,
    F0g1,
}

impl Carrier {
    pub fn nominal_frequency(&self, p: &DeviceParams) -> f64 {
        let (omega_ef, omega_f0g1, _) = derived_frequencies(p);
        match self {
            Carrier::Ge => p.omega_ge,
            Carrier::Ef => omega_ef,
            Carrier::F0g1 => omega_f0g1,
        }
    }
}

/// A shaped microwave drive segment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pulse {
    pub envelope: Envelope,
    /// Peak amplitude Ω0 (GHz).
    pub amplitude: f64,
    /// Drive phase φ (rad).
    pub phase: f64,
    pub carrier: Carrier,
    /// Calibration offset added to the nominal carrier (GHz).
    pub freq_offset: f64,
}

impl Pulse {
    pub fn validate(&self) -> Result<()> {
        if self.amplitude < 0.0 {
            return Err(Error::InvalidParameter {
                name: "pulse.amplitude",
                constraint: "amplitude must be >= 0 (use phase for sign)",
                value: self.amplitude,
            });
        }
        self.envelope.validate()
    }

    /// Drive frequency in GHz: nominal carrier plus calibration offset.
    pub fn frequency(&self, p: &DeviceParams) -> f64 {
        self.carrier.nominal_frequency(p) + self.freq_offset
    }

    pub fn duration_ns(&self) -> f64 {
        self.envelope.duration_ns
    }
}

/// Complex envelope value `Ω0(t)·shape·e^{iφ}` in GHz at time `t` relative
/// to the pulse start. Exactly zero outside the support.
pub fn sample_envelope(pulse: &Pulse, t: f64) -> C64 {
    let a = pulse.amplitude * pulse.envelope.shape(t);
    C64::from_polar(a, pulse.phase)
}

/// Rotation angle `β = ∫ 2π Ω0(t) dt` in radians.
///
/// Square envelopes integrate exactly (trapezoid area); gaussian envelopes
/// use composite Simpson quadrature over the truncated support.
pub fn rotation_angle(pulse: &Pulse) -> f64 {
    let env = &pulse.envelope;
    let area_ghz_ns = match env.kind {
        EnvelopeKind::Square { ramp_ns } => pulse.amplitude * (env.duration_ns - ramp_ns),
        EnvelopeKind::Gaussian { sigma_ns } => {
            let center = env.duration_ns / 2.0;
            let (a, b) = (center - 2.0 * sigma_ns, center + 2.0 * sigma_ns);
            let n = 4096;
            let h = (b - a) / n as f64;
            let mut s = env.shape(a) + env.shape(b);
            for k in 1..n {
                let w = if k % 2 == 1 { 4.0 } else { 2.0 };
                s += w * env.shape(a + k as f64 * h);
            }
            pulse.amplitude * s * h / 3.0
        }
    };
    TAU * area_ghz_ns
}

/// Two-level transmon subspace an ideal rotation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RotationSubspace {
    GE,
    EF,
}

impl RotationSubspace {
    /// Indices of the two transmon levels.
    pub fn levels(&self) -> (usize, usize) {
        match self {
            RotationSubspace::GE => (0, 1),
            RotationSubspace::EF => (1, 2),
        }
    }
}

/// Instantaneous unitary rotation on a two-level transmon subspace;
/// identity elsewhere. A bookkeeping duration may be attached for timing
/// (trigger-rate budgets) without affecting the dynamics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdealRotation {
    pub subspace: RotationSubspace,
    /// Nominal angle β (rad).
    pub angle: f64,
    /// Rotation-axis phase φ (rad).
    pub phase: f64,
    /// Fractional angle error: the applied angle is `β (1 + error)`.
    pub over_rotation_error: f64,
    pub bookkeeping_ns: f64,
}

impl IdealRotation {
    pub fn pi(subspace: RotationSubspace, bookkeeping_ns: f64) -> Self {
        Self {
            subspace,
            angle: std::f64::consts::PI,
            phase: 0.0,
            over_rotation_error: 0.0,
            bookkeeping_ns,
        }
    }

    pub fn applied_angle(&self) -> f64 {
        self.angle * (1.0 + self.over_rotation_error)
    }
}

/// One schedule entry with its start time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "segment", rename_all = "snake_case")]
pub enum Segment {
    Pulse(Pulse),
    Rotation(IdealRotation),
    Idle { duration_ns: f64 },
}

impl Segment {
    pub fn duration_ns(&self) -> f64 {
        match self {
            Segment::Pulse(p) => p.duration_ns(),
            Segment::Rotation(r) => r.bookkeeping_ns,
            Segment::Idle { duration_ns } => *duration_ns,
        }
    }

    /// Duration the integrator steps through (rotations are instantaneous).
    pub fn dynamical_duration_ns(&self) -> f64 {
        match self {
            Segment::Rotation(_) => 0.0,
            other => other.duration_ns(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduledSegment {
    pub start_ns: f64,
    #[serde(flatten)]
    pub body: Segment,
}

/// Ordered, non-overlapping list of segments.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub segments: Vec<ScheduledSegment>,
}

impl Schedule {
    pub fn new() -> Self {
        Self::default()
    }

    /// Append a segment immediately after the current end of the schedule.
    pub fn push(&mut self, body: Segment) -> &mut Self {
        let start_ns = self.total_duration_ns();
        self.segments.push(ScheduledSegment { start_ns, body });
        self
    }

    /// Bookkeeping duration: sum of all segment durations.
    pub fn total_duration_ns(&self) -> f64 {
        self.segments
            .last()
            .map(|s| s.start_ns + s.body.duration_ns())
            .unwrap_or(0.0)
    }

    pub fn validate(&self) -> Result<()> {
        let mut t = 0.0;
        for seg in &self.segments {
            if seg.start_ns + 1e-12 < t {
                return Err(Error::Timing(format!(
                    "segment at {} ns overlaps previous segment ending at {} ns",
                    seg.start_ns, t
                )));
            }
            if let Segment::Pulse(p) = &seg.body {
                p.validate()?;
            }
            t = seg.start_ns + seg.body.duration_ns();
        }
        Ok(())
    }
}

/// Reset-sequence configuration. The defaults reproduce the modeled
/// experiment's operating point: a 75 ns e→f π-pulse, a 120 ns ramped
/// square pulse on the f0-g1 transition at the calibrated amplitude and
/// frequency offset, and a 2 µs idle for the resonator to empty.
///
/// `f0g1_amplitude` and `f0g1_freq_offset` are the frozen outcome of the
/// calibration flow (spectroscopy plus transfer-optimum refinement) for the
/// default [`DeviceParams`].
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ResetConfig {
    pub ef_pulse_duration_ns: f64,
    /// Ideal unitary shelving (default) or a shaped gaussian pulse.
    pub use_ideal_x: bool,
    /// Fractional over-rotation of the shelving pulse.
    pub x_over_rotation: f64,
    /// Peak f0-g1 drive amplitude (GHz).
    pub f0g1_amplitude: f64,
    /// Total f0-g1 pulse duration including ramps (ns).
    pub f0g1_duration_ns: f64,
    /// Calibrated frequency offset from the nominal f0-g1 carrier (GHz).
    pub f0g1_freq_offset: f64,
    /// Linear rise/fall time of the square pulse (ns).
    pub f0g1_ramp_ns: f64,
    pub idle_after_ns: f64,
}

impl Default for ResetConfig {
    fn default() -> Self {
        Self {
            ef_pulse_duration_ns: 75.0,
            use_ideal_x: true,
            x_over_rotation: 0.0,
            f0g1_amplitude: CAL_F0G1_AMPLITUDE,
            f0g1_duration_ns: 120.0,
            f0g1_freq_offset: CAL_F0G1_FREQ_OFFSET,
            f0g1_ramp_ns: CAL_F0G1_RAMP_NS,
            idle_after_ns: 2000.0,
        }
    }
}

/// Calibrated f0-g1 drive amplitude (GHz) for the default device: chosen so
/// the transfer optimum of the default 120 ns pulse coincides with the end
/// of its flat top.
pub const CAL_F0G1_AMPLITUDE: f64 = 0.6568;
/// Calibrated drive-frequency offset (GHz) from the nominal 2.640 GHz
/// carrier at [`CAL_F0G1_AMPLITUDE`]: the ac-Stark shift plus the static
/// hybridization shift of the dressed resonance.
pub const CAL_F0G1_FREQ_OFFSET: f64 = -0.033_0;
/// Default linear edge ramp (ns): long enough to be adiabatic with respect
/// to the GHz-scale detunings of the neighbouring transitions, short on the
/// transfer timescale.
pub const CAL_F0G1_RAMP_NS: f64 = 5.0;

/// Build the pulsed-reset schedule: shelve e→f, transfer f0→g1, idle.
pub fn reset_sequence(p: &DeviceParams, cfg: &ResetConfig) -> Result<Schedule> {
    p.validate()?;
    if cfg.ef_pulse_duration_ns <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "reset.ef_pulse_duration_ns",
            constraint: "must be positive",
            value: cfg.ef_pulse_duration_ns,
        });
    }
    if cfg.f0g1_duration_ns <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "reset.f0g1_duration_ns",
            constraint: "must be positive",
            value: cfg.f0g1_duration_ns,
        });
    }
    if cfg.idle_after_ns < 0.0 {
        return Err(Error::InvalidParameter {
            name: "reset.idle_after_ns",
            constraint: "must be >= 0",
            value: cfg.idle_after_ns,
        });
    }

    let mut sched = Schedule::new();
    if cfg.use_ideal_x {
        let mut rot = IdealRotation::pi(RotationSubspace::EF, cfg.ef_pulse_duration_ns);
        rot.over_rotation_error = cfg.x_over_rotation;
        sched.push(Segment::Rotation(rot));
    } else {
        // Shaped shelving pulse: gaussian, sigma = duration / 4, calibrated
        // to a pi rotation; over-rotation scales the amplitude. The e->f
        // matrix element of b-dagger is sqrt(2), so the angular envelope
        // area must be pi / sqrt(2).
        let sigma = cfg.ef_pulse_duration_ns / 4.0;
        let env = Envelope::gaussian(cfg.ef_pulse_duration_ns, sigma);
        let shape_area = sigma * TAU.sqrt() * erf_sqrt2();
        let amp = (1.0 + cfg.x_over_rotation) * std::f64::consts::PI
            / (2.0_f64.sqrt() * TAU * shape_area);
        sched.push(Segment::Pulse(Pulse {
            envelope: env,
            amplitude: amp,
            phase: 0.0,
            carrier: Carrier::Ef,
            freq_offset: 0.0,
        }));
    }
    sched.push(Segment::Pulse(Pulse {
        envelope: Envelope::square(cfg.f0g1_duration_ns, cfg.f0g1_ramp_ns),
        amplitude: cfg.f0g1_amplitude,
        phase: 0.0,
        carrier: Carrier::F0g1,
        freq_offset: cfg.f0g1_freq_offset,
    }));
    if cfg.idle_after_ns > 0.0 {
        sched.push(Segment::Idle {
            duration_ns: cfg.idle_after_ns,
        });
    }
    sched.validate()?;
    Ok(sched)
}

/// erf(√2) to double precision, used by the gaussian pulse-area closed form.
pub(crate) fn erf_sqrt2() -> f64 {
    0.954_499_736_103_641_6
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn square_pulse(amp: f64, dur: f64, ramp: f64) -> Pulse {
        Pulse {
            envelope: Envelope::square(dur, ramp),
            amplitude: amp,
            phase: 0.0,
            carrier: Carrier::F0g1,
            freq_offset: 0.0,
        }
    }

    #[test]
    fn square_pi_area() {
        // 2pi * amp * duration = pi  =>  amp = 1 / (2 * duration)
        let dur = 40.0;
        let p = square_pulse(1.0 / (2.0 * dur), dur, 0.0);
        assert_abs_diff_eq!(rotation_angle(&p), std::f64::consts::PI, epsilon = 1e-12);
    }

    #[test]
    fn zero_amplitude_zero_angle() {
        let p = square_pulse(0.0, 100.0, 5.0);
        assert_eq!(rotation_angle(&p), 0.0);
    }

    #[test]
    fn gaussian_area_matches_quadrature_oracle() {
        // Closed form: beta = 2*pi*amp*sigma*sqrt(2*pi)*erf(sqrt(2)).
        // Oracle: independent high-resolution midpoint quadrature.
        let sigma = 10.0;
        let dur = 4.0 * sigma;
        let amp = 0.01;
        let p = Pulse {
            envelope: Envelope::gaussian(dur, sigma),
            amplitude: amp,
            phase: 0.0,
            carrier: Carrier::Ef,
            freq_offset: 0.0,
        };
        let closed = TAU * amp * sigma * TAU.sqrt() * statrs::function::erf::erf(2.0_f64.sqrt());
        let n = 2_000_000;
        let h = dur / n as f64;
        let mut oracle = 0.0;
        for k in 0..n {
            let t = (k as f64 + 0.5) * h;
            oracle += p.envelope.shape(t);
        }
        oracle *= TAU * amp * h;
        assert_abs_diff_eq!(closed / oracle, 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(rotation_angle(&p) / oracle, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn envelope_samples() {
        let p = square_pulse(0.25, 100.0, 0.0);
        assert_eq!(sample_envelope(&p, 50.0), C64::new(0.25, 0.0));
        assert_eq!(sample_envelope(&p, -1.0), C64::new(0.0, 0.0));
        assert_eq!(sample_envelope(&p, 101.0), C64::new(0.0, 0.0));

        let g = Pulse {
            envelope: Envelope::gaussian(80.0, 20.0),
            amplitude: 0.1,
            phase: 1.2,
            carrier: Carrier::Ge,
            freq_offset: 0.0,
        };
        let peak = sample_envelope(&g, 40.0);
        assert_abs_diff_eq!(peak.norm(), 0.1, epsilon = 1e-15);
        assert_abs_diff_eq!(peak.arg(), 1.2, epsilon = 1e-15);
    }

    #[test]
    fn ramped_square_shape() {
        let env = Envelope::square(100.0, 10.0);
        assert_abs_diff_eq!(env.shape(5.0), 0.5, epsilon = 1e-15);
        assert_eq!(env.shape(50.0), 1.0);
        assert_abs_diff_eq!(env.shape(95.0), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn envelope_invariants() {
        assert!(Envelope::square(100.0, 60.0).validate().is_err());
        assert!(Envelope::gaussian(30.0, 10.0).validate().is_err());
        assert!(Envelope::square(0.0, 0.0).validate().is_err());
    }

    #[test]
    fn reset_sequence_default_timing() {
        let p = DeviceParams::default();
        let sched = reset_sequence(&p, &ResetConfig::default()).unwrap();
        assert_eq!(sched.segments.len(), 3);
        assert_abs_diff_eq!(
            sched.total_duration_ns(),
            75.0 + 120.0 + 2000.0,
            epsilon = 1e-12
        );
        match &sched.segments[0].body {
            Segment::Rotation(r) => {
                assert_eq!(r.subspace, RotationSubspace::EF);
                assert_abs_diff_eq!(r.applied_angle(), std::f64::consts::PI, epsilon = 1e-15);
            }
            other => panic!("expected ideal rotation, got {other:?}"),
        }
    }

    #[test]
    fn reset_sequence_155ns_variant() {
        let p = DeviceParams::default();
        let cfg = ResetConfig {
            f0g1_duration_ns: 155.0,
            ..ResetConfig::default()
        };
        let sched = reset_sequence(&p, &cfg).unwrap();
        match &sched.segments[1].body {
            Segment::Pulse(pl) => assert_eq!(pl.duration_ns(), 155.0),
            other => panic!("expected pulse, got {other:?}"),
        }
    }

    #[test]
    fn schedule_starts_strictly_increase() {
        let p = DeviceParams::default();
        let sched = reset_sequence(&p, &ResetConfig::default()).unwrap();
        let mut prev_end = 0.0;
        for seg in &sched.segments {
            assert!(seg.start_ns >= prev_end - 1e-12);
            prev_end = seg.start_ns + seg.body.duration_ns();
        }
        assert_abs_diff_eq!(sched.total_duration_ns(), prev_end, epsilon = 1e-12);
    }

    proptest! {
        #[test]
        fn envelope_zero_outside_support(
            dur in 1.0_f64..500.0,
            ramp_frac in 0.0_f64..0.5,
            t in -1000.0_f64..1500.0,
        ) {
            let env = Envelope::square(dur, ramp_frac * dur * 0.999);
            if t < 0.0 || t > dur {
                prop_assert_eq!(env.shape(t), 0.0);
            } else {
                prop_assert!(env.shape(t) >= 0.0 && env.shape(t) <= 1.0);
            }
        }

        #[test]
        fn rotation_angle_linear_in_amplitude(
            amp in 0.0_f64..2.0,
            dur in 1.0_f64..400.0,
        ) {
            let p1 = square_pulse(amp, dur, 0.1 * dur);
            let p2 = square_pulse(2.0 * amp, dur, 0.1 * dur);
            prop_assert!((rotation_angle(&p2) - 2.0 * rotation_angle(&p1)).abs() < 1e-9);
        }
    }
}

//! Device parameters and Hamiltonian / collapse-operator construction.
//!
//! Input frequencies are ordinary frequencies in GHz (the values a device
//! datasheet quotes as ω/2π), lifetimes in µs, the resonator decay rate in
//! 1/µs. The single ordinary→angular conversion happens when the
//! Hamiltonian is assembled: [`build_hamiltonian`] returns rad/ns.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::hilbert::{annihilation, embed, populations, HilbertSpec, Operator, Subsystem};
use crate::{Error, Result, TAU};

/// Guard radius around the perturbative-formula singularities, in GHz.
const SINGULARITY_GUARD_GHZ: f64 = 1e-6;

/// Physical constants of the transmon-resonator system.
///
/// Frequencies in GHz (ordinary), lifetimes in µs, `kappa_r` in 1/µs.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DeviceParams {
    /// Qubit g↔e transition frequency (GHz).
    pub omega_ge: f64,
    /// Transmon anharmonicity (GHz, negative).
    pub alpha: f64,
    /// Readout-resonator frequency (GHz).
    pub omega_r: f64,
    /// Qubit-resonator coupling (GHz).
    pub g_coupling: f64,
    /// Resonator energy decay rate (1/µs).
    pub kappa_r: f64,
    /// e→g lifetime (µs).
    pub t1_eg: f64,
    /// f→e lifetime (µs).
    pub t1_fe: f64,
    /// h→f lifetime (µs).
    pub t1_hf: f64,
    /// Equilibrium |e⟩ population.
    pub p_thermal_e: f64,
}

impl Default for DeviceParams {
    /// The measured device of the modeled experiment.
    fn default() -> Self {
        let t1_fe = 26.1;
        Self {
            omega_ge: 4.904,
            alpha: -0.330,
            omega_r: 6.838,
            g_coupling: 0.067,
            kappa_r: 4.26,
            t1_eg: 44.2,
            t1_fe,
            t1_hf: t1_fe / 3.0_f64.sqrt(),
            p_thermal_e: 0.015,
        }
    }
}

impl DeviceParams {
    pub fn validate(&self) -> Result<()> {
        if self.alpha >= 0.0 {
            return Err(Error::InvalidParameter {
                name: "device.alpha",
                constraint: "anharmonicity must be negative",
                value: self.alpha,
            });
        }
        if self.omega_r <= self.omega_ge {
            return Err(Error::InvalidParameter {
                name: "device.omega_r",
                constraint: "omega_r must exceed omega_ge",
                value: self.omega_r,
            });
        }
        for (name, v) in [
            ("device.t1_eg", self.t1_eg),
            ("device.t1_fe", self.t1_fe),
            ("device.t1_hf", self.t1_hf),
        ] {
            if v <= 0.0 {
                return Err(Error::InvalidParameter {
                    name,
                    constraint: "lifetimes must be positive",
                    value: v,
                });
            }
        }
        if self.kappa_r <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "device.kappa_r",
                constraint: "kappa_r must be positive",
                value: self.kappa_r,
            });
        }
        if !(0.0..0.5).contains(&self.p_thermal_e) {
            return Err(Error::InvalidParameter {
                name: "device.p_thermal_e",
                constraint: "0 <= p_thermal_e < 0.5",
                value: self.p_thermal_e,
            });
        }
        Ok(())
    }
}

/// A single microwave drive: carrier frequency, peak amplitude, phase and a
/// deliberate frequency offset (calibration correction or injected error).
/// All frequencies in GHz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveSpec {
    pub omega_d: f64,
    pub amplitude: f64,
    pub phase: f64,
    pub detuning_offset: f64,
}

impl DriveSpec {
    pub fn new(omega_d: f64) -> Self {
        Self {
            omega_d,
            amplitude: 0.0,
            phase: 0.0,
            detuning_offset: 0.0,
        }
    }

    /// Effective drive frequency including the calibration offset.
    pub fn frequency(&self) -> f64 {
        self.omega_d + self.detuning_offset
    }
}

/// Frequencies derived from the device parameters (all GHz):
/// `omega_ef = omega_ge + alpha`, `omega_f0g1 = omega_ge + omega_ef −
/// omega_r`, `delta = omega_r − omega_ge`.
pub fn derived_frequencies(p: &DeviceParams) -> (f64, f64, f64) {
    let omega_ef = p.omega_ge + p.alpha;
    let omega_f0g1 = p.omega_ge + omega_ef - p.omega_r;
    let delta = p.omega_r - p.omega_ge;
    (omega_ef, omega_f0g1, delta)
}

/// Rotating-frame system Hamiltonian in rad/ns:
///
/// `H = δ_r a†a + δ_q b†b + (α/2) b†b†bb + g (b†a + b a†) + ½(Ω b† + Ω* b)`
///
/// with `δ_q = ω_ge − ω_d`, `δ_r = ω_r − ω_d` and `Ω` the complex envelope
/// value in GHz (already carrying amplitude and phase).
pub fn build_hamiltonian(
    p: &DeviceParams,
    d: &DriveSpec,
    envelope_value: C64,
    spec: &HilbertSpec,
) -> Result<Operator> {
    if !envelope_value.re.is_finite() || !envelope_value.im.is_finite() {
        return Err(Error::InvalidParameter {
            name: "envelope_value",
            constraint: "must be finite",
            value: f64::NAN,
        });
    }
    let wd = d.frequency();
    let delta_q = TAU * (p.omega_ge - wd);
    let delta_r = TAU * (p.omega_r - wd);
    let alpha = TAU * p.alpha;
    let g = TAU * p.g_coupling;
    let omega = envelope_value * TAU;

    let b = embed(&annihilation(spec.n_transmon)?, Subsystem::Transmon, spec)?;
    let a = embed(&annihilation(spec.n_resonator)?, Subsystem::Resonator, spec)?;
    let bd = b.dagger();
    let ad = a.dagger();

    let nb = bd.dot(&b);
    let na = ad.dot(&a);
    let kerr = bd.dot(&bd).dot(&b).dot(&b);

    let mut h = na.scale(C64::new(delta_r, 0.0)).mat;
    h = h + nb.scale(C64::new(delta_q, 0.0)).mat;
    h = h + kerr.scale(C64::new(alpha / 2.0, 0.0)).mat;
    h = h + (bd.dot(&a).add(&b.dot(&ad))).scale(C64::new(g, 0.0)).mat;
    h = h + bd.scale(omega * 0.5).mat + b.scale(omega.conj() * 0.5).mat;
    Ok(Operator::new(h))
}

fn check_detunings(delta: f64, denom2: f64) -> Result<()> {
    if delta.abs() < SINGULARITY_GUARD_GHZ {
        return Err(Error::ResonanceSingularity {
            which: "delta",
            value: delta,
        });
    }
    if denom2.abs() < SINGULARITY_GUARD_GHZ {
        return Err(Error::ResonanceSingularity {
            which: "delta - alpha",
            value: denom2,
        });
    }
    Ok(())
}

/// Effective |f0⟩↔|g1⟩ coupling strength for drive amplitude
/// `omega_drive_amp` (GHz): `g̃ = g α Ω / (√2 δ (δ − α))`, sign preserved.
///
/// Second-order perturbation theory on the system Hamiltonian, through the
/// intermediate states |e0⟩ (detuning δ) and |e1⟩ (detuning −(δ − α)).
/// Written with the qubit-minus-resonator detuning convention this is the
/// familiar `g α Ω / (√2 Δ (Δ + α))`, `Δ = ω_ge − ω_r`.
pub fn effective_coupling(p: &DeviceParams, omega_drive_amp: f64) -> Result<f64> {
    let (_, _, delta) = derived_frequencies(p);
    let denom2 = delta - p.alpha;
    check_detunings(delta, denom2)?;
    Ok(p.g_coupling * p.alpha * omega_drive_amp / (2.0_f64.sqrt() * delta * denom2))
}

/// Effective two-level Hamiltonian in the {|f0⟩, |g1⟩} basis:
/// `Δ_f0 |f0⟩⟨f0| + g̃ (|f0⟩⟨g1| + |g1⟩⟨f0|)`. Units follow the inputs.
pub fn effective_hamiltonian(delta_f0: f64, g_tilde: f64) -> Operator {
    let mut m = ndarray::Array2::zeros((2, 2));
    m[(0, 0)] = C64::new(delta_f0, 0.0);
    m[(0, 1)] = C64::new(g_tilde, 0.0);
    m[(1, 0)] = C64::new(g_tilde, 0.0);
    Operator::new(m)
}

/// Dispersive shift `χ = g² α / (δ (δ − α))` in GHz (equivalently
/// `g² α / (Δ (Δ + α))` with `Δ = ω_ge − ω_r`).
pub fn dispersive_shift(p: &DeviceParams) -> Result<f64> {
    let (_, _, delta) = derived_frequencies(p);
    let denom2 = delta - p.alpha;
    check_detunings(delta, denom2)?;
    Ok(p.g_coupling * p.g_coupling * p.alpha / (delta * denom2))
}

/// Collapse operators in 1/√ns: the resonator operator `√κ_r a` and one
/// combined qubit ladder operator
/// `(T1_eg)^(-1/2)|g⟩⟨e| + (T1_fe)^(-1/2)|e⟩⟨f| + (T1_hf)^(-1/2)|f⟩⟨h|`,
/// truncated to the available transmon levels.
pub fn collapse_operators(p: &DeviceParams, spec: &HilbertSpec) -> Result<Vec<Operator>> {
    let kappa_per_ns = p.kappa_r * 1e-3;
    let a = embed(&annihilation(spec.n_resonator)?, Subsystem::Resonator, spec)?;
    let l_r = a.scale(C64::new(kappa_per_ns.sqrt(), 0.0));

    let rate = |t1_us: f64| -> f64 {
        if t1_us.is_finite() {
            1.0 / (t1_us * 1e3)
        } else {
            0.0
        }
    };
    let nt = spec.n_transmon;
    let mut lq = Operator::zeros(nt);
    let ladder = [(0, 1, p.t1_eg), (1, 2, p.t1_fe), (2, 3, p.t1_hf)];
    for &(lo, hi, t1) in &ladder {
        if hi < nt {
            let amp = rate(t1).sqrt();
            lq = lq.add(&Operator::ket_bra(nt, lo, hi).scale(C64::new(amp, 0.0)));
        }
    }
    let l_q = embed(&lq, Subsystem::Transmon, spec)?;
    Ok(vec![l_r, l_q])
}

/// Excited-state population `1 − p_g`, the observable every experiment
/// reports as "residual qubit population".
pub fn excited_population(rho: &crate::hilbert::DensityMatrix, spec: &HilbertSpec) -> f64 {
    let (transmon, _) = populations(rho, spec);
    1.0 - transmon[0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn derived_frequencies_paper_device() {
        let p = DeviceParams::default();
        let (omega_ef, omega_f0g1, delta) = derived_frequencies(&p);
        assert_abs_diff_eq!(omega_ef, 4.574, epsilon = 1e-12);
        assert_abs_diff_eq!(omega_f0g1, 2.640, epsilon = 1e-12);
        assert_abs_diff_eq!(delta, 1.934, epsilon = 1e-12);
    }

    #[test]
    fn derived_frequencies_harmonic_limit() {
        let p = DeviceParams {
            alpha: -1e-15,
            ..DeviceParams::default()
        };
        let (omega_ef, _, _) = derived_frequencies(&p);
        assert_abs_diff_eq!(omega_ef, p.omega_ge, epsilon = 1e-12);
    }

    #[test]
    fn hamiltonian_qubit_on_resonance() {
        let p = DeviceParams::default();
        let spec = HilbertSpec::default();
        let d = DriveSpec::new(p.omega_ge);
        let h = build_hamiltonian(&p, &d, C64::new(0.0, 0.0), &spec).unwrap();
        let e0 = spec.index(1, 0);
        assert_abs_diff_eq!(h.mat[(e0, e0)].re, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn hamiltonian_f0_g1_degenerate_at_nominal_drive() {
        let p = DeviceParams::default();
        let spec = HilbertSpec::default();
        let (_, omega_f0g1, _) = derived_frequencies(&p);
        let d = DriveSpec::new(omega_f0g1);
        let h = build_hamiltonian(&p, &d, C64::new(0.0, 0.0), &spec).unwrap();
        let f0 = spec.index(2, 0);
        let g1 = spec.index(0, 1);
        assert_abs_diff_eq!(h.mat[(f0, f0)].re, h.mat[(g1, g1)].re, epsilon = 1e-9);
    }

    #[test]
    fn hamiltonian_is_hermitian() {
        let p = DeviceParams::default();
        let spec = HilbertSpec::default();
        let mut d = DriveSpec::new(2.61);
        d.amplitude = 0.3;
        d.phase = 0.7;
        let env = C64::from_polar(0.3, 0.7);
        let h = build_hamiltonian(&p, &d, env, &spec).unwrap();
        assert!(h.hermiticity_defect() < 1e-12);
    }

    #[test]
    fn effective_coupling_zero_and_linear() {
        let p = DeviceParams::default();
        assert_eq!(effective_coupling(&p, 0.0).unwrap(), 0.0);
        let g1 = effective_coupling(&p, 0.1).unwrap();
        let g2 = effective_coupling(&p, 0.2).unwrap();
        assert_abs_diff_eq!(g2, 2.0 * g1, epsilon = 1e-18);
        // odd in the amplitude
        assert_abs_diff_eq!(effective_coupling(&p, -0.1).unwrap(), -g1, epsilon = 1e-18);
    }

    #[test]
    fn effective_coupling_value() {
        // Independent arithmetic: 0.067 * 0.330 * 0.100 / (sqrt(2) * 1.934 * 2.264)
        let expect = 0.067 * 0.330 * 0.100 / (2.0_f64.sqrt() * 1.934 * 2.264);
        assert_abs_diff_eq!(expect, 3.5707e-4, epsilon = 5e-8);
        let p = DeviceParams::default();
        let gt = effective_coupling(&p, 0.100).unwrap();
        assert!(gt < 0.0, "alpha < 0 makes the coupling negative");
        assert_abs_diff_eq!(gt.abs(), expect, epsilon = 1e-15);
    }

    #[test]
    fn effective_coupling_singularity_guard() {
        let p = DeviceParams {
            omega_r: 4.904 + 5e-7,
            ..DeviceParams::default()
        };
        assert!(matches!(
            effective_coupling(&p, 0.1),
            Err(Error::ResonanceSingularity { .. })
        ));
    }

    #[test]
    fn effective_hamiltonian_structure() {
        use crate::hilbert::hermitian_eigenvalues;
        let h = effective_hamiltonian(0.0, 0.25);
        let mut ev = hermitian_eigenvalues(&h.mat);
        ev.sort_by(f64::total_cmp);
        assert_abs_diff_eq!(ev[0], -0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(ev[1], 0.25, epsilon = 1e-12);

        let h = effective_hamiltonian(0.7, 0.0);
        assert_abs_diff_eq!(h.mat[(0, 0)].re, 0.7, epsilon = 1e-15);
        assert_abs_diff_eq!(h.mat[(1, 1)].re, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn dispersive_shift_scaling_and_value() {
        let p = DeviceParams::default();
        assert_eq!(
            dispersive_shift(&DeviceParams {
                g_coupling: 0.0,
                ..p
            })
            .unwrap(),
            0.0
        );
        let chi = dispersive_shift(&p).unwrap();
        let chi2 = dispersive_shift(&DeviceParams {
            g_coupling: 2.0 * p.g_coupling,
            ..p
        })
        .unwrap();
        assert_abs_diff_eq!(chi2, 4.0 * chi, epsilon = 1e-15);
        // |chi| = g^2 |alpha| / (delta (delta - alpha)) = 0.338 MHz, inside the
        // measured 335 +/- 48 kHz window.
        let chi_khz = chi.abs() * 1e6;
        assert_abs_diff_eq!(chi_khz, 338.3, epsilon = 0.5);
        assert!(chi_khz > 335.0 - 48.0 && chi_khz < 335.0 + 48.0);
    }

    #[test]
    fn collapse_operator_values() {
        let p = DeviceParams::default();
        let spec = HilbertSpec::default();
        let ops = collapse_operators(&p, &spec).unwrap();
        // resonator 0<->1 element in 1/sqrt(us) units
        let r01 = ops[0].mat[(spec.index(0, 0), spec.index(0, 1))].re;
        assert_abs_diff_eq!(r01 * 1e3_f64.sqrt(), 4.26_f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(4.26_f64.sqrt(), 2.0640, epsilon = 5e-4);
        // h -> f element uses t1_hf = t1_fe / sqrt(3) = 15.07 us
        assert_abs_diff_eq!(p.t1_hf, 15.07, epsilon = 5e-3);
        let q_fh = ops[1].mat[(spec.index(2, 0), spec.index(3, 0))].re;
        assert_abs_diff_eq!(q_fh, (1.0 / (p.t1_hf * 1e3)).sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn collapse_operators_infinite_lifetimes() {
        let p = DeviceParams {
            t1_eg: f64::INFINITY,
            t1_fe: f64::INFINITY,
            t1_hf: f64::INFINITY,
            ..DeviceParams::default()
        };
        let spec = HilbertSpec::default();
        let ops = collapse_operators(&p, &spec).unwrap();
        assert!(ops[1].max_abs_diff(&Operator::zeros(spec.dim())) == 0.0);
    }

    #[test]
    fn validation_rejects_positive_alpha() {
        let p = DeviceParams {
            alpha: 0.33,
            ..DeviceParams::default()
        };
        assert!(p.validate().is_err());
    }
}

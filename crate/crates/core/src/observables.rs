//! Spin polarization, magnetodipole lines and magnetization of the dressed
//! spin-1/2 states.
//!
//! Line bookkeeping is done in the clockwise frame and mapped to lab labels
//! at the end: for counterclockwise waves the spin labels and Δl_z change
//! sign and the e± channels trade places.

use serde::{Deserialize, Serialize};

use crate::analytic::{dressed_spin_half, hypot_minus, omega_classical, Branch, SpinHalfSolution};
use crate::error::{ModelError, Result};
use crate::model::{HalfInt, Handedness, Particle, PhotonField, Recoil};
use crate::units::HBAR;

/// ⟨σ⟩ of a dressed state. Only the z component is nonzero:
/// ±ω±/Ω± for j = ±1/2.
pub fn spin_expectation(solution: &SpinHalfSolution) -> [f64; 3] {
    let z = if solution.big_omega_pm == 0.0 {
        1.0
    } else {
        solution.omega_pm / solution.big_omega_pm
    };
    [0.0, 0.0, solution.j.sign() * z]
}

/// Polarization channel of the emitted or absorbed photon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Channel {
    #[serde(rename = "e+")]
    EPlus,
    #[serde(rename = "e-")]
    EMinus,
    #[serde(rename = "ez")]
    EZ,
}

impl Channel {
    fn circular(sign: i64) -> Self {
        if sign > 0 {
            Channel::EPlus
        } else {
            Channel::EMinus
        }
    }

    fn mirrored(self, handedness: Handedness) -> Self {
        match (self, handedness) {
            (c, Handedness::Clockwise) => c,
            (Channel::EPlus, _) => Channel::EMinus,
            (Channel::EMinus, _) => Channel::EPlus,
            (Channel::EZ, _) => Channel::EZ,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Channel::EPlus => "e+",
            Channel::EMinus => "e-",
            Channel::EZ => "ez",
        }
    }
}

/// The four kinds of nonzero magnetodipole transition out of ψ_{j,N0}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// Same j, one photon moved: frequency ω0.
    Scattering,
    /// Opposite j, same N0: frequency Ω − ω0.
    Difference,
    /// Opposite j, two photons moved: frequency Ω + ω0.
    Sum,
    /// Opposite j, one photon moved, longitudinal: frequency Ω.
    Longitudinal,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::Scattering,
        Family::Difference,
        Family::Sum,
        Family::Longitudinal,
    ];

    /// Final frame spin sign and photon offset for a start in frame spin `s`.
    fn final_state(self, s: i64) -> (i64, i64) {
        match self {
            Family::Scattering => (s, -s),
            Family::Difference => (-s, 0),
            Family::Sum => (-s, 2 * s),
            Family::Longitudinal => (-s, s),
        }
    }

    fn channel(self, s: i64) -> Channel {
        match self {
            Family::Scattering | Family::Difference => Channel::circular(-s),
            Family::Sum => Channel::circular(s),
            Family::Longitudinal => Channel::EZ,
        }
    }

    /// Δl_z in the clockwise frame.
    fn delta_lz(self, s: i64) -> i64 {
        let (sf, offset) = self.final_state(s);
        // l_z = m + N with m = s/2
        offset + (sf - s) / 2
    }

    /// Closed-form element in units of |μ|.
    fn ratio(self, big_omega: f64, omega0: f64) -> f64 {
        let transverse = (big_omega * big_omega - omega0 * omega0).max(0.0).sqrt();
        match self {
            Family::Scattering => transverse / (std::f64::consts::SQRT_2 * big_omega),
            Family::Difference => (big_omega + omega0) / (std::f64::consts::SQRT_2 * big_omega),
            Family::Sum => (big_omega - omega0) / (std::f64::consts::SQRT_2 * big_omega),
            Family::Longitudinal => transverse / (2.0 * big_omega),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Family::Scattering => "scattering",
            Family::Difference => "difference",
            Family::Sum => "sum",
            Family::Longitudinal => "longitudinal",
        }
    }
}

/// One family of transition matrix elements.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ElementFamily {
    pub family: Family,
    /// |⟨f|ê·μ̂|i⟩| / |μ|.
    pub ratio: f64,
    /// |⟨f|ê·μ̂|i⟩|, erg/G.
    pub magnitude: f64,
}

/// Closed-form magnetodipole elements in the intensive limit, with
/// Ω = sqrt((2μH0/ħ)² + ω0²):
///
/// scattering √(Ω²−ω0²)/(√2Ω), difference (Ω+ω0)/(√2Ω),
/// sum (Ω−ω0)/(√2Ω), longitudinal √(Ω²−ω0²)/(2Ω), all times |μ|.
pub fn matrix_elements(field: &PhotonField, particle: &Particle) -> Result<[ElementFamily; 4]> {
    let big = omega_classical(field, particle)?;
    let w0 = field.omega0();
    Ok(Family::ALL.map(|family| {
        let ratio = family.ratio(big, w0);
        ElementFamily {
            family,
            ratio,
            magnitude: ratio * particle.mu.abs(),
        }
    }))
}

/// Dressed-state label: lab projection and photon number relative to N0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StateLabel {
    pub j: HalfInt,
    pub photon_offset: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralLine {
    pub initial: StateLabel,
    #[serde(rename = "final")]
    pub final_state: StateLabel,
    /// |ε_final − ε_initial|/ħ, rad/s.
    pub frequency: f64,
    /// ε_final − ε_initial, erg. Positive for absorption.
    pub energy_change: f64,
    /// Element in units of |μ|.
    pub element_ratio: f64,
    /// Element, erg/G.
    pub element_magnitude: f64,
    pub channel: Channel,
    pub delta_lz: i64,
    pub family: Family,
}

/// How the level energies entering line frequencies are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// N0 → ∞ at fixed H0: ε_{±,N} = Nħω0 ∓ ħ(Ω − ω0)/2 with the classical Ω.
    #[default]
    IntensiveLimit,
    /// Exact spin-1/2 energies at each photon number, recoil neglected.
    Exact,
}

/// Energy of frame state (s, N0 + offset) relative to N0ħω0 + ħ²k²/2m.
fn frame_level(
    field: &PhotonField,
    particle: &Particle,
    s: i64,
    offset: i64,
    regime: Regime,
) -> Result<f64> {
    let hw = HBAR * field.omega0();
    match regime {
        Regime::IntensiveLimit => {
            let splitting = hypot_minus(2.0 * particle.mu * field.h0()?, hw);
            Ok(offset as f64 * hw - s as f64 * splitting / 2.0)
        }
        Regime::Exact => {
            let n = field.integer_n0()? + offset as f64;
            let at_n = field.with_occupation(n)?;
            let frame_branch = if s > 0 { Branch::Plus } else { Branch::Minus };
            let lab_branch = Branch::from_j(field.handedness().frame(frame_branch.j()))?;
            let sol = dressed_spin_half(&at_n, particle, lab_branch, Recoil::Neglected)?;
            Ok(offset as f64 * hw + sol.shift)
        }
    }
}

fn frame_half(s: i64) -> HalfInt {
    if s > 0 {
        HalfInt::HALF
    } else {
        HalfInt::MINUS_HALF
    }
}

fn lines_from(
    field: &PhotonField,
    particle: &Particle,
    s: i64,
    families: &[Family],
    regime: Regime,
) -> Result<Vec<SpectralLine>> {
    let h = field.handedness();
    let big = omega_classical(field, particle)?;
    let w0 = field.omega0();
    // a purely classical field stands for N0 → ∞ in the intensive limit
    let n0 = match (regime, field.n0_opt()) {
        (Regime::IntensiveLimit, None) => f64::INFINITY,
        _ => field.n0()?,
    };
    let e_initial = frame_level(field, particle, s, 0, regime)?;
    let mut out = Vec::new();
    for &family in families {
        let (sf, offset) = family.final_state(s);
        // the flipped component of the final state holds offset ± 1 photons
        if n0 + offset as f64 - 1.0 < 0.0 {
            continue;
        }
        let e_final = frame_level(field, particle, sf, offset, regime)?;
        let energy_change = e_final - e_initial;
        let ratio = family.ratio(big, w0);
        out.push(SpectralLine {
            initial: StateLabel {
                j: h.frame(frame_half(s)),
                photon_offset: 0,
            },
            final_state: StateLabel {
                j: h.frame(frame_half(sf)),
                photon_offset: offset,
            },
            frequency: energy_change.abs() / HBAR,
            energy_change,
            element_ratio: ratio,
            element_magnitude: ratio * particle.mu.abs(),
            channel: family.channel(s).mirrored(h),
            delta_lz: i64::from(h.sign()) * family.delta_lz(s),
            family,
        });
    }
    Ok(out)
}

fn sort_lines(lines: &mut [SpectralLine]) {
    lines.sort_by(|a, b| a.frequency.total_cmp(&b.frequency));
}

/// Magnetodipole lines out of ψ_{±1/2,N0}, ascending in frequency.
///
/// With `from_ground` only lines out of the lower state ψ_{+1/2,N0} (the
/// spin-up state of the clockwise frame) are listed.
pub fn transition_spectrum(
    field: &PhotonField,
    particle: &Particle,
    from_ground: bool,
    regime: Regime,
) -> Result<Vec<SpectralLine>> {
    let mut lines = lines_from(field, particle, 1, &Family::ALL, regime)?;
    if !from_ground {
        lines.extend(lines_from(field, particle, -1, &Family::ALL, regime)?);
    }
    sort_lines(&mut lines);
    Ok(lines)
}

/// The lines at the three new frequencies Ω − ω0, Ω and Ω + ω0 out of the
/// ground state.
pub fn ground_state_arrows(
    field: &PhotonField,
    particle: &Particle,
    regime: Regime,
) -> Result<Vec<SpectralLine>> {
    let families = [Family::Difference, Family::Sum, Family::Longitudinal];
    let mut lines = lines_from(field, particle, 1, &families, regime)?;
    sort_lines(&mut lines);
    Ok(lines)
}

/// Component amplitudes of an intensive-limit dressed state in the
/// clockwise frame: (spin sign, photon offset, amplitude).
fn intensive_components(
    field: &PhotonField,
    particle: &Particle,
    s: i64,
    offset: i64,
) -> Result<[(i64, i64, f64); 2]> {
    let big = omega_classical(field, particle)?;
    let w0 = field.omega0();
    let keep = ((big + w0) / (2.0 * big)).sqrt();
    let flip = ((big - w0) / (2.0 * big)).sqrt();
    let sign = if particle.mu < 0.0 { -1.0 } else { 1.0 };
    Ok([(s, offset, keep), (-s, offset + s, s as f64 * sign * flip)])
}

/// |⟨f|ê·σ|i⟩| between intensive-limit dressed states, from their
/// closed-form amplitudes. States are given as lab labels; the channel is in
/// the lab frame.
pub fn contraction_element(
    field: &PhotonField,
    particle: &Particle,
    initial: StateLabel,
    final_state: StateLabel,
    channel: Channel,
) -> Result<f64> {
    let h = field.handedness();
    let frame_sign = |j: HalfInt| -> Result<i64> { Ok(Branch::from_j(h.frame(j))?.sign() as i64) };
    let si = frame_sign(initial.j)?;
    let sf = frame_sign(final_state.j)?;
    let frame_channel = channel.mirrored(h);
    let ci = intensive_components(field, particle, si, initial.photon_offset)?;
    let cf = intensive_components(field, particle, sf, final_state.photon_offset)?;
    let mut total = 0.0;
    for &(m, n, a) in &ci {
        // ê·σ acting on |m⟩: e+ → √2 σ+, e− → √2 σ−, ez → σz
        let (m_out, factor) = match frame_channel {
            Channel::EPlus if m < 0 => (1, std::f64::consts::SQRT_2),
            Channel::EMinus if m > 0 => (-1, std::f64::consts::SQRT_2),
            Channel::EZ => (m, m as f64),
            _ => continue,
        };
        for &(mf, nf, b) in &cf {
            if mf == m_out && nf == n {
                total += a * b * factor;
            }
        }
    }
    Ok(total.abs())
}

/// A line or candidate pair that breaks |Δl_z| ≤ 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelectionViolation {
    pub initial: StateLabel,
    #[serde(rename = "final")]
    pub final_state: StateLabel,
    pub channel: Channel,
    pub delta_lz: i64,
    pub element: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelectionReport {
    pub checked: usize,
    pub violations: Vec<SelectionViolation>,
}

impl SelectionReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Every line with a nonzero element must have |Δl_z| ≤ 1.
pub fn selection_rule_check(lines: &[SpectralLine]) -> SelectionReport {
    let violations = lines
        .iter()
        .filter(|l| l.element_ratio != 0.0 && l.delta_lz.abs() > 1)
        .map(|l| SelectionViolation {
            initial: l.initial,
            final_state: l.final_state,
            channel: l.channel,
            delta_lz: l.delta_lz,
            element: l.element_ratio,
        })
        .collect();
    SelectionReport {
        checked: lines.len(),
        violations,
    }
}

fn lab_lz(h: Handedness, label: StateLabel) -> f64 {
    label.j.value() + f64::from(h.sign()) * label.photon_offset as f64
}

/// Contracts every pair of states ψ_{j,N0+a} → ψ_{j',N0+b} with
/// |a|, |b| ≤ `max_offset` and every channel, and flags pairs with
/// |Δl_z| ≥ 2 whose element is not zero.
pub fn selection_rule_candidates(
    field: &PhotonField,
    particle: &Particle,
    max_offset: i64,
) -> Result<SelectionReport> {
    let h = field.handedness();
    let mut labels = Vec::new();
    for offset in -max_offset..=max_offset {
        for j in [HalfInt::HALF, HalfInt::MINUS_HALF] {
            labels.push(StateLabel {
                j,
                photon_offset: offset,
            });
        }
    }
    let mut checked = 0;
    let mut violations = Vec::new();
    for &i in &labels {
        for &f in &labels {
            let delta = lab_lz(h, f) - lab_lz(h, i);
            if delta.abs() < 2.0 {
                continue;
            }
            for channel in [Channel::EPlus, Channel::EMinus, Channel::EZ] {
                checked += 1;
                let element = contraction_element(field, particle, i, f, channel)?;
                if element != 0.0 {
                    violations.push(SelectionViolation {
                        initial: i,
                        final_state: f,
                        channel,
                        delta_lz: delta as i64,
                        element,
                    });
                }
            }
        }
    }
    Ok(SelectionReport {
        checked,
        violations,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MagnetizationResult {
    /// Signed M along `direction`, erg/(G·cm³).
    pub magnitude: f64,
    /// M/(μn).
    pub reduced: f64,
    /// +1 for e_z, −1 for −e_z.
    pub direction: f64,
    /// Set when T = 0 and the tanh factor is taken as 1.
    pub saturated: bool,
    /// 1/cm³.
    pub density: f64,
    /// erg.
    pub temperature: f64,
    /// Δε, erg.
    pub delta_eps: f64,
    /// Ω, rad/s.
    pub big_omega: f64,
}

/// Magnetization of a nondegenerate gas, M = (μnω0/Ω)·tanh(Δε/2T), along e_z
/// for a clockwise wave and −e_z for a counterclockwise one.
pub fn magnetization(
    field: &PhotonField,
    particle: &Particle,
    density: f64,
    temperature: f64,
) -> Result<MagnetizationResult> {
    if !(density >= 0.0) || !density.is_finite() {
        return Err(ModelError::Domain(format!(
            "density must be non-negative, got {density}"
        )));
    }
    if !(temperature >= 0.0) {
        return Err(ModelError::Domain(format!(
            "temperature must be non-negative, got {temperature}"
        )));
    }
    let hw = HBAR * field.omega0();
    let delta_eps = hypot_minus(2.0 * particle.mu * field.h0()?, hw);
    let big_omega = omega_classical(field, particle)?;
    let saturated = temperature == 0.0;
    let polarization = if saturated {
        1.0
    } else {
        (delta_eps / (2.0 * temperature)).tanh()
    };
    let reduced = field.omega0() / big_omega * polarization;
    Ok(MagnetizationResult {
        magnitude: particle.mu * density * reduced,
        reduced,
        direction: f64::from(field.handedness().sign()),
        saturated,
        density,
        temperature,
        delta_eps,
        big_omega,
    })
}

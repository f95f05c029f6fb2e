//! Per-finger control supervision: reference generation, the two loop
//! controllers, contact detection, and the one-way TRACKING to FORCE
//! mode switch.
//!
//! Contact is inferred without tactile sensing: while tracking a moving
//! reference, a finger whose motion is impeded accumulates tracking error.
//! Once that error reaches a calibrated threshold (and the actuator is
//! working hard enough for the error to be meaningful), the supervisor
//! latches into force mode and regulates bending to a fixed offset above
//! the bending memorized at contact.

use crate::error::{CoreError, Result};
use crate::lti::{DifferenceEq, TransferFunction};
use serde::{Deserialize, Serialize};

/// Reference trajectory for the tracking phase. Times are seconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReferenceKind {
    /// Constant value.
    Hold { value_deg: f64 },
    /// Zero until `start_s`, then rising at `slope_deg_per_s`.
    Ramp { slope_deg_per_s: f64, start_s: f64 },
    /// Periodic symmetric triangle from 0 up to `amplitude_deg` and back,
    /// starting at `start_s`.
    Triangle {
        amplitude_deg: f64,
        period_s: f64,
        start_s: f64,
    },
}

/// Reference value at discrete step `k` with sample time `dt`.
pub fn reference(kind: &ReferenceKind, k: usize, dt: f64) -> f64 {
    let t = k as f64 * dt;
    match *kind {
        ReferenceKind::Hold { value_deg } => value_deg,
        ReferenceKind::Ramp {
            slope_deg_per_s,
            start_s,
        } => {
            if t < start_s {
                0.0
            } else {
                slope_deg_per_s * (t - start_s)
            }
        }
        ReferenceKind::Triangle {
            amplitude_deg,
            period_s,
            start_s,
        } => {
            if t < start_s {
                return 0.0;
            }
            let phase = (t - start_s) % period_s;
            let half = period_s / 2.0;
            if phase <= half {
                amplitude_deg * phase / half
            } else {
                amplitude_deg * (2.0 - phase / half)
            }
        }
    }
}

/// Linear controller realization with output offset, saturation, and
/// integrator anti-windup.
///
/// The stored output history holds the saturated value whenever the raw
/// output would exceed the duty limits, so the internal integrator state is
/// frozen at the limit instead of winding up.
#[derive(Debug, Clone)]
pub struct ClampedController {
    realization: DifferenceEq,
    /// Added to the linear output to form the commanded duty.
    pub offset: f64,
    duty_min: f64,
    duty_max: f64,
}

impl ClampedController {
    pub fn new(tf: &TransferFunction, offset: f64, duty_min: f64, duty_max: f64) -> Self {
        ClampedController {
            realization: tf.realize(),
            offset,
            duty_min,
            duty_max,
        }
    }

    /// One control step: error in, saturated duty out.
    pub fn step(&mut self, error: f64) -> f64 {
        let raw = self.realization.output_for(error);
        let lo = self.duty_min - self.offset;
        let hi = self.duty_max - self.offset;
        let held = raw.clamp(lo, hi);
        self.realization.push(error, held);
        held + self.offset
    }
}

/// Contact-detection parameters for one finger.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectionConfig {
    /// Tracking-error threshold, degrees.
    pub threshold_deg: f64,
    /// Minimum duty for the error to count as contact evidence, %.
    pub duty_floor: f64,
}

/// Contact verdict: both conditions must hold simultaneously. A large error
/// at low duty means the valve is barely driving the finger (dead zone,
/// startup), not that an object is in the way.
pub fn detect_contact(tracking_error_deg: f64, duty: f64, cfg: &DetectionConfig) -> bool {
    tracking_error_deg >= cfg.threshold_deg && duty >= cfg.duty_floor
}

/// Detection threshold from a corpus of tracking-error magnitudes: the
/// smallest sample at which the empirical CDF reaches `percentile`
/// (right-continuous inverse).
pub fn calibrate_threshold(errors_deg: &[f64], percentile: f64) -> Result<f64> {
    if errors_deg.len() < 10 {
        return Err(CoreError::InvalidInput(format!(
            "threshold calibration needs at least 10 samples, got {}",
            errors_deg.len()
        )));
    }
    if !(percentile > 0.0 && percentile < 1.0) {
        return Err(CoreError::InvalidInput(format!(
            "percentile must lie in (0, 1), got {percentile}"
        )));
    }
    if errors_deg.iter().any(|e| !e.is_finite()) {
        return Err(CoreError::InvalidInput(
            "error corpus contains non-finite samples".into(),
        ));
    }
    let mut sorted = errors_deg.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len();
    let idx = ((percentile * n as f64).ceil() as usize)
        .saturating_sub(1)
        .min(n - 1);
    Ok(sorted[idx])
}

/// Which loop is in charge of a finger. The switch is one way: a grasp is
/// never silently abandoned because the error momentarily shrank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FingerMode {
    Tracking,
    Force,
}

/// Everything the supervisor needs to run one finger.
#[derive(Debug, Clone)]
pub struct SupervisorConfig {
    pub tracking_tf: TransferFunction,
    pub force_tf: TransferFunction,
    /// Feedforward bias under the tracking controller, %.
    pub duty_bias: f64,
    pub duty_min: f64,
    pub duty_max: f64,
    pub detection: DetectionConfig,
    /// Force-offset multiplier: the force setpoint sits mu * threshold
    /// degrees above the bending memorized at contact.
    pub mu: f64,
    pub reference: ReferenceKind,
}

/// Output of one supervisor step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupervisorOutput {
    pub duty: f64,
    /// Mode that produced this step's duty.
    pub mode: FingerMode,
    /// Active setpoint: the tracking reference, or the memorized-contact
    /// bending plus the force offset.
    pub setpoint_deg: f64,
    /// Active loop error (setpoint - measurement).
    pub error_deg: f64,
}

/// State machine driving one finger.
#[derive(Debug, Clone)]
pub struct FingerSupervisor {
    cfg: SupervisorConfig,
    mode: FingerMode,
    tracking: ClampedController,
    force: Option<ClampedController>,
    bending_at_contact: f64,
    duty_at_contact: f64,
    switch_step: Option<usize>,
}

impl FingerSupervisor {
    pub fn new(cfg: SupervisorConfig) -> Self {
        let tracking =
            ClampedController::new(&cfg.tracking_tf, cfg.duty_bias, cfg.duty_min, cfg.duty_max);
        FingerSupervisor {
            cfg,
            mode: FingerMode::Tracking,
            tracking,
            force: None,
            bending_at_contact: 0.0,
            duty_at_contact: 0.0,
            switch_step: None,
        }
    }

    pub fn mode(&self) -> FingerMode {
        self.mode
    }

    /// Step index at which the supervisor latched into force mode.
    pub fn switch_step(&self) -> Option<usize> {
        self.switch_step
    }

    /// Bending memorized at the contact switch, degrees.
    pub fn bending_at_contact(&self) -> f64 {
        self.bending_at_contact
    }

    /// Force-mode bending offset above the memorized contact bending.
    pub fn force_offset_deg(&self) -> f64 {
        self.cfg.mu * self.cfg.detection.threshold_deg
    }

    /// Changes the force-offset multiplier mid-scenario. Takes effect on the
    /// next step; the latched mode and memorized contact state are kept.
    pub fn set_mu(&mut self, mu: f64) {
        self.cfg.mu = mu;
    }

    /// Replaces the tracking reference mid-scenario (used by schedules that
    /// key one finger's ramp off the other's contact). Only meaningful while
    /// still in tracking mode.
    pub fn set_reference(&mut self, reference: ReferenceKind) {
        self.cfg.reference = reference;
    }

    /// Runs one control step against the measured bending.
    ///
    /// In tracking mode the finger follows the reference; if contact is
    /// detected, the measurement and duty are memorized and the force loop
    /// takes over *next* step, seeded with the memorized duty so the
    /// handover is bumpless.
    pub fn step(&mut self, bending_meas_deg: f64, k: usize) -> SupervisorOutput {
        match self.mode {
            FingerMode::Tracking => {
                let r = reference(&self.cfg.reference, k, self.cfg.tracking_tf.dt);
                let e = r - bending_meas_deg;
                let duty = self.tracking.step(e);
                if detect_contact(e, duty, &self.cfg.detection) {
                    self.bending_at_contact = bending_meas_deg;
                    self.duty_at_contact = duty;
                    self.switch_step = Some(k);
                    self.force = Some(ClampedController::new(
                        &self.cfg.force_tf,
                        duty,
                        self.cfg.duty_min,
                        self.cfg.duty_max,
                    ));
                    self.mode = FingerMode::Force;
                }
                SupervisorOutput {
                    duty,
                    mode: FingerMode::Tracking,
                    setpoint_deg: r,
                    error_deg: e,
                }
            }
            FingerMode::Force => {
                let setpoint = self.bending_at_contact + self.force_offset_deg();
                let e = setpoint - bending_meas_deg;
                let duty = self
                    .force
                    .as_mut()
                    .expect("force controller exists in force mode")
                    .step(e);
                SupervisorOutput {
                    duty,
                    mode: FingerMode::Force,
                    setpoint_deg: setpoint,
                    error_deg: e,
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::defaults;
    use approx::assert_abs_diff_eq;

    fn tracking_tf() -> TransferFunction {
        crate::defaults::nominal_tracking_controller()
    }

    fn force_tf() -> TransferFunction {
        crate::defaults::nominal_force_controller()
    }

    fn cfg(reference: ReferenceKind, mu: f64) -> SupervisorConfig {
        SupervisorConfig {
            tracking_tf: tracking_tf(),
            force_tf: force_tf(),
            duty_bias: defaults::DUTY_BIAS,
            duty_min: defaults::DUTY_MIN,
            duty_max: defaults::DUTY_MAX,
            detection: DetectionConfig {
                threshold_deg: defaults::DETECT_THRESHOLD_DEG[0],
                duty_floor: defaults::DETECT_DUTY_FLOOR,
            },
            mu,
            reference,
        }
    }

    #[test]
    fn triangle_peaks_at_half_period() {
        let kind = ReferenceKind::Triangle {
            amplitude_deg: 60.0,
            period_s: 50.0,
            start_s: 0.0,
        };
        let dt = 0.1;
        assert_eq!(reference(&kind, 0, dt), 0.0);
        assert_abs_diff_eq!(reference(&kind, 250, dt), 60.0, epsilon = 1e-12); // t = 25 s
        assert_abs_diff_eq!(reference(&kind, 500, dt), 0.0, epsilon = 1e-12); // full period
        assert_abs_diff_eq!(reference(&kind, 125, dt), 30.0, epsilon = 1e-12);
    }

    #[test]
    fn ramp_respects_start_offset() {
        let kind = ReferenceKind::Ramp {
            slope_deg_per_s: 2.0,
            start_s: 10.0,
        };
        assert_eq!(reference(&kind, 50, 0.1), 0.0); // t = 5 s
        assert_abs_diff_eq!(reference(&kind, 150, 0.1), 10.0, epsilon = 1e-12); // t = 15 s
    }

    #[test]
    fn unsaturated_controller_matches_linear_simulation() {
        // With huge limits and zero offset the clamped realization must be
        // exactly the linear difference equation.
        let tf = tracking_tf();
        let mut ctrl = ClampedController::new(&tf, 0.0, -1e12, 1e12);
        let errors: Vec<f64> = (0..200).map(|k| (k as f64 * 0.21).sin() * 3.0).collect();
        let linear = tf.simulate(&errors);
        for (k, &e) in errors.iter().enumerate() {
            let got = ctrl.step(e);
            assert_abs_diff_eq!(got, linear[k], epsilon = 1e-12);
        }
    }

    #[test]
    fn saturated_output_stays_in_limits_and_recovers() {
        let tf = force_tf();
        let mut ctrl = ClampedController::new(&tf, 20.0, 0.0, 100.0);
        // Large persistent error saturates the duty.
        for _ in 0..200 {
            let d = ctrl.step(500.0);
            assert!((0.0..=100.0).contains(&d));
        }
        // With the sign reversed the controller must leave the rail
        // immediately rather than unwinding hundreds of steps of windup.
        let first_after = ctrl.step(-5.0);
        assert!(first_after < 100.0);
        let mut d = first_after;
        for _ in 0..20 {
            d = ctrl.step(-5.0);
        }
        assert!(d < 90.0, "anti-windup failed: duty stuck at {d}");
    }

    #[test]
    fn detection_requires_both_conditions() {
        let det = DetectionConfig {
            threshold_deg: 3.88,
            duty_floor: 30.0,
        };
        assert!(detect_contact(4.0, 31.0, &det));
        assert!(!detect_contact(4.0, 29.0, &det)); // error without authority
        assert!(!detect_contact(3.5, 80.0, &det)); // authority without error
        assert!(detect_contact(3.88, 30.0, &det)); // boundary inclusive
        assert!(!detect_contact(-6.0, 80.0, &det)); // undershoot never triggers
    }

    #[test]
    fn percentile_threshold_right_continuous_inverse() {
        let samples: Vec<f64> = (1..=10).map(|v| v as f64).collect();
        assert_eq!(calibrate_threshold(&samples, 0.8).unwrap(), 8.0);
        // Order must not matter.
        let mut shuffled = samples.clone();
        shuffled.reverse();
        assert_eq!(calibrate_threshold(&shuffled, 0.8).unwrap(), 8.0);
        assert_eq!(calibrate_threshold(&samples, 0.05).unwrap(), 1.0);
        assert_eq!(calibrate_threshold(&samples, 0.999).unwrap(), 10.0);
    }

    #[test]
    fn percentile_rejects_bad_input() {
        assert!(calibrate_threshold(&[1.0; 9], 0.8).is_err());
        assert!(calibrate_threshold(&[1.0; 20], 0.0).is_err());
        assert!(calibrate_threshold(&[1.0; 20], 1.0).is_err());
        let mut with_nan = vec![1.0; 20];
        with_nan[3] = f64::NAN;
        assert!(calibrate_threshold(&with_nan, 0.8).is_err());
    }

    #[test]
    fn force_offset_scales_with_mu() {
        let mut sup = FingerSupervisor::new(cfg(
            ReferenceKind::Hold { value_deg: 0.0 },
            4.0,
        ));
        assert_abs_diff_eq!(sup.force_offset_deg(), 15.52, epsilon = 1e-12);
        sup.set_mu(5.0);
        assert_abs_diff_eq!(sup.force_offset_deg(), 19.4, epsilon = 1e-12);
    }

    /// Feeds the supervisor a measurement that stops following the reference,
    /// as a blocked finger would, and checks the full switch protocol.
    #[test]
    fn switch_latches_and_is_bumpless() {
        let reference = ReferenceKind::Ramp {
            slope_deg_per_s: 2.0,
            start_s: 0.0,
        };
        let mut sup = FingerSupervisor::new(cfg(reference, 0.0));
        let dt = defaults::SAMPLE_TIME_S;
        let block_at = 30.0;
        let mut last_tracking_duty = 0.0;
        let mut first_force: Option<(usize, SupervisorOutput)> = None;
        let mut modes = Vec::new();
        for k in 0..2000 {
            // Perfect tracking until the wall at 30 degrees.
            let y = (2.0 * k as f64 * dt).min(block_at);
            let out = sup.step(y, k);
            modes.push(out.mode);
            match out.mode {
                FingerMode::Tracking => last_tracking_duty = out.duty,
                FingerMode::Force => {
                    if first_force.is_none() {
                        first_force = Some((k, out));
                    }
                }
            }
        }
        let (_, first) = first_force.expect("contact never detected");
        // Modes are TRACKING... then FORCE... with no interleaving.
        let first_force_idx = modes.iter().position(|m| *m == FingerMode::Force).unwrap();
        assert!(modes[..first_force_idx]
            .iter()
            .all(|m| *m == FingerMode::Tracking));
        assert!(modes[first_force_idx..]
            .iter()
            .all(|m| *m == FingerMode::Force));
        // Bumpless handover: the first force duty differs from the last
        // tracking duty by exactly the one-step response of the force
        // controller to the initial error.
        let kf = defaults::FORCE_GAIN;
        let expected_jump = kf * first.error_deg;
        assert_abs_diff_eq!(
            first.duty - last_tracking_duty,
            expected_jump,
            epsilon = 1e-9
        );
        // Memorized bending is the measurement at the switch step.
        assert_abs_diff_eq!(sup.bending_at_contact(), block_at, epsilon = 1e-9);
        // mu = 0: the force setpoint is the memorized bending itself.
        assert_abs_diff_eq!(first.setpoint_deg, block_at, epsilon = 1e-9);
    }

    #[test]
    fn error_spike_below_duty_floor_does_not_switch() {
        // Reference jumps immediately, so tracking error is huge from the
        // first step, but the controller output is still near the bias and
        // below the duty floor: no detection.
        let reference = ReferenceKind::Hold { value_deg: 8.0 };
        let mut sup = FingerSupervisor::new(cfg(reference, 0.0));
        let out = sup.step(0.0, 0);
        assert!(out.error_deg > 3.88);
        assert!(out.duty < 30.0);
        assert_eq!(sup.mode(), FingerMode::Tracking);
    }
}

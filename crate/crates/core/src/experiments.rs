//! Scripted experiment scenarios on the virtual rig: free tracking,
//! light-touch and force-modulated grasps, the single-finger force sweep,
//! asymmetric grasping of a movable object, and pull-out peak-force sweeps,
//! plus the time-series log and regression helpers their reports need.
//!
//! Every run is a deterministic function of its scenario (seed included):
//! sensing noise streams are derived per step and finger from the scenario
//! seed, so identical configs reproduce identical logs byte for byte.

use crate::defaults;
use crate::error::{CoreError, Result};
use crate::rig::{ContactLaw, Mobility, ObjectModel, RigScene};
use crate::sensing::{measure_bending, synth_markers, PixelNoise};
use crate::supervisor::{
    DetectionConfig, FingerMode, FingerSupervisor, ReferenceKind, SupervisorConfig,
};
use serde::{Deserialize, Serialize};

/// Pull-out phase of a scenario: after `start_s`, the arm extracts the
/// object away from the base at `speed_cm_s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PullSpec {
    pub start_s: f64,
    pub speed_cm_s: f64,
}

/// Mid-run change of the force-offset multipliers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MuSchedule {
    pub at_s: f64,
    pub mu: [f64; 2],
}

/// A fully specified experiment: rig setup, per-finger references and
/// force-offset multipliers, and optional phase schedules.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    pub duration_s: f64,
    pub seed: u64,
    /// Marker-noise half width in pixels; 0 disables sensing noise.
    pub noise_px: f64,
    pub base_height_cm: f64,
    pub object: Option<ObjectModel>,
    pub contact_law: ContactLaw,
    pub references: [ReferenceKind; 2],
    pub mu: [f64; 2],
    pub detection: [DetectionConfig; 2],
    /// If set, finger 2's ramp is rescheduled to begin this many seconds
    /// after finger 1's contact switch.
    pub finger2_start_after_contact1_s: Option<f64>,
    pub mu_schedule: Option<MuSchedule>,
    pub pull: Option<PullSpec>,
}

/// Reference slope while closing on an object, deg/s. Two opposing limits:
/// fast enough that the integrator windup accumulated between touch and
/// detection stays small — that windup is stored free-bending tendency and
/// lands on the object as extra force — and slow enough that the startup
/// catch-up transient decays before the rising duty crosses the detection
/// arming floor (slopes past about 7 arm while the error is still large
/// and fire a phantom contact).
pub const APPROACH_SLOPE_DEG_PER_S: f64 = 5.0;

impl Scenario {
    fn nominal_detection() -> [DetectionConfig; 2] {
        [
            DetectionConfig {
                threshold_deg: defaults::DETECT_THRESHOLD_DEG[0],
                duty_floor: defaults::DETECT_DUTY_FLOOR,
            },
            DetectionConfig {
                threshold_deg: defaults::DETECT_THRESHOLD_DEG[1],
                duty_floor: defaults::DETECT_DUTY_FLOOR,
            },
        ]
    }

    fn base(name: &str) -> Scenario {
        Scenario {
            name: name.to_string(),
            duration_s: 60.0,
            seed: 0,
            noise_px: 0.0,
            base_height_cm: 8.0,
            object: None,
            contact_law: ContactLaw::default(),
            references: [
                ReferenceKind::Hold { value_deg: 0.0 },
                ReferenceKind::Hold { value_deg: 0.0 },
            ],
            mu: [0.0, 0.0],
            detection: Self::nominal_detection(),
            finger2_start_after_contact1_s: None,
            mu_schedule: None,
            pull: None,
        }
    }

    /// Both fingers track staggered triangle waves with no object present;
    /// the resulting tracking-error corpus feeds threshold calibration.
    pub fn free_tracking() -> Scenario {
        let mut s = Scenario::base("free_tracking");
        s.duration_s = 120.0;
        s.noise_px = defaults::MARKER_NOISE_PX;
        s.references = [
            ReferenceKind::Triangle {
                amplitude_deg: 30.0,
                period_s: 40.0,
                start_s: 0.0,
            },
            ReferenceKind::Triangle {
                amplitude_deg: 30.0,
                period_s: 40.0,
                start_s: 5.0,
            },
        ];
        s
    }

    /// Two-finger grasp of a fixed centered cylinder with staggered ramps
    /// and the given force-offset multipliers.
    pub fn grasp(mu: [f64; 2]) -> Scenario {
        let mut s = Scenario::base("grasp");
        s.object = Some(ObjectModel::cylinder_at([0.0, 15.0], Mobility::Fixed));
        s.references = [
            ReferenceKind::Ramp {
                slope_deg_per_s: APPROACH_SLOPE_DEG_PER_S,
                start_s: 0.0,
            },
            ReferenceKind::Ramp {
                slope_deg_per_s: APPROACH_SLOPE_DEG_PER_S,
                start_s: 10.0,
            },
        ];
        s.mu = mu;
        s
    }

    /// Gentle grasp: contact maintained at the memorized bending.
    pub fn light_touch() -> Scenario {
        let mut s = Scenario::grasp([0.0, 0.0]);
        s.name = "light_touch".into();
        s
    }

    /// Modulated grasp at four detection thresholds of bending offset.
    pub fn force_modulation() -> Scenario {
        let mut s = Scenario::grasp([4.0, 4.0]);
        s.name = "force_modulation".into();
        s
    }

    /// Finger 1 presses the fixed cylinder alone; finger 2 stays parked.
    pub fn single_finger_press(mu: f64) -> Scenario {
        let mut s = Scenario::base("single_finger_press");
        s.object = Some(ObjectModel::cylinder_at([0.0, 15.0], Mobility::Fixed));
        s.references = [
            ReferenceKind::Ramp {
                slope_deg_per_s: APPROACH_SLOPE_DEG_PER_S,
                start_s: 0.0,
            },
            ReferenceKind::Hold { value_deg: 0.0 },
        ];
        s.mu = [mu, 0.0];
        s
    }

    /// Movable off-center cylinder: gentle asymmetric grasp first (the
    /// object must not move), then both multipliers raised to 4 (the object
    /// slides to a new equilibrium). Finger 2's ramp starts 10 s after
    /// finger 1's contact.
    pub fn asymmetric_grasp() -> Scenario {
        let mut s = Scenario::base("asymmetric_grasp");
        s.duration_s = 120.0;
        s.object = Some(ObjectModel::cylinder_at([1.25, 15.0], Mobility::Movable));
        s.references = [
            ReferenceKind::Ramp {
                slope_deg_per_s: APPROACH_SLOPE_DEG_PER_S,
                start_s: 0.0,
            },
            // Placeholder; rescheduled at finger 1's contact.
            ReferenceKind::Hold { value_deg: 0.0 },
        ];
        s.mu = [0.0, 0.0];
        s.finger2_start_after_contact1_s = Some(10.0);
        s.mu_schedule = Some(MuSchedule {
            at_s: 80.0,
            mu: [4.0, 4.0],
        });
        s
    }

    /// Power grasp low on the fingers, then constant-speed extraction.
    pub fn pullout(mu: f64) -> Scenario {
        let mut s = Scenario::base("pullout");
        s.duration_s = 45.0;
        s.base_height_cm = 0.0;
        s.object = Some(ObjectModel::cylinder_at([0.0, 6.25], Mobility::Fixed));
        s.references = [
            ReferenceKind::Ramp {
                slope_deg_per_s: APPROACH_SLOPE_DEG_PER_S,
                start_s: 0.0,
            },
            ReferenceKind::Ramp {
                slope_deg_per_s: APPROACH_SLOPE_DEG_PER_S,
                start_s: 5.0,
            },
        ];
        s.mu = [mu, mu];
        s.pull = Some(PullSpec {
            start_s: 30.0,
            speed_cm_s: 5.0,
        });
        s
    }

    /// Scenario by preset name, as exposed on the command line.
    pub fn by_name(name: &str) -> Result<Scenario> {
        match name {
            "free_tracking" => Ok(Scenario::free_tracking()),
            "light_touch" => Ok(Scenario::light_touch()),
            "force_modulation" => Ok(Scenario::force_modulation()),
            "single_finger_press" => Ok(Scenario::single_finger_press(5.0)),
            "asymmetric_grasp" => Ok(Scenario::asymmetric_grasp()),
            "pullout" => Ok(Scenario::pullout(5.0)),
            other => Err(CoreError::InvalidInput(format!(
                "unknown scenario '{other}' (available: free_tracking, light_touch, \
                 force_modulation, single_finger_press, asymmetric_grasp, pullout)"
            ))),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.duration_s > 0.0) {
            return Err(CoreError::InvalidInput(format!(
                "duration must be positive, got {}",
                self.duration_s
            )));
        }
        if self.mu.iter().any(|m| *m < 0.0 || !m.is_finite()) {
            return Err(CoreError::InvalidInput(format!(
                "mu factors must be finite and nonnegative, got {:?}",
                self.mu
            )));
        }
        if self.noise_px < 0.0 {
            return Err(CoreError::InvalidInput(format!(
                "noise half-width must be nonnegative, got {}",
                self.noise_px
            )));
        }
        self.contact_law.validate()?;
        if let Some(obj) = &self.object {
            obj.validate()?;
        }
        Ok(())
    }

    fn steps(&self) -> usize {
        (self.duration_s / defaults::SAMPLE_TIME_S).round() as usize
    }
}

/// One logged control step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogRow {
    pub t_s: f64,
    pub mode: [FingerMode; 2],
    /// Active setpoint per finger: tracking reference, or memorized contact
    /// bending plus the force offset after the switch.
    pub rref_deg: [f64; 2],
    /// Measured bendings (through the marker pipeline).
    pub y_deg: [f64; 2],
    /// Active loop error per finger.
    pub e_deg: [f64; 2],
    pub duty: [f64; 2],
    pub force_x_n: f64,
    pub force_y_n: f64,
    pub object_cm: [f64; 2],
    pub contact: [bool; 2],
}

/// Fixed-rate time series of a full run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TimeSeriesLog {
    pub rows: Vec<LogRow>,
}

impl TimeSeriesLog {
    pub const CSV_HEADER: &'static str =
        "t,mode1,mode2,Rref1,Rref2,y1,y2,e1,e2,d1,d2,F_X,F_Y,X_obj,Y_obj,contact1,contact2";

    /// Renders the full log as CSV. Numbers use shortest round-trip
    /// formatting with '.' decimals, so equal runs serialize byte-equal.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * (self.rows.len() + 1));
        out.push_str(Self::CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let mode = |m: FingerMode| match m {
                FingerMode::Tracking => "TRACKING",
                FingerMode::Force => "FORCE",
            };
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                r.t_s,
                mode(r.mode[0]),
                mode(r.mode[1]),
                r.rref_deg[0],
                r.rref_deg[1],
                r.y_deg[0],
                r.y_deg[1],
                r.e_deg[0],
                r.e_deg[1],
                r.duty[0],
                r.duty[1],
                r.force_x_n,
                r.force_y_n,
                r.object_cm[0],
                r.object_cm[1],
                r.contact[0] as u8,
                r.contact[1] as u8,
            ));
        }
        out
    }
}

/// Everything a scenario run produces.
#[derive(Debug, Clone)]
pub struct RunResult {
    pub log: TimeSeriesLog,
    /// Per finger, |tracking error| samples collected while in tracking mode.
    pub tracking_error_corpus: [Vec<f64>; 2],
    pub final_modes: [FingerMode; 2],
    /// Contact-switch step per finger, if it happened.
    pub switch_steps: [Option<usize>; 2],
    /// |active loop error| at the final step, per finger.
    pub terminal_error_deg: [f64; 2],
    /// Mean force magnitude |(F_X, F_Y)| over the final 50 steps.
    pub terminal_force_n: f64,
    /// Mean per-finger force magnitude over the final 50 steps.
    pub steady_finger_force_n: [f64; 2],
    /// Largest extraction force over the pull phase (0 without one).
    pub peak_pull_force_n: f64,
    /// Object displacement from its initial pose, total and at the moment
    /// just before a mu schedule raised the multipliers.
    pub object_displacement_cm: f64,
    pub displacement_before_mu_raise_cm: Option<f64>,
}

/// Per-(step, finger) noise stream derivation: decorrelated, deterministic.
fn noise_seed(base: u64, step: usize, finger: usize) -> u64 {
    let mut x = base
        ^ (step as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)
        ^ ((finger as u64 + 1).wrapping_mul(0xbf58_476d_1ce4_e5b9));
    // splitmix64 finalizer
    x ^= x >> 30;
    x = x.wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x ^= x >> 27;
    x = x.wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^= x >> 31;
    x
}

/// Runs a scenario start to finish. Deterministic in the scenario.
pub fn run_scenario(scenario: &Scenario) -> Result<RunResult> {
    scenario.validate()?;
    let dt = defaults::SAMPLE_TIME_S;
    let steps = scenario.steps();
    let mut rig = RigScene::two_finger_bench(
        scenario.base_height_cm,
        scenario.object,
        scenario.contact_law,
    )?;
    let mut sups = [0, 1].map(|i| {
        FingerSupervisor::new(SupervisorConfig {
            tracking_tf: defaults::nominal_tracking_controller(),
            force_tf: defaults::nominal_force_controller(),
            duty_bias: defaults::DUTY_BIAS,
            duty_min: defaults::DUTY_MIN,
            duty_max: defaults::DUTY_MAX,
            detection: scenario.detection[i],
            mu: scenario.mu[i],
            reference: scenario.references[i],
        })
    });
    let noise = PixelNoise {
        half_width_px: scenario.noise_px,
        pixels_per_meter: defaults::PIXELS_PER_METER,
    };
    let initial_center = rig.object_center();
    let mut log = TimeSeriesLog::default();
    let mut corpus: [Vec<f64>; 2] = [Vec::new(), Vec::new()];
    let mut finger2_rescheduled = scenario.finger2_start_after_contact1_s.is_none();
    let mut mu_raised = scenario.mu_schedule.is_none();
    let mut displacement_before_mu = None;
    let mut force_mag_tail = Vec::with_capacity(steps);
    let mut finger_force_tail: Vec<[f64; 2]> = Vec::with_capacity(steps);
    let mut last_errors = [0.0, 0.0];

    for k in 0..steps {
        let t = k as f64 * dt;

        if let (false, Some(sched)) = (mu_raised, scenario.mu_schedule) {
            if t >= sched.at_s {
                displacement_before_mu = Some(displacement(initial_center, rig.object_center()));
                sups[0].set_mu(sched.mu[0]);
                sups[1].set_mu(sched.mu[1]);
                mu_raised = true;
            }
        }

        // Measure through the marker pipeline. The plant state is linear and
        // may transiently dip below zero; a physical finger reads straight.
        let y_true = rig.peek_bending();
        let mut y_meas = [0.0; 2];
        for i in 0..2 {
            let bend = y_true[i].clamp(0.0, 179.0);
            let markers = synth_markers(
                bend,
                &rig.fingers[i].geometry,
                &noise,
                noise_seed(scenario.seed, k, i),
            )?;
            y_meas[i] = measure_bending(&markers);
        }

        let out1 = sups[0].step(y_meas[0], k);
        let out2 = sups[1].step(y_meas[1], k);
        let outs = [out1, out2];

        if !finger2_rescheduled && sups[0].mode() == FingerMode::Force {
            let delay = scenario.finger2_start_after_contact1_s.unwrap();
            sups[1].set_reference(ReferenceKind::Ramp {
                slope_deg_per_s: APPROACH_SLOPE_DEG_PER_S,
                start_s: t + delay,
            });
            finger2_rescheduled = true;
        }

        let pulling = scenario.pull.filter(|p| t >= p.start_s);
        if let Some(p) = pulling {
            // The arm only pulls once the grasp is regulated.
            if rig.peak_pull_force() == 0.0
                && (sups[0].mode() != FingerMode::Force || sups[1].mode() != FingerMode::Force)
            {
                return Err(CoreError::Timeout(format!(
                    "pull scheduled at {:.1} s but the grasp was not established",
                    p.start_s
                )));
            }
        }
        let rig_out = match pulling {
            Some(p) => rig.pullout_step(outs[0].duty, outs[1].duty, p.speed_cm_s)?,
            None => rig.step(outs[0].duty, outs[1].duty)?,
        };

        for i in 0..2 {
            if outs[i].mode == FingerMode::Tracking {
                corpus[i].push(outs[i].error_deg.abs());
            }
            last_errors[i] = outs[i].error_deg.abs();
        }
        force_mag_tail.push(rig_out.force_x_n.hypot(rig_out.force_y_n));
        finger_force_tail.push([
            rig_out.finger_force_n[0][0].hypot(rig_out.finger_force_n[0][1]),
            rig_out.finger_force_n[1][0].hypot(rig_out.finger_force_n[1][1]),
        ]);

        log.rows.push(LogRow {
            t_s: (t * 1e9).round() / 1e9,
            mode: [outs[0].mode, outs[1].mode],
            rref_deg: [outs[0].setpoint_deg, outs[1].setpoint_deg],
            y_deg: y_meas,
            e_deg: [outs[0].error_deg, outs[1].error_deg],
            duty: [outs[0].duty, outs[1].duty],
            force_x_n: rig_out.force_x_n,
            force_y_n: rig_out.force_y_n,
            object_cm: rig_out.object_center_cm,
            contact: rig_out.contact,
        });
    }

    let tail = 50.min(force_mag_tail.len());
    let mean_tail = |v: &[f64]| v[v.len() - tail..].iter().sum::<f64>() / tail as f64;
    let steady_finger = [
        mean_tail(&finger_force_tail.iter().map(|f| f[0]).collect::<Vec<_>>()),
        mean_tail(&finger_force_tail.iter().map(|f| f[1]).collect::<Vec<_>>()),
    ];
    Ok(RunResult {
        log,
        tracking_error_corpus: corpus,
        final_modes: [sups[0].mode(), sups[1].mode()],
        switch_steps: [sups[0].switch_step(), sups[1].switch_step()],
        terminal_error_deg: last_errors,
        terminal_force_n: mean_tail(&force_mag_tail),
        steady_finger_force_n: steady_finger,
        peak_pull_force_n: rig.peak_pull_force(),
        object_displacement_cm: displacement(initial_center, rig.object_center()),
        displacement_before_mu_raise_cm: displacement_before_mu,
    })
}

fn displacement(a: [f64; 2], b: [f64; 2]) -> f64 {
    (b[0] - a[0]).hypot(b[1] - a[1])
}

/// Free tracking with the invariant that no contact can occur; returns the
/// run plus the tracking-error corpus for threshold calibration.
pub fn run_free_tracking(scenario: &Scenario) -> Result<RunResult> {
    if scenario.object.is_some() {
        return Err(CoreError::InvalidInput(
            "free tracking runs without an object in the scene".into(),
        ));
    }
    let result = run_scenario(scenario)?;
    if result.final_modes.iter().any(|m| *m == FingerMode::Force) {
        return Err(CoreError::InvalidInput(
            "contact detected during free tracking; scenario invariant violated".into(),
        ));
    }
    Ok(result)
}

/// Two-finger grasp run; errors if either finger never reaches contact.
pub fn run_grasp(scenario: &Scenario) -> Result<RunResult> {
    if scenario.object.is_none() {
        return Err(CoreError::InvalidInput(
            "grasp scenarios need an object in the scene".into(),
        ));
    }
    let result = run_scenario(scenario)?;
    for (i, mode) in result.final_modes.iter().enumerate() {
        if *mode != FingerMode::Force {
            return Err(CoreError::Timeout(format!(
                "finger {} never detected contact within {:.0} s",
                i + 1,
                scenario.duration_s
            )));
        }
    }
    Ok(result)
}

/// Least-squares line plus coefficient of determination. Constant-y data
/// fits slope 0 with R² defined as 0.
pub fn linear_fit(points: &[(f64, f64)]) -> Result<(f64, f64, f64)> {
    if points.len() < 2 {
        return Err(CoreError::InvalidInput(
            "line fit needs at least two points".into(),
        ));
    }
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    if sxx == 0.0 {
        return Err(CoreError::InvalidInput(
            "line fit needs at least two distinct x values".into(),
        ));
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let syy: f64 = points.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    let r2 = if syy == 0.0 {
        0.0
    } else {
        let ss_res: f64 = points
            .iter()
            .map(|p| (p.1 - (slope * p.0 + intercept)).powi(2))
            .sum();
        1.0 - ss_res / syy
    };
    Ok((slope, intercept, r2))
}

/// One sweep abscissa with its repeated force measurements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub x: f64,
    pub forces_n: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Sweep output: points, the optional line fit, and any excluded trials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    /// What the x axis means ("e_des_deg").
    pub abscissa: String,
    pub points: Vec<SweepPoint>,
    pub fit: Option<LineFit>,
    /// Human-readable notes for trials dropped from the fit.
    pub excluded: Vec<String>,
    pub seed: u64,
}

/// Force-error convergence bound below which a sweep trial counts as
/// settled. Noiseless force loops settle far below this.
const SWEEP_CONVERGENCE_DEG: f64 = 1e-2;

/// Single-finger press sweep over force-offset multipliers: per μ, the
/// steady contact force. Abscissa is e_des = μ·e_tr for finger 1.
pub fn sweep_contact_force(mu_grid: &[f64], trials: usize, seed: u64) -> Result<SweepResult> {
    if mu_grid.is_empty() {
        return Err(CoreError::InvalidInput("empty mu grid".into()));
    }
    if trials == 0 {
        return Err(CoreError::InvalidInput("trials must be at least 1".into()));
    }
    let mut points = Vec::new();
    let mut excluded = Vec::new();
    for &mu in mu_grid {
        let e_des = mu * defaults::DETECT_THRESHOLD_DEG[0];
        let mut forces = Vec::new();
        for trial in 0..trials {
            let mut s = Scenario::single_finger_press(mu);
            s.seed = seed ^ (trial as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15);
            let run = run_scenario(&s)?;
            if run.final_modes[0] != FingerMode::Force {
                return Err(CoreError::Timeout(format!(
                    "finger 1 never contacted at mu={mu}"
                )));
            }
            if run.terminal_error_deg[0] > SWEEP_CONVERGENCE_DEG {
                excluded.push(format!(
                    "mu={mu} trial={trial}: force error {:.4} deg above tolerance",
                    run.terminal_error_deg[0]
                ));
                continue;
            }
            forces.push(run.steady_finger_force_n[0]);
        }
        points.push(SweepPoint { x: e_des, forces_n: forces });
    }
    let result_points: Vec<(f64, f64)> = points
        .iter()
        .flat_map(|p| p.forces_n.iter().map(move |f| (p.x, *f)))
        .collect();
    let fit = if points.iter().filter(|p| !p.forces_n.is_empty()).count() >= 2 {
        linear_fit(&result_points)
            .ok()
            .map(|(slope, intercept, r_squared)| LineFit {
                slope,
                intercept,
                r_squared,
            })
    } else {
        None
    };
    Ok(SweepResult {
        abscissa: "e_des_deg".into(),
        points,
        fit,
        excluded,
        seed,
    })
}

/// Pull-out sweep: per μ, the peak extraction force of a settled power
/// grasp pulled at constant speed. Abscissa is e_des = μ·e_tr for finger 1.
pub fn sweep_pullout(mu_grid: &[f64], seed: u64) -> Result<SweepResult> {
    if mu_grid.is_empty() {
        return Err(CoreError::InvalidInput("empty mu grid".into()));
    }
    let mut points = Vec::new();
    for &mu in mu_grid {
        let mut s = Scenario::pullout(mu);
        s.seed = seed;
        let run = run_scenario(&s)?;
        if run.peak_pull_force_n <= 0.0 {
            return Err(CoreError::Timeout(format!(
                "pull-out at mu={mu} recorded no extraction force"
            )));
        }
        points.push(SweepPoint {
            x: mu * defaults::DETECT_THRESHOLD_DEG[0],
            forces_n: vec![run.peak_pull_force_n],
        });
    }
    let flat: Vec<(f64, f64)> = points
        .iter()
        .flat_map(|p| p.forces_n.iter().map(move |f| (p.x, *f)))
        .collect();
    let fit = if points.len() >= 2 {
        linear_fit(&flat)
            .ok()
            .map(|(slope, intercept, r_squared)| LineFit {
                slope,
                intercept,
                r_squared,
            })
    } else {
        None
    };
    Ok(SweepResult {
        abscissa: "e_des_deg".into(),
        points,
        fit,
        excluded: Vec::new(),
        seed,
    })
}

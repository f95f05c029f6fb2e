//! Default physical and controller constants for the reference gripper.
//!
//! The bending plant is the identified second-order ARX model of one
//! pneumatic finger (duty cycle % in, bending angle ° out); controller
//! gains are the shipped loop-shaping result for that plant. Values are
//! used verbatim by the nominal configuration and by the test suite.

/// Control loop sample time, seconds.
pub const SAMPLE_TIME_S: f64 = 0.1;

/// Denominator of the identified finger model: z^2 + A1*z + A2.
pub const PLANT_A1: f64 = -0.7655;
pub const PLANT_A2: f64 = 0.03624;

/// Numerator of the identified finger model: B1*z + B2.
pub const PLANT_B1: f64 = 0.04074;
pub const PLANT_B2: f64 = 0.3601;

/// Tracking controller (type-2): K * (z - ZERO) / (z - 1)^2.
pub const TRACKING_GAIN: f64 = 0.066;
pub const TRACKING_ZERO: f64 = 0.97;

/// Force controller (type-1): K * (z - ZERO) / (z - 1).
pub const FORCE_GAIN: f64 = 0.21;
pub const FORCE_ZERO: f64 = 0.44;

/// Calibrated contact-detection thresholds, degrees, fingers 1 and 2.
pub const DETECT_THRESHOLD_DEG: [f64; 2] = [3.88, 4.71];

/// Duty cycle below which tracking error is not trusted for detection, %.
pub const DETECT_DUTY_FLOOR: f64 = 30.0;

/// Percentile used when calibrating detection thresholds from an error corpus.
pub const DETECT_PERCENTILE: f64 = 0.8;

/// Valve dead zone: duty at or below this produces no actuation, %.
pub const DEAD_ZONE_DUTY: f64 = 20.0;

/// Feedforward bias added to controller outputs to sit at the dead-zone edge, %.
pub const DUTY_BIAS: f64 = 20.0;

/// Actuator duty limits, %.
pub const DUTY_MIN: f64 = 0.0;
pub const DUTY_MAX: f64 = 100.0;

/// Finger length along the neutral axis, meters.
pub const FINGER_LENGTH_M: f64 = 0.107;

/// Spacing between adjacent bending markers along the finger, meters.
pub const MARKER_SPACING_M: f64 = 0.0273;

/// Finger mount separation, meters (bases sit at +/- half of this on X).
pub const FINGER_SEPARATION_M: f64 = 0.150;

/// Grasped object: cylinder radius, centimeters.
pub const OBJECT_RADIUS_CM: f64 = 2.0;

/// Object plate friction coefficient (object against its support).
pub const OBJECT_FRICTION: f64 = 0.09;

/// Object normal load, Newtons (solid PLA cylinder, r 2 cm, h 8.4 cm).
pub const OBJECT_NORMAL_LOAD_N: f64 = 1.28;

/// Contact stiffness in bending coordinates, Newtons per degree of realized
/// deflection past touch. Least-squares fit of the press curve
/// F = k (e_des + deflection_at_detection) through the measured endpoints
/// (about 0.05 N at zero offset, 0.25 N at the 19.4-degree offset).
pub const CONTACT_STIFFNESS_N_PER_DEG: f64 = 0.0117;

/// Ratio of contact-path stiffness to actuation-path stiffness. Controls how
/// strongly an obstacle impedes bending: the measured DC gain in contact is
/// the free gain divided by (1 + ratio). Raising it sharpens contact
/// detection (the tracking error opens faster against a stiffer obstacle)
/// but costs force-mode duty headroom, since the free-bending tendency must
/// grow by (1 + ratio) degrees per degree of commanded deflection; 2.2
/// keeps the largest force setpoint below valve saturation.
pub const CONTACT_STIFFNESS_RATIO: f64 = 2.2;

/// Finger pad / object sliding friction coefficient (pull-out only). Soft
/// pads grip far harder than rigid contacts; calibrated so the pull-out
/// resistance peaks land on the measured 0.3 N (gentle) to 1.2 N (firm)
/// range.
pub const FINGERTIP_FRICTION: f64 = 2.15;

/// Contact is considered escaped during pull-out once the contact normal has
/// rotated this many degrees past the point of resisting the pull.
pub const ESCAPE_MARGIN_DEG: f64 = 10.0;

/// Camera scale used by the synthetic marker generator, pixels per meter.
pub const PIXELS_PER_METER: f64 = 3000.0;

/// Uniform marker pixel noise half-width, pixels. Circumcenter fitting
/// amplifies pixel error by roughly 8/chord (the sagitta sensitivity), so
/// 0.1 px keeps worst-case bending error near half a degree — well under
/// the contact-detection thresholds.
pub const MARKER_NOISE_PX: f64 = 0.1;

use crate::lti::TransferFunction;

/// Identified finger transfer function B(z)/A(z) at the nominal sample time.
pub fn nominal_plant() -> TransferFunction {
    TransferFunction::new(
        vec![PLANT_B1, PLANT_B2],
        vec![1.0, PLANT_A1, PLANT_A2],
        SAMPLE_TIME_S,
    )
    .expect("nominal plant coefficients are valid")
}

/// Tracking controller K*(z - zero)/(z - 1)^2 at the nominal sample time.
pub fn nominal_tracking_controller() -> TransferFunction {
    TransferFunction::new(
        vec![TRACKING_GAIN, -TRACKING_GAIN * TRACKING_ZERO],
        vec![1.0, -2.0, 1.0],
        SAMPLE_TIME_S,
    )
    .expect("tracking controller coefficients are valid")
}

/// Force controller K*(z - zero)/(z - 1) at the nominal sample time.
pub fn nominal_force_controller() -> TransferFunction {
    TransferFunction::new(
        vec![FORCE_GAIN, -FORCE_GAIN * FORCE_ZERO],
        vec![1.0, -1.0],
        SAMPLE_TIME_S,
    )
    .expect("force controller coefficients are valid")
}

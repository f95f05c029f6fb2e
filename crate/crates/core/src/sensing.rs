//! Marker-based bending measurement.
//!
//! Three markers ride on the finger; a camera reports their pixel
//! positions. The bending measure is recovered from the circumcircle of
//! the three points: the center is found, and the bending angle is the
//! largest central angle between any pair of markers. The measure is
//! invariant to rigid motion and uniform scaling of the image.

use crate::defaults;
use crate::error::{CoreError, Result};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Three marker positions in pixel coordinates, ordered along the finger
/// from base to tip.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarkerSet {
    pub points: [[f64; 2]; 3],
}

/// Result of one bending measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BendingMeasurement {
    /// Bending angle, degrees, in [0, 180).
    pub angle_deg: f64,
    /// Recovered circumcenter, pixel coordinates.
    pub center: [f64; 2],
    /// Circumradius, pixels.
    pub radius: f64,
}

/// Static geometry of one finger.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FingerGeometry {
    /// Arc spacing between adjacent markers, meters.
    pub marker_spacing_m: f64,
    /// Finger length along the neutral axis, meters.
    pub finger_length_m: f64,
    /// Base position in the planar work frame, centimeters.
    pub base_cm: [f64; 2],
    /// Base tangent direction, radians from the +Y axis (0 = finger
    /// pointing away from the gripper base).
    pub base_heading_rad: f64,
}

impl FingerGeometry {
    pub fn validate(&self) -> Result<()> {
        if !(self.marker_spacing_m > 0.0) {
            return Err(CoreError::InvalidInput(
                "marker spacing must be positive".into(),
            ));
        }
        if 2.0 * self.marker_spacing_m > self.finger_length_m {
            return Err(CoreError::InvalidInput(
                "markers must fit on the finger: 2*spacing <= length".into(),
            ));
        }
        Ok(())
    }
}

impl Default for FingerGeometry {
    fn default() -> Self {
        FingerGeometry {
            marker_spacing_m: defaults::MARKER_SPACING_M,
            finger_length_m: defaults::FINGER_LENGTH_M,
            base_cm: [0.0, 0.0],
            base_heading_rad: 0.0,
        }
    }
}

/// Uniform pixel noise applied independently to each marker coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PixelNoise {
    /// Half-width of the uniform perturbation, pixels; 0 disables noise.
    pub half_width_px: f64,
    /// Camera scale used when projecting synthetic markers, pixels per meter.
    pub pixels_per_meter: f64,
}

impl Default for PixelNoise {
    fn default() -> Self {
        PixelNoise {
            half_width_px: defaults::MARKER_NOISE_PX,
            pixels_per_meter: defaults::PIXELS_PER_METER,
        }
    }
}

impl PixelNoise {
    pub fn noiseless() -> Self {
        PixelNoise {
            half_width_px: 0.0,
            pixels_per_meter: defaults::PIXELS_PER_METER,
        }
    }
}

/// Circumcenter of three points.
///
/// Degenerate (collinear or coincident) triples are rejected: the triangle
/// area test is relative to the squared bounding-box diagonal, so the
/// verdict does not change under uniform scaling.
pub fn circumcenter(points: &[[f64; 2]; 3]) -> Result<([f64; 2], f64)> {
    let [a, b, c] = *points;
    let area2 = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
    let min_x = a[0].min(b[0]).min(c[0]);
    let max_x = a[0].max(b[0]).max(c[0]);
    let min_y = a[1].min(b[1]).min(c[1]);
    let max_y = a[1].max(b[1]).max(c[1]);
    let diag_sq = (max_x - min_x).powi(2) + (max_y - min_y).powi(2);
    if area2.abs() * 0.5 < 1e-9 * diag_sq || diag_sq == 0.0 {
        return Err(CoreError::DegenerateMarkers);
    }
    // Perpendicular bisector intersection in determinant form.
    let d = 2.0 * (a[0] * (b[1] - c[1]) + b[0] * (c[1] - a[1]) + c[0] * (a[1] - b[1]));
    let asq = a[0] * a[0] + a[1] * a[1];
    let bsq = b[0] * b[0] + b[1] * b[1];
    let csq = c[0] * c[0] + c[1] * c[1];
    let ux = (asq * (b[1] - c[1]) + bsq * (c[1] - a[1]) + csq * (a[1] - b[1])) / d;
    let uy = (asq * (c[0] - b[0]) + bsq * (a[0] - c[0]) + csq * (b[0] - a[0])) / d;
    let r = ((a[0] - ux).powi(2) + (a[1] - uy).powi(2)).sqrt();
    Ok(([ux, uy], r))
}

/// Bending angle from three markers: the largest pairwise central angle
/// seen from the circumcenter, degrees in [0, 180].
pub fn bending_angle(markers: &MarkerSet) -> Result<BendingMeasurement> {
    let (center, radius) = circumcenter(&markers.points)?;
    let rays: Vec<[f64; 2]> = markers
        .points
        .iter()
        .map(|p| [p[0] - center[0], p[1] - center[1]])
        .collect();
    let mut max_angle: f64 = 0.0;
    for i in 0..3 {
        for j in (i + 1)..3 {
            let dot = rays[i][0] * rays[j][0] + rays[i][1] * rays[j][1];
            let ni = (rays[i][0].powi(2) + rays[i][1].powi(2)).sqrt();
            let nj = (rays[j][0].powi(2) + rays[j][1].powi(2)).sqrt();
            let cosv = (dot / (ni * nj)).clamp(-1.0, 1.0);
            max_angle = max_angle.max(cosv.acos());
        }
    }
    Ok(BendingMeasurement {
        angle_deg: max_angle.to_degrees(),
        center,
        radius,
    })
}

/// Generates marker pixel positions for a finger bent to `bend_deg` on a
/// constant-curvature arc, optionally perturbed by uniform pixel noise.
///
/// Markers sit at arc positions 0, s, 2s from the proximal marker, so the
/// central angle between the extreme markers equals the bending measure and
/// `bending_angle(synth_markers(y, ..))` round-trips to `y` when noiseless.
pub fn synth_markers(
    bend_deg: f64,
    geom: &FingerGeometry,
    noise: &PixelNoise,
    seed: u64,
) -> Result<MarkerSet> {
    if !(0.0..180.0).contains(&bend_deg) {
        return Err(CoreError::InvalidInput(format!(
            "bend must lie in [0, 180) degrees, got {bend_deg}"
        )));
    }
    geom.validate()?;
    let s_px = geom.marker_spacing_m * noise.pixels_per_meter;
    // Arbitrary fixed image placement; the measure is frame invariant.
    let anchor = [320.0, 240.0];
    let mut pts = [[0.0f64; 2]; 3];
    if bend_deg < 1e-9 {
        // Straight finger: collinear markers along the finger axis.
        for (i, p) in pts.iter_mut().enumerate() {
            p[0] = anchor[0];
            p[1] = anchor[1] + s_px * i as f64;
        }
    } else {
        let bend_rad = bend_deg.to_radians();
        // Two spacings of arc subtend the full bending measure.
        let rho_px = 2.0 * s_px / bend_rad;
        let center = [anchor[0] - rho_px, anchor[1]];
        for (i, p) in pts.iter_mut().enumerate() {
            let theta = bend_rad * i as f64 / 2.0;
            p[0] = center[0] + rho_px * theta.cos();
            p[1] = center[1] + rho_px * theta.sin();
        }
    }
    if noise.half_width_px > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for p in pts.iter_mut() {
            p[0] += rng.gen_range(-noise.half_width_px..=noise.half_width_px);
            p[1] += rng.gen_range(-noise.half_width_px..=noise.half_width_px);
        }
    }
    Ok(MarkerSet { points: pts })
}

/// Measurement as the control loop sees it: degenerate marker geometry is
/// mapped to zero bending so a straight finger reads 0 instead of failing.
pub fn measure_bending(markers: &MarkerSet) -> f64 {
    match bending_angle(markers) {
        Ok(m) => m.angle_deg,
        Err(_) => 0.0,
    }
}

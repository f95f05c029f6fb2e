//! Desk-scale stand-in for the physical gripper: two ARX-driven pneumatic
//! fingers with a valve dead zone, constant-curvature arc kinematics, a
//! unilateral spring contact law against a cylindrical object, and the
//! composed force readings F_X / F_Y a bench sensor would report.
//!
//! Scene frame: +Y points away from the gripper base along the fingers,
//! +X toward finger 2. Finger 1 mounts on the -X side and curls toward +X,
//! finger 2 mirrors it. All scene coordinates are centimeters; bending is
//! the marker-arc measure in degrees (the plant's output variable), which
//! spans 2·marker_spacing of the finger's total arc angle.
//!
//! Contact couples back into the plant as an input disturbance: the spring
//! force, converted through the force-feedback gain, subtracts from the
//! effective duty. This single mechanism yields both detection physics
//! (an obstructed finger tracks sluggishly, so tracking error builds) and
//! a well-posed force loop (bending can still be regulated past the touch
//! point, with force proportional to the overshoot).

use crate::error::{CoreError, Result};
use crate::lti::{DifferenceEq, TransferFunction};
use crate::sensing::FingerGeometry;
use crate::defaults;
use serde::{Deserialize, Serialize};

/// Mount side. LEFT = finger 1 (-X, curls +X), RIGHT = finger 2 (+X, curls -X).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

/// One pneumatic finger: identified bending dynamics plus the valve
/// dead-zone map and its mounting geometry.
#[derive(Debug, Clone)]
pub struct FingerPlant {
    tf: TransferFunction,
    state: DifferenceEq,
    pub dead_zone_duty: f64,
    pub duty_limits: [f64; 2],
    pub geometry: FingerGeometry,
    pub side: Side,
}

impl FingerPlant {
    pub fn new(
        tf: TransferFunction,
        dead_zone_duty: f64,
        geometry: FingerGeometry,
        side: Side,
    ) -> Result<Self> {
        if !(0.0..100.0).contains(&dead_zone_duty) {
            return Err(CoreError::InvalidInput(format!(
                "dead zone must lie in [0, 100), got {dead_zone_duty}"
            )));
        }
        let poles = tf.poles()?;
        if !crate::lti::is_stable(&poles, 0.0) {
            return Err(CoreError::InvalidInput(
                "finger model must be open-loop stable".into(),
            ));
        }
        geometry.validate()?;
        let state = tf.realize();
        Ok(FingerPlant {
            tf,
            state,
            dead_zone_duty,
            duty_limits: [defaults::DUTY_MIN, defaults::DUTY_MAX],
            geometry,
            side,
        })
    }

    /// Identified nominal finger on the given mount.
    pub fn nominal(geometry: FingerGeometry, side: Side) -> Self {
        FingerPlant::new(
            defaults::nominal_plant(),
            defaults::DEAD_ZONE_DUTY,
            geometry,
            side,
        )
        .expect("nominal finger parameters are valid")
    }

    /// Valve map: clamp to duty limits, then subtract the dead zone;
    /// commands at or below the dead zone produce no actuation.
    pub fn effective_input(&self, duty: f64) -> f64 {
        let d = duty.clamp(self.duty_limits[0], self.duty_limits[1]);
        (d - self.dead_zone_duty).max(0.0)
    }

    /// Bending the plant outputs this step (before new input is pushed).
    pub fn bending(&self) -> f64 {
        self.state.output_for(0.0)
    }

    pub fn transfer_function(&self) -> &TransferFunction {
        &self.tf
    }

    pub fn reset(&mut self) {
        self.state.reset();
    }
}

/// Object mobility on the low-friction plate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mobility {
    Fixed,
    Movable,
}

/// Cylindrical target object (top view: a circle).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObjectModel {
    pub center_cm: [f64; 2],
    pub radius_cm: f64,
    pub mobility: Mobility,
    /// Friction of the object against its support plate.
    pub static_friction: f64,
    /// Weight pressing the object onto the plate, Newtons.
    pub normal_load_n: f64,
}

impl ObjectModel {
    pub fn validate(&self) -> Result<()> {
        if !(self.radius_cm > 0.0) {
            return Err(CoreError::InvalidInput(format!(
                "object radius must be positive, got {}",
                self.radius_cm
            )));
        }
        if self.static_friction < 0.0 || self.normal_load_n < 0.0 {
            return Err(CoreError::InvalidInput(
                "friction and normal load must be nonnegative".into(),
            ));
        }
        Ok(())
    }

    /// Cylinder at `center_cm` with the default radius, plate friction,
    /// and weight.
    pub fn cylinder_at(center_cm: [f64; 2], mobility: Mobility) -> Self {
        ObjectModel {
            center_cm,
            radius_cm: defaults::OBJECT_RADIUS_CM,
            mobility,
            static_friction: defaults::OBJECT_FRICTION,
            normal_load_n: defaults::OBJECT_NORMAL_LOAD_N,
        }
    }

    /// Tangential force below which the plate's static friction holds the
    /// object in place.
    pub fn breakaway_force_n(&self) -> f64 {
        self.static_friction * self.normal_load_n
    }
}

/// Unilateral spring contact in bending coordinates plus the pull-out
/// release parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContactLaw {
    /// Newtons of contact force per degree of bending past touch.
    pub stiffness_n_per_deg: f64,
    /// Contact-path to actuation-path stiffness ratio; sets how strongly an
    /// obstacle impedes bending (contacted DC gain = free / (1 + ratio)).
    pub stiffness_ratio: f64,
    /// Pad/object sliding friction, resists extraction during pull-out.
    pub fingertip_friction: f64,
    /// Pull-out release: contact escapes once the contact normal tilts this
    /// far past perpendicular-to-pull toward the pull direction.
    pub escape_margin_deg: f64,
}

impl Default for ContactLaw {
    fn default() -> Self {
        ContactLaw {
            stiffness_n_per_deg: defaults::CONTACT_STIFFNESS_N_PER_DEG,
            stiffness_ratio: defaults::CONTACT_STIFFNESS_RATIO,
            fingertip_friction: defaults::FINGERTIP_FRICTION,
            escape_margin_deg: defaults::ESCAPE_MARGIN_DEG,
        }
    }
}

impl ContactLaw {
    pub fn validate(&self) -> Result<()> {
        if !(self.stiffness_n_per_deg > 0.0) || !(self.stiffness_ratio > 0.0) {
            return Err(CoreError::InvalidInput(
                "contact stiffness and stiffness ratio must be positive".into(),
            ));
        }
        if self.fingertip_friction < 0.0 {
            return Err(CoreError::InvalidInput(
                "fingertip friction must be nonnegative".into(),
            ));
        }
        Ok(())
    }
}

/// Per-step rig readings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RigOutputs {
    pub bending_deg: [f64; 2],
    pub contact: [bool; 2],
    /// Force vector each finger applies to the object, N.
    pub finger_force_n: [[f64; 2]; 2],
    /// Net X force on the object: finger 1's inward (+X) push minus
    /// finger 2's inward (-X) push, i.e. the component sum.
    pub force_x_n: f64,
    /// Net Y force on the object: sum of both fingers' Y components.
    pub force_y_n: f64,
    pub object_center_cm: [f64; 2],
    /// Extraction resistance measured by the pulling arm this step
    /// (max over the step's substeps); 0 outside pull-out.
    pub pull_force_n: f64,
}

#[derive(Debug, Clone, Copy)]
struct Contact {
    force_n: f64,
    /// Unit push direction (contact point toward object center).
    dir: [f64; 2],
}

/// Two fingers, an optional object, and the contact law: the full bench.
#[derive(Debug, Clone)]
pub struct RigScene {
    pub fingers: [FingerPlant; 2],
    pub object: Option<ObjectModel>,
    pub law: ContactLaw,
    /// Warm-start memory for the touch-bending solver.
    last_touch: [Option<f64>; 2],
    /// Pull-out escape latches; a released finger stays released.
    released: [bool; 2],
    pull_started: bool,
    peak_pull_n: f64,
}

impl RigScene {
    pub fn new(fingers: [FingerPlant; 2], object: Option<ObjectModel>, law: ContactLaw) -> Result<Self> {
        law.validate()?;
        if let Some(obj) = &object {
            obj.validate()?;
        }
        Ok(RigScene {
            fingers,
            object,
            law,
            last_touch: [None; 2],
            released: [false; 2],
            pull_started: false,
            peak_pull_n: 0.0,
        })
    }

    /// Standard two-finger bench: nominal fingers mounted at +/- half the
    /// finger separation, at the given base height.
    pub fn two_finger_bench(base_height_cm: f64, object: Option<ObjectModel>, law: ContactLaw) -> Result<Self> {
        let half_sep = defaults::FINGER_SEPARATION_M * 100.0 / 2.0;
        let mut left_geom = FingerGeometry::default();
        left_geom.base_cm = [-half_sep, base_height_cm];
        let mut right_geom = FingerGeometry::default();
        right_geom.base_cm = [half_sep, base_height_cm];
        RigScene::new(
            [
                FingerPlant::nominal(left_geom, Side::Left),
                FingerPlant::nominal(right_geom, Side::Right),
            ],
            object,
            law,
        )
    }

    /// Bendings the markers would report this step, before duties are
    /// applied: the free plant outputs, re-equilibrated against the object.
    pub fn peek_bending(&mut self) -> [f64; 2] {
        let y_free = self.free_bending();
        self.settle_contacts(&y_free).0
    }

    /// Unconstrained plant outputs this step.
    fn free_bending(&self) -> [f64; 2] {
        [self.fingers[0].bending(), self.fingers[1].bending()]
    }

    /// Largest extraction force seen over all pull-out steps so far.
    pub fn peak_pull_force(&self) -> f64 {
        self.peak_pull_n
    }

    pub fn object_center(&self) -> [f64; 2] {
        self.object.map(|o| o.center_cm).unwrap_or([0.0, 0.0])
    }

    /// Advances the scene one control period under the given duty commands.
    pub fn step(&mut self, duty1: f64, duty2: f64) -> Result<RigOutputs> {
        self.advance([duty1, duty2], None)
    }

    /// One control period while the arm extracts the object away from the
    /// base at `speed_cm_s` (along +Y). The object's trajectory is
    /// prescribed; the rig records the resistance the arm must overcome.
    pub fn pullout_step(&mut self, duty1: f64, duty2: f64, speed_cm_s: f64) -> Result<RigOutputs> {
        self.advance([duty1, duty2], Some(speed_cm_s))
    }

    fn advance(&mut self, duty: [f64; 2], pull: Option<f64>) -> Result<RigOutputs> {
        if duty.iter().any(|d| !d.is_finite()) {
            return Err(CoreError::InvalidInput(format!(
                "duty commands must be finite, got {duty:?}"
            )));
        }
        let y_free = self.free_bending();
        let (mut y_real, mut contacts) = self.settle_contacts(&y_free);

        let mut pull_force = 0.0;
        if let Some(speed) = pull {
            pull_force = self.run_pull_substeps(&y_free, &mut y_real, &mut contacts, speed)?;
        } else if let Some(obj) = self.object {
            if obj.mobility == Mobility::Movable {
                self.relax_movable_object(&y_free, &mut y_real, &mut contacts);
            }
        }

        // The contact loads the finger pad, not the air path: the plant
        // recursion advances on the valve input alone, so an obstructed
        // finger keeps accumulating free-bending tendency.
        for i in 0..2 {
            let u = self.fingers[i].effective_input(duty[i]);
            self.fingers[i].state.push(u, y_free[i]);
        }

        let f = [
            contacts[0].map(|c| [c.dir[0] * c.force_n, c.dir[1] * c.force_n]).unwrap_or([0.0, 0.0]),
            contacts[1].map(|c| [c.dir[0] * c.force_n, c.dir[1] * c.force_n]).unwrap_or([0.0, 0.0]),
        ];
        Ok(RigOutputs {
            bending_deg: y_real,
            contact: [contacts[0].is_some(), contacts[1].is_some()],
            finger_force_n: f,
            force_x_n: f[0][0] + f[1][0],
            force_y_n: f[0][1] + f[1][1],
            object_center_cm: self.object_center(),
            pull_force_n: pull_force,
        })
    }

    /// Static contact equilibrium at the current object pose. A finger
    /// whose free bending passes its touch bending splits the overshoot
    /// against the contact: only a 1/(1 + stiffness_ratio) share survives
    /// as realized bending — the loaded-spring deflection — and the finger
    /// pushes along the contact normal with k_c newtons per realized
    /// degree. Separated or released fingers bend freely and push nothing.
    /// The balance is re-solved from scratch every call; it carries no
    /// state of its own.
    fn settle_contacts(&mut self, y_free: &[f64; 2]) -> ([f64; 2], [Option<Contact>; 2]) {
        let mut y_real = *y_free;
        let mut out = [None, None];
        let Some(obj) = self.object else {
            return (y_real, out);
        };
        for i in 0..2 {
            if self.released[i] {
                continue;
            }
            let geom = &self.fingers[i].geometry;
            let side = self.fingers[i].side;
            let touch = solve_touch_bending(geom, side, obj.center_cm, obj.radius_cm, self.last_touch[i]);
            self.last_touch[i] = touch;
            let Some(y_touch) = touch else { continue };
            let squeeze = y_free[i] - y_touch;
            if squeeze <= 0.0 {
                continue;
            }
            let deflection = squeeze / (1.0 + self.law.stiffness_ratio);
            y_real[i] = y_touch + deflection;
            let dir = contact_normal(geom, side, y_touch, obj.center_cm);
            out[i] = Some(Contact {
                force_n: self.law.stiffness_n_per_deg * deflection,
                dir,
            });
        }
        (y_real, out)
    }

    /// Quasi-static sliding: while the in-plane force imbalance exceeds the
    /// plate's breakaway friction, the object creeps along the net force
    /// direction and the contact forces re-equilibrate.
    fn relax_movable_object(
        &mut self,
        y_free: &[f64; 2],
        y_real: &mut [f64; 2],
        contacts: &mut [Option<Contact>; 2],
    ) {
        const SLIDE_INCREMENT_CM: f64 = 0.005;
        const MAX_SLIDE_ITERS: usize = 400;
        let Some(obj) = self.object.as_ref() else { return };
        let breakaway = obj.breakaway_force_n();
        for _ in 0..MAX_SLIDE_ITERS {
            let net = net_force(contacts);
            let mag = (net[0] * net[0] + net[1] * net[1]).sqrt();
            if mag <= breakaway {
                break;
            }
            {
                let obj = self.object.as_mut().unwrap();
                obj.center_cm[0] += net[0] / mag * SLIDE_INCREMENT_CM;
                obj.center_cm[1] += net[1] / mag * SLIDE_INCREMENT_CM;
            }
            (*y_real, *contacts) = self.settle_contacts(y_free);
        }
    }

    /// Substepped prescribed extraction. Per substep the object advances
    /// along +Y, contact geometry is re-solved, and the arm's resistance is
    /// the sum over fingers of the normal component opposing the pull plus
    /// sliding friction on the pad. A finger whose contact normal tilts past
    /// the escape margin (or whose object leaves reach) releases for good.
    fn run_pull_substeps(
        &mut self,
        y_free: &[f64; 2],
        y_real: &mut [f64; 2],
        contacts: &mut [Option<Contact>; 2],
        speed_cm_s: f64,
    ) -> Result<f64> {
        const SUBSTEPS: usize = 20;
        if self.object.is_none() {
            return Err(CoreError::InvalidInput(
                "pull-out requires an object in the scene".into(),
            ));
        }
        if !self.pull_started {
            if contacts[0].is_none() || contacts[1].is_none() {
                return Err(CoreError::InvalidInput(
                    "pull-out requires an established two-finger grasp".into(),
                ));
            }
            self.pull_started = true;
        }
        let dt = self.fingers[0].tf.dt;
        let escape_sin = self.law.escape_margin_deg.to_radians().sin();
        let mut step_peak: f64 = 0.0;
        for _ in 0..SUBSTEPS {
            {
                let obj = self.object.as_mut().unwrap();
                obj.center_cm[1] += speed_cm_s * dt / SUBSTEPS as f64;
            }
            (*y_real, *contacts) = self.settle_contacts(y_free);
            let mut tension = 0.0;
            for i in 0..2 {
                let Some(c) = contacts[i] else { continue };
                // dir · pull: pull direction is +Y.
                let along = c.dir[1];
                if along >= escape_sin {
                    self.released[i] = true;
                    contacts[i] = None;
                    continue;
                }
                let across = (1.0 - along * along).max(0.0).sqrt();
                tension += c.force_n * (-along + self.law.fingertip_friction * across);
            }
            step_peak = step_peak.max(tension);
        }
        // A finger whose object has left reach entirely also releases.
        for i in 0..2 {
            if !self.released[i] && self.last_touch[i].is_none() {
                self.released[i] = true;
            }
        }
        // Releases spring the fingers back to free bending at once.
        (*y_real, *contacts) = self.settle_contacts(y_free);
        self.peak_pull_n = self.peak_pull_n.max(step_peak);
        Ok(step_peak)
    }
}

fn net_force(contacts: &[Option<Contact>; 2]) -> [f64; 2] {
    let mut net = [0.0, 0.0];
    for c in contacts.iter().flatten() {
        net[0] += c.dir[0] * c.force_n;
        net[1] += c.dir[1] * c.force_n;
    }
    net
}

// --- constant-curvature arc kinematics ---------------------------------
//
// All solvers run in a canonical frame: finger base at the origin, heading
// +Y, curling toward +X. Right-side fingers mirror the query into this frame
// and mirror results back, which makes symmetric scenes bit-exactly
// symmetric (the two fingers execute identical arithmetic).

/// Bending measure spanned per radian of total arc angle.
fn bend_per_arc_rad(geom: &FingerGeometry) -> f64 {
    2.0 * geom.marker_spacing_m / geom.finger_length_m * 180.0 / std::f64::consts::PI
}

/// Point on the arc at fraction `s` of the finger length, canonical frame.
fn arc_point(len_cm: f64, arc_angle_rad: f64, s: f64) -> [f64; 2] {
    if arc_angle_rad.abs() < 1e-9 {
        return [0.0, len_cm * s];
    }
    let radius = len_cm / arc_angle_rad;
    let a = s * arc_angle_rad;
    [radius * (1.0 - a.cos()), radius * a.sin()]
}

/// Maps a world point into a finger's canonical frame.
fn to_canonical(geom: &FingerGeometry, side: Side, p: [f64; 2]) -> [f64; 2] {
    let dx = p[0] - geom.base_cm[0];
    let dy = p[1] - geom.base_cm[1];
    let (sin_h, cos_h) = geom.base_heading_rad.sin_cos();
    // Rotate by -heading, then mirror X for right-side fingers.
    let local = [dx * cos_h + dy * sin_h, -dx * sin_h + dy * cos_h];
    match side {
        Side::Left => local,
        Side::Right => [-local[0], local[1]],
    }
}

/// Maps a canonical-frame point back to world coordinates.
fn from_canonical(geom: &FingerGeometry, side: Side, p: [f64; 2]) -> [f64; 2] {
    let local = match side {
        Side::Left => p,
        Side::Right => [-p[0], p[1]],
    };
    let (sin_h, cos_h) = geom.base_heading_rad.sin_cos();
    [
        geom.base_cm[0] + local[0] * cos_h - local[1] * sin_h,
        geom.base_cm[1] + local[0] * sin_h + local[1] * cos_h,
    ]
}

/// Distance from a canonical-frame point to the arc at the given bending,
/// with the minimizing arc fraction. Coarse scan plus golden-section polish;
/// the scan is dense enough that the refined bracket holds the global
/// minimum for this geometry.
fn arc_distance(len_cm: f64, arc_angle_rad: f64, target: [f64; 2]) -> (f64, f64) {
    const SAMPLES: usize = 96;
    let d2 = |s: f64| {
        let p = arc_point(len_cm, arc_angle_rad, s);
        let dx = p[0] - target[0];
        let dy = p[1] - target[1];
        dx * dx + dy * dy
    };
    let mut best_i = 0;
    let mut best = f64::INFINITY;
    for i in 0..=SAMPLES {
        let v = d2(i as f64 / SAMPLES as f64);
        if v < best {
            best = v;
            best_i = i;
        }
    }
    let mut a = (best_i.saturating_sub(1)) as f64 / SAMPLES as f64;
    let mut b = ((best_i + 1).min(SAMPLES)) as f64 / SAMPLES as f64;
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = d2(x1);
    let mut f2 = d2(x2);
    for _ in 0..60 {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = d2(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = d2(x2);
        }
    }
    let s = 0.5 * (a + b);
    (d2(s).sqrt(), s)
}

/// Clearance between the arc at bending `bend_deg` and the object surface
/// (negative = penetration), canonical-frame center.
fn clearance(geom: &FingerGeometry, bend_deg: f64, center_canon: [f64; 2], radius_cm: f64) -> f64 {
    let len_cm = geom.finger_length_m * 100.0;
    let arc_angle = bend_deg / bend_per_arc_rad(geom);
    arc_distance(len_cm, arc_angle, center_canon).0 - radius_cm
}

/// Largest bending the solver searches; beyond this the finger has curled
/// most of a full circle and the arc model stops being meaningful.
const MAX_TOUCH_BEND_DEG: f64 = 170.0;
const COLD_GRID_STEP_DEG: f64 = 0.25;
const WARM_WINDOW_DEG: f64 = 1.5;

/// Smallest bending at which the finger arc first reaches the object
/// surface: the first sign change of clearance along increasing bending,
/// polished by bisection. `warm` brackets the search near a previous
/// solution; on failure the full grid is scanned. None = unreachable.
fn solve_touch_bending(
    geom: &FingerGeometry,
    side: Side,
    center_cm: [f64; 2],
    radius_cm: f64,
    warm: Option<f64>,
) -> Option<f64> {
    let c = to_canonical(geom, side, center_cm);
    let g = |bend: f64| clearance(geom, bend, c, radius_cm);

    if let Some(prev) = warm {
        let lo = (prev - WARM_WINDOW_DEG).max(1e-6);
        let hi = (prev + WARM_WINDOW_DEG).min(MAX_TOUCH_BEND_DEG);
        if g(lo) > 0.0 {
            let mut a = lo;
            let mut fa = g(a);
            let mut bend = lo + COLD_GRID_STEP_DEG;
            while bend <= hi {
                let fb = g(bend);
                if fa > 0.0 && fb <= 0.0 {
                    return Some(bisect_touch(&g, a, bend));
                }
                a = bend;
                fa = fb;
                bend += COLD_GRID_STEP_DEG;
            }
        }
        // Previous bracket no longer valid; fall through to the cold scan.
    }

    let mut a = 1e-6;
    let mut fa = g(a);
    if fa <= 0.0 {
        // Object already intersects the straight finger.
        return Some(0.0);
    }
    let mut bend = COLD_GRID_STEP_DEG;
    while bend <= MAX_TOUCH_BEND_DEG {
        let fb = g(bend);
        if fb <= 0.0 {
            return Some(bisect_touch(&g, a, bend));
        }
        a = bend;
        fa = fb;
        bend += COLD_GRID_STEP_DEG;
    }
    let _ = fa;
    None
}

fn bisect_touch(g: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    // Invariant: g(lo) > 0 >= g(hi).
    for _ in 0..55 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Unit normal of a contact: from the touch point (closest arc point at the
/// touch bending) toward the object center — the direction the finger
/// pushes the object.
fn contact_normal(geom: &FingerGeometry, side: Side, touch_bend_deg: f64, center_cm: [f64; 2]) -> [f64; 2] {
    let c = to_canonical(geom, side, center_cm);
    let len_cm = geom.finger_length_m * 100.0;
    let arc_angle = touch_bend_deg / bend_per_arc_rad(geom);
    let (_, s) = arc_distance(len_cm, arc_angle, c);
    let p = arc_point(len_cm, arc_angle, s);
    let d = [c[0] - p[0], c[1] - p[1]];
    let mag = (d[0] * d[0] + d[1] * d[1]).sqrt();
    let n = if mag > 1e-12 { [d[0] / mag, d[1] / mag] } else { [0.0, 1.0] };
    // Canonical-frame vector back to world: mirror (for right side) and rotate.
    let local = match side {
        Side::Left => n,
        Side::Right => [-n[0], n[1]],
    };
    let (sin_h, cos_h) = geom.base_heading_rad.sin_cos();
    [
        local[0] * cos_h - local[1] * sin_h,
        local[0] * sin_h + local[1] * cos_h,
    ]
}

/// Bending at which a finger first touches the object, or
/// `NoContactPossible` if no bending in range reaches it.
pub fn touch_bending(obj: &ObjectModel, geom: &FingerGeometry, side: Side) -> Result<f64> {
    obj.validate()?;
    geom.validate()?;
    solve_touch_bending(geom, side, obj.center_cm, obj.radius_cm, None)
        .ok_or(CoreError::NoContactPossible)
}

/// World-frame point where the finger at `touch_bend_deg` meets the object.
pub fn contact_point(geom: &FingerGeometry, side: Side, touch_bend_deg: f64, center_cm: [f64; 2]) -> [f64; 2] {
    let c = to_canonical(geom, side, center_cm);
    let len_cm = geom.finger_length_m * 100.0;
    let arc_angle = touch_bend_deg / bend_per_arc_rad(geom);
    let (_, s) = arc_distance(len_cm, arc_angle, c);
    from_canonical(geom, side, arc_point(len_cm, arc_angle, s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::defaults;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn geom_at(base: [f64; 2]) -> FingerGeometry {
        let mut g = FingerGeometry::default();
        g.base_cm = base;
        g
    }

    fn pinch_bench(object: Option<ObjectModel>) -> RigScene {
        RigScene::two_finger_bench(8.0, object, ContactLaw::default()).unwrap()
    }

    #[test]
    fn effective_input_dead_zone_map() {
        let f = FingerPlant::nominal(geom_at([-7.5, 8.0]), Side::Left);
        assert_eq!(f.effective_input(20.0), 0.0);
        assert_eq!(f.effective_input(0.0), 0.0);
        assert_eq!(f.effective_input(60.0), 40.0);
        assert_eq!(f.effective_input(150.0), 80.0); // clamped to 100 first
        assert_eq!(f.effective_input(-30.0), 0.0);
    }

    #[test]
    fn below_dead_zone_nothing_moves() {
        let mut rig = pinch_bench(None);
        for _ in 0..50 {
            let out = rig.step(15.0, 19.9).unwrap();
            assert_eq!(out.bending_deg, [0.0, 0.0]);
            assert_eq!(out.force_x_n, 0.0);
            assert_eq!(out.force_y_n, 0.0);
        }
    }

    /// With no object the rig is exactly the identified linear model driven
    /// by the dead-zone-mapped duties.
    #[test]
    fn free_motion_matches_linear_simulation() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let duties: Vec<f64> = (0..1000).map(|_| rng.gen_range(0.0..100.0)).collect();
        let mut rig = pinch_bench(None);
        let eff: Vec<f64> = duties.iter().map(|&d| rig.fingers[0].effective_input(d)).collect();
        let reference = defaults::nominal_plant().simulate(&eff);
        for (k, &d) in duties.iter().enumerate() {
            let out = rig.step(d, d).unwrap();
            assert!(
                (out.bending_deg[0] - reference[k]).abs() <= 1e-12,
                "step {k}: rig {} vs linear {}",
                out.bending_deg[0],
                reference[k]
            );
            assert!((out.bending_deg[1] - reference[k]).abs() <= 1e-12);
        }
    }

    #[test]
    fn touch_bending_symmetric_object_equal_for_both_sides() {
        let obj = ObjectModel::cylinder_at([0.0, 15.0], Mobility::Fixed);
        let left = touch_bending(&obj, &geom_at([-7.5, 8.0]), Side::Left).unwrap();
        let right = touch_bending(&obj, &geom_at([7.5, 8.0]), Side::Right).unwrap();
        assert_abs_diff_eq!(left, right, epsilon = 1e-6);
        assert!(left > 5.0 && left < 80.0, "touch bending {left} out of plausible range");
    }

    #[test]
    fn touch_bending_offset_object_left_bends_further() {
        let obj = ObjectModel::cylinder_at([1.25, 15.0], Mobility::Fixed);
        let left = touch_bending(&obj, &geom_at([-7.5, 8.0]), Side::Left).unwrap();
        let right = touch_bending(&obj, &geom_at([7.5, 8.0]), Side::Right).unwrap();
        assert!(
            left > right + 1.0,
            "expected the far finger to bend further: left {left}, right {right}"
        );
    }

    #[test]
    fn touch_bending_monotone_in_object_approach() {
        // Moving the object toward a finger lowers that finger's touch bending.
        let geom = geom_at([-7.5, 8.0]);
        let mut prev = f64::INFINITY;
        for x in [1.0, 0.5, 0.0, -0.5, -1.0] {
            let obj = ObjectModel::cylinder_at([x, 15.0], Mobility::Fixed);
            let t = touch_bending(&obj, &geom, Side::Left).unwrap();
            assert!(t < prev, "touch bending not decreasing as object approaches: {t} vs {prev}");
            prev = t;
        }
    }

    #[test]
    fn unreachable_object_reports_no_contact() {
        let obj = ObjectModel::cylinder_at([0.0, 40.0], Mobility::Fixed);
        match touch_bending(&obj, &geom_at([-7.5, 8.0]), Side::Left) {
            Err(CoreError::NoContactPossible) => {}
            other => panic!("expected NoContactPossible, got {other:?}"),
        }
    }

    #[test]
    fn finger_exactly_at_touch_exerts_no_force() {
        let obj = ObjectModel::cylinder_at([0.0, 15.0], Mobility::Fixed);
        let mut rig = pinch_bench(Some(obj));
        let y_touch = touch_bending(&obj, &rig.fingers[0].geometry, Side::Left).unwrap();
        // Plant held exactly at the touch bending: unilateral law gives 0
        // and the realized bending is the free bending.
        let (y_real, contacts) = rig.settle_contacts(&[y_touch, y_touch]);
        assert!(contacts[0].is_none());
        assert!(contacts[1].is_none());
        assert_eq!(y_real, [y_touch, y_touch]);
        // Just past touch: the overshoot splits against the contact, force
        // appears in proportion to the surviving deflection.
        let over = 2.0;
        let (y_real, contacts) = rig.settle_contacts(&[y_touch + over, y_touch]);
        let c = contacts[0].expect("pressing finger must push");
        let deflection = over / (1.0 + rig.law.stiffness_ratio);
        assert_abs_diff_eq!(c.force_n, defaults::CONTACT_STIFFNESS_N_PER_DEG * deflection, epsilon = 1e-12);
        assert_abs_diff_eq!(y_real[0], y_touch + deflection, epsilon = 1e-12);
        assert_abs_diff_eq!(y_real[1], y_touch, epsilon = 1e-12);
        // Push direction points from the finger side toward the object.
        assert!(c.dir[0] > 0.0, "left finger pushes toward +X, got {:?}", c.dir);
        assert_abs_diff_eq!(c.dir[0] * c.dir[0] + c.dir[1] * c.dir[1], 1.0, epsilon = 1e-12);
    }

    /// Identical duty schedules on a centered object must produce bit-equal
    /// bendings and an exactly zero F_X at every step.
    #[test]
    fn mirror_symmetry_is_bit_exact() {
        let obj = ObjectModel::cylinder_at([0.0, 15.0], Mobility::Fixed);
        let mut rig = pinch_bench(Some(obj));
        for k in 0..600 {
            let duty = 20.0 + 40.0 * (1.0 - (-(k as f64) / 80.0).exp());
            let out = rig.step(duty, duty).unwrap();
            assert_eq!(out.bending_deg[0], out.bending_deg[1], "bending diverged at step {k}");
            assert_eq!(out.force_x_n, 0.0, "F_X nonzero at step {k}");
            assert_eq!(out.finger_force_n[0][1], out.finger_force_n[1][1]);
        }
        let out = rig.step(60.0, 60.0).unwrap();
        assert!(out.contact[0] && out.contact[1], "expected contact by end of run");
        // At this pose the fingertips pinch the cylinder's upper shoulders,
        // so the surviving net component is vertical and nonzero.
        assert!(out.force_y_n.abs() > 0.05, "vertical pinch component missing");
    }

    #[test]
    fn force_composition_is_exact_component_arithmetic() {
        let obj = ObjectModel::cylinder_at([1.0, 14.5], Mobility::Fixed);
        let mut rig = pinch_bench(Some(obj));
        let mut saw_contact = false;
        for _ in 0..500 {
            let out = rig.step(70.0, 55.0).unwrap();
            assert_eq!(out.force_x_n, out.finger_force_n[0][0] + out.finger_force_n[1][0]);
            assert_eq!(out.force_y_n, out.finger_force_n[0][1] + out.finger_force_n[1][1]);
            saw_contact |= out.contact[0] & out.contact[1];
        }
        assert!(saw_contact, "scenario must actually reach two-finger contact");
    }

    /// No adhesion: every finger force has nonnegative projection onto the
    /// outward direction from its contact point (it can only push).
    #[test]
    fn contact_is_unilateral() {
        let obj = ObjectModel::cylinder_at([0.6, 15.0], Mobility::Fixed);
        let mut rig = pinch_bench(Some(obj));
        for _ in 0..400 {
            let out = rig.step(65.0, 65.0).unwrap();
            for i in 0..2 {
                let f = out.finger_force_n[i];
                let mag = (f[0] * f[0] + f[1] * f[1]).sqrt();
                if out.contact[i] {
                    assert!(mag >= 0.0);
                } else {
                    assert_eq!(mag, 0.0);
                }
            }
        }
    }

    /// Balanced symmetric squeeze on a movable object: net in-plane force
    /// stays under the breakaway friction, so the object must not move.
    #[test]
    fn stiction_holds_object_under_balanced_squeeze() {
        // Heavy object so the (small) net +Y push stays below breakaway.
        let mut obj = ObjectModel::cylinder_at([0.0, 15.0], Mobility::Movable);
        obj.normal_load_n = 30.0;
        let start = obj.center_cm;
        let mut rig = pinch_bench(Some(obj));
        for _ in 0..600 {
            let out = rig.step(60.0, 60.0).unwrap();
            assert_eq!(out.object_center_cm, start, "object moved under balanced grasp");
        }
    }

    /// A hard one-sided push on a light movable object exceeds breakaway;
    /// the object must slide and settle with the residual net force within
    /// the friction budget.
    #[test]
    fn movable_object_slides_until_friction_holds() {
        let obj = ObjectModel::cylinder_at([0.0, 15.0], Mobility::Movable);
        let start = obj.center_cm;
        let mut rig = pinch_bench(Some(obj));
        let mut moved = false;
        let mut last = RigOutputs {
            bending_deg: [0.0; 2],
            contact: [false; 2],
            finger_force_n: [[0.0; 2]; 2],
            force_x_n: 0.0,
            force_y_n: 0.0,
            object_center_cm: start,
            pull_force_n: 0.0,
        };
        for _ in 0..800 {
            // Only finger 1 pushes hard.
            last = rig.step(85.0, 0.0).unwrap();
            moved |= last.object_center_cm != start;
        }
        assert!(moved, "one-sided push never moved the object");
        let net = (last.force_x_n * last.force_x_n + last.force_y_n * last.force_y_n).sqrt();
        let breakaway = rig.object.unwrap().breakaway_force_n();
        assert!(
            net <= breakaway + 1e-6,
            "settled net force {net} exceeds breakaway {breakaway}"
        );
    }

    #[test]
    fn pullout_requires_established_grasp() {
        let obj = ObjectModel::cylinder_at([0.0, 6.25], Mobility::Fixed);
        let mut rig = RigScene::two_finger_bench(0.0, Some(obj), ContactLaw::default()).unwrap();
        match rig.pullout_step(40.0, 40.0, 5.0) {
            Err(CoreError::InvalidInput(_)) => {}
            other => panic!("expected invalid-state error, got {other:?}"),
        }
    }

    #[test]
    fn pullout_peak_dominates_instantaneous_and_releases() {
        let obj = ObjectModel::cylinder_at([0.0, 6.25], Mobility::Fixed);
        let mut rig = RigScene::two_finger_bench(0.0, Some(obj), ContactLaw::default()).unwrap();
        // Establish a grasp with a steady squeeze.
        let mut contacted = false;
        for _ in 0..400 {
            let out = rig.step(70.0, 70.0).unwrap();
            contacted = out.contact[0] && out.contact[1];
        }
        assert!(contacted, "grasp never established");
        let mut tensions = Vec::new();
        let mut released_force = f64::INFINITY;
        for _ in 0..100 {
            let out = rig.pullout_step(70.0, 70.0, 5.0).unwrap();
            tensions.push(out.pull_force_n);
            if rig.released == [true, true] {
                released_force = out.force_x_n.hypot(out.force_y_n);
                break;
            }
        }
        assert!(rig.released == [true, true], "object never escaped the grasp");
        assert_eq!(released_force, 0.0, "released grasp must exert no force");
        let peak = rig.peak_pull_force();
        assert!(peak > 0.0);
        for t in tensions {
            assert!(peak >= t - 1e-12);
        }
        // Zero velocity after release keeps everything quiet.
        let out = rig.pullout_step(70.0, 70.0, 0.0).unwrap();
        assert_eq!(out.pull_force_n, 0.0);
    }

    #[test]
    fn rejects_nan_duty() {
        let mut rig = pinch_bench(None);
        assert!(rig.step(f64::NAN, 10.0).is_err());
    }
}

//! Discrete-time LTI machinery: polynomials in z, transfer functions,
//! difference-equation simulation, root finding, root locus, and
//! steady-state error via the final value theorem.
//!
//! Polynomials store coefficients in descending powers of z. Transfer
//! functions are ratios of such polynomials at a fixed sample time; no
//! pole/zero cancellation is ever attempted, so what you construct is
//! what gets analyzed.

use crate::error::{CoreError, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Real polynomial in z, coefficients descending: `coeffs[0]*z^n + ... + coeffs[n]`.
///
/// Leading coefficients that are exactly zero are stripped on construction;
/// small nonzero coefficients are never trimmed.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Self {
        let first = coeffs.iter().position(|&c| c != 0.0);
        let coeffs = match first {
            Some(i) => coeffs[i..].to_vec(),
            None => vec![0.0],
        };
        Polynomial { coeffs }
    }

    /// Monomial `z^degree` scaled by `coeff`.
    pub fn monomial(coeff: f64, degree: usize) -> Self {
        let mut c = vec![0.0; degree + 1];
        c[0] = coeff;
        Polynomial::new(c)
    }

    /// Builds the monic polynomial with the given real roots.
    pub fn from_real_roots(roots: &[f64]) -> Self {
        let mut p = Polynomial::new(vec![1.0]);
        for &r in roots {
            p = p.mul(&Polynomial::new(vec![1.0, -r]));
        }
        p
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == 0.0
    }

    /// Horner evaluation at a real point.
    pub fn eval(&self, z: f64) -> f64 {
        self.coeffs.iter().fold(0.0, |acc, &c| acc * z + c)
    }

    /// Horner evaluation at a complex point.
    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn scale(&self, k: f64) -> Self {
        Polynomial::new(self.coeffs.iter().map(|&c| c * k).collect())
    }

    /// Polynomial sum; operands may have different degrees.
    pub fn add(&self, other: &Polynomial) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0.0; n];
        for (i, &c) in self.coeffs.iter().enumerate() {
            out[n - self.coeffs.len() + i] += c;
        }
        for (i, &c) in other.coeffs.iter().enumerate() {
            out[n - other.coeffs.len() + i] += c;
        }
        Polynomial::new(out)
    }

    /// Polynomial product (coefficient convolution).
    pub fn mul(&self, other: &Polynomial) -> Self {
        if self.is_zero() || other.is_zero() {
            return Polynomial::new(vec![0.0]);
        }
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }

    pub fn derivative(&self) -> Self {
        if self.degree() == 0 {
            return Polynomial::new(vec![0.0]);
        }
        let n = self.degree();
        let coeffs = self
            .coeffs
            .iter()
            .take(n)
            .enumerate()
            .map(|(i, &c)| c * (n - i) as f64)
            .collect();
        Polynomial::new(coeffs)
    }

    /// Synthetic division by (z - r); the remainder is discarded.
    pub fn deflate(&self, r: f64) -> Self {
        if self.degree() == 0 {
            return Polynomial::new(vec![0.0]);
        }
        let mut q = Vec::with_capacity(self.coeffs.len() - 1);
        let mut acc = 0.0;
        for &c in &self.coeffs[..self.coeffs.len() - 1] {
            acc = acc * r + c;
            q.push(acc);
        }
        Polynomial::new(q)
    }

    pub fn monic(&self) -> Self {
        self.scale(1.0 / self.coeffs[0])
    }
}

/// All complex roots of a real polynomial.
///
/// Degrees one and two are solved in closed form (numerically stable
/// quadratic); higher degrees use the eigenvalues of the companion matrix
/// of the monic polynomial. Complex roots of real polynomials come back
/// in conjugate pairs.
pub fn poly_roots(p: &Polynomial) -> Result<Vec<Complex64>> {
    if p.is_zero() {
        return Err(CoreError::InvalidInput(
            "roots of the zero polynomial are undefined".into(),
        ));
    }
    let m = p.monic();
    let c = m.coeffs();
    match m.degree() {
        0 => Ok(vec![]),
        1 => Ok(vec![Complex64::new(-c[1], 0.0)]),
        2 => Ok(quadratic_roots(c[1], c[2])),
        n => {
            // Companion matrix of z^n + c1 z^(n-1) + ... + cn:
            // subdiagonal of ones, last column -cn..-c1.
            let a = DMatrix::<f64>::from_fn(n, n, |i, j| {
                if j == n - 1 {
                    -c[n - i]
                } else if i == j + 1 {
                    1.0
                } else {
                    0.0
                }
            });
            let eig = a.complex_eigenvalues();
            Ok(eig.iter().copied().collect())
        }
    }
}

/// Roots of z^2 + b z + c, avoiding cancellation between -b and sqrt(disc).
fn quadratic_roots(b: f64, c: f64) -> Vec<Complex64> {
    let disc = b * b - 4.0 * c;
    if disc >= 0.0 {
        let sq = disc.sqrt();
        let q = -0.5 * (b + b.signum() * sq);
        if q == 0.0 {
            // b == 0 and disc == 0: double root at origin.
            return vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)];
        }
        vec![Complex64::new(q, 0.0), Complex64::new(c / q, 0.0)]
    } else {
        let re = -b / 2.0;
        let im = (-disc).sqrt() / 2.0;
        vec![Complex64::new(re, im), Complex64::new(re, -im)]
    }
}

/// True when every pole lies strictly inside the unit circle shrunk by `margin`.
///
/// `margin = 0` is the plain strict Schur test; poles exactly on the boundary
/// count as unstable.
pub fn is_stable(poles: &[Complex64], margin: f64) -> bool {
    poles.iter().all(|p| p.norm() < 1.0 - margin)
}

/// Discrete transfer function `num(z)/den(z)` at sample time `dt` seconds.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferFunction {
    pub num: Polynomial,
    pub den: Polynomial,
    pub dt: f64,
}

impl TransferFunction {
    /// Builds a transfer function from descending coefficient vectors.
    ///
    /// The denominator must not be identically zero and must have degree at
    /// least that of the numerator (causal, realizable system).
    pub fn new(num: Vec<f64>, den: Vec<f64>, dt: f64) -> Result<Self> {
        let num = Polynomial::new(num);
        let den = Polynomial::new(den);
        if den.is_zero() {
            return Err(CoreError::InvalidInput("zero denominator".into()));
        }
        if !(dt > 0.0) {
            return Err(CoreError::InvalidInput(format!(
                "sample time must be positive, got {dt}"
            )));
        }
        if !num.is_zero() && num.degree() > den.degree() {
            return Err(CoreError::InvalidInput(format!(
                "improper transfer function: numerator degree {} exceeds denominator degree {}",
                num.degree(),
                den.degree()
            )));
        }
        Ok(TransferFunction { num, den, dt })
    }

    pub fn poles(&self) -> Result<Vec<Complex64>> {
        poly_roots(&self.den)
    }

    pub fn zeros(&self) -> Result<Vec<Complex64>> {
        if self.num.is_zero() {
            return Ok(vec![]);
        }
        poly_roots(&self.num)
    }

    /// Gain at z = 1: sum of numerator coefficients over sum of denominator
    /// coefficients. Infinite when the denominator has a root at z = 1.
    pub fn dc_gain(&self) -> f64 {
        let d = self.den.eval(1.0);
        if d == 0.0 {
            return f64::INFINITY;
        }
        self.num.eval(1.0) / d
    }

    /// Relative degree zero at the front: y(k) does not depend on u(k).
    pub fn is_strictly_proper(&self) -> bool {
        self.num.is_zero() || self.num.degree() < self.den.degree()
    }

    /// Series interconnection self * other (no cancellation).
    pub fn series(&self, other: &TransferFunction) -> Result<TransferFunction> {
        if (self.dt - other.dt).abs() > 1e-12 {
            return Err(CoreError::InvalidInput(format!(
                "sample time mismatch: {} vs {}",
                self.dt, other.dt
            )));
        }
        TransferFunction::new(
            self.num.mul(&other.num).coeffs().to_vec(),
            self.den.mul(&other.den).coeffs().to_vec(),
            self.dt,
        )
    }

    /// Scales the numerator by a constant gain.
    pub fn scaled(&self, k: f64) -> TransferFunction {
        TransferFunction {
            num: self.num.scale(k),
            den: self.den.clone(),
            dt: self.dt,
        }
    }

    /// Stateful direct-form realization for step-by-step simulation.
    pub fn realize(&self) -> DifferenceEq {
        DifferenceEq::new(self)
    }

    /// Runs the difference equation over an input sequence from zero state.
    pub fn simulate(&self, input: &[f64]) -> Vec<f64> {
        let mut sim = self.realize();
        input.iter().map(|&u| sim.step(u)).collect()
    }
}

/// Direct-form-I realization of a proper transfer function.
///
/// With monic denominator `z^n + d1 z^(n-1) + ... + dn` and numerator padded
/// to `c0 z^n + ... + cn`, the recursion is
/// `y(k) = c0 u(k) + ... + cn u(k-n) - d1 y(k-1) - ... - dn y(k-n)`.
#[derive(Debug, Clone)]
pub struct DifferenceEq {
    /// Padded, den-normalized numerator c0..cn.
    num: Vec<f64>,
    /// Normalized denominator tail d1..dn.
    den_tail: Vec<f64>,
    /// u(k-1), u(k-2), ... u(k-n).
    past_u: Vec<f64>,
    /// y(k-1), y(k-2), ... y(k-n).
    past_y: Vec<f64>,
}

impl DifferenceEq {
    fn new(tf: &TransferFunction) -> Self {
        let n = tf.den.degree();
        let lead = tf.den.coeffs()[0];
        let den_tail: Vec<f64> = tf.den.coeffs()[1..].iter().map(|&d| d / lead).collect();
        let mut num = vec![0.0; n + 1];
        let nc = tf.num.coeffs();
        for (i, &c) in nc.iter().enumerate() {
            num[n + 1 - nc.len() + i] = c / lead;
        }
        DifferenceEq {
            num,
            den_tail,
            past_u: vec![0.0; n],
            past_y: vec![0.0; n],
        }
    }

    /// Output this step would produce for input `u`, without advancing state.
    /// For strictly proper systems the result does not depend on `u`.
    pub fn output_for(&self, u: f64) -> f64 {
        let mut y = self.num[0] * u;
        for i in 0..self.past_u.len() {
            y += self.num[i + 1] * self.past_u[i];
            y -= self.den_tail[i] * self.past_y[i];
        }
        y
    }

    /// Commits one sample: shifts `u` and the realized output `y` into history.
    pub fn push(&mut self, u: f64, y: f64) {
        if !self.past_u.is_empty() {
            self.past_u.rotate_right(1);
            self.past_u[0] = u;
            self.past_y.rotate_right(1);
            self.past_y[0] = y;
        }
    }

    /// Computes and commits one sample.
    pub fn step(&mut self, u: f64) -> f64 {
        let y = self.output_for(u);
        self.push(u, y);
        y
    }

    pub fn reset(&mut self) {
        self.past_u.iter_mut().for_each(|v| *v = 0.0);
        self.past_y.iter_mut().for_each(|v| *v = 0.0);
    }
}

/// Closed-loop poles of the unity-feedback loop controller * plant: roots of
/// `den_c * den_p + num_c * num_p`.
pub fn closed_loop_poles(
    controller: &TransferFunction,
    plant: &TransferFunction,
) -> Result<Vec<Complex64>> {
    let char_poly = characteristic_polynomial(controller, plant);
    poly_roots(&char_poly)
}

fn characteristic_polynomial(c: &TransferFunction, g: &TransferFunction) -> Polynomial {
    c.den.mul(&g.den).add(&c.num.mul(&g.num))
}

/// Root locus of `1 + K * L(z)` over a gain grid.
///
/// Each entry of `branches` holds the `deg(den)` closed-loop poles at the
/// matching gain, sorted by real part then imaginary part; no attempt is
/// made to pair roots into continuous branches across gains.
#[derive(Debug, Clone)]
pub struct RootLocus {
    pub gains: Vec<f64>,
    pub branches: Vec<Vec<Complex64>>,
}

pub fn root_locus(loop_gain: &TransferFunction, gains: &[f64]) -> Result<RootLocus> {
    if gains.is_empty() {
        return Err(CoreError::InvalidInput("empty gain grid".into()));
    }
    if gains.iter().any(|&k| !(k >= 0.0) || !k.is_finite()) {
        return Err(CoreError::InvalidInput(
            "root locus gains must be finite and nonnegative".into(),
        ));
    }
    let mut branches = Vec::with_capacity(gains.len());
    for &k in gains {
        let p = loop_gain.den.add(&loop_gain.num.scale(k));
        let mut roots = poly_roots(&p)?;
        roots.sort_by(|a, b| {
            a.re.partial_cmp(&b.re)
                .unwrap()
                .then(a.im.partial_cmp(&b.im).unwrap())
        });
        branches.push(roots);
    }
    Ok(RootLocus {
        gains: gains.to_vec(),
        branches,
    })
}

/// Reference signal class for steady-state error analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RefKind {
    /// r(k) = magnitude.
    Step,
    /// r(k) = magnitude * k * dt  (magnitude is the slope per second).
    Ramp,
}

/// Steady-state tracking error of the unity-feedback loop via the final
/// value theorem: `lim (z-1) * Ref(z) / (1 + C G)`.
///
/// Requires an asymptotically stable closed loop. Returns `+inf` when the
/// loop lacks the integrators needed to follow the reference class.
pub fn steady_state_error(
    controller: &TransferFunction,
    plant: &TransferFunction,
    kind: RefKind,
    magnitude: f64,
) -> Result<f64> {
    let char_poly = characteristic_polynomial(controller, plant);
    let poles = poly_roots(&char_poly)?;
    if !is_stable(&poles, 0.0) {
        return Err(CoreError::FvtInapplicable(
            "closed loop has poles on or outside the unit circle".into(),
        ));
    }
    let open = controller.den.mul(&plant.den);
    // Multiplicity of the open-loop root at z = 1, by repeated deflation.
    // The tolerance is relative to coefficient magnitude because convolved
    // coefficients only cancel to rounding at z = 1.
    let mut q = open.clone();
    let mut mult = 0usize;
    loop {
        let scale: f64 = q.coeffs().iter().map(|c| c.abs()).sum();
        if scale == 0.0 || q.eval(1.0).abs() > 1e-9 * scale || q.degree() == 0 {
            break;
        }
        q = q.deflate(1.0);
        mult += 1;
    }
    let char_at_1 = char_poly.eval(1.0);
    let err = match kind {
        RefKind::Step => {
            if mult >= 1 {
                0.0
            } else {
                magnitude * open.eval(1.0) / char_at_1
            }
        }
        RefKind::Ramp => match mult {
            0 => f64::INFINITY,
            1 => magnitude * controller.dt * q.eval(1.0) / char_at_1,
            _ => 0.0,
        },
    };
    Ok(err)
}

/// Closed-loop simulation record.
#[derive(Debug, Clone)]
pub struct LoopTrace {
    pub y: Vec<f64>,
    pub e: Vec<f64>,
    pub u: Vec<f64>,
}

/// Simulates the unity-feedback loop over a reference sequence.
///
/// The plant must be strictly proper so that the loop has no algebraic
/// feedthrough cycle; the controller may be biproper.
pub fn simulate_closed_loop(
    controller: &TransferFunction,
    plant: &TransferFunction,
    reference: &[f64],
) -> Result<LoopTrace> {
    if !plant.is_strictly_proper() {
        return Err(CoreError::InvalidInput(
            "closed-loop simulation needs a strictly proper plant".into(),
        ));
    }
    let mut ctrl = controller.realize();
    let mut g = plant.realize();
    let mut trace = LoopTrace {
        y: Vec::with_capacity(reference.len()),
        e: Vec::with_capacity(reference.len()),
        u: Vec::with_capacity(reference.len()),
    };
    for &r in reference {
        let y = g.output_for(0.0); // strictly proper: u(k) does not enter y(k)
        let e = r - y;
        let u = ctrl.step(e);
        g.push(u, y);
        trace.y.push(y);
        trace.e.push(e);
        trace.u.push(u);
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::defaults;
    use approx::assert_abs_diff_eq;

    fn nominal_plant() -> TransferFunction {
        TransferFunction::new(
            vec![defaults::PLANT_B1, defaults::PLANT_B2],
            vec![1.0, defaults::PLANT_A1, defaults::PLANT_A2],
            defaults::SAMPLE_TIME_S,
        )
        .unwrap()
    }

    fn tracking_controller() -> TransferFunction {
        // K (z - z0) / (z - 1)^2
        TransferFunction::new(
            vec![defaults::TRACKING_GAIN, -defaults::TRACKING_GAIN * defaults::TRACKING_ZERO],
            vec![1.0, -2.0, 1.0],
            defaults::SAMPLE_TIME_S,
        )
        .unwrap()
    }

    fn force_controller() -> TransferFunction {
        TransferFunction::new(
            vec![defaults::FORCE_GAIN, -defaults::FORCE_GAIN * defaults::FORCE_ZERO],
            vec![1.0, -1.0],
            defaults::SAMPLE_TIME_S,
        )
        .unwrap()
    }

    #[test]
    fn polynomial_eval_and_arithmetic() {
        let p = Polynomial::new(vec![2.0, -3.0, 1.0]); // 2z^2 - 3z + 1
        assert_eq!(p.eval(2.0), 3.0);
        assert_eq!(p.eval(1.0), 0.0);
        let q = Polynomial::new(vec![1.0, 1.0]); // z + 1
        assert_eq!(p.mul(&q).coeffs(), &[2.0, -1.0, -2.0, 1.0]);
        assert_eq!(p.add(&q).coeffs(), &[2.0, -2.0, 2.0]);
        assert_eq!(p.derivative().coeffs(), &[4.0, -3.0]);
        // (2z^2 - 3z + 1) / (z - 1) = 2z - 1
        assert_eq!(p.deflate(1.0).coeffs(), &[2.0, -1.0]);
    }

    #[test]
    fn leading_zeros_stripped_small_coeffs_kept() {
        let p = Polynomial::new(vec![0.0, 0.0, 3.0, 1e-15]);
        assert_eq!(p.degree(), 1);
        assert_eq!(p.coeffs(), &[3.0, 1e-15]);
    }

    #[test]
    fn quadratic_roots_match_hand_quadratic_formula() {
        // Independent oracle: roots of z^2 - 0.7655 z + 0.03624 via the
        // quadratic formula evaluated by hand:
        //   disc = 0.7655^2 - 4*0.03624 = 0.44103025
        //   sqrt(disc) = 0.664101083...
        //   roots = (0.7655 +/- sqrt(disc)) / 2
        let p = Polynomial::new(vec![1.0, defaults::PLANT_A1, defaults::PLANT_A2]);
        let mut roots = poly_roots(&p).unwrap();
        roots.sort_by(|a, b| b.re.partial_cmp(&a.re).unwrap());
        assert_abs_diff_eq!(roots[0].re, 0.71480054, epsilon = 1e-7);
        assert_abs_diff_eq!(roots[1].re, 0.05069946, epsilon = 1e-7);
        assert_eq!(roots[0].im, 0.0);
        assert_eq!(roots[1].im, 0.0);
    }

    #[test]
    fn companion_roots_residual_and_conjugate_pairs() {
        // (z^2 + 0.25)(z^2 - 0.5 z + 0.85)(z - 0.3): known factors, degree 5.
        let p = Polynomial::new(vec![1.0, 0.0, 0.25])
            .mul(&Polynomial::new(vec![1.0, -0.5, 0.85]))
            .mul(&Polynomial::new(vec![1.0, -0.3]));
        let roots = poly_roots(&p).unwrap();
        assert_eq!(roots.len(), 5);
        let monic = p.monic();
        let max_coeff = monic.coeffs().iter().fold(0.0f64, |m, c| m.max(c.abs()));
        for r in &roots {
            assert!(monic.eval_complex(*r).norm() <= 1e-9 * max_coeff);
        }
        // Every complex root has its conjugate in the set.
        for r in roots.iter().filter(|r| r.im != 0.0) {
            assert!(roots.iter().any(|s| (s - r.conj()).norm() < 1e-9));
        }
    }

    #[test]
    fn roots_of_reconstructed_polynomial_recover_originals() {
        let originals = [-1.2, -0.4, 0.15, 0.7, 1.9];
        let p = Polynomial::from_real_roots(&originals);
        let mut roots = poly_roots(&p).unwrap();
        roots.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        for (r, o) in roots.iter().zip(originals.iter()) {
            assert_abs_diff_eq!(r.re, *o, epsilon = 1e-6);
            assert_abs_diff_eq!(r.im, 0.0, epsilon = 1e-6);
        }
    }

    #[test]
    fn plant_poles_and_zero() {
        let g = nominal_plant();
        let mut poles = g.poles().unwrap();
        poles.sort_by(|a, b| b.re.partial_cmp(&a.re).unwrap());
        assert_abs_diff_eq!(poles[0].re, 0.714801, epsilon = 1e-4);
        assert_abs_diff_eq!(poles[1].re, 0.050699, epsilon = 1e-4);
        let zeros = g.zeros().unwrap();
        assert_eq!(zeros.len(), 1);
        assert_abs_diff_eq!(zeros[0].re, -8.8390, epsilon = 1e-3);
    }

    #[test]
    fn dc_gain_of_nominal_plant() {
        // (0.04074 + 0.3601) / (1 - 0.7655 + 0.03624) = 1.48054...
        assert_abs_diff_eq!(nominal_plant().dc_gain(), 1.48054, epsilon = 1e-3);
    }

    #[test]
    fn impulse_response_matches_hand_unrolled_recursion() {
        // y(k) = 0.7655 y(k-1) - 0.03624 y(k-2) + 0.04074 u(k-1) + 0.3601 u(k-2)
        // Impulse at k=0: y(0)=0, y(1)=0.04074,
        // y(2) = 0.7655*0.04074 + 0.3601 = 0.39128647.
        let g = nominal_plant();
        let mut u = vec![0.0; 10];
        u[0] = 1.0;
        let y = g.simulate(&u);
        assert_eq!(y[0], 0.0);
        assert_abs_diff_eq!(y[1], 0.04074, epsilon = 1e-12);
        assert_abs_diff_eq!(y[2], 0.39128647, epsilon = 1e-8);
    }

    #[test]
    fn step_response_settles_at_dc_gain() {
        let g = nominal_plant();
        let y = g.simulate(&vec![1.0; 400]);
        assert_abs_diff_eq!(*y.last().unwrap(), g.dc_gain(), epsilon = 1e-9);
    }

    #[test]
    fn zero_input_stays_zero() {
        let g = nominal_plant();
        let y = g.simulate(&vec![0.0; 50]);
        assert!(y.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn simulation_is_linear() {
        let g = nominal_plant();
        let u1: Vec<f64> = (0..100).map(|k| (k as f64 * 0.37).sin()).collect();
        let u2: Vec<f64> = (0..100).map(|k| (k as f64 * 0.11).cos()).collect();
        let combo: Vec<f64> = u1.iter().zip(&u2).map(|(a, b)| 2.0 * a - 3.0 * b).collect();
        let y1 = g.simulate(&u1);
        let y2 = g.simulate(&u2);
        let yc = g.simulate(&combo);
        for k in 0..100 {
            assert_abs_diff_eq!(yc[k], 2.0 * y1[k] - 3.0 * y2[k], epsilon = 1e-9);
        }
    }

    #[test]
    fn improper_transfer_function_rejected() {
        let r = TransferFunction::new(vec![1.0, 0.0, 0.0], vec![1.0, -0.5], 0.1);
        assert!(matches!(r, Err(CoreError::InvalidInput(_))));
    }

    #[test]
    fn stability_boundary_is_strict() {
        let inside = [Complex64::new(0.0, 0.999)];
        let on = [Complex64::new(0.0, 1.0)];
        assert!(is_stable(&inside, 0.0));
        assert!(!is_stable(&on, 0.0));
        assert!(!is_stable(&inside, 0.01));
    }

    #[test]
    fn closed_loop_stable_at_shipped_force_gain() {
        let poles = closed_loop_poles(&force_controller(), &nominal_plant()).unwrap();
        assert_eq!(poles.len(), 3);
        assert!(is_stable(&poles, 0.0));
    }

    #[test]
    fn closed_loop_unstable_at_large_force_gain() {
        let big = force_controller().scaled(1000.0 / defaults::FORCE_GAIN);
        let poles = closed_loop_poles(&big, &nominal_plant()).unwrap();
        assert!(!is_stable(&poles, 0.0));
    }

    #[test]
    fn closed_loop_stable_at_shipped_tracking_gain() {
        let poles = closed_loop_poles(&tracking_controller(), &nominal_plant()).unwrap();
        assert_eq!(poles.len(), 4);
        assert!(is_stable(&poles, 0.0));
    }

    #[test]
    fn root_locus_branch_count_and_endpoints() {
        // Unit-gain loop transfer (z - 0.44)/(z - 1) * G(z).
        let unit_force = TransferFunction::new(
            vec![1.0, -defaults::FORCE_ZERO],
            vec![1.0, -1.0],
            defaults::SAMPLE_TIME_S,
        )
        .unwrap();
        let loop_tf = unit_force.series(&nominal_plant()).unwrap();
        let gains = [1e-9, 0.21, 1e9];
        let locus = root_locus(&loop_tf, &gains).unwrap();
        for b in &locus.branches {
            assert_eq!(b.len(), 3);
        }
        // K -> 0: open-loop poles {0.0507, 0.7148, 1.0}.
        let near_zero = &locus.branches[0];
        for expect in [0.050699, 0.714801, 1.0] {
            assert!(near_zero.iter().any(|r| (r.re - expect).abs() < 1e-3 && r.im.abs() < 1e-6));
        }
        // K -> inf: finite branches approach the open-loop zeros {0.44, -8.839}.
        let near_inf = &locus.branches[2];
        for expect in [0.44, -8.83898] {
            assert!(near_inf.iter().any(|r| (r.re - expect).abs() < 1e-3 && r.im.abs() < 1e-3));
        }
    }

    #[test]
    fn root_locus_rejects_bad_gain_grid() {
        let g = nominal_plant();
        assert!(root_locus(&g, &[]).is_err());
        assert!(root_locus(&g, &[-1.0]).is_err());
        assert!(root_locus(&g, &[f64::NAN]).is_err());
    }

    #[test]
    fn fvt_step_error_zero_with_any_integrator() {
        let g = nominal_plant();
        assert_eq!(
            steady_state_error(&force_controller(), &g, RefKind::Step, 18.84).unwrap(),
            0.0
        );
        assert_eq!(
            steady_state_error(&tracking_controller(), &g, RefKind::Step, 30.0).unwrap(),
            0.0
        );
    }

    #[test]
    fn fvt_ramp_error_zero_with_double_integrator() {
        let g = nominal_plant();
        assert_eq!(
            steady_state_error(&tracking_controller(), &g, RefKind::Ramp, 2.0).unwrap(),
            0.0
        );
    }

    #[test]
    fn fvt_ramp_error_finite_with_single_integrator() {
        // Symbolic limit: e = slope * dt * A(1) / (Kf (1-zf) B(1))
        //   A(1) = 0.27074, B(1) = 0.40084, Kf (1-zf) = 0.1176
        //   e = 2.0 * 0.1 * 0.27074 / 0.047138784 = 1.14868...
        let g = nominal_plant();
        let e = steady_state_error(&force_controller(), &g, RefKind::Ramp, 2.0).unwrap();
        let expect = 2.0 * 0.1 * 0.27074 / (0.1176 * 0.40084);
        assert_abs_diff_eq!(e, expect, epsilon = 1e-9);
        assert!(e.is_finite() && e > 0.0);
    }

    #[test]
    fn fvt_ramp_error_infinite_without_integrator() {
        // Plain gain controller has no pole at z = 1.
        let p = TransferFunction::new(vec![0.1], vec![1.0], 0.1).unwrap();
        let e = steady_state_error(&p, &nominal_plant(), RefKind::Ramp, 1.0).unwrap();
        assert!(e.is_infinite());
    }

    #[test]
    fn fvt_rejects_unstable_loop() {
        let big = force_controller().scaled(1000.0 / defaults::FORCE_GAIN);
        let r = steady_state_error(&big, &nominal_plant(), RefKind::Step, 1.0);
        assert!(matches!(r, Err(CoreError::FvtInapplicable(_))));
    }

    #[test]
    fn fvt_agrees_with_long_horizon_simulation() {
        let g = nominal_plant();
        let dt = defaults::SAMPLE_TIME_S;
        // Step through the force loop.
        let mag = 18.84;
        let refs: Vec<f64> = vec![mag; 800];
        let tr = simulate_closed_loop(&force_controller(), &g, &refs).unwrap();
        let predicted = steady_state_error(&force_controller(), &g, RefKind::Step, mag).unwrap();
        assert!((tr.e.last().unwrap() - predicted).abs() < 1e-2 * mag.abs());
        // Ramp through the force loop: finite nonzero error.
        let slope = 2.0;
        let refs: Vec<f64> = (0..3000).map(|k| slope * k as f64 * dt).collect();
        let tr = simulate_closed_loop(&force_controller(), &g, &refs).unwrap();
        let predicted = steady_state_error(&force_controller(), &g, RefKind::Ramp, slope).unwrap();
        assert!((tr.e.last().unwrap() - predicted).abs() < 1e-2 * slope.abs());
        // Ramp through the tracking loop: error dies out.
        let refs: Vec<f64> = (0..500).map(|k| slope * k as f64 * dt).collect();
        let tr = simulate_closed_loop(&tracking_controller(), &g, &refs).unwrap();
        assert!(tr.e.last().unwrap().abs() < 1e-3);
    }

    #[test]
    fn ramp_error_scales_with_slope() {
        let g = nominal_plant();
        let e1 = steady_state_error(&force_controller(), &g, RefKind::Ramp, 1.0).unwrap();
        let e3 = steady_state_error(&force_controller(), &g, RefKind::Ramp, 3.0).unwrap();
        assert_abs_diff_eq!(e3, 3.0 * e1, epsilon = 1e-12);
    }
}

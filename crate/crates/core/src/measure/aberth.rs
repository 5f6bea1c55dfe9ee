//! Simultaneous (Aberth–Ehrlich) root refinement for sparse polynomials.
//!
//! Evaluation walks the support only, so a step costs `O(k log n)` per root
//! plus the `O(d)` Aberth sum. Points outside the unit disk are evaluated
//! through the reversed polynomial to avoid overflow.

use num_complex::Complex64;

const EPS: f64 = f64::EPSILON;

/// Refined roots with per-root diagnostics.
#[derive(Clone, Debug)]
pub(crate) struct AberthOutcome {
    pub roots: Vec<Complex64>,
    /// Magnitude of the last Newton correction at each root.
    pub newton_steps: Vec<f64>,
    /// Backward error `|f(α)| / Σ|a_i||α|^{n_i}` at each root.
    pub backward_errors: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
}

/// Sparse polynomial with float coefficients, terms in decreasing exponent
/// order, constant term nonzero.
pub(crate) struct SparseF64 {
    degree: u64,
    forward: Vec<(u64, f64)>,
    reversed: Vec<(u64, f64)>,
}

struct Eval {
    value: Complex64,
    deriv: Complex64,
    scale: f64,
}

impl SparseF64 {
    pub fn new(terms: Vec<(u64, f64)>) -> Self {
        debug_assert!(terms.last().is_some_and(|t| t.0 == 0));
        let degree = terms[0].0;
        let reversed = terms.iter().rev().map(|(e, c)| (degree - e, *c)).collect();
        Self {
            degree,
            forward: terms,
            reversed,
        }
    }

    /// Sparse Horner in both value and derivative, for `|z| <= 1`.
    fn horner(terms: &[(u64, f64)], z: Complex64) -> Eval {
        let r = z.norm();
        let mut p = Complex64::new(terms[0].1, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        let mut s = terms[0].1.abs();
        for w in terms.windows(2) {
            let gap = w[0].0 - w[1].0;
            let zg1 = powu(z, gap - 1);
            let zg = zg1 * z;
            dp = dp * zg + p * zg1 * gap as f64;
            p = p * zg + w[1].1;
            s = s * r.powf(gap as f64) + w[1].1.abs();
        }
        let tail = terms.last().unwrap().0;
        if tail > 0 {
            let zt1 = powu(z, tail - 1);
            let zt = zt1 * z;
            dp = dp * zt + p * zt1 * tail as f64;
            p *= zt;
            s *= r.powf(tail as f64);
        }
        Eval {
            value: p,
            deriv: dp,
            scale: s,
        }
    }

    /// Returns (`f'(z)/f(z)`, backward error). The quotient is infinite only
    /// at an exact zero.
    fn log_derivative(&self, z: Complex64) -> (Complex64, f64) {
        if z.norm() <= 1.0 {
            let e = Self::horner(&self.forward, z);
            (cdiv(e.deriv, e.value), e.value.norm() / e.scale)
        } else {
            // f(z) = z^d g(1/z) with g the reversal
            let w = z.inv();
            let e = Self::horner(&self.reversed, w);
            let num = e.value * self.degree as f64 - w * e.deriv;
            (cdiv(num, z * e.value), e.value.norm() / e.scale)
        }
    }

    /// Initial points on circles read off the upper convex hull of
    /// `(n_i, ln|a_i|)`, one circle per hull edge.
    fn initial_guesses(&self) -> Vec<Complex64> {
        let pts: Vec<(f64, f64)> = self
            .forward
            .iter()
            .rev()
            .map(|(e, c)| (*e as f64, c.abs().ln()))
            .collect();
        let mut hull: Vec<(f64, f64)> = Vec::new();
        for &p in &pts {
            while hull.len() >= 2 {
                let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
                let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
                if cross >= 0.0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        let mut out = Vec::with_capacity(self.degree as usize);
        for (seg, w) in hull.windows(2).enumerate() {
            let count = (w[1].0 - w[0].0) as usize;
            let radius = ((w[0].1 - w[1].1) / (w[1].0 - w[0].0)).exp();
            let offset = 0.7 + 1.3 * seg as f64;
            for j in 0..count {
                let theta = std::f64::consts::TAU * j as f64 / count as f64 + offset;
                out.push(Complex64::from_polar(radius, theta));
            }
        }
        out
    }

    pub fn solve(&self, tol: f64, max_iterations: usize) -> AberthOutcome {
        let d = self.degree as usize;
        let mut roots = self.initial_guesses();
        debug_assert_eq!(roots.len(), d);
        let mut done = vec![false; d];
        let mut steps = vec![f64::INFINITY; d];
        let mut backward = vec![f64::INFINITY; d];
        let floor = 16.0 * EPS * (self.forward.len() as f64).max(2.0);
        let mut iterations = 0;
        while iterations < max_iterations && done.iter().any(|x| !x) {
            iterations += 1;
            for i in 0..d {
                if done[i] {
                    continue;
                }
                let zi = roots[i];
                let (logd, be) = self.log_derivative(zi);
                backward[i] = be;
                if !logd.is_finite() {
                    // landed exactly on a zero
                    steps[i] = 0.0;
                    done[i] = true;
                    continue;
                }
                let mut sum = Complex64::new(0.0, 0.0);
                for (j, zj) in roots.iter().enumerate() {
                    if j != i {
                        let diff = zi - zj;
                        if diff.norm_sqr() > 0.0 {
                            sum += diff.inv();
                        }
                    }
                }
                let mut corr = cdiv(Complex64::new(1.0, 0.0), logd - sum);
                if !corr.is_finite() {
                    // critical point of the Aberth correction: nudge off it
                    corr = zi * Complex64::new(1e-8, 1e-8);
                }
                roots[i] = zi - corr;
                steps[i] = cdiv(Complex64::new(1.0, 0.0), logd).norm();
                let scale = zi.norm().max(f64::MIN_POSITIVE);
                if corr.norm() <= tol * scale || be <= floor {
                    done[i] = true;
                }
            }
        }
        // final diagnostics at the returned points
        for i in 0..d {
            let (logd, be) = self.log_derivative(roots[i]);
            backward[i] = be;
            steps[i] = if logd.is_finite() {
                cdiv(Complex64::new(1.0, 0.0), logd).norm()
            } else {
                0.0
            };
        }
        AberthOutcome {
            converged: done.iter().all(|x| *x),
            roots,
            newton_steps: steps,
            backward_errors: backward,
            iterations,
        }
    }
}

/// `a / b` scaled by the larger component of `b` (Smith), so that tiny or
/// huge denominators do not underflow or overflow `|b|^2`.
fn cdiv(a: Complex64, b: Complex64) -> Complex64 {
    if b.re == 0.0 && b.im == 0.0 {
        return Complex64::new(f64::INFINITY, f64::INFINITY);
    }
    if b.re.abs() >= b.im.abs() {
        let r = b.im / b.re;
        let den = b.re + b.im * r;
        Complex64::new((a.re + a.im * r) / den, (a.im - a.re * r) / den)
    } else {
        let r = b.re / b.im;
        let den = b.re * r + b.im;
        Complex64::new((a.re * r + a.im) / den, (a.im * r - a.re) / den)
    }
}

fn powu(z: Complex64, n: u64) -> Complex64 {
    let mut base = z;
    let mut acc = Complex64::new(1.0, 0.0);
    let mut n = n;
    while n > 0 {
        if n & 1 == 1 {
            acc *= base;
        }
        base *= base;
        n >>= 1;
    }
    acc
}

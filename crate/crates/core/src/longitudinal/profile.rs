use crate::grid::GridFunction;

/// A real function on the line that the resolvent engines can sample.
pub trait Profile: Sync {
    fn eval(&self, x: f64) -> f64;

    /// `1/kappa` for an `exp(-kappa |x|)` tail; `0` for compact support.
    fn decay_length(&self) -> f64;

    /// Radius outside which the function vanishes identically, if any.
    fn support(&self) -> Option<f64> {
        None
    }

    /// Smallest length scale that a grid must resolve.
    fn feature_scale(&self) -> f64 {
        self.decay_length().max(1e-300)
    }
}

impl Profile for GridFunction {
    fn eval(&self, x: f64) -> f64 {
        GridFunction::eval(self, x)
    }

    fn decay_length(&self) -> f64 {
        0.0
    }

    fn support(&self) -> Option<f64> {
        let (lo, hi) = self.range();
        Some(lo.abs().max(hi.abs()))
    }

    fn feature_scale(&self) -> f64 {
        self.x().windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min) * 4.0
    }
}

/// A closure with declared decay and resolution scales.
pub struct FnProfile<F> {
    pub f: F,
    pub decay_length: f64,
    pub feature_scale: f64,
}

impl<F: Fn(f64) -> f64 + Sync> Profile for FnProfile<F> {
    fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    fn decay_length(&self) -> f64 {
        self.decay_length
    }

    fn feature_scale(&self) -> f64 {
        self.feature_scale
    }
}

/// Normalized Gaussian `(2 pi s^2)^{-1/4} exp(-x^2 / (4 s^2))`.
pub struct Gaussian {
    pub width: f64,
}

impl Profile for Gaussian {
    fn eval(&self, x: f64) -> f64 {
        let s = self.width;
        (2.0 * std::f64::consts::PI * s * s).powf(-0.25) * (-x * x / (4.0 * s * s)).exp()
    }

    fn decay_length(&self) -> f64 {
        // Beyond ~6 widths the tail is below 1e-8 of the peak.
        0.0
    }

    fn support(&self) -> Option<f64> {
        Some(12.0 * self.width)
    }

    fn feature_scale(&self) -> f64 {
        self.width
    }
}

/// Largest radius that must be inside the unscaled region for `v`.
pub(crate) fn extent(v: &dyn Profile, radius_factor: f64) -> f64 {
    match v.support() {
        Some(r) => r,
        None => radius_factor * v.decay_length(),
    }
}

use super::MssError;
use crate::vec3::{self, Vec3};

/// Uniformly sampled position curve on `[t0, t1]`.
///
/// Acceleration uses fixed finite-difference stencils (5-point central in
/// the interior, 4-point one-sided at the two samples nearest each
/// boundary), so residuals are reproducible bit-for-bit given identical
/// inputs. Positions between samples come from cubic Lagrange
/// interpolation.
#[derive(Debug, Clone)]
pub struct Trajectory {
    t0: f64,
    h: f64,
    samples: Vec<Vec3>,
}

impl Trajectory {
    pub fn new(t0: f64, h: f64, samples: Vec<Vec3>) -> Result<Self, MssError> {
        if !(h > 0.0) || !h.is_finite() || !t0.is_finite() {
            return Err(MssError::BadTrajectory("step must be positive and finite"));
        }
        if samples.len() < 5 {
            return Err(MssError::BadTrajectory("need at least 5 samples"));
        }
        if !samples.iter().all(|s| vec3::is_finite(*s)) {
            return Err(MssError::BadTrajectory("non-finite sample"));
        }
        Ok(Trajectory { t0, h, samples })
    }

    /// Samples a closed-form curve on a uniform grid.
    pub fn from_fn(
        t0: f64,
        h: f64,
        n_samples: usize,
        f: impl Fn(f64) -> Vec3,
    ) -> Result<Self, MssError> {
        let samples = (0..n_samples).map(|i| f(t0 + i as f64 * h)).collect();
        Trajectory::new(t0, h, samples)
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn t1(&self) -> f64 {
        self.t0 + self.h * (self.samples.len() - 1) as f64
    }

    pub fn step(&self) -> f64 {
        self.h
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn samples(&self) -> &[Vec3] {
        &self.samples
    }

    pub fn sample_times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.samples.len()).map(move |i| self.t0 + i as f64 * self.h)
    }

    pub fn shares_grid(&self, other: &Trajectory) -> bool {
        self.t0 == other.t0 && self.h == other.h && self.samples.len() == other.samples.len()
    }

    pub fn samplewise_close(&self, other: &Trajectory, eps: f64) -> bool {
        self.shares_grid(other)
            && self
                .samples
                .iter()
                .zip(&other.samples)
                .all(|(a, b)| vec3::norm(vec3::sub(*a, *b)) <= eps)
    }

    /// Index of the sample nearest to `t`, with a relative slack of one
    /// part in 10^9 of the step at the interval ends.
    pub fn nearest_index(&self, t: f64) -> Result<usize, MssError> {
        let slack = self.h * 1e-9;
        if t < self.t0 - slack || t > self.t1() + slack {
            return Err(MssError::OutOfInterval {
                t,
                t0: self.t0,
                t1: self.t1(),
            });
        }
        let i = ((t - self.t0) / self.h).round() as isize;
        Ok(i.clamp(0, self.samples.len() as isize - 1) as usize)
    }

    /// Position at `t` by cubic Lagrange interpolation over the four
    /// surrounding samples; exact at sample times.
    pub fn position(&self, t: f64) -> Result<Vec3, MssError> {
        let n = self.samples.len();
        let i = self.nearest_index(t)?;
        let base = i.saturating_sub(1).min(n - 4);
        let mut out = vec3::ZERO;
        for j in 0..4 {
            let tj = self.t0 + (base + j) as f64 * self.h;
            let mut w = 1.0;
            for k in 0..4 {
                if k != j {
                    let tk = self.t0 + (base + k) as f64 * self.h;
                    w *= (t - tk) / (tj - tk);
                }
            }
            out = vec3::add(out, vec3::scale(self.samples[base + j], w));
        }
        Ok(out)
    }

    /// Velocity at the sample nearest to `t`: 5-point central first
    /// derivative in the interior (O(h^4)), one-sided stencils near the
    /// boundaries.
    pub fn velocity(&self, t: f64) -> Result<Vec3, MssError> {
        let i = self.nearest_index(t)?;
        let n = self.samples.len();
        let s = &self.samples;
        let h = self.h;
        let v = if i >= 2 && i + 2 < n {
            // (-s[i+2] + 8 s[i+1] - 8 s[i-1] + s[i-2]) / (12 h)
            vec3::scale(
                vec3::add(
                    vec3::sub(vec3::scale(s[i + 1], 8.0), s[i + 2]),
                    vec3::sub(s[i - 2], vec3::scale(s[i - 1], 8.0)),
                ),
                1.0 / (12.0 * h),
            )
        } else if i + 2 < n {
            // forward: (-3 s[i] + 4 s[i+1] - s[i+2]) / (2h)
            vec3::scale(
                vec3::sub(
                    vec3::scale(s[i + 1], 4.0),
                    vec3::add(vec3::scale(s[i], 3.0), s[i + 2]),
                ),
                1.0 / (2.0 * h),
            )
        } else {
            // backward: (3 s[i] - 4 s[i-1] + s[i-2]) / (2h)
            vec3::scale(
                vec3::sub(
                    vec3::add(vec3::scale(s[i], 3.0), s[i - 2]),
                    vec3::scale(s[i - 1], 4.0),
                ),
                1.0 / (2.0 * h),
            )
        };
        Ok(v)
    }

    /// Second derivative at the sample nearest to `t`. Interior points use
    /// the 5-point central stencil, the two samples at each boundary use
    /// the 4-point one-sided stencil; both are O(h^2).
    pub fn accel(&self, t: f64) -> Result<Vec3, MssError> {
        let i = self.nearest_index(t)?;
        let n = self.samples.len();
        let s = &self.samples;
        let h2 = self.h * self.h;
        let a = if i >= 2 && i + 2 < n {
            // (-s[i-2] + 16 s[i-1] - 30 s[i] + 16 s[i+1] - s[i+2]) / (12 h^2)
            let mut acc = vec3::scale(s[i], -30.0);
            acc = vec3::add(acc, vec3::scale(s[i - 1], 16.0));
            acc = vec3::add(acc, vec3::scale(s[i + 1], 16.0));
            acc = vec3::sub(acc, s[i - 2]);
            acc = vec3::sub(acc, s[i + 2]);
            vec3::scale(acc, 1.0 / (12.0 * h2))
        } else if i + 3 < n && i < 2 {
            // forward: (2 s[i] - 5 s[i+1] + 4 s[i+2] - s[i+3]) / h^2
            let mut acc = vec3::scale(s[i], 2.0);
            acc = vec3::sub(acc, vec3::scale(s[i + 1], 5.0));
            acc = vec3::add(acc, vec3::scale(s[i + 2], 4.0));
            acc = vec3::sub(acc, s[i + 3]);
            vec3::scale(acc, 1.0 / h2)
        } else {
            // backward: (2 s[i] - 5 s[i-1] + 4 s[i-2] - s[i-3]) / h^2
            let mut acc = vec3::scale(s[i], 2.0);
            acc = vec3::sub(acc, vec3::scale(s[i - 1], 5.0));
            acc = vec3::add(acc, vec3::scale(s[i - 2], 4.0));
            acc = vec3::sub(acc, s[i - 3]);
            vec3::scale(acc, 1.0 / h2)
        };
        Ok(a)
    }
}

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Learning-rate schedule indexed by the zero-based step `k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Schedule {
    Constant { lr: f64 },
    /// `lr · factor^⌊k / every⌋`.
    StepDecay { lr: f64, factor: f64, every: usize },
    /// Holds `lr` until `(1 − decay_ratio)·total_steps`, then decays linearly
    /// to 0 at `total_steps`.
    LinearToZero { lr: f64, total_steps: usize, decay_ratio: f64 },
    /// Linear ramp over `warmup_steps`, then cosine decay to 0 at `total_steps`.
    WarmupCosine { lr: f64, warmup_steps: usize, total_steps: usize },
}

impl Schedule {
    pub fn constant(lr: f64) -> Self {
        Self::Constant { lr }
    }

    pub fn base_lr(&self) -> f64 {
        match *self {
            Self::Constant { lr }
            | Self::StepDecay { lr, .. }
            | Self::LinearToZero { lr, .. }
            | Self::WarmupCosine { lr, .. } => lr,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let lr = self.base_lr();
        if !(lr >= 0.0 && lr.is_finite()) {
            return Err(Error::Config(format!("learning rate must be finite and >= 0, got {lr}")));
        }
        match *self {
            Self::Constant { .. } => Ok(()),
            Self::StepDecay { factor, every, .. } => {
                if !(0.0..=1.0).contains(&factor) || every == 0 {
                    return Err(Error::Config(format!(
                        "step decay needs factor in [0, 1] and every >= 1, got {factor}, {every}"
                    )));
                }
                Ok(())
            }
            Self::LinearToZero { total_steps, decay_ratio, .. } => {
                if total_steps == 0 || !(0.0..=1.0).contains(&decay_ratio) {
                    return Err(Error::Config(format!(
                        "linear decay needs total_steps >= 1 and ratio in [0, 1], got {total_steps}, {decay_ratio}"
                    )));
                }
                Ok(())
            }
            Self::WarmupCosine { warmup_steps, total_steps, .. } => {
                if total_steps == 0 || warmup_steps > total_steps {
                    return Err(Error::Config(format!(
                        "warmup-cosine needs 0 <= warmup <= total, total >= 1, got {warmup_steps}, {total_steps}"
                    )));
                }
                Ok(())
            }
        }
    }

    pub fn value(&self, k: usize) -> f64 {
        match *self {
            Self::Constant { lr } => lr,
            Self::StepDecay { lr, factor, every } => lr * factor.powi((k / every) as i32),
            Self::LinearToZero { lr, total_steps, decay_ratio } => {
                let t = total_steps as f64;
                let start = (1.0 - decay_ratio) * t;
                let k = k as f64;
                if k <= start {
                    lr
                } else if k >= t {
                    0.0
                } else {
                    lr * (t - k) / (t - start)
                }
            }
            Self::WarmupCosine { lr, warmup_steps, total_steps } => {
                if k < warmup_steps {
                    lr * (k + 1) as f64 / warmup_steps as f64
                } else if k >= total_steps {
                    0.0
                } else {
                    let span = (total_steps - warmup_steps).max(1) as f64;
                    let p = (k - warmup_steps) as f64 / span;
                    lr * 0.5 * (1.0 + (PI * p).cos())
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_decay_value() {
        let s = Schedule::StepDecay { lr: 0.1, factor: 0.99, every: 25 };
        assert!((s.value(50) - 0.09801).abs() < 1e-15);
        assert_eq!(s.value(24), 0.1);
    }

    #[test]
    fn linear_to_zero_legs() {
        let s = Schedule::LinearToZero { lr: 2.0, total_steps: 100, decay_ratio: 0.4 };
        assert_eq!(s.value(0), 2.0);
        assert_eq!(s.value(60), 2.0);
        assert!((s.value(70) - 1.5).abs() < 1e-15);
        assert!((s.value(80) - 1.0).abs() < 1e-15);
        assert_eq!(s.value(100), 0.0);
        assert_eq!(s.value(150), 0.0);
    }

    #[test]
    fn warmup_cosine_shape() {
        let s = Schedule::WarmupCosine { lr: 1.0, warmup_steps: 10, total_steps: 110 };
        assert!((s.value(0) - 0.1).abs() < 1e-15);
        assert_eq!(s.value(9), 1.0);
        assert_eq!(s.value(10), 1.0);
        assert!((s.value(60) - 0.5).abs() < 1e-12);
        assert_eq!(s.value(110), 0.0);
    }

    #[test]
    fn constant_and_validation() {
        assert_eq!(Schedule::constant(0.3).value(12345), 0.3);
        assert!(Schedule::StepDecay { lr: 1.0, factor: 0.5, every: 0 }.validate().is_err());
        assert!(Schedule::constant(-1.0).validate().is_err());
        assert!(Schedule::WarmupCosine { lr: 1.0, warmup_steps: 5, total_steps: 3 }.validate().is_err());
    }
}

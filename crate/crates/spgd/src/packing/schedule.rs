//! Linearly interpolated, clamp-at-end parameter schedules for the packing
//! optimizer (acceptance factor, perturbation amplitudes, phase interval).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `value(i) = start + (end − start) · min(i / end_iter, 1)`: linear ramp up
/// to `end_iter`, constant at `end_value` afterwards.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearSchedule {
    pub start_value: f64,
    pub end_value: f64,
    pub end_iter: u64,
}

impl LinearSchedule {
    pub fn new(start_value: f64, end_value: f64, end_iter: u64) -> Self {
        LinearSchedule {
            start_value,
            end_value,
            end_iter,
        }
    }

    /// A schedule pinned at one value for the whole run.
    pub fn constant(value: f64) -> Self {
        LinearSchedule {
            start_value: value,
            end_value: value,
            end_iter: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.end_iter == 0 {
            return Err(Error::InvalidConfig(
                "schedule end_iter must be at least 1".into(),
            ));
        }
        if !(self.start_value.is_finite() && self.end_value.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "schedule endpoints must be finite, got {} -> {}",
                self.start_value, self.end_value
            )));
        }
        Ok(())
    }

    pub fn value(&self, iter: u64) -> f64 {
        if iter >= self.end_iter {
            // Exact endpoint: the acceptance factor must reach 1.0 exactly.
            return self.end_value;
        }
        let t = iter as f64 / self.end_iter as f64;
        self.start_value + (self.end_value - self.start_value) * t
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn endpoints_and_midpoint() {
        let s = LinearSchedule::new(1.3, 1.0, 600);
        assert_eq!(s.value(0), 1.3);
        assert_relative_eq!(s.value(300), 1.15, epsilon = 1e-12);
        assert_eq!(s.value(600), 1.0);
    }

    #[test]
    fn clamps_after_end_iter() {
        let s = LinearSchedule::new(0.5, 0.05, 1000);
        assert_eq!(s.value(1000), s.value(5000));
        assert_eq!(s.value(u64::MAX), 0.05);
    }

    #[test]
    fn ramp_is_monotone() {
        let s = LinearSchedule::new(25.0, 100.0, 300);
        let mut prev = s.value(0);
        for i in 1..=300 {
            let v = s.value(i);
            assert!(v >= prev, "schedule decreased at iter {i}");
            prev = v;
        }
    }

    #[test]
    fn constant_schedule_is_flat() {
        let s = LinearSchedule::constant(1.0);
        assert_eq!(s.value(0), 1.0);
        assert_eq!(s.value(123456), 1.0);
    }

    #[test]
    fn validation() {
        assert!(LinearSchedule::new(1.0, 2.0, 0).validate().is_err());
        assert!(LinearSchedule::new(f64::NAN, 2.0, 10).validate().is_err());
        assert!(LinearSchedule::new(1.0, 2.0, 10).validate().is_ok());
    }
}

use std::fmt;
use std::str::FromStr;

/// Largest number of points a grid may expand to.
pub const MAX_POINTS: usize = 1_000_000;

/// Evaluation grid written as `start:stop:step`; both endpoints are included.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    start: f64,
    stop: f64,
    step: f64,
}

impl GridSpec {
    /// `count` equal steps from `start` to `stop`.
    pub fn spanning(start: f64, stop: f64, count: usize) -> Self {
        Self { start, stop, step: (stop - start) / count as f64 }
    }

    pub fn points(&self) -> Vec<f64> {
        let span = self.stop - self.start;
        if span == 0.0 {
            return vec![self.start];
        }
        let ratio = span / self.step;
        let nearest = ratio.round();
        if (ratio - nearest).abs() <= 1e-9 * nearest.max(1.0) {
            // Exact multiple: place points by ratio so the endpoints and
            // interior decimals like 2.0 in 0:6:0.01 come out exact.
            let steps = nearest as usize;
            return (0..=steps)
                .map(|i| if i == steps { self.stop } else { self.start + span * i as f64 / steps as f64 })
                .collect();
        }
        let steps = ratio.floor() as usize;
        let mut pts: Vec<f64> = (0..=steps).map(|i| self.start + self.step * i as f64).collect();
        pts.push(self.stop);
        pts
    }
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, step] = parts.as_slice() else {
            return Err(format!("grid '{s}' must have the form start:stop:step"));
        };
        let num = |name: &str, v: &str| -> Result<f64, String> {
            let x: f64 = v.trim().parse().map_err(|_| format!("grid {name} '{v}' is not a number"))?;
            if x.is_finite() {
                Ok(x)
            } else {
                Err(format!("grid {name} must be finite"))
            }
        };
        let (start, stop, step) = (num("start", start)?, num("stop", stop)?, num("step", step)?);
        if step <= 0.0 {
            return Err(format!("grid step must be positive, got {step}"));
        }
        if stop < start {
            return Err(format!("grid stop {stop} is below start {start}"));
        }
        if (stop - start) / step >= MAX_POINTS as f64 {
            return Err(format!("grid '{s}' has more than {MAX_POINTS} points"));
        }
        Ok(Self { start, stop, step })
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.step)
    }
}

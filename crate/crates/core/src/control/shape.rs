// Copyright 2026 ddme-krotov Contributors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;

use super::grid::TimeGrid;
use crate::{Error, Result};

const BLACKMAN_A: f64 = 0.16;
const WINDOW_SLACK: f64 = 1e-12;

/// Blackman window on `[t0, t1]`; zero at both ends, one at the centre.
pub fn blackman(t: f64, t0: f64, t1: f64) -> Result<f64> {
    if !(t0 < t1) {
        return Err(Error::invalid(format!("Blackman window needs t0 < t1, got [{t0}, {t1}]")));
    }
    let slack = WINDOW_SLACK * (t1 - t0).max(1.0);
    if t < t0 - slack || t > t1 + slack {
        return Err(Error::invalid(format!("t = {t} outside Blackman window [{t0}, {t1}]")));
    }
    let x = (t - t0) / (t1 - t0);
    Ok((1.0 - BLACKMAN_A) / 2.0 - 0.5 * (2.0 * PI * x).cos() + 0.5 * BLACKMAN_A * (4.0 * PI * x).cos())
}

/// Update weights `S_(k) ∈ [0, 1]` on the midpoint grid.
#[derive(Debug, Clone, PartialEq)]
pub struct UpdateShape {
    t_on: f64,
    t_off: f64,
    values: Vec<f64>,
}

impl UpdateShape {
    /// Uniform weight 1 everywhere.
    pub fn flat(grid: &TimeGrid) -> Self {
        Self {
            t_on: 0.0,
            t_off: 0.0,
            values: vec![1.0; grid.steps()],
        }
    }

    pub fn t_on(&self) -> f64 {
        self.t_on
    }

    pub fn t_off(&self) -> f64 {
        self.t_off
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, i: usize) -> f64 {
        self.values[i]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Rising half-Blackman ramp of length `t_on`, plateau, falling half-Blackman
/// ramp of length `t_off`, sampled at midpoints.
pub fn update_shape(grid: &TimeGrid, t_on: f64, t_off: f64) -> Result<UpdateShape> {
    let total = grid.final_time();
    if !(t_on >= 0.0 && t_off >= 0.0 && t_on.is_finite() && t_off.is_finite()) {
        return Err(Error::invalid(format!(
            "ramp durations must be non-negative, got t_on = {t_on}, t_off = {t_off}"
        )));
    }
    if t_on + t_off > total {
        return Err(Error::invalid(format!(
            "ramps overlap: t_on + t_off = {} exceeds T = {total}",
            t_on + t_off
        )));
    }
    let values = grid
        .midpoints()
        .map(|t| {
            if t < t_on {
                blackman(t, 0.0, 2.0 * t_on)
            } else if t > total - t_off {
                blackman(t, total - 2.0 * t_off, total)
            } else {
                Ok(1.0)
            }
        })
        .map(|v| v.map(|s| s.clamp(0.0, 1.0)))
        .collect::<Result<Vec<_>>>()?;
    Ok(UpdateShape {
        t_on,
        t_off,
        values,
    })
}

//! Radial mass profiles `m(r)` and fiber schedules `r ↦ s(r)`.

use serde::{Deserialize, Serialize};

/// `m`, `m'` and `m''` at a radius.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct MassValue {
    pub m: f64,
    pub dm: f64,
    pub ddm: f64,
}

/// Piecewise profile of the negative-mass construction.
///
/// * `[0, r1]`: `m = −(a0/12) r³`.
/// * `[r1, r2]`: cubic Hermite with `m(r2) = m(r1)`, `m'(r1) = −(a0/4) r1²`
///   and `m'(r2) = slope`.
/// * `[r2, r3]`: `m = m(r1) + slope·(r − r2)`.
/// * `[r3, ∞)`: `m = m_inf − (m_inf − m(r3)) / (1 + tail_rate·(r − r3))`, with
///   `tail_rate = slope / (m_inf − m(r3))` so that `m'` is continuous.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstructionProfile {
    pub a0: f64,
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
    pub core_coefficient: f64,
    pub m1: f64,
    pub hermite_d0: f64,
    pub slope: f64,
    pub m3: f64,
    pub m_inf: f64,
    pub tail_rate: f64,
}

impl ConstructionProfile {
    /// Breakpoints `r1 = max(7, ⌈126/√a0⌉)`, `r2 = r1 + 1`, `r3 = r2 + r1/7`,
    /// linear slope `(a0/2) r1²` and limit `m_inf = −r1³ a0 / 168`.
    pub fn new(a0: f64) -> Self {
        let r1 = (126.0 / a0.sqrt()).ceil().max(7.0);
        let r2 = r1 + 1.0;
        let r3 = r2 + r1 / 7.0;
        let core_coefficient = -a0 / 12.0;
        let m1 = core_coefficient * r1 * r1 * r1;
        let slope = a0 / 2.0 * r1 * r1;
        let m3 = m1 + slope * (r3 - r2);
        let m_inf = -r1 * r1 * r1 * a0 / 168.0;
        Self {
            a0,
            r1,
            r2,
            r3,
            core_coefficient,
            m1,
            hermite_d0: -a0 / 4.0 * r1 * r1,
            slope,
            m3,
            m_inf,
            tail_rate: slope / (m_inf - m3),
        }
    }

    pub fn eval(&self, r: f64) -> MassValue {
        if r <= self.r1 {
            let c = self.core_coefficient;
            MassValue { m: c * r * r * r, dm: 3.0 * c * r * r, ddm: 6.0 * c * r }
        } else if r <= self.r2 {
            let h = self.r2 - self.r1;
            let t = (r - self.r1) / h;
            let (d0, d1) = (self.hermite_d0, self.slope);
            MassValue {
                m: self.m1 + h * (d0 * (t * t * t - 2.0 * t * t + t) + d1 * (t * t * t - t * t)),
                dm: d0 * (3.0 * t * t - 4.0 * t + 1.0) + d1 * (3.0 * t * t - 2.0 * t),
                ddm: (d0 * (6.0 * t - 4.0) + d1 * (6.0 * t - 2.0)) / h,
            }
        } else if r <= self.r3 {
            MassValue { m: self.m1 + self.slope * (r - self.r2), dm: self.slope, ddm: 0.0 }
        } else {
            let gap = self.m_inf - self.m3;
            let c = self.tail_rate;
            let q = 1.0 + c * (r - self.r3);
            MassValue { m: self.m_inf - gap / q, dm: gap * c / (q * q), ddm: -2.0 * gap * c * c / (q * q * q) }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MassProfile {
    Zero,
    Constant {
        m0: f64,
    },
    /// `m(r) = m_inf − c/r`, an asymptotic model used away from the origin.
    AsymptoticTail {
        m_inf: f64,
        c: f64,
    },
    Construction(ConstructionProfile),
}

impl MassProfile {
    pub fn eval(&self, r: f64) -> MassValue {
        match self {
            MassProfile::Zero => MassValue::default(),
            MassProfile::Constant { m0 } => MassValue { m: *m0, dm: 0.0, ddm: 0.0 },
            MassProfile::AsymptoticTail { m_inf, c } => {
                MassValue { m: m_inf - c / r, dm: c / (r * r), ddm: -2.0 * c / (r * r * r) }
            }
            MassProfile::Construction(p) => p.eval(r),
        }
    }

    pub fn m(&self, r: f64) -> f64 {
        self.eval(r).m
    }

    pub fn limit(&self) -> f64 {
        match self {
            MassProfile::Zero => 0.0,
            MassProfile::Constant { m0 } => *m0,
            MassProfile::AsymptoticTail { m_inf, .. } => *m_inf,
            MassProfile::Construction(p) => p.m_inf,
        }
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            MassProfile::Construction(p) => vec![p.r1, p.r2, p.r3],
            _ => Vec::new(),
        }
    }
}

/// Fiber parameter as a function of the radius.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Schedule {
    Constant {
        s: f64,
    },
    /// `s = 1` on `[0, r2]`, `s = (r3 − r)/(r3 − r2)` on `[r2, r3]`, `s = 0` beyond.
    Linear {
        r2: f64,
        r3: f64,
    },
}

/// `s(r)`, `ds/dr` and `d²s/dr²`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScheduleValue {
    pub s: f64,
    pub rate: f64,
    pub accel: f64,
}

impl Schedule {
    pub fn eval(&self, r: f64) -> ScheduleValue {
        match *self {
            Schedule::Constant { s } => ScheduleValue { s, rate: 0.0, accel: 0.0 },
            Schedule::Linear { r2, r3 } => {
                if r <= r2 {
                    ScheduleValue { s: 1.0, rate: 0.0, accel: 0.0 }
                } else if r >= r3 {
                    ScheduleValue { s: 0.0, rate: 0.0, accel: 0.0 }
                } else {
                    ScheduleValue { s: (r3 - r) / (r3 - r2), rate: -1.0 / (r3 - r2), accel: 0.0 }
                }
            }
        }
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        match *self {
            Schedule::Constant { .. } => Vec::new(),
            Schedule::Linear { r2, r3 } => vec![r2, r3],
        }
    }

    /// Radius beyond which the fiber metric no longer changes.
    pub fn settles_at(&self) -> f64 {
        match *self {
            Schedule::Constant { .. } => 0.0,
            Schedule::Linear { r3, .. } => r3,
        }
    }
}

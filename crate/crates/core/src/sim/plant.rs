use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::quantizer::SystemParams;
use crate::rational::{int, to_f64, Interval, Rational};

/// Number of grid steps used when drawing rationals uniformly.
pub const DEFAULT_GRID: u32 = 1000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Disturbance {
    /// Explicit values, repeated cyclically.
    Fixed(Vec<Rational>),
    /// Uniform on the grid `-Ω/2 + Ω k / grid`, `k = 0..=grid`.
    SeededUniform { grid: u32 },
    /// `+Ω/2, -Ω/2, +Ω/2, ...`.
    Extremal,
}

impl Disturbance {
    pub fn name(&self) -> &'static str {
        match self {
            Disturbance::Fixed(_) => "fixed",
            Disturbance::SeededUniform { .. } => "seeded-uniform",
            Disturbance::Extremal => "extremal",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trajectory {
    pub states: Vec<Rational>,
    pub disturbances: Vec<Rational>,
    pub policy: String,
}

impl Trajectory {
    /// Checks `x(0) ∈ I0`, `|w| ≤ Ω/2` and the recursion, exactly.
    pub fn validate(&self, params: &SystemParams) -> Result<()> {
        let first = self
            .states
            .first()
            .ok_or_else(|| Error::Contract("empty trajectory".into()))?;
        if !params.i0.contains(first) {
            return Err(Error::Contract(format!("x(0) = {first} outside I0")));
        }
        if self.disturbances.len() + 1 != self.states.len() {
            return Err(Error::Contract("trajectory lengths disagree".into()));
        }
        let d = params.disturbance();
        for (t, w) in self.disturbances.iter().enumerate() {
            if !d.contains(w) {
                return Err(Error::Contract(format!("w({t}) = {w} outside {d}")));
            }
            if self.states[t + 1] != &params.lambda * &self.states[t] + w {
                return Err(Error::Contract(format!("recursion broken at t = {t}")));
            }
        }
        Ok(())
    }

    pub fn states_f64(&self) -> Vec<f64> {
        self.states.iter().map(to_f64).collect()
    }
}

/// Uniform grid point of `interval` drawn from `rng`.
pub fn grid_point(interval: &Interval, grid: u32, rng: &mut ChaCha8Rng) -> Rational {
    let k = rng.random_range(0..=grid);
    interval.lo() + interval.len() * int(k as i64) / int(grid as i64)
}

/// Runs the plant for `horizon` steps from `x0`, returning `horizon + 1` states.
pub fn simulate_plant(
    params: &SystemParams,
    x0: Rational,
    horizon: usize,
    policy: &Disturbance,
    seed: u64,
) -> Result<Trajectory> {
    if !params.i0.contains(&x0) {
        return Err(Error::InvalidInput(format!(
            "x(0) = {x0} outside I0 = {}",
            params.i0
        )));
    }
    let d = params.disturbance();
    if let Disturbance::Fixed(ws) = policy {
        if ws.is_empty() && horizon > 0 {
            return Err(Error::InvalidInput(
                "fixed disturbance sequence is empty".into(),
            ));
        }
        if let Some(w) = ws.iter().find(|w| !d.contains(w)) {
            return Err(Error::InvalidInput(format!("disturbance {w} outside {d}")));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut states = Vec::with_capacity(horizon + 1);
    let mut disturbances = Vec::with_capacity(horizon);
    states.push(x0);
    for t in 0..horizon {
        let w = match policy {
            Disturbance::Fixed(ws) => ws[t % ws.len()].clone(),
            Disturbance::SeededUniform { grid } => grid_point(&d, (*grid).max(1), &mut rng),
            Disturbance::Extremal if params.omega.is_zero() => Rational::zero(),
            Disturbance::Extremal => {
                if t % 2 == 0 {
                    d.hi().clone()
                } else {
                    d.lo().clone()
                }
            }
        };
        let next = &params.lambda * &states[t] + &w;
        states.push(next);
        disturbances.push(w);
    }
    Ok(Trajectory {
        states,
        disturbances,
        policy: policy.name().to_string(),
    })
}

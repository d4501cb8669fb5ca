//! Adaptive M-level quantizer for `x(t+1) = λx(t) + w(t)`, `|w| ≤ Ω/2`,
//! `x(0) ∈ I0`, computed exactly over rationals.
//!
//! The cell of a message prefix `m(0:t)` is the interval `P(m(0:t))`. Its
//! successor interval `λP + [-Ω/2, Ω/2]` is split into `M` equal parts to
//! give the cells of the children.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, int, pow, Interval, Rational};

/// Plant parameters: expansion `lambda > 1`, disturbance range `omega >= 0`
/// and initial interval `i0`, with `|i0| + omega > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemParams {
    pub lambda: Rational,
    pub omega: Rational,
    pub i0: Interval,
}

impl SystemParams {
    pub fn new(lambda: Rational, omega: Rational, i0: Interval) -> Result<Self> {
        if lambda <= Rational::one() {
            return Err(Error::InvalidInput(format!(
                "lambda must exceed 1, got {lambda}"
            )));
        }
        if omega.is_negative() {
            return Err(Error::InvalidInput(format!(
                "omega must be nonnegative, got {omega}"
            )));
        }
        if (i0.len() + &omega).is_zero() {
            return Err(Error::InvalidInput("|I0| + omega must be positive".into()));
        }
        Ok(Self { lambda, omega, i0 })
    }

    /// Parses decimal or fractional text exactly.
    pub fn parse(lambda: &str, omega: &str, i0: (&str, &str)) -> Result<Self> {
        Self::new(
            rational::parse(lambda)?,
            rational::parse(omega)?,
            Interval::parse(i0.0, i0.1)?,
        )
    }

    pub fn lambda_f64(&self) -> f64 {
        rational::to_f64(&self.lambda)
    }

    /// `[-Ω/2, Ω/2]`.
    pub fn disturbance(&self) -> Interval {
        Interval::symmetric(&self.omega / int(2))
    }

    /// Parameters of the plant observed every `n` steps:
    /// `(λⁿ, Ω(λⁿ−1)/(λ−1), I0)`.
    pub fn sampled(&self, n: usize) -> Result<SystemParams> {
        if n == 0 {
            return Err(Error::Precondition(
                "sampling period must be at least 1".into(),
            ));
        }
        let ln = pow(&self.lambda, n as u32);
        let omega = &self.omega * (&ln - Rational::one()) / (&self.lambda - Rational::one());
        SystemParams::new(ln, omega, self.i0.clone())
    }

    /// Outer bound on `x(t)`: `λᵗ I0 + [-Ω/2, Ω/2] (λᵗ−1)/(λ−1)`.
    pub fn reachable_interval(&self, t: usize) -> Interval {
        let lt = pow(&self.lambda, t as u32);
        let growth = (&lt - Rational::one()) / (&self.lambda - Rational::one());
        self.i0.scale(&lt).add(&self.disturbance().scale(&growth))
    }
}

/// Cell of a message prefix. The root has an empty prefix and stands for
/// the initial interval itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuantizerCell {
    pub prefix: Vec<usize>,
    pub p: Interval,
    pub xhat: Rational,
    pub length: Rational,
    pub next_interval: Interval,
}

impl QuantizerCell {
    /// Time index `t` of the last message; `None` for the root.
    pub fn time(&self) -> Option<usize> {
        self.prefix.len().checked_sub(1)
    }
}

impl fmt::Display for QuantizerCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = self.p.to_f64_pair();
        let prefix: Vec<String> = self.prefix.iter().map(usize::to_string).collect();
        write!(
            f,
            "P({}) = {} ~ [{lo:.6}, {hi:.6}], xhat = {}",
            prefix.join(","),
            self.p,
            self.xhat
        )
    }
}

#[derive(Clone, Debug)]
pub struct Quantizer {
    params: SystemParams,
    levels: usize,
    levels_q: Rational,
}

impl Quantizer {
    pub fn new(params: SystemParams, levels: usize) -> Result<Self> {
        if levels < 2 {
            return Err(Error::InvalidInput(
                "quantizer needs at least 2 levels".into(),
            ));
        }
        Ok(Self {
            params,
            levels,
            levels_q: int(levels as i64),
        })
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn root(&self) -> QuantizerCell {
        let i0 = self.params.i0.clone();
        QuantizerCell {
            prefix: Vec::new(),
            xhat: i0.mid(),
            length: i0.len(),
            p: i0.clone(),
            next_interval: i0,
        }
    }

    /// `P(i)` for the `m`-th of `M` equal parts of `interval`.
    fn part(&self, interval: &Interval, m: usize) -> Interval {
        let step = interval.len() / &self.levels_q;
        let lo = interval.lo() + &step * int(m as i64);
        let hi = &lo + &step;
        Interval::new(lo, hi).expect("nonnegative step")
    }

    pub fn child(&self, cell: &QuantizerCell, m: usize) -> Result<QuantizerCell> {
        if m >= self.levels {
            return Err(Error::InvalidInput(format!(
                "message {m} out of range for {} levels",
                self.levels
            )));
        }
        let p = self.part(&cell.next_interval, m);
        let next_interval = p.scale(&self.params.lambda).add(&self.params.disturbance());
        let mut prefix = cell.prefix.clone();
        prefix.push(m);
        Ok(QuantizerCell {
            prefix,
            xhat: p.mid(),
            length: p.len(),
            p,
            next_interval,
        })
    }

    pub fn cell(&self, prefix: &[usize]) -> Result<QuantizerCell> {
        prefix
            .iter()
            .try_fold(self.root(), |cell, &m| self.child(&cell, m))
    }

    /// Messages whose child cell contains `x`; two of them exactly on an
    /// internal boundary.
    pub fn quantize(&self, x: &Rational, cell: &QuantizerCell) -> Result<Vec<usize>> {
        if !cell.next_interval.contains(x) {
            return Err(Error::Contract(format!(
                "state {x} outside the feasible interval {}",
                cell.next_interval
            )));
        }
        Ok((0..self.levels)
            .filter(|&m| self.part(&cell.next_interval, m).contains(x))
            .collect())
    }

    fn m_minus_lambda(&self) -> Result<Rational> {
        let d = &self.levels_q - &self.params.lambda;
        if d.is_zero() {
            return Err(Error::Precondition(
                "the number of levels equals lambda".into(),
            ));
        }
        Ok(d)
    }

    /// Closed-form cell length at time `t`:
    /// `(λ/M)ᵗ (|I0|/M − Ω/(M−λ)) + Ω/(M−λ)`.
    pub fn cell_length(&self, t: usize) -> Result<Rational> {
        let d = self.m_minus_lambda()?;
        let fixed = &self.params.omega / d;
        let ratio = &self.params.lambda / &self.levels_q;
        Ok(pow(&ratio, t as u32) * (self.params.i0.len() / &self.levels_q - &fixed) + fixed)
    }

    /// `max{|I0|/M, Ω/(M−λ)}`, the supremum of the cell lengths for `M > λ`.
    pub fn sup_length(&self) -> Result<Rational> {
        let d = self.m_minus_lambda()?;
        if d.is_negative() {
            return Err(Error::Precondition(
                "cell lengths are unbounded when M < lambda".into(),
            ));
        }
        let a = self.params.i0.len() / &self.levels_q;
        let b = &self.params.omega / d;
        Ok(if a >= b { a } else { b })
    }

    /// Length of the interval split at time `t`: `|I0|` for `t = 0` and
    /// `λℓ_{t−1} + Ω` afterwards.
    pub fn split_length(&self, t: usize) -> Result<Rational> {
        if t == 0 {
            Ok(self.params.i0.len())
        } else {
            Ok(&self.params.lambda * self.cell_length(t - 1)? + &self.params.omega)
        }
    }

    /// `((2m+1)/M − 1)`, the relative position of part `m`.
    pub fn unit_offset(&self, m: usize) -> Rational {
        int(2 * m as i64 + 1) / &self.levels_q - Rational::one()
    }

    /// Displacement of the midpoint at time `t` for message `m`:
    /// `x̂_t = λ x̂_{t−1} + offset` for `t ≥ 1`, `x̂_0 = mid(I0) + offset`.
    pub fn step_offset(&self, t: usize, m: usize) -> Result<Rational> {
        Ok(self.split_length(t)? / int(2) * self.unit_offset(m))
    }

    /// Midpoint of `P(m(0:t))` from its closed form.
    pub fn midpoint_closed_form(&self, prefix: &[usize]) -> Result<Rational> {
        let Some(t) = prefix.len().checked_sub(1) else {
            return Ok(self.params.i0.mid());
        };
        let d = self.m_minus_lambda()?;
        let lam = &self.params.lambda;
        let mq = &self.levels_q;
        let coeff = &self.params.omega * mq / d;
        let len0 = self.params.i0.len();
        let mut sum = Rational::zero();
        let mut inv_l = Rational::one();
        let mut inv_m = Rational::one();
        for &m in prefix {
            let weight = &coeff * (&inv_l - &inv_m) + &len0 * &inv_m;
            sum += weight * self.unit_offset(m);
            inv_l /= lam;
            inv_m /= mq;
        }
        Ok(pow(lam, t as u32) * (self.params.i0.mid() + sum / int(2)))
    }

    /// `Ω/(M−λ)·(M−1)/(λ−1) + ℓ_T`.
    pub fn separation_threshold(&self, horizon: usize) -> Result<Rational> {
        let d = self.m_minus_lambda()?;
        if d.is_negative() {
            return Err(Error::Precondition("separation requires M > lambda".into()));
        }
        let p = &self.params;
        Ok(
            &p.omega / d * (&self.levels_q - Rational::one()) / (&p.lambda - Rational::one())
                + self.cell_length(horizon)?,
        )
    }

    /// Whether two midpoints at time `horizon` are far enough apart for all
    /// their same-suffix descendants to stay interior-disjoint.
    pub fn separation_test(&self, x1: &Rational, x2: &Rational, horizon: usize) -> Result<bool> {
        Ok(rational::abs_diff(x1, x2) >= self.separation_threshold(horizon)?)
    }

    /// Cells `m_ξ(0:jT−1)` for every `ξ ∈ {0..γ−1}^j`, where on block `i`
    /// the message at time `s` is the `ξ(i)`-th entry of `menus[s]`.
    pub fn separated_family(
        &self,
        menus: &[Vec<usize>],
        horizon: usize,
        j: usize,
    ) -> Result<Vec<(Vec<usize>, QuantizerCell)>> {
        if horizon == 0 || j == 0 {
            return Err(Error::Precondition(
                "block horizon and depth must be positive".into(),
            ));
        }
        let len = horizon * j;
        if menus.len() < len {
            return Err(Error::Precondition(format!(
                "{} menus given, {len} needed",
                menus.len()
            )));
        }
        let gamma = menus[0].len();
        if gamma == 0 || menus[..len].iter().any(|m| m.len() != gamma) {
            return Err(Error::Precondition(
                "menus must share a positive size".into(),
            ));
        }
        let mut out = Vec::with_capacity(gamma.pow(j as u32));
        for code in 0..gamma.pow(j as u32) {
            let xi = crate::channel::word_from_index(code, gamma, j);
            let prefix: Vec<usize> = (0..len).map(|s| menus[s][xi[s / horizon]]).collect();
            out.push((xi, self.cell(&prefix)?));
        }
        Ok(out)
    }
}

/// Least integer `T` with
/// `T ≥ 1 + (log(M−1) + log(M+λ−1) − log(M−λ)) / log λ`.
pub fn disjoint_block_horizon(levels: usize, lambda: f64) -> Result<usize> {
    let m = levels as f64;
    if !(lambda > 1.0) || m <= lambda {
        return Err(Error::Precondition("need M > lambda > 1".into()));
    }
    let bound =
        1.0 + ((m - 1.0).log2() + (m + lambda - 1.0).log2() - (m - lambda).log2()) / lambda.log2();
    Ok(bound.ceil().max(1.0) as usize)
}

/// `⌈1 + log M/(n log λ) + (log(M+λⁿ) − log(M−λⁿ))/(n log λ)⌉`.
pub fn block_horizon(levels: usize, lambda: f64, n: usize) -> Result<usize> {
    let m = levels as f64;
    let ln = lambda.powi(n as i32);
    if !(lambda > 1.0) || n == 0 || m <= ln {
        return Err(Error::Precondition(
            "need M > lambda^n and lambda > 1".into(),
        ));
    }
    let scale = n as f64 * lambda.log2();
    let value = 1.0 + m.log2() / scale + ((m + ln).log2() - (m - ln).log2()) / scale;
    Ok(value.ceil() as usize)
}

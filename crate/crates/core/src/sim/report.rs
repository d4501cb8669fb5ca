//! Rates, bounds and security verdicts computed from a transcript.

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::quantizer::{block_horizon, Quantizer, SystemParams};
use crate::rational::{self, int, pow, to_f64, Rational};

use super::scheme::Transcript;

/// `(log2(M+λⁿ) − log2(M−λⁿ)) / n`.
pub fn eps_n(levels: usize, lambda: f64, n: usize) -> f64 {
    let m = levels as f64;
    let ln = lambda.powi(n as i32);
    ((m + ln).log2() - (m - ln).log2()) / n as f64
}

/// The two lower bounds on the volume growth rate:
/// `Γ + log2 λ − R` without noise and `Γ log2 λ / (R + 2 log2 λ + ε_n)` with.
pub fn volume_rate_bounds(levels: usize, gamma: usize, lambda: f64, n: usize) -> (f64, f64) {
    let r = (levels as f64).log2() / n as f64;
    let g = (gamma as f64).log2() / n as f64;
    let ll = lambda.log2();
    (
        g + ll - r,
        g * ll / (r + 2.0 * ll + eps_n(levels, lambda, n)),
    )
}

/// The branch of [`volume_rate_bounds`] that applies to `params`.
pub fn applicable_bound(params: &SystemParams, levels: usize, gamma: usize, n: usize) -> f64 {
    let (zero, positive) = volume_rate_bounds(levels, gamma, params.lambda_f64(), n);
    if params.omega.is_zero() {
        zero
    } else {
        positive
    }
}

/// Least-squares slope of `ys` against `xs`.
pub fn regression_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Two message sequences that differ only in the first message.
#[derive(Clone, Debug)]
pub struct DivergenceWitness {
    pub first: (usize, usize),
    /// `(time, exact midpoint distance)` at every sample time.
    pub distances: Vec<(usize, Rational)>,
    /// Regression slope of `log2` distance against time.
    pub slope: f64,
}

/// Follows `first.0` and `first.1` at block 0 and then the same messages
/// `tail`, recording the exact distance between the two midpoints.
pub fn divergence_witness(
    q: &Quantizer,
    n: usize,
    first: (usize, usize),
    tail: &[usize],
) -> Result<DivergenceWitness> {
    if first.0 == first.1 {
        return Err(Error::Precondition("witness messages must differ".into()));
    }
    let mut a = q.child(&q.root(), first.0)?;
    let mut b = q.child(&q.root(), first.1)?;
    let mut distances = vec![(0, rational::abs_diff(&a.xhat, &b.xhat))];
    for (k, &m) in tail.iter().enumerate() {
        a = q.child(&a, m)?;
        b = q.child(&b, m)?;
        distances.push(((k + 1) * n, rational::abs_diff(&a.xhat, &b.xhat)));
    }
    let slope = if distances.len() >= 2 {
        let xs: Vec<f64> = distances.iter().map(|(t, _)| *t as f64).collect();
        let ys: Vec<f64> = distances.iter().map(|(_, d)| rational::log2(d)).collect();
        regression_slope(&xs, &ys)
    } else {
        f64::NAN
    };
    Ok(DivergenceWitness {
        first,
        distances,
        slope,
    })
}

/// A guaranteed lower bound on the eavesdropper volume at one block.
#[derive(Clone, Debug)]
pub struct CertifiedPoint {
    pub block: usize,
    pub time: usize,
    pub certified: Rational,
    pub measured: Rational,
}

impl CertifiedPoint {
    pub fn holds(&self) -> bool {
        self.measured >= self.certified
    }
}

#[derive(Clone, Debug)]
pub struct RateReport {
    pub r: f64,
    pub gamma_rate: f64,
    pub eps_n: f64,
    pub bound_zero_noise: f64,
    pub bound_noise: f64,
    pub bound: f64,
    /// `(t, log2(volume(t)) / t)` at sample times `t > 0`.
    pub empirical: Vec<(usize, f64)>,
    pub ratios: Vec<(usize, f64)>,
    pub d_rate: Option<f64>,
    pub kappa: Option<f64>,
    pub max_error: f64,
    pub reliability_violations: usize,
    pub block_horizon: Option<usize>,
    pub certified: Vec<CertifiedPoint>,
    pub witness: Option<DivergenceWitness>,
}

impl RateReport {
    pub fn d_secure_trend(&self) -> bool {
        self.witness.as_ref().is_some_and(|w| w.slope > 0.0)
    }

    pub fn v_certified(&self) -> bool {
        self.certified.iter().all(CertifiedPoint::holds)
    }
}

impl fmt::Display for RateReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "R = {:.6}, Gamma = {:.6}, eps_n = {:.6}",
            self.r, self.gamma_rate, self.eps_n
        )?;
        writeln!(
            f,
            "volume rate bound = {:.6} (noiseless branch {:.6}, noisy branch {:.6})",
            self.bound, self.bound_zero_noise, self.bound_noise
        )?;
        if let Some(&(t, rate)) = self.empirical.last() {
            writeln!(
                f,
                "empirical rate at t={t}: {rate:.6} (ratio {:.6})",
                rate / self.bound
            )?;
        }
        if let Some(d) = self.d_rate {
            writeln!(f, "diameter growth rate: {d:.6}")?;
        }
        if let Some(w) = &self.witness {
            writeln!(
                f,
                "divergence witness m(0) = {} vs {}: slope {:.9}",
                w.first.0, w.first.1, w.slope
            )?;
        }
        match self.kappa {
            Some(k) => writeln!(
                f,
                "max sample error {:.6} vs kappa/2 = {:.6}: {} violations",
                self.max_error,
                k / 2.0,
                self.reliability_violations
            )?,
            None => writeln!(
                f,
                "max sample error {:.6} (M <= lambda^n, no bound)",
                self.max_error
            )?,
        }
        let held = self.certified.iter().filter(|c| c.holds()).count();
        write!(
            f,
            "certified volume points: {held}/{} hold",
            self.certified.len()
        )
    }
}

/// Rates, bounds, divergence witness and certified volume points.
pub fn security_report(tr: &Transcript) -> Result<RateReport> {
    let lambda = tr.params.lambda_f64();
    let (m, g, n) = (tr.levels, tr.gamma, tr.n);
    let (bound_zero_noise, bound_noise) = volume_rate_bounds(m, g, lambda, n);
    let bound = applicable_bound(&tr.params, m, g, n);
    let reliable = tr.kappa.is_some();

    let mut empirical = Vec::new();
    let mut diam = (Vec::new(), Vec::new());
    for b in &tr.blocks {
        if b.time > 0 {
            empirical.push((b.time, rational::log2(&b.eve_volume) / b.time as f64));
        }
        diam.0.push(b.time as f64);
        diam.1.push(rational::log2(&b.eve_diameter));
    }
    let ratios = empirical.iter().map(|&(t, r)| (t, r / bound)).collect();
    let d_rate = (diam.0.len() >= 2).then(|| regression_slope(&diam.0, &diam.1));

    let q = Quantizer::new(tr.params.sampled(n)?, m)?;
    let horizon = if reliable {
        block_horizon(m, lambda, n).ok()
    } else {
        None
    };
    let mut certified = Vec::new();
    for b in &tr.blocks {
        let length = q.cell_length(b.k)?;
        let value = if tr.params.omega.is_zero() {
            pow(&int(g as i64), b.k as u32 + 1) * length
        } else if let Some(h) = horizon {
            if (b.k + 1) % h != 0 {
                continue;
            }
            pow(&int(g as i64), ((b.k + 1) / h) as u32) * length
        } else {
            continue;
        };
        certified.push(CertifiedPoint {
            block: b.k,
            time: b.time,
            certified: value,
            measured: b.eve_volume.clone(),
        });
    }

    let witness = match tr.blocks.first() {
        Some(b0) if b0.menu.len() >= 2 => {
            let tail: Vec<usize> = tr.blocks[1..].iter().map(|b| b.message).collect();
            let first = (b0.menu[0], *b0.menu.last().unwrap());
            Some(divergence_witness(&q, n, first, &tail)?)
        }
        _ => None,
    };

    let max_error = tr.blocks.iter().map(|b| to_f64(&b.err)).fold(0.0, f64::max);
    Ok(RateReport {
        r: (m as f64).log2() / n as f64,
        gamma_rate: (g as f64).log2() / n as f64,
        eps_n: eps_n(m, lambda, n),
        bound_zero_noise,
        bound_noise,
        bound,
        empirical,
        ratios,
        d_rate,
        kappa: tr.kappa.as_ref().map(to_f64),
        max_error,
        reliability_violations: tr.reliability_violations(),
        block_horizon: horizon,
        certified,
        witness,
    })
}

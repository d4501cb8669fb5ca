use num_traits::One;

use crate::error::{Error, Result};
use crate::quantizer::{Quantizer, SystemParams};
use crate::rational::{pow, Interval, Rational};

use super::plant::Trajectory;

/// A plant trajectory whose state at every sample time `kn` lies in the cell
/// of `prefix[..=k]` for the `n`-sampled quantizer with `levels` levels.
///
/// Feasible sample states are found backwards from the last cell; going
/// forwards, each sample state is the feasible point nearest to the cell
/// midpoint. Disturbances inside a block are all equal.
pub fn witness_path(
    params: &SystemParams,
    levels: usize,
    n: usize,
    prefix: &[usize],
) -> Result<Trajectory> {
    if prefix.is_empty() {
        return Err(Error::InvalidInput("empty message prefix".into()));
    }
    let sampled = params.sampled(n)?;
    let q = Quantizer::new(sampled.clone(), levels)?;
    let mut cells = Vec::with_capacity(prefix.len());
    let mut cell = q.root();
    for &m in prefix {
        cell = q.child(&cell, m)?;
        cells.push(cell.clone());
    }

    let inv = Rational::one() / &sampled.lambda;
    let dn = sampled.disturbance();
    let mut feasible: Vec<Interval> = vec![cells.last().unwrap().p.clone(); cells.len()];
    for k in (0..cells.len() - 1).rev() {
        let pre = feasible[k + 1].add(&dn).scale(&inv);
        feasible[k] = cells[k]
            .p
            .intersect(&pre)
            .ok_or_else(|| Error::Contract(format!("no feasible state for block {k}")))?;
    }

    let mut samples = Vec::with_capacity(cells.len());
    samples.push(feasible[0].clamp(&cells[0].xhat));
    for k in 1..cells.len() {
        let reach = Interval::point(&sampled.lambda * &samples[k - 1]).add(&dn);
        let allowed = feasible[k]
            .intersect(&reach)
            .ok_or_else(|| Error::Contract(format!("steering failed at block {k}")))?;
        samples.push(allowed.clamp(&cells[k].xhat));
    }

    // w_j = w^(n) (λ−1)/(λⁿ−1) on every step of the block.
    let share = if n == 1 {
        Rational::one()
    } else {
        (&params.lambda - Rational::one()) / (pow(&params.lambda, n as u32) - Rational::one())
    };
    let mut states = vec![samples[0].clone()];
    let mut disturbances = Vec::new();
    for k in 1..samples.len() {
        let block_w = &samples[k] - &sampled.lambda * &samples[k - 1];
        let w = &block_w * &share;
        for _ in 0..n {
            let x = &params.lambda * states.last().unwrap() + &w;
            states.push(x);
            disturbances.push(w.clone());
        }
        if states.last() != Some(&samples[k]) {
            return Err(Error::Contract(
                "block disturbance split is inconsistent".into(),
            ));
        }
    }
    let tr = Trajectory {
        states,
        disturbances,
        policy: "witness".into(),
    };
    tr.validate(params)?;
    Ok(tr)
}

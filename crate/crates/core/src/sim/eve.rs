//! What the eavesdropper can infer: the exact set of quantizer midpoints
//! consistent with the messages it cannot rule out, and the volume and
//! diameter of the state set those midpoints span.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::quantizer::Quantizer;
use crate::rational::{int, Rational};

/// Default cap on the number of candidate midpoints.
pub const DEFAULT_DEDUP_CAP: usize = 1 << 25;
/// Default enumeration depth used to certify the closed form.
pub const DEFAULT_CHECK_DEPTH: usize = 22;

#[derive(Clone, Debug)]
enum Numerators {
    Small(Vec<i128>),
    Big(Vec<BigInt>),
}

impl Numerators {
    fn len(&self) -> usize {
        match self {
            Numerators::Small(v) => v.len(),
            Numerators::Big(v) => v.len(),
        }
    }

    fn to_big(&self) -> Vec<BigInt> {
        match self {
            Numerators::Small(v) => v.iter().map(|&x| BigInt::from(x)).collect(),
            Numerators::Big(v) => v.clone(),
        }
    }
}

/// Summary of a candidate set at one block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EveStats {
    pub count: usize,
    pub length: Rational,
    pub volume: Rational,
    pub diameter: Rational,
    /// True when no gap between neighbouring candidates exceeds the length.
    pub gap_free: bool,
}

/// Eavesdropper knowledge, updated once per block of the sampled system.
/// Candidates are stored as integer numerators over one shared denominator.
#[derive(Clone, Debug)]
pub struct EveState {
    q: Quantizer,
    cap: usize,
    menus: Vec<Vec<usize>>,
    den: BigInt,
    nums: Numerators,
    stats: Option<EveStats>,
}

impl EveState {
    pub fn new(q: Quantizer, cap: usize) -> Self {
        let mid = q.params().i0.mid();
        let den = mid.denom().clone();
        let nums = match mid.numer().to_i128() {
            Some(v) => Numerators::Small(vec![v]),
            None => Numerators::Big(vec![mid.numer().clone()]),
        };
        Self {
            q,
            cap,
            menus: Vec::new(),
            den,
            nums,
            stats: None,
        }
    }

    pub fn quantizer(&self) -> &Quantizer {
        &self.q
    }

    /// Index of the last processed block.
    pub fn block(&self) -> Option<usize> {
        self.menus.len().checked_sub(1)
    }

    pub fn menus(&self) -> &[Vec<usize>] {
        &self.menus
    }

    pub fn stats(&self) -> Option<&EveStats> {
        self.stats.as_ref()
    }

    pub fn count(&self) -> usize {
        self.nums.len()
    }

    pub fn candidates(&self) -> Vec<Rational> {
        self.nums
            .to_big()
            .into_iter()
            .map(|n| Rational::new(n, self.den.clone()))
            .collect()
    }

    /// Extends every candidate prefix by every message of `menu`.
    pub fn update(&mut self, menu: &[usize]) -> Result<()> {
        if menu.is_empty() {
            return Err(Error::Contract("eavesdropper menu is empty".into()));
        }
        let k = self.menus.len();
        let requested = self.nums.len() as u128 * menu.len() as u128;
        if requested > self.cap as u128 {
            return Err(Error::cap(
                "eavesdropper candidates (switch eve_mode to symmetric)",
                requested,
                self.cap as u128,
            ));
        }
        let offsets = menu
            .iter()
            .map(|&m| self.q.step_offset(k, m))
            .collect::<Result<Vec<_>>>()?;
        let (a, b) = if k == 0 {
            (BigInt::one(), BigInt::one())
        } else {
            let l = &self.q.params().lambda;
            (l.numer().clone(), l.denom().clone())
        };
        let q_all = offsets
            .iter()
            .fold(BigInt::one(), |acc, o| acc.lcm(o.denom()));
        let old = &b * &self.den;
        let new_den = old.lcm(&q_all);
        let factor = &a * (&new_den / &old);
        let adds: Vec<BigInt> = offsets
            .iter()
            .map(|o| o.numer() * (&new_den / o.denom()))
            .collect();

        let small = match &self.nums {
            Numerators::Small(v) => advance_small(v, &factor, &adds),
            Numerators::Big(_) => None,
        };
        self.nums = match small {
            Some(v) => Numerators::Small(v),
            None => {
                let mut out = Vec::with_capacity(requested as usize);
                for x in self.nums.to_big() {
                    let base = &x * &factor;
                    out.extend(adds.iter().map(|c| &base + c));
                }
                out.sort_unstable();
                out.dedup();
                Numerators::Big(out)
            }
        };
        self.den = new_den;
        self.menus.push(menu.to_vec());
        self.stats = Some(self.compute_stats(k)?);
        Ok(())
    }

    fn compute_stats(&self, k: usize) -> Result<EveStats> {
        let length = self.q.cell_length(k)?;
        let threshold = (&length * Rational::from_integer(self.den.clone()))
            .floor()
            .to_integer();
        let den = Rational::from_integer(self.den.clone());
        let small = match &self.nums {
            Numerators::Small(v) => gaps_small(v, &threshold),
            Numerators::Big(_) => None,
        };
        let (covered, wide, span, gap_free) = match small {
            Some(r) => r,
            None => gaps_big(&self.nums.to_big(), &threshold),
        };
        let volume = Rational::from_integer(covered) / &den + int(wide as i64 + 1) * &length;
        let diameter = Rational::from_integer(span) / &den + &length;
        Ok(EveStats {
            count: self.nums.len(),
            length,
            volume,
            diameter,
            gap_free,
        })
    }
}

fn advance_small(v: &[i128], factor: &BigInt, adds: &[BigInt]) -> Option<Vec<i128>> {
    let f = factor.to_i128()?;
    let cs: Vec<i128> = adds.iter().map(|c| c.to_i128()).collect::<Option<_>>()?;
    let mut out = Vec::with_capacity(v.len() * cs.len());
    for &x in v {
        let base = x.checked_mul(f)?;
        for &c in &cs {
            out.push(base.checked_add(c)?);
        }
    }
    out.sort_unstable();
    out.dedup();
    Some(out)
}

/// (sum of gaps ≤ threshold, number of wider gaps, max − min, gap-free).
fn gaps_small(v: &[i128], threshold: &BigInt) -> Option<(BigInt, usize, BigInt, bool)> {
    let thr = threshold.to_i128()?;
    let mut covered: i128 = 0;
    let mut wide = 0;
    for w in v.windows(2) {
        let g = w[1].checked_sub(w[0])?;
        if g <= thr {
            covered = covered.checked_add(g)?;
        } else {
            wide += 1;
        }
    }
    let span = v.last()?.checked_sub(*v.first()?)?;
    Some((BigInt::from(covered), wide, BigInt::from(span), wide == 0))
}

fn gaps_big(v: &[BigInt], threshold: &BigInt) -> (BigInt, usize, BigInt, bool) {
    let mut covered = BigInt::zero();
    let mut wide = 0;
    for w in v.windows(2) {
        let g = &w[1] - &w[0];
        if &g <= threshold {
            covered += g;
        } else {
            wide += 1;
        }
    }
    let span = v.last().unwrap() - v.first().unwrap();
    (covered, wide, span, wide == 0)
}

/// Checks that all menus are translates of the first one and returns the
/// spread `max − min` shared by all of them.
pub fn certify_translates(menus: &[Vec<usize>]) -> Result<usize> {
    let first = menus
        .first()
        .ok_or_else(|| Error::Precondition("no eavesdropper menus to compare".into()))?;
    let shape = |m: &[usize]| -> Vec<usize> { m.iter().map(|&x| x - m[0]).collect() };
    let reference = shape(first);
    for m in menus {
        if m.is_empty() || shape(m) != reference {
            return Err(Error::Precondition(format!(
                "menus {first:?} and {m:?} are not translates; use enumerate mode"
            )));
        }
    }
    Ok(first.last().unwrap() - first[0])
}

/// Proof that the closed form gives the exact volume from block `start` on.
///
/// Blocks before `start` are enumerated and kept. From `start` on the
/// candidate set stays gap-free: if neighbouring candidates are at most
/// `ℓ_{k−1}` apart, then after scaling by `λ` and adding the `s+1` offsets
/// (spaced `ℓ_k` apart) they are at most `ℓ_k` apart whenever
/// `(s+1) ℓ_k ≥ λ ℓ_{k−1}`. That condition is linear in `ℓ_{k−1}` and the
/// lengths are monotone, so it is checked at `ℓ_{start−1}` and at the limit.
#[derive(Clone, Debug)]
pub struct SymmetricCertificate {
    pub spread: usize,
    pub start: usize,
    pub prefix: Vec<EveStats>,
}

/// Closed-form eavesdropper volume for a translation-invariant scheme:
/// the candidate range obeys `r_k = λ r_{k−1} + ℓ_k Δ`, `r_0 = ℓ_0 Δ`, and
/// the volume is `r_k + ℓ_k` once no gap is open.
#[derive(Clone, Debug)]
pub struct SymmetricEve {
    q: Quantizer,
    cert: SymmetricCertificate,
    spread: Rational,
    range: Rational,
    next: usize,
}

impl SymmetricEve {
    pub fn new(q: Quantizer, cert: SymmetricCertificate) -> Self {
        Self {
            q,
            spread: int(cert.spread as i64),
            cert,
            range: Rational::zero(),
            next: 0,
        }
    }

    /// Advances by one block and returns `(volume, diameter, length)`.
    pub fn advance(&mut self) -> Result<(Rational, Rational, Rational)> {
        let k = self.next;
        let length = self.q.cell_length(k)?;
        let step = &length * &self.spread;
        self.range = if k == 0 {
            step
        } else {
            &self.q.params().lambda * &self.range + step
        };
        self.next += 1;
        let diameter = &self.range + &length;
        match self.cert.prefix.get(k) {
            Some(s) if k < self.cert.start => Ok((s.volume.clone(), diameter, length)),
            _ => Ok((diameter.clone(), diameter, length)),
        }
    }
}

fn gap_step_holds(q: &Quantizer, spread: usize, prev_length: &Rational) -> bool {
    let p = q.params();
    let next = (&p.lambda * prev_length + &p.omega) / int(q.levels() as i64);
    int(spread as i64 + 1) * next >= &p.lambda * prev_length
}

fn persists_from(q: &Quantizer, spread: usize, k: usize) -> Result<bool> {
    if spread == 0 || spread + 1 >= q.levels() {
        return Ok(true);
    }
    let p = q.params();
    let m = int(q.levels() as i64);
    if m <= p.lambda {
        return Ok(false);
    }
    let limit = &p.omega / (&m - &p.lambda);
    let from = if k == 0 {
        None
    } else {
        Some(q.cell_length(k - 1)?)
    };
    Ok(gap_step_holds(q, spread, &limit) && from.is_none_or(|l| gap_step_holds(q, spread, &l)))
}

/// Certifies the closed form for the menu `representative`: enumerates
/// blocks `0..=depth`, finds the first gap-free block from which the gap
/// bound provably persists, and checks the closed form exactly on every
/// enumerated block after it.
pub fn certify_symmetric(
    q: &Quantizer,
    representative: &[usize],
    depth: usize,
    cap: usize,
) -> Result<SymmetricCertificate> {
    let spread = certify_translates(&[representative.to_vec()])?;
    let consecutive = representative.windows(2).all(|w| w[1] == w[0] + 1);
    if !consecutive && spread > 0 {
        return Err(Error::Precondition(format!(
            "menu {representative:?} has holes; the closed form needs consecutive messages, use enumerate mode"
        )));
    }
    let mut eve = EveState::new(q.clone(), cap);
    let mut prefix = Vec::new();
    let mut start = None;
    for k in 0..=depth {
        eve.update(representative)?;
        let stats = eve.stats().unwrap().clone();
        if start.is_none() && stats.gap_free && persists_from(q, spread, k + 1)? {
            start = Some(k);
        }
        prefix.push(stats);
    }
    let start = start.ok_or_else(|| {
        Error::Precondition(format!(
            "candidate gaps do not provably close within {depth} blocks; use enumerate mode"
        ))
    })?;
    let cert = SymmetricCertificate {
        spread,
        start,
        prefix,
    };
    let mut closed = SymmetricEve::new(q.clone(), cert.clone());
    for (k, stats) in cert.prefix.iter().enumerate() {
        let (volume, diameter, _) = closed.advance()?;
        if stats.volume != volume || stats.diameter != diameter {
            return Err(Error::Contract(format!(
                "closed-form volume disagrees with enumeration at block {k}"
            )));
        }
    }
    Ok(cert)
}

/// Closed-form volumes for blocks `0..horizon`.
pub fn symmetric_volumes(
    q: &Quantizer,
    cert: &SymmetricCertificate,
    horizon: usize,
) -> Result<Vec<Rational>> {
    let mut s = SymmetricEve::new(q.clone(), cert.clone());
    (0..horizon).map(|_| s.advance().map(|v| v.0)).collect()
}

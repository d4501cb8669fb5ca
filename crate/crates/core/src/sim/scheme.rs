//! The block transmission scheme: sample, quantize, encode with a wiretap
//! code, pass through both channels, decode, and track the eavesdropper.

use std::io::Write;

use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channel::WiretapChannel;
use crate::codes::{is_zero_error, wiretap_gamma, WiretapCode};
use crate::error::{Error, Result};
use crate::quantizer::{Quantizer, SystemParams};
use crate::rational::{to_f64, Rational};

use super::eve::{self, EveState, SymmetricEve, DEFAULT_CHECK_DEPTH, DEFAULT_DEDUP_CAP};
use super::plant::Trajectory;
use super::report;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundaryPolicy {
    LowestIndex,
    SeededRandom,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChannelPolicy {
    SeededUniform,
    AdversarialFirst,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EveMode {
    Enumerate,
    Symmetric,
}

#[derive(Clone, Debug)]
pub struct SchemeConfig {
    pub params: SystemParams,
    pub n: usize,
    pub channel: WiretapChannel,
    pub code: WiretapCode,
    /// Quantizer message `m` is sent with code class `msg_to_class[m]`.
    pub msg_to_class: Vec<usize>,
    /// Number of blocks.
    pub horizon: usize,
    pub seed: u64,
    pub boundary: BoundaryPolicy,
    pub channel_policy: ChannelPolicy,
    pub eve_mode: EveMode,
    pub dedup_cap: usize,
    pub check_depth: usize,
}

impl SchemeConfig {
    /// Defaults: identity message map, lowest-index boundaries, uniform
    /// channel noise, exact enumeration.
    pub fn new(
        params: SystemParams,
        channel: WiretapChannel,
        code: WiretapCode,
        horizon: usize,
    ) -> Self {
        let m = code.message_count();
        Self {
            params,
            n: code.blocklength(),
            channel,
            code,
            msg_to_class: (0..m).collect(),
            horizon,
            seed: 0,
            boundary: BoundaryPolicy::LowestIndex,
            channel_policy: ChannelPolicy::SeededUniform,
            eve_mode: EveMode::Enumerate,
            dedup_cap: DEFAULT_DEDUP_CAP,
            check_depth: DEFAULT_CHECK_DEPTH,
        }
    }

    pub fn levels(&self) -> usize {
        self.code.message_count()
    }

    /// The quantizer of the `n`-sampled system.
    pub fn quantizer(&self) -> Result<Quantizer> {
        Quantizer::new(self.params.sampled(self.n)?, self.levels())
    }

    /// Checks the code and the message map; returns the measured `γ`.
    pub fn validate(&self) -> Result<usize> {
        if self.code.blocklength() != self.n {
            return Err(Error::InvalidInput(format!(
                "code blocklength {} differs from n = {}",
                self.code.blocklength(),
                self.n
            )));
        }
        let m = self.levels();
        let mut seen = vec![false; m];
        if self.msg_to_class.len() != m
            || self
                .msg_to_class
                .iter()
                .any(|&c| c >= m || std::mem::replace(&mut seen[c], true))
        {
            return Err(Error::InvalidInput(
                "msg_to_class must be a permutation".into(),
            ));
        }
        if !is_zero_error(&self.code, &self.channel.tb) {
            return Err(Error::InvalidInput(
                "code is not zero-error for the receiver".into(),
            ));
        }
        let gamma = wiretap_gamma(&self.code, &self.channel.tc);
        if gamma < 2 {
            return Err(Error::InvalidInput(format!(
                "code is not a wiretap code (gamma = {gamma})"
            )));
        }
        Ok(gamma)
    }

    fn class_to_msg(&self) -> Vec<usize> {
        let mut inv = vec![0; self.msg_to_class.len()];
        for (m, &c) in self.msg_to_class.iter().enumerate() {
            inv[c] = m;
        }
        inv
    }

    /// Messages the eavesdropper cannot exclude after seeing `c_word`.
    pub fn eve_menu(&self, c_word: &[usize]) -> Vec<usize> {
        (0..self.levels())
            .filter(|&m| {
                self.code
                    .class(self.msg_to_class[m])
                    .iter()
                    .any(|w| self.channel.tc.word_permits(w, c_word))
            })
            .collect()
    }

    /// Menus for every eavesdropper block the code can produce.
    pub fn all_menus(&self) -> Vec<Vec<usize>> {
        let mut menus: Vec<Vec<usize>> = self
            .code
            .codewords()
            .flat_map(|w| self.channel.tc.word_outputs(w))
            .map(|c| self.eve_menu(&c))
            .collect();
        menus.sort();
        menus.dedup();
        menus
    }
}

/// Eavesdropper columns at a sample time.
#[derive(Clone, Debug, PartialEq)]
pub struct EveColumns {
    pub candidates: Option<usize>,
    pub volume: f64,
    pub diameter: f64,
    pub empirical_rate: Option<f64>,
    pub bound: f64,
    pub ratio: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub t: usize,
    pub x: f64,
    pub xhat: f64,
    pub err: f64,
    pub eve: Option<EveColumns>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlockRecord {
    pub k: usize,
    pub time: usize,
    pub x: Rational,
    pub message: usize,
    pub codeword: Vec<usize>,
    pub b_word: Vec<usize>,
    pub c_word: Vec<usize>,
    pub decoded: usize,
    pub xhat: Rational,
    pub err: Rational,
    /// `|x((k+1)n) − λⁿ x̂(kn)|`, when the trajectory reaches that time.
    pub err_delivery: Option<Rational>,
    pub menu: Vec<usize>,
    pub eve_count: Option<usize>,
    pub eve_length: Rational,
    pub eve_volume: Rational,
    pub eve_diameter: Rational,
}

#[derive(Clone, Debug)]
pub struct Transcript {
    pub params: SystemParams,
    pub n: usize,
    pub levels: usize,
    pub gamma: usize,
    pub eve_mode: EveMode,
    pub kappa: Option<Rational>,
    pub rows: Vec<Row>,
    pub blocks: Vec<BlockRecord>,
}

impl Transcript {
    pub fn reliability_violations(&self) -> usize {
        match &self.kappa {
            Some(kappa) => {
                let half = kappa / crate::rational::int(2);
                self.blocks.iter().filter(|b| b.err > half).count()
            }
            None => 0,
        }
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(CSV_HEADER)?;
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for r in &self.rows {
            let mut rec = vec![
                r.t.to_string(),
                r.x.to_string(),
                r.xhat.to_string(),
                r.err.to_string(),
            ];
            match &r.eve {
                Some(e) => rec.extend([
                    e.candidates.map(|c| c.to_string()).unwrap_or_default(),
                    e.volume.to_string(),
                    e.diameter.to_string(),
                    opt(e.empirical_rate),
                    e.bound.to_string(),
                    opt(e.ratio),
                ]),
                None => rec.extend(std::iter::repeat_n(String::new(), 6)),
            }
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }
}

pub const CSV_HEADER: [&str; 10] = [
    "t",
    "x",
    "xhat",
    "err",
    "eve_candidates",
    "eve_volume",
    "eve_diameter",
    "empirical_rate",
    "bound",
    "ratio",
];

fn pick<'a, T>(items: &'a [T], random: bool, rng: &mut ChaCha8Rng) -> &'a T {
    if random && items.len() > 1 {
        &items[rng.random_range(0..items.len())]
    } else {
        &items[0]
    }
}

enum Tracker {
    Exact(Box<EveState>),
    Closed(Box<SymmetricEve>),
}

/// Runs `config.horizon` blocks against `trajectory`.
pub fn run_scheme(config: &SchemeConfig, trajectory: &Trajectory) -> Result<Transcript> {
    let gamma = config.validate()?;
    let n = config.n;
    let needed = config.horizon * n;
    if config.horizon > 0 && trajectory.states.len() < needed {
        return Err(Error::InvalidInput(format!(
            "trajectory has {} states, {needed} needed",
            trajectory.states.len()
        )));
    }
    let q = config.quantizer()?;
    let lambda = config.params.lambda.clone();
    let lambda_n = q.params().lambda.clone();
    let levels = config.levels();
    let reliable = crate::rational::int(levels as i64) > lambda_n;
    let kappa = if reliable {
        Some(q.sup_length()?)
    } else {
        None
    };
    let bound = report::applicable_bound(&config.params, levels, gamma, n);

    let mut tracker = match config.eve_mode {
        EveMode::Enumerate => Tracker::Exact(Box::new(EveState::new(q.clone(), config.dedup_cap))),
        EveMode::Symmetric => {
            let menus = config.all_menus();
            eve::certify_translates(&menus)?;
            let cert = eve::certify_symmetric(&q, &menus[0], config.check_depth, config.dedup_cap)?;
            Tracker::Closed(Box::new(SymmetricEve::new(q.clone(), cert)))
        }
    };

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let random_channel = config.channel_policy == ChannelPolicy::SeededUniform;
    let class_to_msg = config.class_to_msg();
    let mut cell = q.root();
    let mut rows = Vec::with_capacity(needed);
    let mut blocks = Vec::with_capacity(config.horizon);

    for k in 0..config.horizon {
        let time = k * n;
        let x = trajectory.states[time].clone();
        let candidates = q.quantize(&x, &cell)?;
        let message = *pick(
            &candidates,
            config.boundary == BoundaryPolicy::SeededRandom,
            &mut rng,
        );
        let class = config.msg_to_class[message];
        let codeword = pick(config.code.class(class), random_channel, &mut rng).clone();
        let b_word: Vec<usize> = codeword
            .iter()
            .map(|&a| *pick(config.channel.tb.outputs(a), random_channel, &mut rng))
            .collect();
        let c_word: Vec<usize> = codeword
            .iter()
            .map(|&a| *pick(config.channel.tc.outputs(a), random_channel, &mut rng))
            .collect();

        let matches: Vec<usize> = (0..levels)
            .filter(|&c| {
                config
                    .code
                    .class(c)
                    .iter()
                    .any(|w| config.channel.tb.word_permits(w, &b_word))
            })
            .collect();
        if matches.len() != 1 {
            return Err(Error::Contract(format!(
                "receiver output at block {k} matches {} classes",
                matches.len()
            )));
        }
        let decoded = class_to_msg[matches[0]];
        if decoded != message {
            return Err(Error::Contract(format!(
                "decoded {decoded} instead of {message}"
            )));
        }
        cell = q.child(&cell, decoded)?;
        let xhat = cell.xhat.clone();
        let err = (&x - &xhat).abs();

        let menu = config.eve_menu(&c_word);
        if menu.len() < gamma {
            return Err(Error::Contract(format!(
                "eavesdropper menu {menu:?} smaller than gamma = {gamma}"
            )));
        }
        let (eve_count, eve_length, eve_volume, eve_diameter) = match &mut tracker {
            Tracker::Exact(state) => {
                state.update(&menu)?;
                let s = state.stats().unwrap();
                (
                    Some(s.count),
                    s.length.clone(),
                    s.volume.clone(),
                    s.diameter.clone(),
                )
            }
            Tracker::Closed(closed) => {
                let (v, d, l) = closed.advance()?;
                (None, l, v, d)
            }
        };
        let reach = config.params.reachable_interval(time).len();
        if eve_volume > reach {
            return Err(Error::Contract(format!(
                "eavesdropper volume exceeds the envelope at block {k}"
            )));
        }

        let delivery = (k + 1) * n;
        let err_delivery = trajectory
            .states
            .get(delivery)
            .map(|xd| (xd - &lambda_n * &xhat).abs());

        let volume_f = to_f64(&eve_volume);
        let empirical_rate = (time > 0).then(|| crate::rational::log2(&eve_volume) / time as f64);
        let mut grow = Rational::one();
        for j in 0..n {
            let t = time + j;
            let est = &xhat * &grow;
            let xt = &trajectory.states[t];
            let eve = (j == 0).then(|| EveColumns {
                candidates: eve_count,
                volume: volume_f,
                diameter: to_f64(&eve_diameter),
                empirical_rate,
                bound,
                ratio: empirical_rate.map(|r| r / bound),
            });
            rows.push(Row {
                t,
                x: to_f64(xt),
                xhat: to_f64(&est),
                err: to_f64(&(xt - &est).abs()),
                eve,
            });
            grow *= &lambda;
        }

        blocks.push(BlockRecord {
            k,
            time,
            x,
            message,
            codeword,
            b_word,
            c_word,
            decoded,
            xhat,
            err,
            err_delivery,
            menu,
            eve_count,
            eve_length,
            eve_volume,
            eve_diameter,
        });
    }

    Ok(Transcript {
        params: config.params.clone(),
        n,
        levels,
        gamma,
        eve_mode: config.eve_mode,
        kappa,
        rows,
        blocks,
    })
}

#![allow(dead_code)]

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use zewlab::rational::{ratio, Interval, Rational};
use zewlab::{Alphabet, SystemParams, UncertainChannel, WiretapChannel};

pub fn names(prefix: &str, k: usize) -> Vec<String> {
    (1..=k).map(|i| format!("{prefix}{i}")).collect()
}

/// A channel from per-input output bitmasks (zero masks become `1`).
pub fn channel_from_masks(masks: &[u8], outputs: usize, out_prefix: &str) -> UncertainChannel {
    let input = Alphabet::new(names("a", masks.len())).unwrap();
    let output = Alphabet::new(names(out_prefix, outputs)).unwrap();
    let rel = masks
        .iter()
        .map(|&m| {
            let m = if m == 0 { 1 } else { m };
            (0..outputs).filter(|b| m >> b & 1 == 1).collect()
        })
        .collect();
    UncertainChannel::new(input, output, rel).unwrap()
}

pub fn arb_channel(max_in: usize, max_out: usize) -> impl Strategy<Value = UncertainChannel> {
    (1..=max_in, 1..=max_out).prop_flat_map(|(k, o)| {
        prop::collection::vec(1u8..(1u8 << o), k).prop_map(move |m| channel_from_masks(&m, o, "b"))
    })
}

/// A wiretap pair on `2..=max_in` inputs.
pub fn arb_pair(max_in: usize, max_out: usize) -> impl Strategy<Value = WiretapChannel> {
    (2..=max_in, 1..=max_out, 1..=max_out).prop_flat_map(|(k, ob, oc)| {
        (
            prop::collection::vec(1u8..(1u8 << ob), k),
            prop::collection::vec(1u8..(1u8 << oc), k),
        )
            .prop_map(move |(mb, mc)| {
                WiretapChannel::new(
                    "random",
                    channel_from_masks(&mb, ob, "b"),
                    channel_from_masks(&mc, oc, "c"),
                )
                .unwrap()
            })
    })
}

pub fn random_pair(rng: &mut ChaCha8Rng, max_in: usize, max_out: usize) -> WiretapChannel {
    let k = rng.random_range(2..=max_in);
    let ob = rng.random_range(1..=max_out);
    let oc = rng.random_range(1..=max_out);
    let mb: Vec<u8> = (0..k).map(|_| rng.random_range(1..(1u8 << ob))).collect();
    let mc: Vec<u8> = (0..k).map(|_| rng.random_range(1..(1u8 << oc))).collect();
    WiretapChannel::new(
        "random",
        channel_from_masks(&mb, ob, "b"),
        channel_from_masks(&mc, oc, "c"),
    )
    .unwrap()
}

/// `a ↦ ⋃_{b ∈ u1(a)} u2(b)` by set unions.
pub fn compose_oracle(u1: &UncertainChannel, u2: &UncertainChannel) -> Vec<BTreeSet<usize>> {
    (0..u1.input().len())
        .map(|a| {
            u1.outputs(a)
                .iter()
                .flat_map(|&b| u2.outputs(b).iter().copied())
                .collect()
        })
        .collect()
}

/// All words of length `n` over `k` symbols, first symbol most significant.
pub fn words(k: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..k).map(move |s| {
                    let mut v = w.clone();
                    v.push(s);
                    v
                })
            })
            .collect();
    }
    out
}

/// Outputs of a word: every combination of per-symbol outputs.
pub fn word_outputs_oracle(u: &UncertainChannel, w: &[usize]) -> BTreeSet<Vec<usize>> {
    let mut out: BTreeSet<Vec<usize>> = [vec![]].into();
    for &a in w {
        out = out
            .iter()
            .flat_map(|p| {
                u.outputs(a).iter().map(move |&b| {
                    let mut v = p.clone();
                    v.push(b);
                    v
                })
            })
            .collect();
    }
    out
}

pub fn index(w: &[usize], k: usize) -> usize {
    w.iter().fold(0, |acc, &s| acc * k + s)
}

/// Input pairs with intersecting output sets.
pub fn confusable(u: &UncertainChannel, a: usize, b: usize) -> bool {
    u.outputs(a).iter().any(|x| u.outputs(b).contains(x))
}

/// Largest zero-error code at blocklength one by subset enumeration.
pub fn zero_error_oracle(u: &UncertainChannel) -> usize {
    let k = u.input().len();
    (0u32..1 << k)
        .filter(|s| {
            (0..k).all(|a| {
                (0..k).all(|b| a == b || s >> a & 1 == 0 || s >> b & 1 == 0 || !confusable(u, a, b))
            })
        })
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap()
}

/// `γ` of an assignment input ↦ class (or unused); `None` if not zero-error.
pub fn assignment_gamma(wt: &WiretapChannel, label: &[Option<usize>]) -> Option<usize> {
    let k = label.len();
    for a in 0..k {
        for b in 0..k {
            if let (Some(x), Some(y)) = (label[a], label[b]) {
                if x != y && confusable(&wt.tb, a, b) {
                    return None;
                }
            }
        }
    }
    let mut gamma = usize::MAX;
    for c in 0..wt.tc.output().len() {
        let hit: BTreeSet<usize> = (0..k)
            .filter(|&a| wt.tc.permits(a, c))
            .filter_map(|a| label[a])
            .collect();
        if !hit.is_empty() {
            gamma = gamma.min(hit.len());
        }
    }
    Some(gamma)
}

/// Largest wiretap code at blocklength one, over every assignment of inputs
/// to classes; 1 when none exists.
pub fn wiretap_oracle(wt: &WiretapChannel, singleton_only: bool) -> usize {
    let k = wt.inputs().len();
    let base = k + 1;
    let mut best = 1;
    for code in 0..base.pow(k as u32) {
        let mut c = code;
        let mut label = vec![None; k];
        for slot in label.iter_mut() {
            let d = c % base;
            c /= base;
            if d > 0 {
                *slot = Some(d - 1);
            }
        }
        let used: BTreeSet<usize> = label.iter().flatten().copied().collect();
        let m = used.len();
        if m < 2 || m <= best {
            continue;
        }
        if singleton_only
            && used
                .iter()
                .any(|&l| label.iter().filter(|x| **x == Some(l)).count() > 1)
        {
            continue;
        }
        if assignment_gamma(wt, &label).is_some_and(|g| g >= 2) {
            best = m;
        }
    }
    best
}

pub fn small_rational(
    num: std::ops::RangeInclusive<i64>,
    den: i64,
) -> impl Strategy<Value = Rational> {
    num.prop_map(move |p| ratio(p, den))
}

/// Parameters with `1 < λ < M`, `Ω ≥ 0` and a nondegenerate `I0`.
pub fn arb_params() -> impl Strategy<Value = (SystemParams, usize)> {
    (2usize..=5)
        .prop_flat_map(|m| {
            let max_num = (m as i64) * 10 - 1;
            (
                Just(m),
                11i64..=max_num.min(30),
                0i64..=20,
                -20i64..=0,
                1i64..=20,
            )
        })
        .prop_map(|(m, l, w, lo, width)| {
            let i0 = Interval::new(ratio(lo, 10), ratio(lo + width, 10)).unwrap();
            (
                SystemParams::new(ratio(l, 10), ratio(w, 10), i0).unwrap(),
                m,
            )
        })
}

/// Whether any interval of `a` overlaps the interior of any interval of `b`.
pub fn families_overlap(a: &[Interval], b: &[Interval]) -> bool {
    let mut all: Vec<(&Interval, bool)> = a
        .iter()
        .map(|i| (i, false))
        .chain(b.iter().map(|i| (i, true)))
        .collect();
    all.sort_by(|x, y| x.0.lo().cmp(y.0.lo()));
    let mut reach: [Option<Rational>; 2] = [None, None];
    for (iv, side) in all {
        let other = &reach[usize::from(!side)];
        if other.as_ref().is_some_and(|h| h > iv.lo()) {
            return true;
        }
        let slot = &mut reach[usize::from(side)];
        if slot.as_ref().is_none_or(|h| iv.hi() > h) {
            *slot = Some(iv.hi().clone());
        }
    }
    false
}

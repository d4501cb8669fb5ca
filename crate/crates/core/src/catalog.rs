//! Small reference channels used throughout the examples and tests.

use crate::channel::{UncertainChannel, WiretapChannel};
use crate::codes::WiretapCode;

const A4: [&str; 4] = ["a1", "a2", "a3", "a4"];
const A5: [&str; 5] = ["a1", "a2", "a3", "a4", "a5"];

/// Path-like channel: a1 and a4 are clean, a2 and a3 each straddle two outputs.
pub fn fig2a() -> UncertainChannel {
    UncertainChannel::from_names(
        &A4,
        &["b1", "b2", "b3"],
        &[
            ("a1", &["b1"]),
            ("a2", &["b1", "b2"]),
            ("a3", &["b2", "b3"]),
            ("a4", &["b3"]),
        ],
    )
    .expect("static channel")
}

/// Pair with a three-message wiretap code at blocklength one.
pub fn fig2b() -> WiretapChannel {
    let tb = UncertainChannel::from_names(
        &A4,
        &["b1", "b2", "b3"],
        &[
            ("a1", &["b1"]),
            ("a2", &["b2"]),
            ("a3", &["b2"]),
            ("a4", &["b3"]),
        ],
    )
    .expect("static channel");
    let tc = UncertainChannel::from_names(
        &A4,
        &["c1", "c2"],
        &[
            ("a1", &["c1"]),
            ("a2", &["c1"]),
            ("a3", &["c2"]),
            ("a4", &["c2"]),
        ],
    )
    .expect("static channel");
    WiretapChannel::new("fig2b", tb, tc).expect("static channel")
}

/// The code `{a1}, {a2,a3}, {a4}` for [`fig2b`].
pub fn fig2b_code() -> WiretapCode {
    WiretapCode::new(
        1,
        vec![vec![vec![0]], vec![vec![1], vec![2]], vec![vec![3]]],
    )
    .expect("static code")
}

/// Pair on which elimination needs two rounds.
pub fn fig7() -> WiretapChannel {
    let tb = UncertainChannel::from_names(
        &A5,
        &["b1", "b2", "b3", "b4"],
        &[
            ("a1", &["b1"]),
            ("a2", &["b2"]),
            ("a3", &["b2", "b3"]),
            ("a4", &["b3"]),
            ("a5", &["b4"]),
        ],
    )
    .expect("static channel");
    let tc = UncertainChannel::from_names(
        &A5,
        &["c1", "c2", "c3"],
        &[
            ("a1", &["c1", "c2"]),
            ("a2", &["c2"]),
            ("a3", &["c3"]),
            ("a4", &["c3"]),
            ("a5", &["c3"]),
        ],
    )
    .expect("static channel");
    WiretapChannel::new("fig7", tb, tc).expect("static channel")
}

/// Pair with no wiretap code at blocklength one but four messages at two.
pub fn fig8() -> WiretapChannel {
    let tb = fig2a();
    let tc = UncertainChannel::from_names(
        &A4,
        &["c1", "c2"],
        &[
            ("a1", &["c1"]),
            ("a2", &["c1", "c2"]),
            ("a3", &["c1", "c2"]),
            ("a4", &["c2"]),
        ],
    )
    .expect("static channel");
    WiretapChannel::new("fig8", tb, tc).expect("static channel")
}

/// `{(a3,a1)}, {(a4,a3)}, {(a2,a4)}, {(a1,a2)}` for [`fig8`].
pub fn fig8_code() -> WiretapCode {
    WiretapCode::new(
        2,
        vec![
            vec![vec![2, 0]],
            vec![vec![3, 2]],
            vec![vec![1, 3]],
            vec![vec![0, 1]],
        ],
    )
    .expect("static code")
}

/// Identity receiver and a single eavesdropper output on `k` inputs.
pub fn full_confusion(k: usize) -> WiretapChannel {
    let names: Vec<String> = (1..=k).map(|i| format!("a{i}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let outs: Vec<String> = (1..=k).map(|i| format!("b{i}")).collect();
    let out_refs: Vec<&str> = outs.iter().map(String::as_str).collect();
    let rows_b: Vec<(&str, Vec<&str>)> = refs
        .iter()
        .zip(&out_refs)
        .map(|(a, b)| (*a, vec![*b]))
        .collect();
    let rows_b: Vec<(&str, &[&str])> = rows_b.iter().map(|(a, v)| (*a, v.as_slice())).collect();
    let tb = UncertainChannel::from_names(&refs, &out_refs, &rows_b).expect("static channel");
    let rows_c: Vec<(&str, &[&str])> = refs.iter().map(|a| (*a, &["c"][..])).collect();
    let tc = UncertainChannel::from_names(&refs, &["c"], &rows_c).expect("static channel");
    WiretapChannel::new(format!("full-confusion-{k}"), tb, tc).expect("static channel")
}

/// Looks up a built-in pair by name.
pub fn by_name(name: &str) -> Option<WiretapChannel> {
    match name {
        "fig2b" => Some(fig2b()),
        "fig7" => Some(fig7()),
        "fig8" => Some(fig8()),
        _ => None,
    }
}

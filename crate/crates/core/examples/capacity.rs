//! Secrecy capacity: exact for injective receivers, otherwise by search.

use zewlab::catalog;
use zewlab::codes::{concatenate, dichotomy_check, secrecy_capacity_injective, SearchOptions};

fn main() -> zewlab::Result<()> {
    let wt = catalog::fig7();
    let tb = zewlab::UncertainChannel::identity(wt.inputs());
    let injective = zewlab::WiretapChannel::new("fig7-clean", tb, wt.tc.clone())?;
    println!("{}\n", secrecy_capacity_injective(&injective, 3)?);

    let wt = catalog::fig8();
    let report = dichotomy_check(&wt, 2, &SearchOptions::default())?;
    println!("{report}\n");

    let f = catalog::fig8_code();
    let joined = concatenate(&f, &f, &wt)?;
    println!(
        "code concatenated with itself: n = {}, M = {}, gamma = {:?}",
        joined.blocklength(),
        joined.message_count(),
        joined.gamma
    );
    Ok(())
}

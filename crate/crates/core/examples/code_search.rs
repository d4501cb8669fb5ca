//! Largest zero-error and zero-error wiretap codes for small channels.

use zewlab::catalog;
use zewlab::codes::{search_max_wiretap, search_max_zero_error, SearchOptions};

fn main() -> zewlab::Result<()> {
    let opts = SearchOptions::default();
    let wt = catalog::fig2b();
    let zero = search_max_zero_error(&wt.tb, 1, &opts)?;
    println!("fig2b zero-error: M = {}", zero.value);
    let full = search_max_wiretap(&wt.tb, &wt.tc, 1, &opts)?;
    println!(
        "fig2b wiretap: M = {}, gamma = {}",
        full.value,
        full.gamma()
    );
    if let Some(code) = &full.witness {
        println!("  {}", code.display(wt.inputs()));
    }
    let single = search_max_wiretap(
        &wt.tb,
        &wt.tc,
        1,
        &SearchOptions {
            singleton_only: true,
            ..opts.clone()
        },
    )?;
    println!("fig2b singleton codewords only: M = {}", single.value);

    let wt = catalog::fig8();
    for n in 1..=2 {
        let r = search_max_wiretap(&wt.tb, &wt.tc, n, &opts)?;
        println!("fig8 n={n}: M = {} ({} nodes)", r.value, r.nodes);
        if let Some(code) = &r.witness {
            println!("  {}", code.to_json(wt.inputs()));
        }
    }
    Ok(())
}

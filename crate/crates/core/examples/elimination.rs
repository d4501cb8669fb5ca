//! Iterative removal of inputs the eavesdropper can always pin down.

use zewlab::catalog;
use zewlab::structures::{check_elim_square, eliminate_block};

fn main() -> zewlab::Result<()> {
    let wt = catalog::fig7();
    println!("{}", eliminate_block(&wt.tb, &wt.tc, 1)?);
    println!(
        "blocklength 2 equals the square: {}",
        check_elim_square(&wt.tb, &wt.tc, 2)?
    );

    let wt = catalog::fig8();
    let tr = eliminate_block(&wt.tb, &wt.tc, 1)?;
    println!("fig8: nothing removed = {}", tr.is_empty());
    Ok(())
}

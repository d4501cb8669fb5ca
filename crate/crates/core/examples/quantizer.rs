//! Adaptive quantizer cells, closed forms and separation.

use zewlab::quantizer::{block_horizon, disjoint_block_horizon};
use zewlab::{Quantizer, SystemParams};

fn main() -> zewlab::Result<()> {
    let q = Quantizer::new(SystemParams::parse("1.2", "0.1", ("-1", "1"))?, 3)?;
    for a in 0..3 {
        for b in 0..3 {
            println!("{}", q.cell(&[a, b])?);
        }
    }

    let q = Quantizer::new(SystemParams::parse("1.2", "1.2", ("-1", "1"))?, 3)?;
    let prefix = [2, 0, 1, 1, 2, 0];
    let cell = q.cell(&prefix)?;
    println!(
        "recursion midpoint {} vs closed form {}",
        cell.xhat,
        q.midpoint_closed_form(&prefix)?
    );
    println!(
        "length {} for every t, sup {}",
        q.cell_length(5)?,
        q.sup_length()?
    );
    println!(
        "horizons: disjoint {}, sampled {}",
        disjoint_block_horizon(3, 1.2)?,
        block_horizon(3, 1.2, 1)?
    );
    Ok(())
}

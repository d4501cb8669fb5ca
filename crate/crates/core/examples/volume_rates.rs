//! Long-horizon eavesdropper volume in closed form for the four parameter combinations.

use zewlab::experiments::recipes::{fig5_combos, fig5_curve};

fn main() -> zewlab::Result<()> {
    for p in fig5_combos() {
        let (curve, start) = fig5_curve(&p, 1000, 16)?;
        println!(
            "omega {} I0 {}: ratio(100) = {:.4}, ratio(1000) = {:.4} (exact closed form from t={start})",
            zewlab::rational::to_f64(&p.omega),
            p.i0,
            curve[99],
            curve[999]
        );
    }
    Ok(())
}

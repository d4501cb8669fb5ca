//! The eavesdropper's candidate set after a fixed output sequence.

use zewlab::experiments::recipes::{reference_params, FIG4_SYMBOLS};
use zewlab::sim::EveState;
use zewlab::{catalog, Quantizer};

fn main() -> zewlab::Result<()> {
    let q = Quantizer::new(reference_params(), 3)?;
    let wt = catalog::fig2b();
    let code = catalog::fig2b_code();
    let mut eve = EveState::new(q, 1 << 20);
    for sym in FIG4_SYMBOLS {
        let c = wt.tc.output().require(sym)?;
        let menu: Vec<usize> = (0..3)
            .filter(|&m| code.class(m).iter().any(|w| wt.tc.permits(w[0], c)))
            .collect();
        eve.update(&menu)?;
        let s = eve.stats().unwrap();
        println!(
            "{sym}: messages {menu:?}, {} candidates, volume {:.4}, diameter {:.4}",
            s.count,
            zewlab::rational::to_f64(&s.volume),
            zewlab::rational::to_f64(&s.diameter)
        );
    }
    Ok(())
}

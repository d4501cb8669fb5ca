//! Build channels, compose them and take block powers.

use zewlab::catalog;
use zewlab::structures::{ConfusabilityGraph, EveHypergraph};
use zewlab::UncertainChannel;

fn main() -> zewlab::Result<()> {
    let t = catalog::fig2a();
    println!("T:\n{t}");
    println!("T injective: {}", t.is_injective());
    println!("reverse:\n{}", t.reverse());

    let tt = t.compose(&t.reverse())?;
    println!("T then its reverse:\n{tt}");

    let t2 = t.power(2)?;
    println!(
        "T^2 has {} inputs, {} outputs",
        t2.input().len(),
        t2.output().len()
    );

    let wt = catalog::fig2b();
    println!("G(T_B) edges: {}", ConfusabilityGraph::from_channel(&wt.tb));
    println!("H(T_C) edges: {}", EveHypergraph::from_channel(&wt.tc));

    let id = UncertainChannel::identity(wt.inputs());
    println!("identity injective: {}", id.is_injective());
    Ok(())
}

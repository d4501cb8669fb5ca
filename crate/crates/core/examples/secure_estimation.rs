//! End-to-end run: plant, quantizer, wiretap code, decoder and eavesdropper.

use zewlab::catalog;
use zewlab::experiments::recipes::reference_params;
use zewlab::rational::int;
use zewlab::sim::{
    run_scheme, security_report, simulate_plant, witness_path, BoundaryPolicy, Disturbance,
    SchemeConfig,
};

fn main() -> zewlab::Result<()> {
    let params = reference_params();
    let mut cfg = SchemeConfig::new(params.clone(), catalog::fig2b(), catalog::fig2b_code(), 14);
    cfg.seed = 3;
    cfg.boundary = BoundaryPolicy::SeededRandom;

    let plant = simulate_plant(
        &params,
        int(0),
        14,
        &Disturbance::SeededUniform { grid: 1000 },
        5,
    )?;
    let transcript = run_scheme(&cfg, &plant)?;
    print!("{}", transcript.csv_string()?);
    println!("{}", security_report(&transcript)?);

    let path = witness_path(&params, 3, 1, &[2, 2, 0, 1, 2])?;
    println!(
        "a path producing messages 2,2,0,1,2: {:?}",
        path.states_f64()
    );
    Ok(())
}

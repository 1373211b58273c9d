//! Census of the Seifert surfaces: one surface per boundary datum k, with
//! solver statistics over a sampling grid.

use minitwistor::curve::g2_config;
use minitwistor::jacobian::period_lattice;
use minitwistor::seifert::{boundary_circle, enumerate_seifert, BoundaryData};

fn main() {
    let cfg = g2_config();
    let lat = period_lattice(&cfg).unwrap();
    let g = cfg.genus();
    println!(
        "genus {g}: expecting {} Seifert surfaces",
        BoundaryData::count(g)
    );
    for rep in enumerate_seifert(&lat, 24).unwrap() {
        println!(
            "  k = {}: {}/{} solves, min nullspace gap {:.2e}, max fit residual {:.2e}, max Abel constraint {:.2e}",
            rep.k.k(),
            rep.successes,
            rep.solves,
            rep.min_gap_ratio,
            rep.max_residual,
            rep.max_constraint
        );
    }

    // the boundary circles of the first surface
    let k = BoundaryData::new(g, 1).unwrap();
    for last_prime in [false, true] {
        let bc = boundary_circle(&lat, &k, last_prime, 32).unwrap();
        println!(
            "boundary circle (last_prime = {last_prime}): {} samples, first tangency angles {:?}",
            bc.points.len(),
            bc.tangency_angles[0]
        );
    }
}

//! Geodesic foliations: at a fixed xi the incidence row over two full turns
//! splits into two leaf families, each disjoint and covering the disk.

use minitwistor::curve::g2_config;
use minitwistor::einstein_weyl::foliation_check;
use minitwistor::jacobian::period_lattice;
use minitwistor::seifert::BoundaryData;
use std::f64::consts::PI;

fn main() {
    let cfg = g2_config();
    let lat = period_lattice(&cfg).unwrap();
    let k = BoundaryData::new(cfg.genus(), 1).unwrap();

    for n in 0..4 {
        let xi = 0.37 + 2.0 * PI * n as f64 / 4.0;
        let rep = foliation_check(&lat, &k, xi, 768, 120).unwrap();
        println!("xi = {:.4}", rep.xi_angle);
        for fam in 0..2 {
            println!(
                "  family {fam}: {} leaves, min vertical separation {:.3e}, coverage {:.4} of {} interior cells",
                rep.leaves[fam], rep.min_separation[fam], rep.coverage[fam], rep.interior_cells
            );
        }
    }
}

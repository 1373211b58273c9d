//! Closed spacelike geodesics: trace one family around the cone anchor and
//! run the randomized Zoll certification suite on every surface.

use minitwistor::curve::g2_config;
use minitwistor::einstein_weyl::{geodesic_spacelike, zoll_suite};
use minitwistor::jacobian::period_lattice;
use minitwistor::seifert::BoundaryData;

fn main() {
    let cfg = g2_config();
    let lat = period_lattice(&cfg).unwrap();
    let g = cfg.genus();
    let (a, b) = cfg.k_interval(g + 1);
    let z0 = a + 0.55 * (b - a);
    let w0 = 0.3 * (-cfg.f_real(z0)).sqrt();

    let k = BoundaryData::new(g, 1).unwrap();
    let geo = geodesic_spacelike(&lat, &k, z0, w0, 512).unwrap();
    println!("anchor z0 = {z0:.6}, w0 = {w0:.6}");
    println!("  closure gap after a full turn: {:.3e}", geo.closure_gap);
    println!("  max projective step:           {:.3e}", geo.max_step);
    println!("  min nonadjacent separation:    {:.3e} (simple: {})", geo.min_separation, geo.simple);
    for (idx, prime) in &geo.crossings {
        let axis = if *prime { "rho'" } else { "rho" };
        println!("  axis crossing at sample {idx} on the {axis} axis");
    }

    for kk in 1..=BoundaryData::count(g) {
        let k = BoundaryData::new(g, kk).unwrap();
        let rep = zoll_suite(&lat, &k, 10, 384, 7).unwrap();
        println!(
            "zoll suite k = {kk}: max gap {:.2e}, all simple {}, all crossings {}, min transversality {:.3}",
            rep.max_gap, rep.all_simple, rep.all_crossings, rep.min_transversality
        );
    }
}

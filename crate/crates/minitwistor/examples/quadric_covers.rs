//! Degree-(g+1) quadric covers: designated images of ramification points,
//! real fibers, and the boundary line over a ruling parameter.

use minitwistor::curve::g2_config;
use minitwistor::seifert::BoundaryData;
use minitwistor::surface::{build_line, quadric_cover, ramification_on_t, Cp1};
use num_complex::Complex64;

fn main() {
    let cfg = g2_config();
    let g = cfg.genus();
    let k = BoundaryData::new(g, 1).unwrap();
    let qc = quadric_cover(&cfg, &k, false);

    println!("p     roots -> {:?}", qc.p.roots().iter().map(|z| z.re).collect::<Vec<_>>());
    println!("p_bar roots -> {:?}", qc.p_bar.roots().iter().map(|z| z.re).collect::<Vec<_>>());

    // images of all ramification points under both pencil maps
    for idx in 0..cfg.branch_points().len() {
        let x = ramification_on_t(&cfg, idx);
        let (phi1, phi2) = qc.project(&x);
        println!(
            "  b{idx} (z = {:+.1}): phi1 dist to 0/inf = {:.1e}/{:.1e}, phi2 dist = {:.1e}/{:.1e}",
            x.z.re,
            phi1.dist(&Cp1::zero()),
            phi1.dist(&Cp1::inf()),
            phi2.dist(&Cp1::zero()),
            phi2.dist(&Cp1::inf()),
        );
    }

    // a real fiber has g+1 points fixed by the real structure, one per band
    let a = Complex64::new(0.6, 0.8);
    let fiber = qc.real_fiber(&cfg, a).unwrap();
    println!("real fiber over a = {a}:");
    for x in &fiber {
        println!("  z = {:+.6}, sigma-fixed: {}", x.z.re, x.is_sigma_fixed());
    }

    // the fiber points are the nodes of the boundary line over a
    let (coeffs, nodes) = qc.boundary_section(&cfg, a).unwrap();
    let line = build_line(&cfg, &coeffs, 8).unwrap();
    println!("boundary line kind: {:?}", line.kind);
    let worst = nodes
        .iter()
        .map(|x| line.eval(x).norm())
        .fold(0.0f64, f64::max);
    println!("max |H(node)| over the fiber: {worst:.3e}");
}

//! The conformal structure at a point: Gram matrix of the induced quadratic
//! form on the tangent space, its Lorentzian signature, and causal types of
//! sample directions.

use minitwistor::curve::g2_config;
use minitwistor::einstein_weyl::{causal_type, conformal_metric, ew_chart, signature, EwPoint, EwPosition};
use minitwistor::jacobian::period_lattice;
use minitwistor::seifert::{seifert_point, BoundaryData, Branch};
use minitwistor::surface::build_line;

fn main() {
    let cfg = g2_config();
    let lat = period_lattice(&cfg).unwrap();
    let k = BoundaryData::new(cfg.genus(), 1).unwrap();

    let sp = seifert_point(&lat, &k, 0.9, 4.4, Branch::Plus).unwrap();
    let coeffs = ew_chart(
        &lat,
        &EwPoint { pos: EwPosition::Interior(sp), theta: 0.0 },
    )
    .unwrap();
    let line = build_line(&cfg, &coeffs, 64).unwrap();

    let cm = conformal_metric(&cfg, &line).unwrap();
    println!("Gram matrix (rotation generator normalized to +1):");
    for r in 0..3 {
        println!(
            "  [{:+.6e}, {:+.6e}, {:+.6e}]",
            cm.matrix[(r, 0)],
            cm.matrix[(r, 1)],
            cm.matrix[(r, 2)]
        );
    }
    let (p, n) = signature(&cm.matrix);
    println!("signature: ({p}, {n})");

    // causal type of each basis direction and of a mixture
    for (i, b) in cm.basis.iter().enumerate() {
        let (q, ty) = causal_type(&cfg, &line, b).unwrap();
        println!("  basis direction {i}: Q = {q:+.6e}  -> {ty:?}");
    }
    let mix: Vec<f64> = cm.basis[0]
        .iter()
        .zip(&cm.basis[1])
        .map(|(a, b)| 0.7 * a + 0.3 * b)
        .collect();
    let (q, ty) = causal_type(&cfg, &line, &mix).unwrap();
    println!("  mixed direction:    Q = {q:+.6e}  -> {ty:?}");
}

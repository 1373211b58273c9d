//! Structure of individual minitwistor lines: a regular line built from a
//! Seifert point, and the reducible (irregular) axis configuration.

use minitwistor::curve::g2_config;
use minitwistor::einstein_weyl::{ew_chart, EwPoint, EwPosition};
use minitwistor::jacobian::period_lattice;
use minitwistor::seifert::{seifert_point, BoundaryData, Branch};
use minitwistor::surface::{build_line, LineKind};

fn main() {
    let cfg = g2_config();
    let lat = period_lattice(&cfg).unwrap();
    let k = BoundaryData::new(cfg.genus(), 1).unwrap();

    let sp = seifert_point(&lat, &k, 1.1, 4.0, Branch::Plus).unwrap();
    let coeffs = ew_chart(
        &lat,
        &EwPoint {
            pos: EwPosition::Interior(sp),
            theta: 0.4,
        },
    )
    .unwrap();
    let line = build_line(&cfg, &coeffs, 16).unwrap();
    println!("regular line, kind {:?}, theta {:.4}", line.kind, line.theta);
    println!("  coefficients: {:?}", line.coeffs);
    for (i, n) in line.nodes.iter().enumerate() {
        println!(
            "  node {i}: z = {:.6}, w = {:.6}, y = {:.3e}",
            n.z.re,
            n.w().re,
            n.y().norm()
        );
    }
    let fr = line.frame.as_ref().unwrap();
    println!("  real circle endpoints: z_xi = {:.6}, z_eta = {:.6}", fr.z_xi, fr.z_eta);
    println!("  circle samples: {}", line.real_circle.len());

    let axis = ew_chart(
        &lat,
        &EwPoint {
            pos: EwPosition::Axis {
                k,
                prime: false,
                lambda: 1.4,
            },
            theta: 0.0,
        },
    )
    .unwrap();
    let aline = build_line(&cfg, &axis, 16).unwrap();
    match aline.kind {
        LineKind::Irregular { lambda } => {
            println!("axis line: irregular with conic parameter lambda = {lambda:.6}")
        }
        other => println!("unexpected kind {other:?}"),
    }
}

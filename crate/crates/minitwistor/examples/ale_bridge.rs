//! Bridge between the minitwistor surface and ALE spaces of type A_{2l-1}:
//! the cone xy = prod (z - a_i) with its real structure tau maps onto the
//! surface, intertwining tau with the surface involution sigma.

use minitwistor::ale::{ale_map, ale_point, AleConfig};
use minitwistor::curve::g2_config;
use num_complex::Complex64;

fn main() {
    // odd parity: 2l = 6 branch points, identity on z
    let acfg = AleConfig::new(3, vec![-5.0, -4.0, -2.0, -1.0, 1.0, 2.0], None).unwrap();
    let cfg = acfg.curve_config().unwrap();
    let z = Complex64::new(0.4, 0.7);
    let x = (acfg.rhs(z)).sqrt() * Complex64::new(1.1, -0.2);
    let p = ale_point(&acfg, z, x).unwrap();
    println!("odd l = {}: cone residual {:.3e}", acfg.l(), p.residual(&acfg));
    let s = ale_map(&acfg, &cfg, &p).unwrap();
    println!("  image satisfies the surface equation: {:?}", s.chart);
    let pt = p.tau(&acfg);
    let st = ale_map(&acfg, &cfg, &pt).unwrap();
    let ss = s.sigma();
    let d = (st.z - ss.z).norm() + (st.u - ss.u).norm() + (st.v - ss.v).norm();
    println!("  intertwining defect |F(tau p) - sigma F(p)| = {d:.3e}");

    // even parity: a Moebius shift is needed before the map
    let acfg = AleConfig::new(2, vec![-2.0, -1.0, 1.0, 2.0], Some(-1.5)).unwrap();
    let cfg = acfg.curve_config().unwrap();
    println!(
        "even l = {}: beta = {}, scaling constant c = {:.6}",
        acfg.l(),
        acfg.beta(),
        acfg.c_constant()
    );
    println!(
        "  branch points of the target curve: {:?}",
        cfg.branch_points()
    );
    let z = Complex64::new(0.3, 0.5);
    let x = (acfg.rhs(z)).sqrt() * Complex64::new(0.9, 0.4);
    let p = ale_point(&acfg, z, x).unwrap();
    let s = ale_map(&acfg, &cfg, &p).unwrap();
    let pt = p.tau(&acfg);
    let st = ale_map(&acfg, &cfg, &pt).unwrap();
    let ss = s.sigma();
    let d = (st.z - ss.z).norm() + (st.u - ss.u).norm() + (st.v - ss.v).norm();
    println!("  intertwining defect |F(tau p) - sigma F(p)| = {d:.3e}");

    // both canonical curves agree with the ALE data
    let g2 = g2_config();
    println!("odd-parity target equals G2: {}", g2.branch_points() == [-5.0, -4.0, -2.0, -1.0, 1.0, 2.0]);
}

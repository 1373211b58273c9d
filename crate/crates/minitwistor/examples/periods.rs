//! Period lattices of the three canonical curves, with reality diagnostics.

use minitwistor::curve::{g1_config, g2_config, g3_config};
use minitwistor::jacobian::period_lattice;

fn main() {
    for (name, cfg) in [
        ("G1", g1_config()),
        ("G2", g2_config()),
        ("G3", g3_config()),
    ] {
        let lat = period_lattice(&cfg).unwrap();
        let g = lat.genus();
        println!("{name}: genus {g}, branch points {:?}", cfg.branch_points());
        let mut sum = vec![0.0; g];
        for i in 1..=(g + 1) {
            let p = lat.circle_period(i);
            let re: Vec<f64> = p.iter().map(|v| v.re).collect();
            let im: f64 = p.iter().map(|v| v.im.abs()).fold(0.0, f64::max);
            println!("  circle period {i}: {re:?}  (|Im| <= {im:.2e})");
            for (s, v) in sum.iter_mut().zip(&re) {
                *s += v;
            }
        }
        println!("  sum of circle periods (must vanish): {sum:?}");
        for i in 1..=g {
            let p = lat.a_period(i);
            let im: Vec<f64> = p.iter().map(|v| v.im).collect();
            let re: f64 = p.iter().map(|v| v.re.abs()).fold(0.0, f64::max);
            println!("  A-period {i}: i*{im:?}  (|Re| <= {re:.2e})");
        }
        println!();
    }
}

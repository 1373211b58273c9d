//! The Abel map on the curve: antisymmetry under the cone involution and the
//! closed-form half-period table.

use minitwistor::curve::{g2_config, CurvePoint, Sheet};
use minitwistor::jacobian::{abel, period_lattice, JacPoint};
use num_complex::Complex64;

fn main() {
    let cfg = g2_config();
    let lat = period_lattice(&cfg).unwrap();
    let g = cfg.genus();

    // a(tau p) + a(p) = 0 mod the lattice
    let p = CurvePoint::new(&cfg, Complex64::new(0.3, 0.9), Sheet::Plus);
    let q = p.tau();
    let ap = abel(&lat, &p).unwrap();
    let aq = abel(&lat, &q).unwrap();
    let s = ap.add(&aq);
    println!("a(p)      = {:?} {:?}", ap.x, ap.y);
    println!("a(tau p)  = {:?} {:?}", aq.x, aq.y);
    println!(
        "a(p) + a(tau p) distance from 0: {:.3e}",
        s.dist(&JacPoint::zero(g))
    );

    // half periods: images of the ramification points
    println!("\nramification images (torus coordinates):");
    for (idx, hp) in lat.half_period_table().iter().enumerate() {
        let (i, prime) = (idx / 2 + 1, idx % 2 == 1);
        let label = if prime { format!("r'_{i}") } else { format!("r_{i}") };
        println!("  a({label}) = x {:?}  y {:?}", hp.x, hp.y);
        let dbl = hp.add(hp);
        println!("    doubled distance from 0: {:.3e}", dbl.dist(&JacPoint::zero(g)));
    }
}

//! Dumps special-function values on a pseudo-random grid for external
//! cross-checking.

use relcs_core::specfun::{bessel_k_scaled, confluent_u};

fn main() {
    let mut seed = 0xabcdef0123456789u64;
    let mut next = move |lo: f64, hi: f64| {
        seed ^= seed << 13;
        seed ^= seed >> 7;
        seed ^= seed << 17;
        lo + (hi - lo) * ((seed >> 11) as f64 / (1u64 << 53) as f64)
    };
    for _ in 0..200 {
        let nu = (next(0.0, 3.0)) as u32;
        // log-uniform over [1e-6, 1e4]
        let x = 10f64.powf(next(-6.0, 4.0));
        println!("K {nu} {x:.17e} {:.17e}", bessel_k_scaled(nu, x).unwrap());
    }
    for _ in 0..100 {
        let n = next(0.0, 200.0).floor();
        let z = 10f64.powf(next(-1.0, 2.3010299956639813)); // [0.1, 200]
        let a = if next(0.0, 1.0) < 0.5 { -0.5 } else { 0.5 };
        println!("U {a} {n} {z:.17e} {:.17e}", confluent_u(a, -n, z).unwrap());
    }
}

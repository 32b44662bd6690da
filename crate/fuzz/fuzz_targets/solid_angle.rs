#![no_main]

use libfuzzer_sys::fuzz_target;
use orthoscheme::cones::euler_solid_angle;

fuzz_target!(|data: &[u8]| {
    if data.len() < 72 {
        return;
    }
    let x: Vec<f64> = data
        .chunks_exact(8)
        .take(9)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    let (a, b, c) = ([x[0], x[1], x[2]], [x[3], x[4], x[5]], [x[6], x[7], x[8]]);
    if let Ok(gamma) = euler_solid_angle(a, b, c) {
        if gamma.is_finite() {
            assert!((0.0..=4.0 * std::f64::consts::PI + 1e-12).contains(&gamma));
        }
    }
});

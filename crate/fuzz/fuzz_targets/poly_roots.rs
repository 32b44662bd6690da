#![no_main]

use libfuzzer_sys::fuzz_target;
use orthoscheme::poly::{poly_roots, relative_residual, RESIDUAL_BOUND};

fuzz_target!(|data: &[u8]| {
    let coeffs: Vec<f64> = data
        .chunks_exact(8)
        .take(24)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    if let Ok(roots) = poly_roots(&coeffs) {
        for z in roots {
            if z.re.is_finite() && z.im.is_finite() && z.norm() > 0.0 {
                assert!(relative_residual(&coeffs, z) <= RESIDUAL_BOUND);
            }
        }
    }
});

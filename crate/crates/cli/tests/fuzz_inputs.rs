//! Replays the fuzz corpus, and proptest-generated inputs, through the fuzzed
//! entry points with the fuzz targets' assertions.

use std::f64::consts::PI;
use std::path::PathBuf;

use orthoscheme::cones::euler_solid_angle;
use orthoscheme::poly::{poly_roots, relative_residual, RESIDUAL_BOUND};
use orthoscheme::FaceIndex;
use orthoscheme_cli::parse::{parse_float_list, parse_usize_list, Rays};
use orthoscheme_cli::parse_args;
use proptest::prelude::*;

fn face_index(data: &[u8]) {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(face) = text.parse::<FaceIndex>() {
        let again: FaceIndex = face.to_string().parse().unwrap();
        assert_eq!(again, face);
        assert_eq!(face.gaps().sum::<usize>(), face.extent());
    }
}

fn number_lists(data: &[u8]) {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(xs) = parse_float_list(text) {
            assert!(!xs.is_empty() && xs.iter().all(|x| x.is_finite()));
        }
        if let Ok(ns) = parse_usize_list(text) {
            assert!(ns.iter().all(|&n| n > 0));
        }
        let _ = text.parse::<Rays>();
    }
}

fn cli_args(data: &[u8]) {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = parse_args(std::iter::once("orthoscheme").chain(text.split_whitespace()));
    }
}

fn floats(data: &[u8], max: usize) -> Vec<f64> {
    data.chunks_exact(8)
        .take(max)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect()
}

fn roots(data: &[u8]) {
    let coeffs = floats(data, 24);
    if let Ok(roots) = poly_roots(&coeffs) {
        for z in roots {
            if z.re.is_finite() && z.im.is_finite() && z.norm() > 0.0 {
                assert!(relative_residual(&coeffs, z) <= RESIDUAL_BOUND);
            }
        }
    }
}

fn solid_angle(data: &[u8]) {
    if data.len() < 72 {
        return;
    }
    let x = floats(data, 9);
    if let Ok(g) = euler_solid_angle([x[0], x[1], x[2]], [x[3], x[4], x[5]], [x[6], x[7], x[8]]) {
        if g.is_finite() {
            assert!((0.0..=4.0 * PI + 1e-12).contains(&g));
        }
    }
}

#[test]
fn corpus_replays_cleanly() {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus");
    let targets: [(&str, fn(&[u8])); 5] = [
        ("face_index", face_index),
        ("number_lists", number_lists),
        ("cli_args", cli_args),
        ("poly_roots", roots),
        ("solid_angle", solid_angle),
    ];
    for (name, target) in targets {
        let mut seeds = 0;
        for entry in std::fs::read_dir(root.join(name)).unwrap() {
            target(&std::fs::read(entry.unwrap().path()).unwrap());
            seeds += 1;
        }
        assert!(seeds > 0, "{name} has no seeds");
    }
}

proptest! {
    #[test]
    fn text_targets(s in "[0-9, .e+-]{0,40}|[ -~]{0,40}") {
        face_index(s.as_bytes());
        number_lists(s.as_bytes());
        cli_args(s.as_bytes());
    }

    #[test]
    fn argv_shaped_text(
        words in proptest::collection::vec(
            "iv|gauss|euler|sy|limit|mk|verify|--n|--k|--samples|--seed|--rays|--format|csv|json|--threads|-?[0-9]{1,3}",
            0..8,
        )
    ) {
        cli_args(words.join(" ").as_bytes());
    }

    #[test]
    fn byte_targets(data in proptest::collection::vec(any::<u8>(), 0..200)) {
        roots(&data);
        solid_angle(&data);
    }

    #[test]
    fn float_targets(xs in proptest::collection::vec(-1e3f64..1e3, 2..12)) {
        let bytes: Vec<u8> = xs.iter().flat_map(|x| x.to_le_bytes()).collect();
        roots(&bytes);
        solid_angle(&bytes);
    }
}

#![no_main]

use libfuzzer_sys::fuzz_target;
use orthoscheme::FaceIndex;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(face) = text.parse::<FaceIndex>() {
        let again: FaceIndex = face.to_string().parse().expect("display output parses");
        assert_eq!(again, face);
        assert!(face.indices().windows(2).all(|w| w[0] < w[1]));
        assert_eq!(face.gaps().sum::<usize>(), face.extent());
    }
});

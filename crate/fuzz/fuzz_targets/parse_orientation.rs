#![no_main]

use libfuzzer_sys::fuzz_target;
use surface_flips::cli::resolve_orientation;
use surface_flips::fixtures;
use surface_flips::orientations::enumerate_alpha;
use surface_flips::{Orientation, OutDegreeSpec};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(d) = text.parse::<Orientation>() {
        assert_eq!(d.to_string().parse::<Orientation>().unwrap(), d);
    }
    let g = fixtures::torus_2x2();
    let spec = OutDegreeSpec::parse(&g, "2,2,2,2").unwrap();
    let orients = enumerate_alpha(&g, &spec);
    if let Ok(d) = resolve_orientation(&g, &spec, &orients, text) {
        assert!(d.is_alpha(&g, &spec));
    }
});

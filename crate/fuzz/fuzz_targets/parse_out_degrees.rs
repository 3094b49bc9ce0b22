#![no_main]

use libfuzzer_sys::fuzz_target;
use surface_flips::fixtures;
use surface_flips::orientations::parse_usize_list;
use surface_flips::OutDegreeSpec;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let _ = parse_usize_list(text);
    let g = fixtures::torus_2x2();
    if let Ok(spec) = OutDegreeSpec::parse(&g, text) {
        assert_eq!(spec.values().iter().sum::<usize>(), g.edge_count());
    }
});

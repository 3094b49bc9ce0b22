#![no_main]

use libfuzzer_sys::fuzz_target;
use surface_flips::embedding::dual_graph;
use surface_flips::load_embedding;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(g) = load_embedding(text) else { return };
    let json = serde_json::to_string(&g.to_file()).unwrap();
    assert_eq!(load_embedding(&json).unwrap(), g);
    assert!(dual_graph(&g).is_connected());
    for f in g.faces() {
        let walked = f.boundary.iter().all(|&d| g.face_of(d) == f.id);
        assert!(walked);
    }
});

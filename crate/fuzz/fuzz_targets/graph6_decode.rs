#![no_main]

use libfuzzer_sys::fuzz_target;
use quadfree::graph6;

// Decoding never panics, and whatever decodes re-encodes to the same record.
fuzz_target!(|data: &[u8]| {
    if let Ok(g) = graph6::decode(data) {
        let body = data.strip_prefix(b">>graph6<<").unwrap_or(data);
        let body = body.strip_suffix(b"\n").unwrap_or(body);
        let body = body.strip_suffix(b"\r").unwrap_or(body);
        assert_eq!(graph6::encode(&g).as_bytes(), body);
    }
    let _ = graph6::decode_all(data);
});

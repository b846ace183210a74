//! Fuzzes the run-descriptor decoder. Accepted descriptors must re-serialize
//! to JSON that decodes to the same job; rejected input must come back as an
//! error, never a panic.

#![no_main]

use libfuzzer_sys::fuzz_target;
use moyal::config::RunDescriptor;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(desc) = RunDescriptor::from_json(text) {
        let json = serde_json::to_string(&desc).expect("descriptor must serialize");
        RunDescriptor::from_json(&json).expect("serialized descriptor must decode");
    }
});

#![no_main]

use discordctl::{format_state, parse_state_str, parse_state_text};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(file) = parse_state_text(text) {
        let n: usize = file.dims.iter().product();
        assert_eq!(file.matrix.dim(), n);
    }
    if let Ok(rho) = parse_state_str(text, 1e-10) {
        let again = parse_state_str(&format_state(&rho), 1e-10).expect("formatted state reparses");
        assert_eq!(again.dims(), rho.dims());
    }
});

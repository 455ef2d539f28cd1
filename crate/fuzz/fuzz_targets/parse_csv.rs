#![no_main]

use discordctl::{format_csv, parse_csv};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(rows) = parse_csv(text) {
        let formatted = format_csv(&rows);
        let again = parse_csv(&formatted).expect("formatted table reparses");
        assert_eq!(again.len(), rows.len());
    }
});

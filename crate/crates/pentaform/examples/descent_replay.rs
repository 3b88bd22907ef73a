//! Replay a shipped descent certificate: infinite-order isometries that pin
//! the non-good residue classes down to eigenvector lines, leaving only
//! square-scaled exceptional values.

use std::fs;
use std::path::PathBuf;

use pentaform::cert::{parse_certificate, verify_certificate};

fn main() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../paper-data/certificates");
    for name in ["residue2-descent.json", "case-1-6-parity-descent.json"] {
        let text = fs::read_to_string(dir.join(name)).unwrap();
        let cert = parse_certificate(&text).unwrap();
        println!("{name}:");
        let report = verify_certificate(&cert).unwrap();
        for line in &report.lines {
            println!("  {line}");
        }
        assert!(report.ok);
    }
}

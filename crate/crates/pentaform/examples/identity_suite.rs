//! Check every substitution identity in the shipped corpus by exact
//! multivariate polynomial expansion.

use std::fs;
use std::path::PathBuf;

use pentaform::arith::identity::expand_identity;
use pentaform::cert::{parse_certificate, CertificatePayload};

fn main() {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../paper-data/identities.json");
    let cert = parse_certificate(&fs::read_to_string(path).unwrap()).unwrap();
    let CertificatePayload::Identity(corpus) = cert.payload else {
        panic!("unexpected certificate kind");
    };
    for id in &corpus.identities {
        let holds = expand_identity(id).unwrap();
        println!("{:<32} {}", id.label, if holds { "holds" } else { "FAILS" });
        assert!(holds);
    }
}

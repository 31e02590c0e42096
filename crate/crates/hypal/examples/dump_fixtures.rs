//! Regenerates the shipped fixture documents from the golden suite:
//!
//! ```text
//! cargo run -p hypal --example dump_fixtures -- fixtures
//! ```
//!
//! Writes one hypergroup document per golden entry plus the group
//! documents the `gen` command consumes. The fixture round-trip tests
//! assert the shipped files stay byte-identical to this output.

use std::fs;
use std::path::PathBuf;

use hypal::corpus;
use hypal::document::{serialize_table, GroupDocument};

fn file_stem(name: &str) -> String {
    match name {
        "H2(1/2)" => "h2_1_2".into(),
        "H2(1/4)" => "h2_1_4".into(),
        other => other.to_lowercase(),
    }
}

fn main() {
    let dir: PathBuf = std::env::args()
        .nth(1)
        .expect("usage: dump_fixtures <dir>")
        .into();
    let groups_dir = dir.join("groups");
    fs::create_dir_all(&groups_dir).expect("create fixture directories");

    for entry in corpus::golden_suite() {
        let path = dir.join(format!("{}.json", file_stem(entry.name)));
        fs::write(&path, serialize_table(&entry.table)).expect("write fixture");
        println!("wrote {}", path.display());
    }
    for group in [corpus::z(2), corpus::z(3), corpus::s3(), corpus::d4()] {
        let path = groups_dir.join(format!("{}.json", group.name().to_lowercase()));
        fs::write(&path, GroupDocument::of_group(&group).to_json()).expect("write group fixture");
        println!("wrote {}", path.display());
    }
}

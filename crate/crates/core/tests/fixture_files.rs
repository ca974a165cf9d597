//! Keeps the `.graph` files shipped in the repository's `fixtures/`
//! directory in sync with the built-in constructors.

use std::fs;
use std::path::PathBuf;

use isingpf_core::{fixtures, format};

fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

#[test]
fn fixture_files_match_the_constructors() {
    for (name, g, rot) in fixtures::all_named() {
        let path = fixture_dir().join(format!("{name}.graph"));
        let text = fs::read_to_string(&path).unwrap_or_else(|e| {
            panic!(
                "{}: {e} (regenerate with `cargo test -p isingpf-core --test fixture_files -- --ignored`)",
                path.display()
            )
        });
        assert_eq!(text, format::serialize(&g, &rot), "{name}");
        let (g2, rot2) = format::parse(&text).unwrap();
        assert_eq!(g, g2, "{name}");
        assert_eq!(rot, rot2, "{name}");
    }
}

#[test]
#[ignore = "writes the fixture files; run after changing a constructor"]
fn regenerate_fixture_files() {
    let dir = fixture_dir();
    fs::create_dir_all(&dir).unwrap();
    for (name, g, rot) in fixtures::all_named() {
        fs::write(
            dir.join(format!("{name}.graph")),
            format::serialize(&g, &rot),
        )
        .unwrap();
    }
}

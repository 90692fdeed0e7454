//! The JSON files under `fixtures/` are the on-disk form of the built-in
//! example data. These tests pin the two representations to each other so
//! neither can drift.

use outitude::json;
use outitude::{fixtures, Rational};

fn read(name: &str) -> String {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn the_torus_fixture_files_match_the_library() {
    let torus = fixtures::torus_chart();
    assert_eq!(
        read("torus_surface.json"),
        json::render(&json::surface_to_json(&torus))
    );
    assert_eq!(
        read("torus_alpha0.json"),
        json::render(&json::coords_to_json(&fixtures::torus_alpha0::<Rational>()))
    );
    let parsed = json::surface_from_json(&json::parse(&read("torus_surface.json")).unwrap());
    assert_eq!(parsed.unwrap(), torus);
    let coords = json::coords_from_json::<Rational>(
        &json::parse(&read("torus_alpha0.json")).unwrap(),
        &torus,
    )
    .unwrap();
    assert_eq!(coords, fixtures::torus_alpha0());
}

#[test]
fn the_genus_two_fixture_files_match_the_library() {
    let chart = fixtures::genus2_chart();
    assert_eq!(
        read("genus2_surface.json"),
        json::render(&json::surface_to_json(&chart))
    );
    assert_eq!(
        read("genus2_coords.json"),
        json::render(&json::coords_to_json(&fixtures::genus2_coords::<Rational>()))
    );
    let coords = json::coords_from_json::<Rational>(
        &json::parse(&read("genus2_coords.json")).unwrap(),
        &chart,
    )
    .unwrap();
    assert_eq!(coords, fixtures::genus2_coords());
}

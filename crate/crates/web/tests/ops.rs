use serde_json::Value;
use toric_mld_web::{explore_mld, flat_trace, newton_lct};

const PLANE: &str = r#"{"dim":2,"lattice":{"generators":[]},"boundary":["0","0"]}"#;
const HALF: &str = r#"{"dim":2,"lattice":{"generators":[["1/2","1/2"]]},"boundary":["0","0"]}"#;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn mld_at_point_and_face() {
    let v = parse(explore_mld(HALF, ""));
    assert_eq!(v["ok"]["value"], "1");
    assert_eq!(v["ok"]["oracle"]["value"], "1");
    let v = parse(explore_mld(PLANE, "2"));
    assert_eq!(v["ok"]["value"], "1");
    let v = parse(explore_mld(PLANE, "global"));
    assert_eq!(v["ok"]["value"], "1");
}

#[test]
fn cusp_threshold() {
    let v = parse(newton_lct(PLANE, "2,0;0,3"));
    assert_eq!(v["ok"]["lct"], "5/6");
    let v = parse(newton_lct(HALF, ""));
    assert!(v["ok"]["lct"].is_string());
}

#[test]
fn flat_trace_on_the_plane() {
    let v = parse(flat_trace(PLANE));
    assert_eq!(v["ok"]["gammas"], serde_json::json!(["1", "1"]));
}

#[test]
fn errors_are_reported() {
    assert!(parse(explore_mld("{", "")).get("error").is_some());
    assert!(parse(explore_mld(PLANE, "7")).get("error").is_some());
    assert!(parse(newton_lct(PLANE, "1,x")).get("error").is_some());
}

//! The shipped sample configurations parse and match the scenario defaults.

use seepage_core::config::{parse_config, ScenarioConfig};

fn load(name: &str) -> ScenarioConfig {
    let path = format!("{}/configs/{name}", env!("CARGO_MANIFEST_DIR"));
    parse_config(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn sample_configs_restate_the_defaults() {
    assert_eq!(load("falling_ball.toml"), ScenarioConfig::falling_ball());
    assert_eq!(load("reservoir.toml"), ScenarioConfig::reservoir());
}

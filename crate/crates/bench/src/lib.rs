//! Fixtures shared by the benchmarks in `benches/`.

use casimir_core::{builtin_material, PermittivityModel, PlateConfig};

/// Metal and dielectric pairs of increasing cost.
pub fn pairs() -> Vec<(&'static str, PermittivityModel, PermittivityModel)> {
    let model = |name: &str| builtin_material(name).expect("builtin").model;
    vec![
        (
            "ideal/const",
            PermittivityModel::IdealMetal,
            PermittivityModel::Constant(7.0),
        ),
        ("ideal/alumina", PermittivityModel::IdealMetal, model("alumina")),
        ("au-drude/si-fallback", model("au-drude"), model("si-fallback")),
    ]
}

/// One micron at room temperature.
pub fn room_temperature() -> PlateConfig {
    PlateConfig::new(1e-6, 300.0).expect("valid configuration")
}

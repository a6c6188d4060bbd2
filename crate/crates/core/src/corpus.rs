//! Bundled example complexes (the JSON files under `corpus/`).

use crate::complex::EquivariantComplex;

pub const POINT: &str = include_str!("../../../corpus/point.json");
pub const CIRCLE: &str = include_str!("../../../corpus/circle.json");
pub const SUBDIVIDED_CIRCLE: &str = include_str!("../../../corpus/subdivided_circle.json");
pub const TORUS: &str = include_str!("../../../corpus/torus.json");
pub const TORUS_DELTA: &str = include_str!("../../../corpus/torus_delta.json");
pub const KLEIN: &str = include_str!("../../../corpus/klein.json");
pub const GENUS_TWO: &str = include_str!("../../../corpus/genus_two.json");
pub const CONE: &str = include_str!("../../../corpus/cone.json");

fn load(text: &str) -> EquivariantComplex {
    EquivariantComplex::from_json_str(text).expect("bundled complex is valid")
}

pub fn point() -> EquivariantComplex {
    load(POINT)
}

pub fn circle() -> EquivariantComplex {
    load(CIRCLE)
}

pub fn subdivided_circle() -> EquivariantComplex {
    load(SUBDIVIDED_CIRCLE)
}

/// Presentation complex of `ℤ²`.
pub fn torus() -> EquivariantComplex {
    load(TORUS)
}

/// One vertex, three edges, two triangles.
pub fn torus_delta() -> EquivariantComplex {
    load(TORUS_DELTA)
}

/// Over `ℤ/2`, with the orientation double cover's deck map.
pub fn klein() -> EquivariantComplex {
    load(KLEIN)
}

pub fn genus_two() -> EquivariantComplex {
    load(GENUS_TWO)
}

/// Filled triangle with trivial deck group.
pub fn cone() -> EquivariantComplex {
    load(CONE)
}

/// `(name, document)` for every bundled complex.
pub fn documents() -> [(&'static str, &'static str); 8] {
    [
        ("point", POINT),
        ("circle", CIRCLE),
        ("subdivided_circle", SUBDIVIDED_CIRCLE),
        ("torus", TORUS),
        ("torus_delta", TORUS_DELTA),
        ("klein", KLEIN),
        ("genus_two", GENUS_TWO),
        ("cone", CONE),
    ]
}

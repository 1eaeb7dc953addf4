//! Bundled instance documents.

use crate::instance::{parse_instance, InstanceDocument};

pub const FIXTURES: &[(&str, &str)] = &[
    ("point", include_str!("../fixtures/point.json")),
    ("tate", include_str!("../fixtures/tate.json")),
    ("elliptic", include_str!("../fixtures/elliptic.json")),
    ("tate-nonsplit", include_str!("../fixtures/tate-nonsplit.json")),
    ("badrel", include_str!("../fixtures/badrel.json")),
    ("nonadmissible-unipotent", include_str!("../fixtures/nonadmissible-unipotent.json")),
    // mhx gen --irreps 0:1,3:0 --extensions 3 --scramble --seed 5
    ("k3-split-s5", include_str!("../fixtures/k3-split-s5.json")),
    // mhx gen --irreps 0:1,3:0 --extensions 3 --scramble --seed 11
    ("k3-split-s11", include_str!("../fixtures/k3-split-s11.json")),
    // mhx gen --irreps 0:0,3:1 --extensions 3 --seed 2
    ("k3-plain-s2", include_str!("../fixtures/k3-plain-s2.json")),
];

pub fn fixture(name: &str) -> Option<InstanceDocument> {
    FIXTURES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| parse_instance(text).unwrap_or_else(|e| panic!("fixture {name}: {e}")))
}

//! Scenario documents shipped with the binary.

pub const DEMOS: &[(&str, &str)] = &[
    (
        "central-extension",
        include_str!("../demos/central-extension.json"),
    ),
    (
        "corrupted-gerbe",
        include_str!("../demos/corrupted-gerbe.json"),
    ),
    ("s3-inner", include_str!("../demos/s3-inner.json")),
];

pub fn find(name: &str) -> Option<&'static str> {
    DEMOS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| *text)
}

/// Built-in presentation files, in the order `examples` prints them.
pub const BUILTIN: &[(&str, &str)] = &[
    ("cp2", include_str!("../data/cp2.lie")),
    ("torus", include_str!("../data/torus.lie")),
    ("genus2", include_str!("../data/genus2.lie")),
    ("wedge-circles", include_str!("../data/wedge-circles.lie")),
    ("lemaire28", include_str!("../data/lemaire28.lie")),
    ("anick29", include_str!("../data/anick29.lie")),
];

pub fn builtin(name: &str) -> Option<&'static str> {
    BUILTIN.iter().find(|(k, _)| *k == name).map(|(_, v)| *v)
}

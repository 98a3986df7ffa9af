//! Configurations shipped with the tool. The files under `configs/` are the
//! only copy; they are compiled in so the binary works from any directory.

pub const EX1_I: &str = include_str!("../../../configs/ex1-i.toml");
pub const EX1_II: &str = include_str!("../../../configs/ex1-ii.toml");
pub const EX2_I: &str = include_str!("../../../configs/ex2-i.toml");
pub const EX2_II: &str = include_str!("../../../configs/ex2-ii.toml");
pub const FIG1: &str = include_str!("../../../configs/fig1.toml");

pub const EXAMPLE_NAMES: [&str; 4] = ["ex1-i", "ex1-ii", "ex2-i", "ex2-ii"];

pub fn example_config(name: &str) -> Option<&'static str> {
    match name {
        "ex1-i" => Some(EX1_I),
        "ex1-ii" => Some(EX1_II),
        "ex2-i" => Some(EX2_I),
        "ex2-ii" => Some(EX2_II),
        _ => None,
    }
}

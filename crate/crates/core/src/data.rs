//! Shipped definitions, rules and problems.

pub const DEFS: &str = include_str!("../data/defs.txt");
pub const RULES: &str = include_str!("../data/rules.txt");
pub const UNABRIDGED_RULES: &str = include_str!("../data/unabridged_rules.txt");
pub const PROBLEMS: &str = include_str!("../data/problems.txt");

//! Default resource set compiled into the library, so the toolkit runs with
//! no configuration. Every file can be replaced at run time.

/// Computational linguistics domain ontology.
pub const CL_ONTOLOGY: &str = include_str!("../resources/cl_ontology.tsv");

/// Research style hierarchy with the seven styles as leaves.
pub const STYLE_ONTOLOGY: &str = include_str!("../resources/style_ontology.tsv");

/// Target / methodology pre- and post-patterns.
pub const PATTERNS: &str = include_str!("../resources/patterns.tsv");

/// Title patterns for research style recognition.
pub const STYLE_RULES: &str = include_str!("../resources/style_rules.tsv");

/// Trigger words, one per line.
pub const TRIGGERS: &str = include_str!("../resources/triggers.txt");

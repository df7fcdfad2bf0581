//! Instance files, random instances and check suites.

pub mod format;
pub mod gen;
pub mod suites;

pub use format::{parse_instance, parse_value, serialize_instance, Instance, MapDecl, Role};
pub use gen::{gen_instance, instance_seed, GenConfig};
pub use suites::{run_suite, CheckResult, SuiteConfig, SuiteReport, SUITES};

//! Benchmark-only crate; see `benches/group_ops.rs`.

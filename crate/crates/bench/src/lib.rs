//! Empty library crate; the benchmarks live in `benches/operators.rs`
//! and run with `cargo bench -p lelonglab-bench`.

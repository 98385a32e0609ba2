//! Benchmarks for the invariant library live in `benches/`.

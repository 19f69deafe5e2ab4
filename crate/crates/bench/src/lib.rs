//! Benchmarks for the `conformal-detour` engine; see `benches/engine.rs`.

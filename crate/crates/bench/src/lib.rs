//! Benchmarks for `lln-tails`; see `benches/`.

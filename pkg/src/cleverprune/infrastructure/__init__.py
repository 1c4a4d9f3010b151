"""Numerical engine, persistence, attribution, refinement and the benchmark harness."""

"""Immutable values: tensors and seeded RNG, attribution methods, artifact specs,
schedules and refinement plans."""

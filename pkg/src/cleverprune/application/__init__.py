"""Application layer: experiment configuration and the command use cases."""

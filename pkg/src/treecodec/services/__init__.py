"""Algorithms, one module per concern, and the experiment orchestrator."""

"""Pydantic documents persisted or reported by the toolkit."""

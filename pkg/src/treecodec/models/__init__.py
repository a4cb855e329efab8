"""In-process domain types."""

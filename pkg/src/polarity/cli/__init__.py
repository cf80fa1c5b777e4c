"""Command-line surface and model persistence."""

"""Command-line surface: run configuration and the shared command base."""

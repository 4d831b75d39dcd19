"""Integration tests: CLI, suites, pipeline and acceptance runs."""

"""CSV, JSON and SVG output helpers."""

"""Unit tests, one module per computational module."""

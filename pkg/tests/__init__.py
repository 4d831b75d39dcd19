"""Test suite for numrange-composition."""

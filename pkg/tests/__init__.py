"""Tests for the Casimir precision toolkit."""

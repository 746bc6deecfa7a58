"""Reproducible benchmark harness (CLI entry point ``bench``)."""

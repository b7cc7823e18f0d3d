"""Integration tests for the text-graph pipeline."""

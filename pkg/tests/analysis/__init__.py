"""
Tests for analysis components.
"""

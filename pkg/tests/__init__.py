"""Test suite for tree-subcone."""

"""Workbench tests."""

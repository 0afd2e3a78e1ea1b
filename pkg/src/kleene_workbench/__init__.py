"""Kleene workbench."""

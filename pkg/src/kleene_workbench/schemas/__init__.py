"""Pydantic models for files and reports."""

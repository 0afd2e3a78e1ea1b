"""Helper functions for the command-line front end."""

"""Command-line integration."""

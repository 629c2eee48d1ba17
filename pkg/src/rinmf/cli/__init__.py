"""Command line, file formats and experiment orchestration."""

"""Subcommands; each module registers itself through ``setup(subparsers, common)``."""

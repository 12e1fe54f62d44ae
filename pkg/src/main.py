"""Main entry point for the specbound CLI application."""

from src.cli import cli_main

if __name__ == "__main__":
    cli_main()

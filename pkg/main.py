"""Main entry point for the Keller inversion toolkit."""

from app import cli

if __name__ == "__main__":
    cli()

"""Entry point for running extlin as a module."""

from .cli import main

if __name__ == "__main__":
    main()

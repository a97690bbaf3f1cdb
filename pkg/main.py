"""
Main entry point for running persistnet from a source checkout.

Equivalent to the installed ``persistnet`` console script.
"""

from persistnet.cli import main

if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""Run the rltqp command-line tool from a source checkout."""
from rltqp.cli import main

if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""
Entry point for running neighsum as a module: python -m neighsum
"""

from .main import main

if __name__ == "__main__":
    main()

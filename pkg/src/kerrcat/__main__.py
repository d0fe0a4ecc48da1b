"""Module entry point: python -m kerrcat."""
import sys

from .cli import main

sys.exit(main())

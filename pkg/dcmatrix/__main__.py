"""Run the dcmatrix command line with ``python -m dcmatrix``."""

import sys

from .cli import main

sys.exit(main())

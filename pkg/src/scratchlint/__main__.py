"""Allow ``python -m scratchlint``."""

import sys

from .cli import main

sys.exit(main())

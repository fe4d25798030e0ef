"""Allow ``python -m casimir``."""

import sys

from .cli import main

sys.exit(main())

"""python -m hdc2c"""

import sys

from .cli import main

sys.exit(main())

"""Module runner: python -m alltoall <subcommand> ..."""

import sys

from .cli import main

sys.exit(main())

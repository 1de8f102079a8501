import sys

from liouville_fbm._core.cli import main

sys.exit(main())

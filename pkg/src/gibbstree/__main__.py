import sys

from .phase_cli import main

sys.exit(main())

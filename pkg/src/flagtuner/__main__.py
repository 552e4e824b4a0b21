import sys

from flagtuner.cli import main

sys.exit(main())

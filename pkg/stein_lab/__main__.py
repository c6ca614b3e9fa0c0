import sys

from stein_lab.harness.cli import main

sys.exit(main())

import sys

from norine.cli import main

sys.exit(main())

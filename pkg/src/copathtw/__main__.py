import sys

from copathtw.cli import main

sys.exit(main())

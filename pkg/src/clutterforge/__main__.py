import sys

from clutterforge.cli import main

sys.exit(main())

import sys

from qsep.cli import main

sys.exit(main())

import sys

from genmvp.cli import main

sys.exit(main())

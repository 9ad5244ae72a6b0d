import sys

from latticelp.cli import main

sys.exit(main())

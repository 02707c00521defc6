import sys

from nosplit.cli import main

sys.exit(main())

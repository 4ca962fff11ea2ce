import sys

from hypersplit.harness.cli import main

sys.exit(main())

import sys

from udqubit.cli import main

sys.exit(main())

import sys

from latticesums.cli import main

sys.exit(main())

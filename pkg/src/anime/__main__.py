import sys

from anime.cli import main

sys.exit(main())

import sys

from spr.main import main

sys.exit(main())

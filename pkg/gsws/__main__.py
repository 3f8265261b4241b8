import sys

from gsws.main import main

sys.exit(main())

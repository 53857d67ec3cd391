import sys

from peeratt.cli.main import main

sys.exit(main())

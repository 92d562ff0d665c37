import sys

from benchcli.benchcli import main

sys.exit(main())

import sys

from noisytele.cli import main

sys.exit(main())

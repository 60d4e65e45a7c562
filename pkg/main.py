import sys

from lassodof.main import main

if __name__ == "__main__":
    sys.exit(main())

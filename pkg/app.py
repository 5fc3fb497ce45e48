import sys
import os

sys.path.append(os.path.dirname(__file__))

from src.cli import main

if __name__ == '__main__':
    sys.exit(main())

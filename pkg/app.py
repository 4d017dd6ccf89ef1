"""
snowlab entry point.

    python app.py keystream --cipher snow3g --key <hex> --iv <hex> --count 8
    python app.py analyze relations --sbox aes
"""
import sys

from app.cli import main

if __name__ == "__main__":
    sys.exit(main())

"""Entry point for ``python -m mpsched``."""

from mpsched.harness.cli import main

if __name__ == "__main__":
    main()

# main.py
import sys

import environ

env = environ.Env()
environ.Env.read_env()

from modules.cli import dispatch  # noqa: E402  settings read the environment on import


def main():
    """Main entry point for the knotforge command line"""
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()

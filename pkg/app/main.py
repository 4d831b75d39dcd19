"""
Application entry point for numrange-composition.
"""
from typing import List, Optional

from app.cli import run


def main(argv: Optional[List[str]] = None) -> None:
    """Run the `nrc` command line."""
    run(argv)


if __name__ == "__main__":
    main()

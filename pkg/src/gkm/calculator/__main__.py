# Copyright GKM Calculator contributors. All Rights Reserved.

import logging as _logging
import sys as _sys
from typing import Optional, Sequence

from .cli import run

__all__ = ["main"]
_logger = _logging.getLogger(__name__)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Entry point for gkm-calc
    """
    package_name = vars(_sys.modules[__name__])["__package__"]
    if not package_name:
        raise RuntimeError(f"Must be run as a module. Do not run {__file__} directly")

    exit_code = run(argv)
    _logger.debug("gkm-calc finished with exit code %d", exit_code)
    return exit_code


if __name__ == "__main__":
    _sys.exit(main())

#  Copyright (c) 2025 ElasticaSplit contributors
#  Licensed under the GNU AGPL v3.0: https://www.gnu.org/licenses/agpl-3.0.html
#  Part of the ElasticaSplit project. All rights reserved where applicable.

import sys

from src.modules.cli import run_cli


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()

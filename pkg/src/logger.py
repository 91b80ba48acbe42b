#  Copyright (c) 2025 ElasticaSplit contributors
#  Licensed under the GNU AGPL v3.0: https://www.gnu.org/licenses/agpl-3.0.html
#  Part of the ElasticaSplit project. All rights reserved where applicable.

import logging
from logging.handlers import RotatingFileHandler
from os import getenv

from dotenv import load_dotenv

load_dotenv()

LOG_FORMAT = (
    "[%(asctime)s - %(levelname)s] - %(name)s - "
    "%(filename)s:%(lineno)d - %(message)s"
)

formatter = logging.Formatter(LOG_FORMAT, datefmt="%d-%b-%y %H:%M:%S")
stream_handler = logging.StreamHandler()
stream_handler.setFormatter(formatter)
handlers: list[logging.Handler] = [stream_handler]

if log_file := getenv("LOG_FILE", ""):
    file_handler = RotatingFileHandler(
        log_file, maxBytes=3 * 1024 * 1024, backupCount=2, encoding="utf-8"
    )
    file_handler.setFormatter(formatter)
    handlers.append(file_handler)

logging.basicConfig(
    level=getenv("LOG_LEVEL", "INFO").upper(),
    handlers=handlers,
)

logging.getLogger("PIL").setLevel(logging.WARNING)

LOGGER = logging.getLogger("Elastica")

"""
Django settings for the MagShape project.

The project has no web surface: Django provides configuration, logging and
the management-command runner for the numerical services.
"""

import os
import secrets
import sys
from pathlib import Path

from configurations import Configuration
from dotenv import load_dotenv

# Load environment variables
# If running tests, prefer .env.test over .env
if "test" in sys.argv or "pytest" in sys.modules:
    test_env_path = Path(__file__).resolve().parent.parent / ".env.test"
    if test_env_path.exists():
        load_dotenv(test_env_path, override=True)
    else:
        load_dotenv(override=True)
else:
    load_dotenv()


def _logging_config(level: str) -> dict:
    return {
        "version": 1,
        "disable_existing_loggers": False,
        "formatters": {
            "console": {"format": "%(asctime)s %(levelname)s %(name)s: %(message)s"},
        },
        "handlers": {
            "console": {
                "class": "logging.StreamHandler",
                "formatter": "console",
                "stream": "ext://sys.stderr",
            },
        },
        "loggers": {
            "services": {"handlers": ["console"], "level": level, "propagate": True},
            "data": {"handlers": ["console"], "level": level, "propagate": True},
        },
    }


class Base(Configuration):
    BASE_DIR = Path(__file__).resolve().parent.parent

    # Management commands do not use signed data; a random key per process is enough.
    SECRET_KEY = os.environ.get(
        "DJANGO_SECRET_KEY",
        default=secrets.token_urlsafe(nbytes=64),
    )

    INSTALLED_APPS = [
        "services",
        "data",
    ]

    DATABASES: dict = {}

    LANGUAGE_CODE = "en-us"
    TIME_ZONE = "UTC"
    USE_TZ = True

    # Solver runtime
    MAGSHAPE_THREADS = max(1, int(os.environ.get("MAGSHAPE_THREADS", "1")))
    MAGSHAPE_OUTPUT_DIR = os.environ.get("MAGSHAPE_OUTPUT_DIR", str(BASE_DIR / "output"))
    MAGSHAPE_CODE_VERSION = "1.0.0"
    MAGSHAPE_LOG_LEVEL = os.environ.get("MAGSHAPE_LOG_LEVEL", "INFO")

    LOGGING = _logging_config(MAGSHAPE_LOG_LEVEL)


class Development(Base):
    DEBUG = True
    MAGSHAPE_LOG_LEVEL = os.environ.get("MAGSHAPE_LOG_LEVEL", "WARNING")
    LOGGING = _logging_config(MAGSHAPE_LOG_LEVEL)


class Production(Base):
    DEBUG = False

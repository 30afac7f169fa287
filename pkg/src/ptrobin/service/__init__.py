"""HTTP service exposing the core package; the CLI is a thin client of it."""

from .app import create_app

__all__ = ["create_app"]

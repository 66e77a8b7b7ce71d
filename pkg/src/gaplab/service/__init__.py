"""HTTP facade over the library: one endpoint per experiment or query."""

from .app import app, create_app

__all__ = ["app", "create_app"]

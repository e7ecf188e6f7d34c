"""FastAPI review server for the collective resolution session."""
from .app import ReviewSession, create_app, serve

__all__ = ["ReviewSession", "create_app", "serve"]

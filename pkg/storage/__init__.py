"""Storage module."""

from storage.runs import RunStorage, get_storage

__all__ = ["RunStorage", "get_storage"]

"""Shared exception base so the CLI can catch pipeline failures in one place."""


class ArchiveLensError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(ArchiveLensError):
    """Pipeline configuration is missing, unreadable or out of range."""

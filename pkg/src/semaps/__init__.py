"""semaps: authoring and serving semantic crowd maps."""

__version__ = "0.1.0"

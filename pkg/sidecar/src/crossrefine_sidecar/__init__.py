"""Scorer sidecar: neural reference metrics behind a small HTTP protocol.

The service keeps every heavyweight model out of the client process.
Metrics load lazily on first use, are cached, and each one scores behind
its own lock (the underlying models are not concurrency-safe).
"""

__version__ = "0.1.0"

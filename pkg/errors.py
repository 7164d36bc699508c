# -*- coding: utf-8 -*-
from __future__ import annotations


class SubscoreError(Exception):
    """Base class for every error the library raises on purpose."""


class InvalidConfig(SubscoreError, ValueError):
    pass


class InvalidInput(SubscoreError, ValueError):
    pass


class UnsupportedScale(SubscoreError, ValueError):
    pass


class NumericalFailure(SubscoreError, RuntimeError):
    pass


class ConsistencyError(SubscoreError, RuntimeError):
    pass


class ExportError(SubscoreError, RuntimeError):
    """I/O failure while reading or writing result files; message carries the path."""

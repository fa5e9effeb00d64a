from ._minabro import *  # noqa: F401,F403
from ._minabro import DEFAULT_EPSILON, Label, ExplanationKind

__all__ = [name for name in dir() if not name.startswith("_")]

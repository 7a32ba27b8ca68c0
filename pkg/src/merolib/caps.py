"""Resource caps shared by the enumeration, Groebner and walk kernels."""

import os
from dataclasses import dataclass, fields, replace


class CapExceeded(RuntimeError):
    """Raised when a computation would exceed a configured cap.

    Callers treat this as "undecided", never as a negative answer.
    """


# short names accepted in MEROLIB_CAPS / --caps strings
_ALIASES = {
    "e": "enum",
    "enum": "enum",
    "d": "degree",
    "degree": "degree",
    "u": "units",
    "units": "units",
    "w": "walk",
    "walk": "walk",
    "p": "pairs",
    "pairs": "pairs",
    "v": "symbolic_vars",
    "vars": "symbolic_vars",
    "symbolic_vars": "symbolic_vars",
}


@dataclass(frozen=True)
class Caps:
    enum: int = 10**7
    degree: int = 6
    units: int = 3
    walk: int = 500_000
    pairs: int = 5_000
    symbolic_vars: int = 64

    def __post_init__(self):
        for f in fields(self):
            if getattr(self, f.name) < 0 or (f.name != "units" and getattr(self, f.name) == 0):
                raise ValueError(f"cap {f.name} must be positive")

    def update(self, text):
        """Return a copy with overrides from a string like ``d=6,u=3``."""
        changes = {}
        for item in filter(None, (s.strip() for s in text.split(","))):
            key, _, value = item.partition("=")
            key = key.strip()
            if key not in _ALIASES or not value:
                raise ValueError(f"malformed cap setting: {item!r}")
            changes[_ALIASES[key]] = int(value)
        return replace(self, **changes)

    @classmethod
    def from_env(cls, environ=None):
        environ = os.environ if environ is None else environ
        text = environ.get("MEROLIB_CAPS", "")
        return cls().update(text) if text else cls()

    def as_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}

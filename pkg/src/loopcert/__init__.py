"""loopcert: a certifying toolchain for an imperative LOOP language
with higher-order procedural variables and non-local jumps, translated
into a System-T-style functional language with first-class
continuations.
"""

__version__ = "0.1.0"

from .errors import CheckError, EvalError, LoopcertError, ParseError  # noqa: F401

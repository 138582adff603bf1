"""Parameterized timed model checker for conjunctive timed-automaton networks.

The heavy lifting lives in the compiled extension ``pnta._pnta``; this
package re-exports its public surface.
"""

from ._pnta import *  # noqa: F401,F403
from ._pnta import __doc__ as _core_doc

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "1.0.0"

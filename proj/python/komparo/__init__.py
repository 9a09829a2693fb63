"""Envelope tables and certification checks over sampled domains."""

try:
    from komparo._komparo import *  # noqa: F401,F403
    from komparo._komparo import __doc__ as _core_doc
except ImportError:  # build-tree layout: extension next to the package
    from _komparo import *  # noqa: F401,F403
    from _komparo import __doc__ as _core_doc

__version__ = "0.1.0"
__doc__ = _core_doc

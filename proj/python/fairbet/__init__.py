"""Fair-bet decision support: insurance transfers for decision agents, an
online forecaster whose average betting loss vanishes, a flight-delay market
simulation, and offline calibration audits."""

try:
    from ._fairbet import *  # noqa: F401,F403
    from ._fairbet import __version__
except ImportError:
    # Built-tree layout: the extension sits on PYTHONPATH beside this package.
    from _fairbet import *  # noqa: F401,F403
    from _fairbet import __version__

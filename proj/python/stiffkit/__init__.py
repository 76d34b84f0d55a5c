"""Stage-wise stabilized explicit Runge-Kutta methods for stiff ODEs."""

try:
    from ._stiffkit import *  # noqa: F401,F403  (installed package layout)
    from ._stiffkit import __version__  # noqa: F401
except ImportError:  # extension living next to the build tree
    from _stiffkit import *  # noqa: F401,F403
    from _stiffkit import __version__  # noqa: F401

"""Markov-kernel corruption of finite supervised learning problems.

The heavy lifting lives in the compiled extension; this package re-exports
its public surface.
"""

from kernelcorrupt._core import *  # noqa: F401,F403
from kernelcorrupt._core import __version__  # noqa: F401

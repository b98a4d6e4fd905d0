"""Partition functions, correlators, Fredholm determinants and phase structure of generalized XX0 spin chains."""
__version__ = "0.1.0"

from . import special, symfun, potential, toeplitz, selberg, fredholm, phase, nibm  # noqa: E402,F401

__all__ = ["special", "symfun", "potential", "toeplitz", "selberg", "fredholm", "phase", "nibm", "__version__"]

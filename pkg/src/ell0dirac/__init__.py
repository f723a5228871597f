"""Matrix algebra and spectra for the length-scale modified Dirac and Pauli equations."""

from .linalg import BACKEND

__version__ = "0.1.0"

__all__ = ["BACKEND", "__version__"]

"""
Error types shared across the toolkit

The CLI maps these onto exit codes: ResourceCapError -> 3, every ValueError
(including FormatError and DecompositionError) -> 2.
"""

from typing import Optional


class SydsError(Exception):
    """Base class for toolkit errors"""


class ResourceCapError(SydsError):
    """A configured resource cap (nodes, variables, steps, memory) was exceeded"""

    def __init__(self, message: str, cap: Optional[int] = None):
        super().__init__(message)
        self.cap = cap


class OrbitMemoryError(ResourceCapError):
    """Orbit hash-set cap reached while fallback cycle finding is disabled"""


class CyclicNetworkError(SydsError, ValueError):
    """The network has a directed cycle, so the longest directed path is undefined"""


class FormatError(SydsError, ValueError):
    """Malformed input document or formula file"""

    def __init__(self, message: str, line: Optional[int] = None):
        if line is not None:
            message = f"[Line {line}] {message}"
        super().__init__(message)
        self.line = line


class DecompositionError(SydsError, ValueError):
    """Invalid treedepth decomposition or violated kernel precondition"""


class GadgetError(SydsError, RuntimeError):
    """A generated construction failed its own structural self-check"""

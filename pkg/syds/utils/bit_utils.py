"""
Bit utilities
Helpers for packing node states into integer configurations and back
"""

from typing import Iterable, List


def pack(bits: Iterable[int]) -> int:
    """
    Pack a sequence of node states into an integer configuration.

    Bit k of the result is the state of node k.

    Raises:
        ValueError: If an entry is not 0 or 1
    """
    value = 0
    for k, bit in enumerate(bits):
        if bit not in (0, 1):
            raise ValueError(f"Node state must be 0 or 1, got {bit!r} at position {k}")
        if bit:
            value |= 1 << k
    return value


def unpack(value: int, node_count: int) -> List[int]:
    """Unpack an integer configuration into a list of node_count states"""
    return [(value >> k) & 1 for k in range(node_count)]


def to_bitstring(value: int, node_count: int) -> str:
    """Render a configuration with node 0 first, e.g. 0b01 over 2 nodes -> "10" """
    return "".join("1" if (value >> k) & 1 else "0" for k in range(node_count))


def from_bitstring(text: str) -> int:
    """
    Parse a node-0-first bit string into an integer configuration.

    Raises:
        ValueError: If the string contains characters other than 0 and 1
    """
    text = text.strip()
    if any(ch not in "01" for ch in text):
        raise ValueError(f"Invalid bit string: {text!r}. Expected only 0 and 1.")
    return pack(int(ch) for ch in text)


def all_ones(node_count: int) -> int:
    return (1 << node_count) - 1


def get_bit(value: int, k: int) -> int:
    return (value >> k) & 1

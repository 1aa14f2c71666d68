"""Lempel-Ziv compression with side information.

Sequences are lists of ints (or ``bytes``, treated as symbols 0..255).
"""

from ._core import (
    ChecksumMismatch,
    CorruptStream,
    DomainError,
    Error,
    InputError,
    MarkovModel,
    NumericError,
    TruncatedStream,
    conditional_entropy_rate,
    decode_fixed,
    decode_window,
    encode_fixed,
    encode_window,
    g_encode,
    generate,
    hk_encode,
    joint_entropy_rate,
    rate_bound,
    rate_experiment,
)
from . import _core


def _symbols(seq):
    return list(seq)


def compress(x, y, algorithm=1, L=8, m=3, window=256, x_alphabet=2, y_alphabet=2):
    """Compress ``x`` given ``y``; returns container bytes."""
    return _core.compress(_symbols(x), _symbols(y), algorithm, L, m, window, x_alphabet, y_alphabet)


def decompress(data, y):
    """Restore ``x`` from container bytes and the same side information ``y``."""
    return _core.decompress(data, _symbols(y))


__all__ = [
    "ChecksumMismatch",
    "CorruptStream",
    "DomainError",
    "Error",
    "InputError",
    "MarkovModel",
    "NumericError",
    "TruncatedStream",
    "compress",
    "conditional_entropy_rate",
    "decode_fixed",
    "decode_window",
    "decompress",
    "encode_fixed",
    "encode_window",
    "g_encode",
    "generate",
    "hk_encode",
    "joint_entropy_rate",
    "rate_bound",
    "rate_experiment",
]

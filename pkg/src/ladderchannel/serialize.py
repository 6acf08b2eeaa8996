"""JSON helpers for half-integers and complex matrices."""

from fractions import Fraction

import numpy as np

from .errors import DimensionError, LadderChannelError


def half(value):
    """Return ``value`` as an exact half-integer :class:`~fractions.Fraction`.

    Accepts ints, Fractions, floats that are exact multiples of 1/2, and
    strings such as ``"3/2"``, ``"-1/2"`` or ``"2"``.
    """
    if isinstance(value, str):
        value = Fraction(value.strip())
    elif isinstance(value, float):
        if not np.isfinite(value) or (2 * value) != int(2 * value):
            raise LadderChannelError(f"{value!r} is not a half-integer")
        value = Fraction(int(2 * value), 2)
    else:
        value = Fraction(value)
    if value.denominator not in (1, 2):
        raise LadderChannelError(f"{value} is not a half-integer")
    return value


def half_str(value):
    """Format a half-integer as ``"p/2"`` or a plain integer string."""
    value = half(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/2"


def label_str(j, m):
    return f"{half_str(j)},{half_str(m)}"


def parse_label(text):
    """Parse ``"j,m"`` into a pair of half-integers."""
    try:
        j, m = text.split(",")
    except ValueError:
        raise LadderChannelError(f"malformed label {text!r}, expected 'j,m'") from None
    return half(j), half(m)


def matrix_to_json(mat):
    mat = np.asarray(mat)
    if mat.ndim != 2:
        raise DimensionError("only 2-d matrices serialize")
    rows, cols = mat.shape
    flat = mat.astype(complex).ravel()
    return {
        "rows": int(rows),
        "cols": int(cols),
        "entries": [[float(z.real), float(z.imag)] for z in flat],
    }


def matrix_from_json(obj):
    try:
        rows, cols = int(obj["rows"]), int(obj["cols"])
        entries = np.asarray(obj["entries"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise LadderChannelError(f"malformed matrix JSON: {exc}") from None
    if entries.shape != (rows * cols, 2):
        raise DimensionError(
            f"matrix JSON declares {rows}x{cols} but carries {entries.shape[0]} entries")
    return (entries[:, 0] + 1j * entries[:, 1]).reshape(rows, cols)

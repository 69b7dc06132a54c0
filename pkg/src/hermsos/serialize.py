"""JSON-friendly encodings: complex numbers become ``[re, im]`` pairs."""
import math

import numpy as np


def _real(x):
    x = float(x)
    if not math.isfinite(x):
        return None
    return x


def cnum(z):
    z = complex(z)
    return [_real(z.real), _real(z.imag)]


def cvec(v):
    return [cnum(x) for x in np.asarray(v).ravel()]


def cmat(M):
    M = np.atleast_2d(np.asarray(M))
    return [[cnum(x) for x in row] for row in M]


def decode_cnum(p):
    if isinstance(p, (int, float)):
        return complex(p)
    re, im = p
    return complex(re, im)


def decode_cvec(v):
    return np.array([decode_cnum(p) for p in v], dtype=complex)


def decode_cmat(M):
    return np.array([[decode_cnum(p) for p in row] for row in M], dtype=complex)


def to_jsonable(obj):
    """Recursively convert results to plain JSON values.

    Complex numbers become ``[re, im]``, non-finite floats become ``null``,
    exact rationals and symbolic expressions become strings.
    """
    from fractions import Fraction

    if obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _real(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return cnum(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    if type(obj).__name__ == "HermPoly":
        from .poly import format_poly
        return format_poly(obj)
    return str(obj)

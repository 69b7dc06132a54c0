"""Sparse polynomials in z_1..z_n and their conjugates zbar_1..zbar_n.

A term is stored as ``(alpha, beta) -> coefficient`` where ``alpha`` holds the
holomorphic exponents and ``beta`` the antiholomorphic ones, so the monomial is
``z^alpha * zbar^beta``. Coefficients are Python complex numbers; results of
arithmetic drop a term only when its coefficient is exactly zero.

Text grammar::

    expr   := term (('+' | '-') term)*
    term   := unary ('*' unary)*
    unary  := ('-' | '+') unary | power
    power  := atom ('^' INT)?
    atom   := NUMBER | NUMBER 'i' | 'i' | 'zK' | 'zbarK' | 'conj(zK)' | '(' expr ')'
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations_with_replacement
from numbers import Number

import numpy as np

Key = tuple[tuple[int, ...], tuple[int, ...]]


@dataclass(frozen=True, order=True)
class Monomial:
    alpha: tuple[int, ...]
    beta: tuple[int, ...]

    @property
    def degree(self) -> int:
        return sum(self.alpha) + sum(self.beta)

    @property
    def key(self) -> Key:
        return (self.alpha, self.beta)

    def __str__(self):
        return _monomial_str(self.key) or "1"


def order_key(key: Key):
    """Graded lexicographic order on the concatenated exponent vector."""
    alpha, beta = key
    return (sum(alpha) + sum(beta), alpha + beta)


def _monomial_str(key: Key) -> str:
    alpha, beta = key
    parts = []
    for prefix, exps in (("z", alpha), ("zbar", beta)):
        for j, e in enumerate(exps):
            if e == 1:
                parts.append(f"{prefix}{j + 1}")
            elif e > 1:
                parts.append(f"{prefix}{j + 1}^{e}")
    return "*".join(parts)


def _real_str(x: float) -> str:
    s = repr(float(x))
    if s.endswith(".0"):
        s = s[:-2]
    return s


def _coeff_str(c: complex) -> str:
    """Unsigned-friendly coefficient text; complex values go in parentheses."""
    if c.imag == 0:
        return _real_str(c.real)
    if c.real == 0:
        return f"({_real_str(c.imag)}i)"
    sign = "+" if c.imag >= 0 else "-"
    return f"({_real_str(c.real)}{sign}{_real_str(abs(c.imag))}i)"


class HermPoly:
    """Immutable sparse polynomial in ``C[z, zbar]`` with ``n`` complex variables."""

    __slots__ = ("n", "_terms", "_hash")

    def __init__(self, n: int, terms=None):
        if n < 1:
            raise ValueError("number of variables must be positive")
        self.n = int(n)
        clean = {}
        if terms:
            for key, c in terms.items():
                if isinstance(key, Monomial):
                    key = key.key
                alpha, beta = tuple(int(e) for e in key[0]), tuple(int(e) for e in key[1])
                if len(alpha) != n or len(beta) != n or min(alpha + beta) < 0:
                    raise ValueError(f"bad exponent key {key} for n={n}")
                c = complex(c)
                if c != 0:
                    k = (alpha, beta)
                    clean[k] = clean.get(k, 0) + c
                    if clean[k] == 0:
                        del clean[k]
        self._terms = clean
        self._hash = None

    # construction helpers -------------------------------------------------
    @classmethod
    def constant(cls, n: int, c) -> "HermPoly":
        return cls(n, {((0,) * n, (0,) * n): c})

    @classmethod
    def zero(cls, n: int) -> "HermPoly":
        return cls(n)

    @classmethod
    def z(cls, j: int, n: int) -> "HermPoly":
        """The holomorphic coordinate ``z_{j+1}`` (``j`` is zero-based)."""
        e = [0] * n
        e[j] = 1
        return cls(n, {(tuple(e), (0,) * n): 1})

    @classmethod
    def zbar(cls, j: int, n: int) -> "HermPoly":
        e = [0] * n
        e[j] = 1
        return cls(n, {((0,) * n, tuple(e)): 1})

    @classmethod
    def monomial(cls, alpha, beta, c=1.0) -> "HermPoly":
        return cls(len(alpha), {(tuple(alpha), tuple(beta)): c})

    @classmethod
    def norm_squared(cls, n: int) -> "HermPoly":
        """``|z_1|^2 + ... + |z_n|^2``."""
        terms = {}
        for j in range(n):
            e = [0] * n
            e[j] = 1
            terms[(tuple(e), tuple(e))] = 1
        return cls(n, terms)

    # container protocol ---------------------------------------------------
    @property
    def terms(self) -> dict[Key, complex]:
        return dict(self._terms)

    def items(self):
        """Terms in canonical order."""
        return sorted(self._terms.items(), key=lambda kv: order_key(kv[0]))

    def coeff(self, alpha, beta) -> complex:
        return self._terms.get((tuple(alpha), tuple(beta)), 0j)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        return max(sum(a) + sum(b) for a, b in self._terms)

    def max_abs_coeff(self) -> float:
        return max((abs(c) for c in self._terms.values()), default=0.0)

    # arithmetic -----------------------------------------------------------
    def _coerce(self, other) -> "HermPoly":
        if isinstance(other, HermPoly):
            if other.n != self.n:
                raise ValueError(f"variable count mismatch: {self.n} vs {other.n}")
            return other
        if isinstance(other, Number):
            return HermPoly.constant(self.n, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0) + c
        return HermPoly(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return HermPoly(self.n, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Number):
            return HermPoly(self.n, {k: c * other for k, c in self._terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[Key, complex] = {}
        for (a1, b1), c1 in self._terms.items():
            for (a2, b2), c2 in other._terms.items():
                k = (tuple(x + y for x, y in zip(a1, a2)), tuple(x + y for x, y in zip(b1, b2)))
                out[k] = out.get(k, 0) + c1 * c2
        return HermPoly(self.n, out)

    def __rmul__(self, other):
        return self * other

    def __truediv__(self, other):
        if not isinstance(other, Number):
            return NotImplemented
        return self * (1 / other)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only nonnegative integer powers are supported")
        out = HermPoly.constant(self.n, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, Number):
            other = HermPoly.constant(self.n, other)
        if not isinstance(other, HermPoly):
            return NotImplemented
        return self.n == other.n and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self._terms.items())))
        return self._hash

    # involution and structure --------------------------------------------
    def star(self) -> "HermPoly":
        return HermPoly(self.n, {(b, a): c.conjugate() for (a, b), c in self._terms.items()})

    def is_self_adjoint(self, tol: float = 0.0) -> bool:
        for (a, b), c in self._terms.items():
            if abs(c - self.coeff(b, a).conjugate()) > tol:
                return False
        return True

    def homogeneous_part(self, d: int) -> "HermPoly":
        return HermPoly(self.n, {k: c for k, c in self._terms.items() if sum(k[0]) + sum(k[1]) == d})

    def is_holomorphic(self) -> bool:
        return all(not any(b) for _, b in self._terms)

    def diff_z(self, j: int) -> "HermPoly":
        out = {}
        for (a, b), c in self._terms.items():
            if a[j]:
                a2 = list(a)
                a2[j] -= 1
                out[(tuple(a2), b)] = c * a[j]
        return HermPoly(self.n, out)

    def diff_zbar(self, j: int) -> "HermPoly":
        out = {}
        for (a, b), c in self._terms.items():
            if b[j]:
                b2 = list(b)
                b2[j] -= 1
                out[(a, tuple(b2))] = c * b[j]
        return HermPoly(self.n, out)

    # evaluation -----------------------------------------------------------
    def exponent_arrays(self):
        """Coefficient vector and exponent matrices, for vectorised evaluation."""
        items = self.items()
        if not items:
            z = np.zeros((0, self.n), dtype=int)
            return np.zeros(0, dtype=complex), z, z
        coeffs = np.array([c for _, c in items], dtype=complex)
        A = np.array([k[0] for k, _ in items], dtype=int)
        B = np.array([k[1] for k, _ in items], dtype=int)
        return coeffs, A, B

    def __call__(self, a, b=None):
        return eval_pair(self, a, np.conj(a) if b is None else b)

    def __repr__(self):
        return f"HermPoly({self.n}, {str(self)!r})"

    def __str__(self):
        return format_poly(self)


# ---------------------------------------------------------------------------
# free functions


def star(f: HermPoly) -> HermPoly:
    return f.star()


def eval_pair(f: HermPoly, a, b):
    """Substitute ``a`` for ``z`` and ``b`` for ``zbar``.

    ``a`` and ``b`` may carry leading batch dimensions; the last axis has
    length ``n``. Returns a complex scalar or an array of the batch shape.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape[-1:] != (f.n,) or b.shape[-1:] != (f.n,):
        raise ValueError(f"points must have trailing dimension {f.n}")
    coeffs, A, B = f.exponent_arrays()
    if not len(coeffs):
        out = np.zeros(np.broadcast_shapes(a.shape[:-1], b.shape[:-1]), dtype=complex)
    else:
        pa = np.prod(a[..., None, :] ** A, axis=-1)
        pb = np.prod(b[..., None, :] ** B, axis=-1)
        out = (pa * pb) @ coeffs
    if np.ndim(out) == 0:
        return complex(out)
    return out


@dataclass(frozen=True)
class Jet2:
    value: complex
    grad_holo: np.ndarray
    grad_anti: np.ndarray
    levi: np.ndarray


def jet2(f: HermPoly, a) -> Jet2:
    """Value, holomorphic/antiholomorphic gradients and Levi form at ``(a, conj(a))``."""
    a = np.asarray(a, dtype=complex).reshape(f.n)
    b = a.conj()
    n = f.n
    gz = np.array([eval_pair(f.diff_z(j), a, b) for j in range(n)], dtype=complex)
    gzb = np.array([eval_pair(f.diff_zbar(j), a, b) for j in range(n)], dtype=complex)
    levi = np.empty((n, n), dtype=complex)
    for j in range(n):
        dj = f.diff_z(j)
        for k in range(n):
            levi[j, k] = eval_pair(dj.diff_zbar(k), a, b)
    return Jet2(eval_pair(f, a, b), gz, gzb, levi)


def leading_form(f: HermPoly) -> HermPoly:
    if f.is_zero():
        raise ValueError("the zero polynomial has no leading form")
    return f.homogeneous_part(f.degree)


def holomorphic_monomials(n: int, max_degree: int) -> list[tuple[int, ...]]:
    """Exponent vectors ``alpha`` with ``|alpha| <= max_degree``, in graded order."""
    out = []
    for d in range(max_degree + 1):
        block = []
        for combo in combinations_with_replacement(range(n), d):
            e = [0] * n
            for j in combo:
                e[j] += 1
            block.append(tuple(e))
        out.extend(sorted(block, reverse=True))
    return out


def monomials(n: int, max_degree: int) -> list[Key]:
    """All keys ``(alpha, beta)`` of total degree at most ``max_degree``, canonical order."""
    out = []
    for e in holomorphic_monomials(2 * n, max_degree):
        out.append((e[:n], e[n:]))
    return sorted(out, key=order_key)


def format_poly(f: HermPoly) -> str:
    items = f.items()[::-1]
    if not items:
        return "0"
    pieces = []
    for idx, (key, c) in enumerate(items):
        mono = _monomial_str(key)
        neg = c.imag == 0 and c.real < 0
        mag = complex(-c.real, 0) if neg else c
        if mono:
            body = mono if mag == 1 else f"{_coeff_str(mag)}*{mono}"
        else:
            body = _coeff_str(mag)
        if idx == 0:
            pieces.append(f"-{body}" if neg else body)
        else:
            pieces.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(pieces)


# ---------------------------------------------------------------------------
# parser


class PolySyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)(?P<imag>i(?![\w]))?"
    r"|(?P<conj>conj\s*\(\s*z(?P<cidx>\d+)\s*\))"
    r"|(?P<zbar>zbar(?P<bidx>\d+))"
    r"|(?P<z>z(?P<zidx>\d+))"
    r"|(?P<i>i(?![\w]))"
    r"|(?P<op>[-+*^()])"
    r")"
)


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            start = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise PolySyntaxError(f"unexpected character {text[start]!r}", start)
        start = m.start() + (len(m.group(0)) - len(m.group(0).lstrip()))
        if m.group("num"):
            val = float(m.group("num"))
            tokens.append(("num", 1j * val if m.group("imag") else complex(val), start))
        elif m.group("conj"):
            tokens.append(("zbar", int(m.group("cidx")), start))
        elif m.group("zbar"):
            tokens.append(("zbar", int(m.group("bidx")), start))
        elif m.group("z"):
            tokens.append(("z", int(m.group("zidx")), start))
        elif m.group("i"):
            tokens.append(("num", 1j, start))
        else:
            tokens.append(("op", m.group("op"), start))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, n: int):
        self.tokens = _tokenize(text)
        self.i = 0
        self.n = n

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, op):
        kind, val, pos = self.take()
        if kind != "op" or val != op:
            raise PolySyntaxError(f"expected {op!r}", pos)

    def expr(self):
        out = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                rhs = self.term()
                out = out + rhs if val == "+" else out - rhs
            else:
                return out

    def term(self):
        out = self.unary()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.take()
                out = out * self.unary()
            else:
                return out

    def unary(self):
        kind, val, _ = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            inner = self.unary()
            return -inner if val == "-" else inner
        return self.power()

    def power(self):
        base = self.atom()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.take()
            kind, num, pos = self.take()
            if kind != "num" or num.imag != 0 or num.real != int(num.real) or num.real < 0:
                raise PolySyntaxError("exponent must be a nonnegative integer", pos)
            return base ** int(num.real)
        return base

    def atom(self):
        kind, val, pos = self.take()
        if kind == "num":
            return HermPoly.constant(self.n, val)
        if kind in ("z", "zbar"):
            if not 1 <= val <= self.n:
                raise PolySyntaxError(f"variable index {val} out of range 1..{self.n}", pos)
            return HermPoly.z(val - 1, self.n) if kind == "z" else HermPoly.zbar(val - 1, self.n)
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        if kind == "end":
            raise PolySyntaxError("unexpected end of input", pos)
        raise PolySyntaxError(f"unexpected token {val!r}", pos)


def parse_poly(text: str, n: int) -> HermPoly:
    """Parse polynomial text such as ``"z1*zbar1 - 1"`` in ``n`` variables."""
    p = _Parser(text, n)
    out = p.expr()
    kind, val, pos = p.peek()
    if kind != "end":
        raise PolySyntaxError(f"unexpected token {val!r}", pos)
    return out


def infer_nvars(*texts: str) -> int:
    """Largest variable index mentioned in the given texts (at least 1)."""
    idx = [int(m) for t in texts for m in re.findall(r"z(?:bar)?(\d+)", t)]
    return max(idx, default=1)

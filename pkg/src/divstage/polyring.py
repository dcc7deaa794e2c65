"""Sparse multivariate polynomials over the integers.

Monomials are packed into a single int: the total degree occupies the top
field and the exponents of ``y_1 .. y_s`` follow, ``_FIELD`` bits each.  With
that layout, multiplying monomials is integer addition and comparing packed
keys is graded-lex order (``y_1 > y_2 > ...``).
"""

from __future__ import annotations

import itertools
from math import isqrt
from typing import Iterable, Mapping, Sequence

from .core import DivstageError

_FIELD = 12
_MASK = (1 << _FIELD) - 1
_MAX_EXP = _MASK


class InexactDivision(DivstageError, ArithmeticError):
    pass


class NotASquare(DivstageError, ValueError):
    pass


def _pack(exps: Sequence[int]) -> int:
    key = sum(exps)
    if key > _MAX_EXP:
        raise OverflowError("total degree exceeds the packed monomial range")
    for e in exps:
        if e < 0:
            raise ValueError("negative exponent")
        key = (key << _FIELD) | e
    return key


def _unpack(key: int, s: int) -> tuple[int, ...]:
    out = []
    for _ in range(s):
        out.append(key & _MASK)
        key >>= _FIELD
    return tuple(reversed(out))


def _divides(small: int, big: int, s: int) -> bool:
    for _ in range(s + 1):
        if (small & _MASK) > (big & _MASK):
            return False
        small >>= _FIELD
        big >>= _FIELD
    return True


class SparsePoly:
    """Immutable polynomial in ``s`` indeterminates with integer coefficients."""

    __slots__ = ("s", "_t")

    def __init__(self, s: int, terms: Mapping[tuple[int, ...], int] | None = None):
        self.s = s
        t: dict[int, int] = {}
        for exps, c in (terms or {}).items():
            if len(exps) != s:
                raise ValueError(f"monomial {exps} has the wrong length for s={s}")
            if c:
                k = _pack(exps)
                t[k] = t.get(k, 0) + int(c)
                if not t[k]:
                    del t[k]
        self._t = t

    @classmethod
    def _raw(cls, s: int, t: dict[int, int]) -> "SparsePoly":
        p = cls.__new__(cls)
        p.s = s
        p._t = t
        return p

    @classmethod
    def constant(cls, s: int, c: int) -> "SparsePoly":
        return cls._raw(s, {0: int(c)} if c else {})

    @classmethod
    def variable(cls, s: int, i: int, coeff: int = 1) -> "SparsePoly":
        """``coeff * y_{i+1}`` (``i`` is zero-based)."""
        exps = [0] * s
        exps[i] = 1
        return cls(s, {tuple(exps): coeff})

    @classmethod
    def zero(cls, s: int) -> "SparsePoly":
        return cls._raw(s, {})

    # -- inspection ---------------------------------------------------------

    def terms(self) -> dict[tuple[int, ...], int]:
        """Exponent vector -> coefficient, in ascending graded-lex order."""
        return {_unpack(k, self.s): self._t[k] for k in sorted(self._t)}

    def coefficient(self, exps: Sequence[int]) -> int:
        if len(exps) != self.s or min(exps, default=0) < 0 or sum(exps) > _MAX_EXP:
            return 0
        return self._t.get(_pack(exps), 0)

    def __len__(self) -> int:
        return len(self._t)

    def __bool__(self) -> bool:
        return bool(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def total_degree(self) -> int:
        """Degree of the highest term; -1 for the zero polynomial."""
        return max(self._t) >> (_FIELD * self.s) if self._t else -1

    def is_homogeneous(self) -> bool:
        return len({k >> (_FIELD * self.s) for k in self._t}) <= 1

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = SparsePoly.constant(self.s, other)
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return self.s == other.s and self._t == other._t

    def __hash__(self) -> int:
        return hash((self.s, frozenset(self._t.items())))

    def __repr__(self) -> str:
        if not self._t:
            return "0"
        parts = []
        for exps, c in reversed(list(self.terms().items())):
            mono = "*".join(f"y{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(exps) if e)
            parts.append(f"{c}*{mono}" if mono else str(c))
        return " + ".join(parts)

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "SparsePoly":
        if isinstance(other, int):
            return SparsePoly.constant(self.s, other)
        if not isinstance(other, SparsePoly):
            raise TypeError(f"cannot combine SparsePoly with {type(other).__name__}")
        if other.s != self.s:
            raise ValueError("polynomials live in different rings")
        return other

    def __add__(self, other) -> "SparsePoly":
        other = self._coerce(other)
        t = dict(self._t)
        for k, c in other._t.items():
            v = t.get(k, 0) + c
            if v:
                t[k] = v
            else:
                t.pop(k, None)
        return SparsePoly._raw(self.s, t)

    __radd__ = __add__

    def __neg__(self) -> "SparsePoly":
        return SparsePoly._raw(self.s, {k: -c for k, c in self._t.items()})

    def __sub__(self, other) -> "SparsePoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "SparsePoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "SparsePoly":
        if isinstance(other, int):
            return SparsePoly._raw(self.s, {k: c * other for k, c in self._t.items()} if other else {})
        other = self._coerce(other)
        t = _mul_terms(self._t, other._t)
        return SparsePoly._raw(self.s, {k: c for k, c in t.items() if c})

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "SparsePoly":
        if e < 0:
            raise ValueError("negative power")
        out = SparsePoly.constant(self.s, 1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def exact_div(self, divisor: "SparsePoly") -> "SparsePoly":
        """Quotient of an exact division; raises :class:`InexactDivision` otherwise."""
        divisor = self._coerce(divisor)
        if not divisor._t:
            raise ZeroDivisionError("division by the zero polynomial")
        return SparsePoly._raw(self.s, _div_terms(dict(self._t), divisor._t, self.s))


def _mul_terms(a: dict[int, int], b: dict[int, int]) -> dict[int, int]:
    if len(a) < len(b):
        a, b = b, a
    t: dict[int, int] = {}
    get = t.get
    for kb, cb in b.items():
        for ka, ca in a.items():
            k = ka + kb
            t[k] = get(k, 0) + ca * cb
    return t


def _div_terms(r: dict[int, int], d: dict[int, int], s: int) -> dict[int, int]:
    dl = max(d)
    dc = d[dl]
    dterms = list(d.items())
    q: dict[int, int] = {}
    while r:
        rl = max(r)
        rc = r[rl]
        if rc % dc or not _divides(dl, rl, s):
            raise InexactDivision("remainder is nonzero")
        qk, qc = rl - dl, rc // dc
        q[qk] = qc
        for k, c in dterms:
            kk = k + qk
            v = r.get(kk, 0) - c * qc
            if v:
                r[kk] = v
            else:
                r.pop(kk, None)
    return q


def bareiss_determinant(matrix: Sequence[Sequence[SparsePoly]]) -> SparsePoly:
    """Determinant by fraction-free Gaussian elimination.

    Every division is exact in the ring; an inexact one means a bug and
    raises :class:`InexactDivision`.
    """
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise ValueError("matrix must be square")
    if n == 0:
        raise ValueError("empty matrix has no ring to live in")
    s = matrix[0][0].s
    if any(e.s != s for row in matrix for e in row):
        raise ValueError("entries live in different rings")
    # work on raw term dicts; the wrapper objects cost more than the arithmetic
    a = [[dict(e._t) for e in row] for row in matrix]
    sign = 1
    prev: dict[int, int] = {0: 1}
    for k in range(n - 1):
        if not a[k][k]:
            for r in range(k + 1, n):
                if a[r][k]:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return SparsePoly.zero(s)
        pivot = a[k][k]
        row_k = a[k]
        for i in range(k + 1, n):
            row_i = a[i]
            aik = row_i[k]
            for j in range(k + 1, n):
                num = _mul_terms(pivot, row_i[j]) if row_i[j] else {}
                if aik and row_k[j]:
                    for key, c in _mul_terms(aik, row_k[j]).items():
                        num[key] = num.get(key, 0) - c
                num = {key: c for key, c in num.items() if c}
                row_i[j] = _div_terms(num, prev, s) if k and num else num
            row_i[k] = {}
        prev = pivot
    det = a[n - 1][n - 1]
    return SparsePoly._raw(s, {key: -c for key, c in det.items()} if sign < 0 else det)


def homogeneous_sqrt(p: SparsePoly) -> SparsePoly:
    """Integer square root of a polynomial that is a perfect square.

    Coefficients of the root are computed one monomial at a time in
    ascending graded-lex order, pivoting on the root's least monomial ``mu``
    (so a zero constant term is fine):

        d_mu    = sqrt(c_{2 mu})
        d_kappa = (c_{mu + kappa} - sum_{alpha + beta = mu + kappa, alpha, beta != mu} d_alpha d_beta) / (2 d_mu)

    With ``mu = 0`` this is the usual constant-term recurrence.  The root is
    normalised so ``d_mu > 0``.  Raises :class:`NotASquare` when ``p`` has no
    integer square root.
    """
    s = p.s
    if p.is_zero():
        return SparsePoly.zero(s)
    low = min(p._t)
    low_exps = _unpack(low, s)
    c_low = p._t[low]
    if c_low < 0 or any(e % 2 for e in low_exps):
        raise NotASquare("least monomial is not a square")
    d_mu = isqrt(c_low)
    if d_mu * d_mu != c_low:
        raise NotASquare("least coefficient is not a perfect square")
    mu_exps = tuple(e // 2 for e in low_exps)
    mu = _pack(mu_exps)
    two_d = 2 * d_mu

    # Bounds on the root's support: each exponent at most half of p's, degree in range.
    all_exps = [_unpack(k, s) for k in p._t]
    bound = [max(e[i] for e in all_exps) // 2 for i in range(s)]
    lo_deg = sum(mu_exps)
    hi_deg = p.total_degree() // 2
    candidates = []
    for exps in itertools.product(*(range(b + 1) for b in bound)):
        d = sum(exps)
        if lo_deg <= d <= hi_deg:
            k = _pack(exps)
            if k > mu:
                candidates.append((k, exps))
    candidates.sort()

    root: dict[int, int] = {mu: d_mu}
    support: list[tuple[int, tuple[int, ...]]] = []   # computed monomials other than mu
    for k, exps in candidates:
        target = mu + k
        target_exps = tuple(a + b for a, b in zip(mu_exps, exps))
        cross = 0
        for ak, aexps in support:
            if all(x <= y for x, y in zip(aexps, target_exps)):
                bk = target - ak
                if bk != mu:
                    cross += root[ak] * root.get(bk, 0)
        num = p._t.get(target, 0) - cross
        if num % two_d:
            raise NotASquare("inexact coefficient division")
        d_k = num // two_d
        if d_k:
            root[k] = d_k
            support.append((k, exps))
    q = SparsePoly._raw(s, root)
    if q * q != p:
        raise NotASquare("candidate root does not square back")
    return q


def poly_from_dict(s: int, terms: Mapping[tuple[int, ...], int]) -> SparsePoly:
    return SparsePoly(s, terms)


def constant_matrix(rows: Iterable[Iterable[int]], s: int = 1) -> list[list[SparsePoly]]:
    return [[SparsePoly.constant(s, v) for v in row] for row in rows]

"""q-Pochhammer symbols, Gaussian binomials, and monomial arguments.

Everything here returns exact truncated series from the kernel in
`series`.  The two standard generating-function facts this module leans
on: the pentagonal-number expansion of (Q; Q)_inf, used as a fast path
whenever an Euler-type product is requested, and the q-Pascal recurrence
for Gaussian binomials, memoised as dense integer polynomials.  Both have
slower independent counterparts in `naive` for cross-checking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .series import (
    INF,
    HalfInt,
    IllPosedError,
    Order,
    QSeries,
    SpecError,
    ZLaurent,
    _ord_num,
    qe,
)


@dataclass(frozen=True, slots=True)
class Monomial:
    """sign * q**q_exp * z**z_exp with sign in {+1, -1}."""

    sign: int
    q_exp: HalfInt
    z_exp: int = 0

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise SpecError(f"monomial sign must be +-1, got {self.sign}")
        if isinstance(self.q_exp, int):
            object.__setattr__(self, "q_exp", qe(self.q_exp))
        elif not isinstance(self.q_exp, HalfInt):
            raise SpecError(f"bad monomial exponent {self.q_exp!r}")

    def inverted(self) -> "Monomial":
        """The reciprocal monomial (signs are their own inverses)."""
        return Monomial(self.sign, -self.q_exp, -self.z_exp)

    def times_q(self, exp) -> "Monomial":
        return Monomial(self.sign, self.q_exp + exp, self.z_exp)

    def __str__(self):
        s = "-" if self.sign < 0 else ""
        parts = []
        if self.q_exp.num:
            parts.append(f"q^{self.q_exp}")
        if self.z_exp:
            parts.append("z" if self.z_exp == 1 else f"z^{self.z_exp}")
        return s + ("*".join(parts) if parts else "1")


def binom(n: int, k: int) -> int:
    """Ordinary binomial; out-of-range k gives 0."""
    if n < 0:
        raise SpecError(f"binom needs n >= 0, got {n}")
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


# dense q-grid coefficient lists, exact; shared per process
_QBINOM_MEMO: dict = {}


def qbinom_poly(n: int, k: int):
    """Gaussian binomial [n, k]_q as a dense list of q-grid coefficients.

    Exact polynomial of degree k*(n-k).  Returns [] outside 0 <= k <= n.
    Dict access is atomic under the GIL and entries are pure, so a rare
    duplicated computation is harmless.
    """
    if k < 0 or k > n:
        return []
    k = min(k, n - k)
    if k == 0:
        return [1]
    key = (n, k)
    got = _QBINOM_MEMO.get(key)
    if got is not None:
        return got
    # [n,k] = [n-1,k-1] + q^k [n-1,k]
    a = qbinom_poly(n - 1, k - 1)
    b = qbinom_poly(n - 1, k) if k <= n - 1 else []
    out = list(a) + [0] * (k * (n - k) - (len(a) - 1))
    for i, c in enumerate(b):
        out[i + k] += c
    _QBINOM_MEMO[key] = out
    return out


def _poly_to_series(poly, order: Order) -> QSeries:
    coeffs = [0] * (2 * len(poly) - 1) if poly else []
    for i, c in enumerate(poly):
        coeffs[2 * i] = c
    return QSeries(0, coeffs, _ord_num(order))


def qbinom(n: int, k: int, order: Order = INF) -> QSeries:
    """Gaussian binomial [n, k]_q as a series."""
    return _poly_to_series(qbinom_poly(n, k), order)


def poch_finite(arg: Monomial, n: int, base_exp=qe(1), order: Order = INF) -> ZLaurent:
    """(arg; q**base_exp)_n = prod_{i<n} (1 - arg * q**(i*base_exp))."""
    if n < 0:
        raise SpecError(f"finite Pochhammer length must be >= 0, got {n}")
    base = HalfInt._coerce(base_exp)
    acc = ZLaurent.scalar(QSeries.one(order))
    for i in range(n):
        e = arg.q_exp + base * i
        factor = ZLaurent.from_terms(
            {0: QSeries.one(), arg.z_exp: QSeries.monomial(-arg.sign, e)}
            if arg.z_exp
            else {0: QSeries.one() + QSeries.monomial(-arg.sign, e)},
            order,
        )
        acc = acc * factor
    return acc


def poch_finite_scalar(arg: Monomial, n: int, base_exp=qe(1), order: Order = INF) -> QSeries:
    """Finite Pochhammer of a z-free argument, as a plain series."""
    if arg.z_exp != 0:
        raise SpecError("scalar Pochhammer needs a z-free argument")
    if n < 0:
        raise SpecError(f"finite Pochhammer length must be >= 0, got {n}")
    base = HalfInt._coerce(base_exp)
    acc = QSeries.one(order)
    for i in range(n):
        acc = acc * (QSeries.one() + QSeries.monomial(-arg.sign, arg.q_exp + base * i))
    return acc


def poch_infinite(arg: Monomial, base_exp=qe(1), order: Order = None) -> QSeries:
    """(arg; q**base_exp)_inf truncated at `order` (which must be finite).

    Well-posedness: the factors must tend to 1, so base_exp > 0 and
    arg.q_exp > 0 are required, except that sign == -1 admits q_exp == 0
    (the factor 2 of (-1; q)_inf).
    """
    if arg.z_exp != 0:
        raise SpecError("infinite Pochhammer needs a z-free argument")
    base = HalfInt._coerce(base_exp)
    ordnum = _ord_num(order)
    if ordnum is None:
        raise IllPosedError("an infinite product needs a finite truncation order")
    if base.num <= 0:
        raise IllPosedError(f"infinite Pochhammer base exponent must be positive, got {base}")
    if arg.q_exp.num < 0 or (arg.q_exp.num == 0 and arg.sign == 1):
        raise IllPosedError(f"infinite Pochhammer argument {arg} does not converge")
    if arg.sign == 1 and arg.q_exp == base:
        # (Q; Q)_inf: pentagonal-number expansion, exponents base*j*(3j-1)/2
        terms = {}
        j = 0
        while True:
            hit = False
            for jj in ((j, -j) if j else (0,)):
                e = HalfInt(base.num * (jj * (3 * jj - 1) // 2))
                if e.num < ordnum:
                    terms[e] = terms.get(e, 0) + (-1 if jj % 2 else 1)
                    hit = True
            if j and not hit:
                break
            j += 1
        return QSeries.from_terms(terms, HalfInt(ordnum))
    acc = QSeries.one(HalfInt(ordnum))
    i = 0
    while True:
        e = arg.q_exp + base * i
        if e.num >= ordnum:
            break
        acc = acc * (QSeries.one() + QSeries.monomial(-arg.sign, e))
        i += 1
    return acc.truncated(HalfInt(ordnum))


_EULER_CACHE: dict = {}
_PARTITION_CACHE: dict = {}


def euler_series(order) -> QSeries:
    """(q; q)_inf truncated at order, cached."""
    n = _ord_num(order)
    if n is None:
        raise IllPosedError("an infinite product needs a finite truncation order")
    got = _EULER_CACHE.get(n)
    if got is None:
        got = _EULER_CACHE[n] = poch_infinite(Monomial(1, qe(1)), qe(1), HalfInt(n))
    return got


def partition_series(order) -> QSeries:
    """1/(q; q)_inf truncated at order, cached."""
    n = _ord_num(order)
    if n is None:
        raise IllPosedError("an infinite product needs a finite truncation order")
    got = _PARTITION_CACHE.get(n)
    if got is None:
        got = _PARTITION_CACHE[n] = euler_series(HalfInt(n)).inverse()
    return got

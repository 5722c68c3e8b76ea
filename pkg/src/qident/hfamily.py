"""The central two-parameter polynomial family and its z -> zq shift closure.

H(n, a) is the Laurent polynomial sum_{s=-n..n} [2n, n-s]_q q^(a s^2) z^s;
the closure F(n, j, a) applies j times the step G(z) -> G(zq) + G(q/z).
Both are built exactly (order INF) so substitutions keep full knowledge
and truncation happens once, at the end.

As n grows with z fixed to a monomial sign*q^m (|m| < a needed for the
product side), the values H(n, a)(-z) converge coefficientwise;
`stabilized_h_value` detects this either by consecutive-n bit-exact
agreement (plus one confirming extra step) or by an explicit n bound.
The limits themselves are the infinite products `h_limit_product` and,
for the shifted family, the binomial combination `f_limit_sum`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Tuple

from .qobjects import (
    Monomial,
    binom,
    partition_series,
    poch_infinite,
    qbinom_poly,
)
from .series import (
    INF,
    HalfInt,
    IllPosedError,
    Order,
    QidentError,
    QSeries,
    SpecError,
    ZLaurent,
    _ord_num,
    qe,
)


@dataclass(frozen=True, slots=True)
class HSpec:
    """H with 2n rows and quadratic weight a (a half-integer)."""

    n: int
    a: HalfInt

    def __post_init__(self):
        if self.n < 0:
            raise SpecError(f"H needs n >= 0, got {self.n}")
        if isinstance(self.a, int):
            object.__setattr__(self, "a", qe(self.a))
        elif not isinstance(self.a, HalfInt):
            raise SpecError(f"bad weight {self.a!r}")


@dataclass(frozen=True, slots=True)
class FSpec:
    """j-fold shift closure of H(n, a)."""

    n: int
    j: int
    a: HalfInt

    def __post_init__(self):
        if self.n < 0 or self.j < 0:
            raise SpecError(f"F needs n, j >= 0, got n={self.n} j={self.j}")
        if isinstance(self.a, int):
            object.__setattr__(self, "a", qe(self.a))
        elif not isinstance(self.a, HalfInt):
            raise SpecError(f"bad weight {self.a!r}")


def h_poly(spec: HSpec, order: Order = INF) -> ZLaurent:
    """sum_{s=-n..n} [2n, n-s]_q q^(a s^2) z^s, truncated at `order`."""
    n, a = spec.n, spec.a
    ordnum = _ord_num(order)
    terms = {}
    if ordnum is None:
        for s in range(-n, n + 1):
            poly = qbinom_poly(2 * n, n - s)
            coeffs = [0] * (2 * len(poly) - 1) if poly else []
            for i, c in enumerate(poly):
                coeffs[2 * i] = c
            terms[s] = QSeries(a.num * s * s, coeffs, None)
        return ZLaurent.from_terms(terms, order)
    # finite order: build the binomial column [2n, n-s] incrementally from
    # s=n downward via [2n,n-s] * (1-q^(n+s+1)) / (1-q^(n-s)), dense on the
    # whole-q grid; O(n * order) instead of the exact-polynomial memo
    L = max((ordnum + 1) // 2, 1)
    b = [0] * L
    b[0] = 1

    def emit(s: int) -> None:
        coeffs = [0] * (2 * L - 1)
        for i, c in enumerate(b):
            coeffs[2 * i] = c
        q = QSeries(a.num * s * s, coeffs, a.num * s * s + 2 * L - 1)
        terms[s] = q
        if s:
            terms[-s] = q

    emit(n)
    for s in range(n - 1, -1, -1):
        e = n + s + 1
        for i in range(L - 1, e - 1, -1):
            b[i] -= b[i - e]
        e = n - s
        for i in range(e, L):
            b[i] += b[i - e]
        emit(s)
    return ZLaurent.from_terms(terms, order)


def f_func(spec: FSpec, order: Order = INF) -> ZLaurent:
    """Apply the step G -> G(zq) + G(q/z) j times to H(n, a)."""
    f = h_poly(HSpec(spec.n, spec.a), order)
    for _ in range(spec.j):
        g = f.zshift(qe(1))
        f = g + g.zinvert()
    return f


def h_limit_product(a: HalfInt, z: Monomial, order) -> QSeries:
    """(q^2a, z q^a, q^a / z; q^2a)_inf / (q; q)_inf for monomial z.

    This is the n -> infinity limit of H(n, a)(-z); both exponents
    a +- m must be positive for the product to make sense.
    """
    if z.z_exp != 0:
        raise SpecError("limit product needs a monomial z value")
    a = HalfInt._coerce(a)
    m = z.q_exp
    if a.num <= 0:
        raise IllPosedError(f"limit product needs a > 0, got {a}")
    if (a + m).num <= 0 or (a - m).num <= 0:
        raise IllPosedError(f"limit product arguments q^{a + m}, q^{a - m} must have positive exponent")
    two_a = HalfInt(2 * a.num)
    out = poch_infinite(Monomial(1, two_a), two_a, order)
    out = out * poch_infinite(Monomial(z.sign, a + m), two_a, order)
    out = out * poch_infinite(Monomial(z.sign, a - m), two_a, order)
    return out * partition_series(order)


def f_limit_sum(j: int, a: HalfInt, z: Monomial, order) -> QSeries:
    """sum_i C(j,i) (q^2a, z q^(a+j-2i), q^(a-j+2i)/z; q^2a)_inf / (q;q)_inf."""
    if j < 0:
        raise SpecError(f"needs j >= 0, got {j}")
    if z.z_exp != 0:
        raise SpecError("limit sum needs a monomial z value")
    a = HalfInt._coerce(a)
    m = z.q_exp
    two_a = HalfInt(2 * a.num)
    if a.num <= 0:
        raise IllPosedError(f"limit sum needs a > 0, got {a}")
    common = poch_infinite(Monomial(1, two_a), two_a, order) * partition_series(order)
    acc = QSeries.zero()
    for i in range(j + 1):
        e1 = a + m + (j - 2 * i)
        e2 = a - m - (j - 2 * i)
        if e1.num <= 0 or e2.num <= 0:
            raise IllPosedError(
                f"limit sum term i={i} has argument exponents {e1}, {e2}; both must be positive"
            )
        term = poch_infinite(Monomial(z.sign, e1), two_a, order) * poch_infinite(
            Monomial(z.sign, e2), two_a, order
        )
        acc = acc + term * binom(j, i)
    return acc * common


def _stabilize(
    value_at: Callable[[int], QSeries],
    order,
    criterion: str,
    margin_qunits: int,
    n_cap: int = 128,
) -> Tuple[QSeries, int]:
    """Common stabilization driver; returns (stable value, n used).

    criterion "consecutive": accept once two consecutive n agree
    bit-exactly and one further step confirms.  criterion "bound": jump
    straight to n = ceil(sqrt(N / min(1, margin))) with N the target
    order in whole q-units and margin the quadratic growth rate 2a - j.
    """
    n_target = _ord_num(order)
    if n_target is None:
        raise IllPosedError("stabilization needs a finite order")
    if criterion == "bound":
        denom = min(1, margin_qunits)
        if denom <= 0:
            raise IllPosedError(
                "the explicit stabilization bound needs a positive quadratic margin"
            )
        target_q = (n_target + 1) // 2
        n0 = math.isqrt(max(target_q // denom, 0))
        while n0 * n0 * denom < target_q:
            n0 += 1
        n0 = max(n0, 1)
        return value_at(n0), n0
    if criterion != "consecutive":
        raise SpecError(f"unknown stabilization criterion {criterion!r}")
    prev = value_at(0)
    streak = 0
    for n in range(1, n_cap + 1):
        cur = value_at(n)
        if cur == prev:
            streak += 1
            # bit-exact agreement once, then one confirming extra step
            if streak == 2:
                return cur, n
        else:
            streak = 0
        prev = cur
    raise QidentError(f"no stabilization below n = {n_cap}")


def _truncated_value(build: Callable[[Order], ZLaurent], w: Monomial, order, pad0: int) -> QSeries:
    # work at a padded order so shifts with negative steps stay exact below `order`
    target = _ord_num(order)
    pad = max(pad0, 0) + 2
    while True:
        val = build(HalfInt(target + pad)).substitute(w.sign, w.q_exp)
        got = _ord_num(val.order)
        if got is None or got >= target:
            return val.truncated(order)
        pad = 2 * pad + (target - got)


def stabilized_h_value(
    a: HalfInt, w: Monomial, order, criterion: str = "consecutive"
) -> Tuple[QSeries, int]:
    """Stable truncation of H(n, a)(w) for large n (no normalization).

    `w` is the actual argument substituted into H (z-free monomial).
    """
    if w.z_exp != 0:
        raise SpecError("stabilization needs a monomial argument")
    a = HalfInt._coerce(a)
    if _ord_num(order) is None:
        raise IllPosedError("stabilization needs a finite order")

    def value_at(n: int) -> QSeries:
        return _truncated_value(
            lambda ww: h_poly(HSpec(n, a), ww), w, order, abs(w.q_exp.num) * n
        )

    return _stabilize(value_at, order, criterion, a.num)


def stabilized_f_value(
    j: int, a: HalfInt, w: Monomial, order, criterion: str = "consecutive"
) -> Tuple[QSeries, int]:
    """Stable truncation of F(n, j, a)(w) for large n (no normalization)."""
    if w.z_exp != 0:
        raise SpecError("stabilization needs a monomial argument")
    a = HalfInt._coerce(a)
    if _ord_num(order) is None:
        raise IllPosedError("stabilization needs a finite order")

    def value_at(n: int) -> QSeries:
        return _truncated_value(
            lambda ww: f_func(FSpec(n, j, a), ww),
            w,
            order,
            (abs(w.q_exp.num) + 2 * j) * n,
        )

    return _stabilize(value_at, order, criterion, a.num - j)

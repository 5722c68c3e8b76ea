"""Truncated evaluation of quadratic-exponent multisums.

A summand spec describes sums of the shape

    sum_{s_1 >= s_2 >= ... >= s_k >= 0}
        q^(sum_i quad_i s_i^2 + lambda_i s_i) * B(s) *
        tail(s_k) / prod_{i<k} (q; q)_{s_i - s_{i+1}}

where B(s) is an optional product over a set P of positions: position 1
contributes q^(-s_1), a position i >= 2 contributes
q^(-s_i) (1 + q^(s_{i-1} + s_i)).  The tail kinds cover the closing
factors that occur in this family of identities.

Evaluation runs a depth-first search over weakly decreasing index tuples.
At each node `prune_bound` gives a certified lower bound on the minimal
exponent any completion of the current prefix can produce; subtrees whose
bound reaches the requested order are skipped, so the truncated result is
still exact.  The engine reports how many index tuples it actually
evaluated, and the test suite checks it against an unpruned brute force.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Tuple, Union

from .qobjects import Monomial, qbinom_poly
from .series import (
    HalfInt,
    IllPosedError,
    QSeries,
    SpecError,
    _ord_num,
)


@dataclass(frozen=True, slots=True)
class TailOdd:
    """1 / (q; q)_{s_k}"""


@dataclass(frozen=True, slots=True)
class TailEven:
    """1 / (q^2; q^2)_{s_k}"""


@dataclass(frozen=True, slots=True)
class TailOver:
    """(-z, -q/z; q)_{s_k} / (q; q)_{2 s_k} at monomial z."""

    z: Monomial


@dataclass(frozen=True, slots=True)
class TailOverOdd:
    """(-q^(off+1)/z; q)_{s_k + 1} (-z q^(-off); q)_{s_k} / (q; q)_{2 s_k + 1}."""

    z: Monomial
    offset: int


@dataclass(frozen=True, slots=True)
class TailH:
    """H(s_k, a)(z) / (q; q)_{2 s_k} at monomial z (a collapsing closer)."""

    a: HalfInt
    z: Monomial

    def __post_init__(self):
        if isinstance(self.a, int):
            object.__setattr__(self, "a", HalfInt(2 * self.a))


Tail = Union[TailOdd, TailEven, TailOver, TailOverOdd, TailH]


@dataclass(frozen=True)
class SummandSpec:
    """Declarative description of one multisum."""

    k: int
    linear: Tuple[int, ...]
    placement: Optional[frozenset] = None
    quad: Optional[Tuple[int, ...]] = None
    tail: Tail = field(default_factory=TailOdd)

    def __post_init__(self):
        if self.k < 1:
            raise SpecError(f"need at least one index, got k={self.k}")
        object.__setattr__(self, "linear", tuple(self.linear))
        if len(self.linear) != self.k:
            raise SpecError(f"{self.k} indices but {len(self.linear)} linear weights")
        if not all(isinstance(c, int) for c in self.linear):
            raise SpecError("linear weights are whole q-exponents (plain ints)")
        if self.quad is None:
            object.__setattr__(self, "quad", (1,) * self.k)
        else:
            object.__setattr__(self, "quad", tuple(self.quad))
        if len(self.quad) != self.k or not all(
            isinstance(c, int) and c >= 1 for c in self.quad
        ):
            raise SpecError("quadratic weights must be positive ints, one per index")
        if self.placement is not None:
            p = frozenset(self.placement)
            if not all(isinstance(i, int) and 1 <= i <= self.k for i in p):
                raise SpecError(f"placement {sorted(p)} must be positions in 1..{self.k}")
            object.__setattr__(self, "placement", p)

    def effective_linear_num(self) -> list:
        """Per-index linear exponent numerators including placement's q^-s_i."""
        p = self.placement or frozenset()
        return [
            2 * self.linear[i] - (2 if (i + 1) in p else 0) for i in range(self.k)
        ]


@dataclass
class SumStats:
    """Mutable counters filled in by eval_multisum."""

    tuples: int = 0
    nodes: int = 0
    pruned: int = 0


def _tail_z(tail) -> Optional[Monomial]:
    z = getattr(tail, "z", None)
    if z is not None and z.z_exp != 0:
        raise SpecError("tail arguments must be z-free monomials")
    return z


def tail_min_num(tail: Tail, s: int) -> int:
    """Exact minimal exponent numerator of the tail's finite factors at s.

    Inverse Pochhammer factors have minimal exponent 0 and are ignored.
    """
    if isinstance(tail, (TailOdd, TailEven)):
        return 0
    if isinstance(tail, TailOver):
        m = tail.z.q_exp.num
        return sum(min(0, m + 2 * i) for i in range(s)) + sum(
            min(0, 2 - m + 2 * i) for i in range(s)
        )
    if isinstance(tail, TailOverOdd):
        m = tail.z.q_exp.num
        off = tail.offset
        first = sum(min(0, 2 * off + 2 - m + 2 * i) for i in range(s + 1))
        second = sum(min(0, m - 2 * off + 2 * i) for i in range(s))
        return first + second
    if isinstance(tail, TailH):
        a = tail.a.num
        m = tail.z.q_exp.num
        if a <= 0:
            raise SpecError("collapsing tail needs a positive quadratic weight")
        return min(a * t * t + m * t for t in range(-s, s + 1))
    raise SpecError(f"unknown tail {tail!r}")


def _tail_floor_num(tail: Tail, cap: Optional[int]) -> int:
    """min of tail_min_num over 0 <= s <= cap (cap None: over all s >= 0)."""
    if isinstance(tail, (TailOdd, TailEven)):
        return 0
    if isinstance(tail, TailH):
        # convex in the inner index, so the integer argmin sits next to the vertex
        a = tail.a.num
        if a <= 0:
            raise SpecError("collapsing tail needs a positive quadratic weight")
        m = tail.z.q_exp.num
        v = -m // (2 * a)
        best = 0
        for t in (v, v + 1):
            if cap is not None:
                t = max(-cap, min(cap, t))
            best = min(best, a * t * t + m * t)
        return best
    if cap is not None:
        return min(tail_min_num(tail, s) for s in range(cap + 1))
    # TailOver/TailOverOdd: s -> s+1 increments are nondecreasing, so the
    # running sum is minimal at the last s with a negative increment
    m = tail.z.q_exp.num
    best = 0
    cum = 0
    s = 0
    while True:
        if isinstance(tail, TailOver):
            inc = min(0, m + 2 * s) + min(0, 2 - m + 2 * s)
        else:
            off = tail.offset
            inc = min(0, 2 * off + 2 - m + 2 * (s + 1)) + min(0, m - 2 * off + 2 * s)
        if inc >= 0:
            return best
        cum += inc
        best = min(best, cum)
        s += 1


def _index_min_num(quadnum: int, lamnum: int, cap: Optional[int]) -> int:
    """min over admissible s of quadnum*s^2 + lamnum*s."""
    if lamnum >= 0:
        return 0
    top = (-lamnum) // (2 * quadnum) + 1
    if cap is not None:
        top = min(top, cap)
    return min(quadnum * s * s + lamnum * s for s in range(top + 1))


def prune_bound(spec: SummandSpec, prefix: Tuple[int, ...]) -> HalfInt:
    """Certified lower bound on exponents reachable from a fixed prefix.

    `prefix` fixes s_1..s_len; the bound is the prefix's own exponent
    contribution plus minimised contributions of the free indices and the
    tail.  Monotone: extending a prefix never lowers the bound.
    """
    if len(prefix) > spec.k:
        raise SpecError("prefix longer than the index count")
    if any(prefix[i] < prefix[i + 1] for i in range(len(prefix) - 1)) or any(
        s < 0 for s in prefix
    ):
        raise SpecError(f"prefix {prefix} is not weakly decreasing and nonnegative")
    lam = spec.effective_linear_num()
    quad = [2 * c for c in spec.quad]
    total = 0
    for i, s in enumerate(prefix):
        total += quad[i] * s * s + lam[i] * s
    cap = prefix[-1] if prefix else None
    if len(prefix) == spec.k:
        return HalfInt(total + tail_min_num(spec.tail, prefix[-1]))
    for i in range(len(prefix), spec.k):
        total += _index_min_num(quad[i], lam[i], cap)
    return HalfInt(total + _tail_floor_num(spec.tail, cap))


def _geometric(step_num: int, ordnum: int) -> QSeries:
    """1 / (1 - q^(step_num/2)) below the order."""
    if ordnum <= 0:
        return QSeries.zero(HalfInt(ordnum))
    coeffs = [0] * ordnum
    e = 0
    while e < ordnum:
        coeffs[e] = 1
        e += step_num
    return QSeries(0, coeffs, ordnum)


class _TailValues:
    """Per-evaluation cache of tail factors at working order W."""

    def __init__(self, tail: Tail, wnum: int, inv_poch):
        self.tail = tail
        self.w = wnum
        self.inv_poch = inv_poch
        self.cache: dict = {}
        self.z = _tail_z(tail)

    def _rising(self, sign: int, start_num: int, count: int, key: str) -> QSeries:
        """prod_{i<count} (1 + sign*q^(start_num/2 + i)), cached incrementally."""
        store = self.cache.setdefault(key, [QSeries.one(HalfInt(self.w))])
        while len(store) <= count:
            i = len(store) - 1
            f = QSeries.one() + QSeries.monomial(sign, HalfInt(start_num + 2 * i))
            store.append(store[-1] * f)
        return store[count]

    def value(self, s: int) -> QSeries:
        got = self.cache.get(s)
        if got is not None:
            return got
        t = self.tail
        if isinstance(t, TailOdd):
            v = self.inv_poch(s)
        elif isinstance(t, TailEven):
            store = self.cache.setdefault("even", [QSeries.one(HalfInt(self.w))])
            while len(store) <= s:
                d = len(store)
                store.append(store[-1] * _geometric(4 * d, self.w))
            v = store[s]
        elif isinstance(t, TailOver):
            m = self.z.q_exp.num
            sgn = self.z.sign
            v = (
                self._rising(sgn, m, s, "ovA")
                * self._rising(sgn, 2 - m, s, "ovB")
                * self.inv_poch(2 * s)
            )
        elif isinstance(t, TailOverOdd):
            m = self.z.q_exp.num
            sgn = self.z.sign
            off = t.offset
            v = (
                self._rising(sgn, 2 * off + 2 - m, s + 1, "ooA")
                * self._rising(sgn, m - 2 * off, s, "ooB")
                * self.inv_poch(2 * s + 1)
            )
        elif isinstance(t, TailH):
            m = self.z.q_exp.num
            sgn = self.z.sign
            a = t.a.num
            acc = QSeries.zero()
            for u in range(-s, s + 1):
                poly = qbinom_poly(2 * s, s - u)
                coeffs = [0] * (2 * len(poly) - 1) if poly else []
                for i, c in enumerate(poly):
                    coeffs[2 * i] = c
                term = QSeries(a * u * u + m * u, coeffs, None)
                acc = acc + (term if (u % 2 == 0 or sgn == 1) else -term)
            v = acc * self.inv_poch(2 * s)
        else:
            raise SpecError(f"unknown tail {t!r}")
        self.cache[s] = v
        return v


def eval_multisum(spec: SummandSpec, order, stats: Optional[SumStats] = None) -> QSeries:
    """Evaluate the multisum exactly below `order`."""
    nnum = _ord_num(order)
    if nnum is None:
        raise IllPosedError("a multisum needs a finite truncation order")
    if stats is None:
        stats = SumStats()
    lam = spec.effective_linear_num()
    quad = [2 * c for c in spec.quad]
    k = spec.k
    placement = spec.placement or frozenset()

    base = prune_bound(spec, ()).num
    pad = max(0, -base)
    wnum = nnum + pad

    inv_store = [QSeries.one(HalfInt(wnum))]

    def inv_poch(d: int) -> QSeries:
        while len(inv_store) <= d:
            inv_store.append(inv_store[-1] * _geometric(2 * len(inv_store), wnum))
        return inv_store[d]

    tails = _TailValues(spec.tail, wnum, inv_poch)

    # hard cap on the first index: beyond it even the best completion
    # starts at or above the requested order
    rest_floor = 0
    for i in range(1, k):
        rest_floor += _index_min_num(quad[i], lam[i], None)
    rest_floor += _tail_floor_num(spec.tail, None)
    top = 0
    while quad[0] * top * top + lam[0] * top + rest_floor < nnum or (
        2 * quad[0] * top + quad[0] + lam[0] < 0
    ):
        top += 1

    # per-(index, cap) minima and tail floors for the incremental bound
    vmin = [[0] * (top + 1) for _ in range(k)]
    for i in range(1, k):
        for c in range(top + 1):
            vmin[i][c] = _index_min_num(quad[i], lam[i], c)
    tfloor = [_tail_floor_num(spec.tail, c) for c in range(top + 1)]

    lo = min(0, base)
    acc = [0] * (nnum - lo)

    def descend(depth: int, prev: int, fixed: int, val: QSeries):
        # depth-1 indices are fixed; `fixed` is their exponent contribution,
        # `val` the running product of their factors at order wnum
        for s in range(prev, -1, -1):
            stats.nodes += 1
            here = fixed + quad[depth] * s * s + lam[depth] * s
            if depth + 1 == k:
                bound = here + tail_min_num(spec.tail, s)
            else:
                bound = here
                for i in range(depth + 1, k):
                    bound += vmin[i][s]
                bound += tfloor[s]
            if bound >= nnum:
                stats.pruned += 1
                continue
            v = val
            if depth > 0:
                v = v * inv_poch(prev - s)
            if (depth + 1) in placement and depth > 0:
                v = v * (QSeries.one() + QSeries.monomial(1, HalfInt(2 * (prev + s))))
            shift = quad[depth] * s * s + lam[depth] * s
            if depth + 1 == k:
                stats.tuples += 1
                leaf = v * tails.value(s)
                for exp, c in leaf.terms():
                    e = exp.num + shift
                    if lo <= e < nnum:
                        acc[e - lo] += c
            else:
                descend(depth + 1, s, here, v.shift(HalfInt(shift)))

    descend(0, top, 0, QSeries.one(HalfInt(wnum)))
    return QSeries(lo, acc, nnum)

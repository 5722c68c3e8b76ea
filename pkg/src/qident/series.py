"""Exact truncated Laurent series over a half-exponent grid.

The whole library computes with a single scalar value type: a Laurent
series in a formal variable t with t**2 = q.  Exponents are counted in
half-steps of q, so quantities like q**(3/2), or a substitution that
shifts a slice by q**(s/2), are ordinary grid operations rather than
special cases.  A HalfInt holds the numerator; its value is num/2 in
units of the q-exponent.

A series is a triple (min_exp, coeffs, order):

* coeffs[i] is the integer coefficient of the exponent min_exp + i/2,
* order is the truncation bound: coefficients at exponents strictly
  below order are exact, everything at or above order is unknown,
* the canonical zero has no coefficients and order = INF.

Orders are tracked conservatively through every operation so a result
never claims knowledge it does not have.  A product's order is
min(a.order + b.min_exp, b.order + a.min_exp); an inverse of a series
with min_exp m and order o is known below o - 2m; a sum's order is the
minimum of the operands'.  A series that becomes zero through
cancellation keeps its finite order instead of collapsing to the
canonical zero.

Coefficients are plain Python integers, so everything is exact at
arbitrary precision.  Dense multiplication packs coefficient arrays into
big integers and lets CPython's integer multiply do the convolution
(Kronecker substitution); the schoolbook loop is kept both as the
small-size path and as an independent cross-check for the test suite.

ZLaurent extends the same bookkeeping to Laurent polynomials in a second
variable z whose coefficients are QSeries.  Stored keys are the complete
structural support: an absent z-power is exactly zero, while a stored
slice that cancelled to zero keeps its entry (it is only known to vanish
below the common order).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, Optional, Union


class QidentError(Exception):
    """Base class for all library errors."""


class NonInvertibleError(QidentError):
    """Series inversion needs a unit (+1 or -1) leading coefficient."""


class IllPosedError(QidentError):
    """An operation was requested outside its domain of validity."""


class SpecError(QidentError):
    """A declarative description (summand spec, case params) is malformed."""


class OrderExceededError(QidentError):
    """A coefficient at or beyond the truncation order was requested."""


# ---------------------------------------------------------------------------
# half-integer exponents


@dataclass(frozen=True, slots=True)
class HalfInt:
    """An exponent on the half grid; the value is num/2 q-units."""

    num: int

    def __post_init__(self):
        if not isinstance(self.num, int):
            raise SpecError(f"half-integer numerator must be int, got {self.num!r}")

    # int operands are whole q-exponents
    @staticmethod
    def _coerce(other) -> Optional["HalfInt"]:
        if isinstance(other, HalfInt):
            return other
        if isinstance(other, int):
            return HalfInt(2 * other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return HalfInt(self.num + o.num)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return HalfInt(self.num - o.num)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return HalfInt(o.num - self.num)

    def __neg__(self):
        return HalfInt(-self.num)

    def __mul__(self, other):
        # HalfInt * HalfInt could leave the grid, so only int scaling exists
        if isinstance(other, int):
            return HalfInt(self.num * other)
        return NotImplemented

    __rmul__ = __mul__

    def _cmp_num(self, other) -> Optional[int]:
        o = self._coerce(other)
        return None if o is None else o.num

    def __lt__(self, other):
        if other is INF:
            return True
        n = self._cmp_num(other)
        if n is None:
            return NotImplemented
        return self.num < n

    def __le__(self, other):
        if other is INF:
            return True
        n = self._cmp_num(other)
        if n is None:
            return NotImplemented
        return self.num <= n

    def __gt__(self, other):
        if other is INF:
            return False
        n = self._cmp_num(other)
        if n is None:
            return NotImplemented
        return self.num > n

    def __ge__(self, other):
        if other is INF:
            return False
        n = self._cmp_num(other)
        if n is None:
            return NotImplemented
        return self.num >= n

    def __eq__(self, other):
        if other is INF:
            return False
        n = self._cmp_num(other)
        if n is None:
            return NotImplemented
        return self.num == n

    def __hash__(self):
        return hash(("HalfInt", self.num))

    @property
    def is_integral(self) -> bool:
        return self.num % 2 == 0

    def __str__(self) -> str:
        if self.num % 2 == 0:
            return str(self.num // 2)
        return f"{self.num}/2"

    def __repr__(self) -> str:
        return f"HalfInt({self.num})"

    @staticmethod
    def parse(text) -> "HalfInt":
        """Accepts "p/2" strings, plain integer strings, or ints (q-units)."""
        if isinstance(text, int):
            return HalfInt(2 * text)
        if isinstance(text, HalfInt):
            return text
        s = str(text).strip()
        if s.endswith("/2"):
            return HalfInt(int(s[:-2]))
        return HalfInt(2 * int(s))


def qe(n: int) -> HalfInt:
    """The exponent of q**n."""
    return HalfInt(2 * n)


def he(num: int) -> HalfInt:
    """The exponent of q**(num/2)."""
    return HalfInt(num)


class _Infinity:
    """Order sentinel above every HalfInt, absorbing under addition."""

    __slots__ = ()

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is INF

    def __gt__(self, other):
        return other is not INF

    def __ge__(self, other):
        return True

    def __add__(self, other):
        return INF

    __radd__ = __add__

    def __sub__(self, other):
        if other is INF:
            raise ArithmeticError("INF - INF")
        return INF

    def __str__(self):
        return "inf"

    def __repr__(self):
        return "INF"


INF = _Infinity()

Order = Union[HalfInt, _Infinity]


def _ord_num(order) -> Optional[int]:
    """Internal: an order as a numerator, None meaning infinity."""
    if order is INF or order is None:
        return None
    if isinstance(order, HalfInt):
        return order.num
    if isinstance(order, int):
        return 2 * order
    raise SpecError(f"not an order: {order!r}")


def _ord_obj(num: Optional[int]) -> Order:
    return INF if num is None else HalfInt(num)


def _min_ord(a: Optional[int], b: Optional[int]) -> Optional[int]:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


# ---------------------------------------------------------------------------
# integer convolution

_SCHOOLBOOK_CUTOFF = 1024


def _convolve_schoolbook(a: list, b: list, out_len: int) -> list:
    out = [0] * out_len
    for i, ai in enumerate(a):
        if not ai or i >= out_len:
            continue
        lim = min(len(b), out_len - i)
        for j in range(lim):
            bj = b[j]
            if bj:
                out[i + j] += ai * bj
    return out


def _convolve_kronecker(a: list, b: list, out_len: int) -> list:
    ma = max(abs(x) for x in a)
    mb = max(abs(x) for x in b)
    if ma == 0 or mb == 0:
        return [0] * out_len
    # each result digit is bounded by ma*mb*overlap; two extra bits leave
    # room for the sign and the borrow of the balanced decoding below
    bound = ma * mb * min(len(a), len(b))
    nb = (bound.bit_length() + 9) // 8

    def pack(xs) -> int:
        zero = bytes(nb)
        pos = bytearray()
        neg = bytearray()
        for x in xs:
            if x >= 0:
                pos += x.to_bytes(nb, "little")
                neg += zero
            else:
                pos += zero
                neg += (-x).to_bytes(nb, "little")
        return int.from_bytes(pos, "little") - int.from_bytes(neg, "little")

    prod = pack(a) * pack(b)
    flip = prod < 0
    if flip:
        prod = -prod
    raw = prod.to_bytes((len(a) + len(b) + 1) * nb, "little")
    half = 1 << (8 * nb - 1)
    full = half << 1
    out = []
    carry = 0
    for i in range(out_len):
        v = int.from_bytes(raw[i * nb : (i + 1) * nb], "little") + carry
        if v >= half:
            v -= full
            carry = 1
        else:
            carry = 0
        out.append(-v if flip else v)
    return out


def _convolve(a: list, b: list, out_len: int) -> list:
    """Exact integer convolution of a and b, truncated to out_len entries."""
    if out_len <= 0:
        return []
    if len(a) > len(b):
        a, b = b, a
    if len(a) * len(b) <= _SCHOOLBOOK_CUTOFF:
        return _convolve_schoolbook(a, b, out_len)
    return _convolve_kronecker(a, b, out_len)


# ---------------------------------------------------------------------------
# comparison results


@dataclass(frozen=True, slots=True)
class Mismatch:
    """First differing coefficient of a comparison."""

    exp: HalfInt
    lhs: int
    rhs: int
    z_exp: Optional[int] = None


@dataclass(frozen=True, slots=True)
class CompareResult:
    equal: bool
    compared_order: Order
    mismatch: Optional[Mismatch] = None


# ---------------------------------------------------------------------------
# the series type


class QSeries:
    """An exact Laurent series in q**(1/2), truncated at `order`."""

    __slots__ = ("_min", "_coeffs", "_ordnum")

    def __init__(self, min_num: int, coeffs: list, ordnum: Optional[int], _raw=False):
        # normalizes: clamp to order, strip zero margins, canonical empty form
        if not _raw:
            if ordnum is not None and coeffs:
                keep = ordnum - min_num
                if keep < len(coeffs):
                    coeffs = coeffs[: max(keep, 0)]
            lo = 0
            hi = len(coeffs)
            while lo < hi and coeffs[lo] == 0:
                lo += 1
            while hi > lo and coeffs[hi - 1] == 0:
                hi -= 1
            if lo or hi != len(coeffs):
                min_num += lo
                coeffs = coeffs[lo:hi]
            if not coeffs:
                min_num = ordnum if ordnum is not None else 0
        self._min = min_num
        self._coeffs = coeffs
        self._ordnum = ordnum

    # -- construction ------------------------------------------------------

    @staticmethod
    def zero(order: Order = INF) -> "QSeries":
        return QSeries(0, [], _ord_num(order))

    @staticmethod
    def one(order: Order = INF) -> "QSeries":
        return QSeries.monomial(1, HalfInt(0), order)

    @staticmethod
    def monomial(coeff: int, exp=HalfInt(0), order: Order = INF) -> "QSeries":
        e = HalfInt._coerce(exp)
        if e is None:
            raise SpecError(f"bad exponent {exp!r}")
        return QSeries(e.num, [coeff], _ord_num(order))

    @staticmethod
    def from_terms(terms: Mapping, order: Order = INF) -> "QSeries":
        if not terms:
            return QSeries.zero(order)
        items = {}
        for exp, c in terms.items():
            e = HalfInt._coerce(exp)
            if e is None:
                raise SpecError(f"bad exponent {exp!r}")
            items[e.num] = items.get(e.num, 0) + c
        lo = min(items)
        hi = max(items)
        coeffs = [0] * (hi - lo + 1)
        for n, c in items.items():
            coeffs[n - lo] = c
        return QSeries(lo, coeffs, _ord_num(order))

    # -- inspection --------------------------------------------------------

    @property
    def min_exp(self) -> HalfInt:
        """Lowest stored exponent; for a zero series this equals the order."""
        return HalfInt(self._min)

    @property
    def order(self) -> Order:
        return _ord_obj(self._ordnum)

    @property
    def is_zero(self) -> bool:
        return not self._coeffs

    def coefficient(self, exp) -> int:
        e = HalfInt._coerce(exp)
        if e is None:
            raise SpecError(f"bad exponent {exp!r}")
        if self._ordnum is not None and e.num >= self._ordnum:
            raise OrderExceededError(
                f"coefficient at {e} requested, series only known below {_ord_obj(self._ordnum)}"
            )
        i = e.num - self._min
        if 0 <= i < len(self._coeffs):
            return self._coeffs[i]
        return 0

    def coeff_q(self, n: int) -> int:
        """Coefficient of q**n."""
        return self.coefficient(qe(n))

    def terms(self) -> Iterator:
        for i, c in enumerate(self._coeffs):
            if c:
                yield HalfInt(self._min + i), c

    def __bool__(self):
        return bool(self._coeffs)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, int):
            other = QSeries.monomial(other) if other else QSeries.zero()
        if not isinstance(other, QSeries):
            return NotImplemented
        ordnum = _min_ord(self._ordnum, other._ordnum)
        if not self._coeffs and not other._coeffs:
            return QSeries(0, [], ordnum)
        if not self._coeffs:
            return QSeries(other._min, list(other._coeffs), ordnum)
        if not other._coeffs:
            return QSeries(self._min, list(self._coeffs), ordnum)
        lo = min(self._min, other._min)
        hi = max(self._min + len(self._coeffs), other._min + len(other._coeffs))
        out = [0] * (hi - lo)
        off = self._min - lo
        for i, c in enumerate(self._coeffs):
            out[off + i] = c
        off = other._min - lo
        for i, c in enumerate(other._coeffs):
            out[off + i] += c
        return QSeries(lo, out, ordnum)

    __radd__ = __add__

    def __neg__(self):
        return QSeries(self._min, [-c for c in self._coeffs], self._ordnum, _raw=True)

    def __sub__(self, other):
        if isinstance(other, int):
            other = QSeries.monomial(other) if other else QSeries.zero()
        if not isinstance(other, QSeries):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return QSeries.zero(INF)
            if other == 1:
                return self
            return QSeries(
                self._min, [other * c for c in self._coeffs], self._ordnum, _raw=True
            )
        if not isinstance(other, QSeries):
            return NotImplemented
        a, b = self, other
        # an exact zero annihilates regardless of the other order
        if (not a._coeffs and a._ordnum is None) or (not b._coeffs and b._ordnum is None):
            return QSeries.zero(INF)
        # a truncated zero still bounds the product: min_exp == order there
        ordnum = _min_ord(
            a._ordnum + b._min if a._ordnum is not None else None,
            b._ordnum + a._min if b._ordnum is not None else None,
        )
        if not a._coeffs or not b._coeffs:
            return QSeries(0, [], ordnum)
        lo = a._min + b._min
        full = len(a._coeffs) + len(b._coeffs) - 1
        out_len = full if ordnum is None else min(full, ordnum - lo)
        if out_len <= 0:
            return QSeries(0, [], ordnum)
        na = sum(1 for c in a._coeffs if c)
        nb = sum(1 for c in b._coeffs if c)
        if min(na, nb) <= 4:
            if nb < na:
                a, b = b, a
            out = [0] * out_len
            for i, c in enumerate(a._coeffs):
                if not c or i >= out_len:
                    continue
                lim = min(len(b._coeffs), out_len - i)
                if c == 1:
                    for j in range(lim):
                        out[i + j] += b._coeffs[j]
                elif c == -1:
                    for j in range(lim):
                        out[i + j] -= b._coeffs[j]
                else:
                    for j in range(lim):
                        out[i + j] += c * b._coeffs[j]
        else:
            out = _convolve(a._coeffs, b._coeffs, out_len)
        return QSeries(lo, out, ordnum)

    __rmul__ = __mul__

    def shift(self, exp) -> "QSeries":
        """Multiply by q**exp; the coefficient array is shared, not copied."""
        e = HalfInt._coerce(exp)
        if e is None:
            raise SpecError(f"bad exponent {exp!r}")
        if e.num == 0:
            return self
        ordnum = None if self._ordnum is None else self._ordnum + e.num
        return QSeries(self._min + e.num, self._coeffs, ordnum, _raw=True)

    def inverse(self, order: Order = None) -> "QSeries":
        """Multiplicative inverse.

        The natural order of the result is self.order - 2*self.min_exp; an
        explicit `order` lowers it (and is required when inverting an exact
        non-monomial series, whose inverse has infinitely many terms).
        """
        if not self._coeffs:
            raise NonInvertibleError("cannot invert zero")
        lead = self._coeffs[0]
        if lead not in (1, -1):
            raise NonInvertibleError(f"leading coefficient {lead} is not a unit")
        natural = None if self._ordnum is None else self._ordnum - 2 * self._min
        target = _min_ord(natural, _ord_num(order))
        if len(self._coeffs) == 1:
            out = QSeries(-self._min, [lead], None)
            return out if target is None else out.truncated(HalfInt(target))
        if target is None:
            raise NonInvertibleError("an exact series needs an explicit inversion order")
        out_len = target + self._min
        if out_len <= 0:
            return QSeries(0, [], target)
        a = self._coeffs
        out = [lead] + [0] * (out_len - 1)
        for i in range(1, out_len):
            s = 0
            for t in range(1, min(i, len(a) - 1) + 1):
                at = a[t]
                if at:
                    s += at * out[i - t]
            out[i] = -lead * s
        return QSeries(-self._min, out, target)

    def truncated(self, order) -> "QSeries":
        n = _ord_num(order)
        if n is None:
            return self
        if self._ordnum is not None and self._ordnum <= n:
            return self
        return QSeries(self._min, list(self._coeffs), n)

    # -- comparison --------------------------------------------------------

    def eq_upto(self, other: "QSeries", z_exp: Optional[int] = None) -> CompareResult:
        """Compare coefficients below the smaller of the two orders."""
        capnum = _min_ord(self._ordnum, other._ordnum)
        starts = []
        if self._coeffs:
            starts.append(self._min)
        if other._coeffs:
            starts.append(other._min)
        if not starts:
            return CompareResult(True, _ord_obj(capnum))
        lo = min(starts)
        hi = max(self._min + len(self._coeffs), other._min + len(other._coeffs))
        if capnum is not None:
            hi = min(hi, capnum)
        for n in range(lo, hi):
            i = n - self._min
            a = self._coeffs[i] if 0 <= i < len(self._coeffs) else 0
            j = n - other._min
            b = other._coeffs[j] if 0 <= j < len(other._coeffs) else 0
            if a != b:
                return CompareResult(
                    False, _ord_obj(capnum), Mismatch(HalfInt(n), a, b, z_exp)
                )
        return CompareResult(True, _ord_obj(capnum))

    def __eq__(self, other):
        # structural equality: same coefficients and same order
        if not isinstance(other, QSeries):
            return NotImplemented
        return (
            self._ordnum == other._ordnum
            and self._min == other._min
            and self._coeffs == other._coeffs
        )

    __hash__ = None

    def __repr__(self):
        parts = []
        for exp, c in self.terms():
            if exp.num == 0:
                parts.append(str(c))
            else:
                e = str(exp) if exp.is_integral else f"({exp})"
                parts.append(f"{c}*q^{e}")
            if len(parts) >= 8:
                parts.append("...")
                break
        if not parts:
            parts.append("0")
        tail = "" if self._ordnum is None else f" + O(q^{_ord_obj(self._ordnum)})"
        return "<QSeries " + " + ".join(parts) + tail + ">"


# ---------------------------------------------------------------------------
# Laurent polynomials in z over QSeries


class ZLaurent:
    """A Laurent polynomial in z whose coefficients are QSeries.

    Stored keys are the full structural support: an absent z-power is
    exactly zero.  All stored slices share one truncation order; a slice
    that cancels to zero keeps its entry because it is only known to
    vanish below that order.
    """

    __slots__ = ("_terms", "_ordnum")

    def __init__(self, terms: dict, ordnum: Optional[int], _raw=False):
        if not _raw:
            common = ordnum
            for s in terms.values():
                common = _min_ord(common, s._ordnum)
            cleaned = {}
            for k, s in terms.items():
                if not s._coeffs and s._ordnum is None:
                    continue  # exactly zero: outside the structural support
                if common is not None:
                    s = s.truncated(HalfInt(common))
                cleaned[k] = s
            terms = cleaned
            ordnum = None if not terms else common
        self._terms = terms
        self._ordnum = ordnum

    @staticmethod
    def zero() -> "ZLaurent":
        return ZLaurent({}, None, _raw=True)

    @staticmethod
    def from_terms(terms: Mapping, order: Order = INF) -> "ZLaurent":
        return ZLaurent(dict(terms), _ord_num(order))

    @staticmethod
    def scalar(s: QSeries) -> "ZLaurent":
        return ZLaurent({0: s}, None)

    @property
    def order(self) -> Order:
        return _ord_obj(self._ordnum)

    def z_support(self) -> list:
        return sorted(self._terms)

    def slice(self, z_exp: int) -> QSeries:
        if z_exp in self._terms:
            return self._terms[z_exp]
        return QSeries.zero(INF)

    @property
    def is_zero(self) -> bool:
        return all(s.is_zero for s in self._terms.values())

    def __add__(self, other):
        if isinstance(other, (QSeries, int)):
            other = ZLaurent.scalar(
                other if isinstance(other, QSeries) else QSeries.monomial(other)
            )
        if not isinstance(other, ZLaurent):
            return NotImplemented
        out = dict(self._terms)
        for k, s in other._terms.items():
            out[k] = out[k] + s if k in out else s
        return ZLaurent(out, _min_ord(self._ordnum, other._ordnum))

    __radd__ = __add__

    def __neg__(self):
        return ZLaurent({k: -s for k, s in self._terms.items()}, self._ordnum, _raw=True)

    def __sub__(self, other):
        if isinstance(other, (QSeries, int)):
            other = ZLaurent.scalar(
                other if isinstance(other, QSeries) else QSeries.monomial(other)
            )
        if not isinstance(other, ZLaurent):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return ZLaurent(
                {k: s * other for k, s in self._terms.items()}, self._ordnum
            )
        if isinstance(other, QSeries):
            return ZLaurent(
                {k: s * other for k, s in self._terms.items()}, self._ordnum
            )
        if not isinstance(other, ZLaurent):
            return NotImplemented
        out = {}
        for ka, sa in self._terms.items():
            for kb, sb in other._terms.items():
                k = ka + kb
                p = sa * sb
                out[k] = out[k] + p if k in out else p
        return ZLaurent(out, None)

    __rmul__ = __mul__

    def zshift(self, exp) -> "ZLaurent":
        """Substitute z -> z*q**exp (slice s picks up q**(exp*s))."""
        e = HalfInt._coerce(exp)
        if e is None:
            raise SpecError(f"bad exponent {exp!r}")
        return ZLaurent(
            {k: s.shift(HalfInt(e.num * k)) for k, s in self._terms.items()}, None
        )

    def zinvert(self) -> "ZLaurent":
        """Substitute z -> 1/z."""
        return ZLaurent(dict((-k, s) for k, s in self._terms.items()), self._ordnum, _raw=True)

    def znegate(self) -> "ZLaurent":
        """Substitute z -> -z."""
        return ZLaurent(
            {k: (-s if k % 2 else s) for k, s in self._terms.items()},
            self._ordnum,
            _raw=True,
        )

    def substitute(self, sign: int, m) -> QSeries:
        """Evaluate at z = sign * q**m, returning a scalar series."""
        if sign not in (1, -1):
            raise SpecError(f"substitution sign must be +-1, got {sign}")
        e = HalfInt._coerce(m)
        if e is None:
            raise SpecError(f"bad exponent {m!r}")
        acc = QSeries.zero(INF)
        for k, s in self._terms.items():
            term = s.shift(HalfInt(e.num * k))
            if sign == -1 and k % 2:
                term = -term
            acc = acc + term
        return acc

    def truncated(self, order) -> "ZLaurent":
        n = _ord_num(order)
        if n is None:
            return self
        return ZLaurent({k: s for k, s in self._terms.items()}, n)

    def eq_upto(self, other: "ZLaurent") -> CompareResult:
        capnum = _min_ord(self._ordnum, other._ordnum)
        cap = _ord_obj(capnum)
        for k in sorted(set(self._terms) | set(other._terms)):
            r = self.slice(k).eq_upto(other.slice(k), z_exp=k)
            if not r.equal:
                return CompareResult(False, cap, r.mismatch)
        return CompareResult(True, cap)

    def __eq__(self, other):
        if not isinstance(other, ZLaurent):
            return NotImplemented
        keys = set(self._terms) | set(other._terms)
        return self._ordnum == other._ordnum and all(
            self.slice(k) == other.slice(k) for k in keys
        )

    __hash__ = None

    def __repr__(self):
        body = ", ".join(f"z^{k}: {self._terms[k]!r}" for k in self.z_support()[:4])
        more = "..." if len(self._terms) > 4 else ""
        return f"<ZLaurent {{{body}{more}}}>"

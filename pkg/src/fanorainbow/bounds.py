"""Closed-form constants and certified inequality checks.

Rational quantities are exact ``Fraction``s and integers. Real-valued ones
(entropy, 64th roots, logarithms) are evaluated in 256-bit interval
arithmetic, so every verdict is True, False, or None when the interval
cannot decide.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Callable

from mpmath import mp, mpf

from ._exact import as_fraction, certify_le, certify_lt, frac_str, iv, to_iv
from .coloring import falling_factorial
from .hypergraph import bn_edge_count

# -- entropy --------------------------------------------------------------


def _check_unit(x) -> None:
    if not 0 <= x <= 1:
        raise ValueError(f"entropy argument {x} is outside [0, 1]")


def entropy(x: float) -> float:
    """Binary entropy in bits, with h(0) = h(1) = 0."""
    _check_unit(x)
    if x == 0 or x == 1:
        return 0.0
    return -x * math.log2(x) - (1 - x) * math.log2(1 - x)


def entropy_iv(x):
    """Interval enclosure of h(x); ``x`` an exact rational or an interval."""
    if isinstance(x, (int, Fraction)):
        _check_unit(x)
        if x == 0 or x == 1:
            return iv.mpf(0)
    t = to_iv(x)
    if t.b < iv.mpf(2) ** -64:
        # -(1-t) ln(1-t) = t - sum_{k>=2} t^k / (k(k-1)), which lies in
        # [t - t^2 / (2(1-t)), t]; direct evaluation loses everything when t is tiny
        low = t - t * t / (2 * (1 - t))
        tail = iv.mpf([low.a, t.b])
    else:
        tail = -(1 - t) * iv.log(1 - t)
    return (tail - t * iv.log(t)) / iv.log(2)


def check_entropy_bound_23(x) -> bool | None:
    """Certify h(x) <= -2 x log2(x) for 0 < x <= 1/8."""
    q = as_fraction(x)
    if not 0 < q <= Fraction(1, 8):
        raise ValueError("the bound is only claimed for 0 < x <= 1/8")
    t = to_iv(q)
    return certify_le(entropy_iv(q), -2 * t * iv.log(t) / iv.log(2))


def binom_entropy_bound(n: int, alpha) -> bool | None:
    """Certify C(n, floor(alpha n)) <= 2^(h(alpha) n)."""
    a = as_fraction(alpha)
    if n < 1:
        raise ValueError("n must be positive")
    _check_unit(a)
    k = math.floor(a * n)
    lhs = comb(n, k)
    if a == 0 or a == 1:
        return lhs <= 1
    return certify_le(lhs, iv.exp(entropy_iv(a) * n * iv.log(2)))


# -- r0 -------------------------------------------------------------------

THEOREM_DELTA = Fraction(1, 37 * 16 ** 3 * 1406 ** 9)


def _power_loop(base: int, k: int) -> int:
    out = 1
    for _ in range(k):
        out *= base
    return out


def r0_exponent_lemma(delta, method: str = "pow") -> int | Fraction:
    """log_6 r0(delta) = 492^64 / delta^63.

    An integer when delta = 1/D, else an exact rational. ``method`` picks
    built-in exponentiation ("pow") or plain repeated multiplication ("loop").
    """
    d = as_fraction(delta)
    if d <= 0:
        raise ValueError("delta must be positive")
    power: Callable[[int, int], int] = pow if method == "pow" else _power_loop  # type: ignore[assignment]
    if method not in ("pow", "loop"):
        raise ValueError(f"unknown method {method!r}")
    num = power(492, 64) * power(d.denominator, 63)
    den = power(d.numerator, 63)
    return num // den if num % den == 0 else Fraction(num, den)


# -- eta window -----------------------------------------------------------


@dataclass(frozen=True)
class EtaCheck:
    eq32: bool
    lhs33: bool | None
    rhs33: bool | None
    middle: str

    @property
    def all_hold(self) -> bool:
        return self.eq32 and self.lhs33 is True and self.rhs33 is True

    def to_json(self) -> dict:
        return {"eq32": self.eq32, "lhs33": self.lhs33, "rhs33": self.rhs33, "middle": self.middle}


def eta_middle_iv(r: int, eta):
    """243 (4 h(r eta) + 4 r eta)^(1/64) as an interval."""
    t = as_fraction(eta) * r
    s = 4 * entropy_iv(t) + 4 * to_iv(t)
    return 243 * iv.exp(iv.log(s) / 64)


def eta_window_check(delta, r: int, eta) -> EtaCheck:
    """eta < delta/(4r)  and  delta/2 <= 243 (4h(r eta) + 4 r eta)^(1/64) < 3 delta/4."""
    d, e = as_fraction(delta), as_fraction(eta)
    if d <= 0 or e <= 0 or r < 1:
        raise ValueError("delta, eta and r must be positive")
    if r * e > 1:
        raise ValueError("r * eta must be at most 1")
    mid = eta_middle_iv(r, e)
    return EtaCheck(e < d / (4 * r), certify_le(d / 2, mid), certify_lt(mid, 3 * d / 4),
                    iv.nstr(mid, 25))


@dataclass(frozen=True)
class EtaSolution:
    eta: Fraction | None
    check: EtaCheck | None
    iterations: int

    @property
    def empty(self) -> bool:
        return self.eta is None

    def to_json(self) -> dict:
        if self.eta is None:
            return {"window": "empty", "iterations": self.iterations}
        with mp.workprec(256):
            approx = mp.nstr(mpf(self.eta.numerator) / self.eta.denominator, 20)
        k = self.eta.denominator.bit_length() - 1
        return {"window": "found", "eta": approx, "etaExact": f"{self.eta.numerator}/2^{k}",
                "checks": self.check.to_json() if self.check else None, "iterations": self.iterations}


def solve_eta(delta, r: int, max_iter: int = 400) -> EtaSolution:
    """Find eta with all three window conditions, or report the window empty.

    The middle term increases with eta while r eta < 1/2, so bisection on
    log(eta) aims it at 5 delta / 8, the center of [delta/2, 3 delta/4).
    The returned eta is an exact binary rational, re-checked in intervals.
    """
    d = as_fraction(delta)
    if d <= 0 or r < 1:
        raise ValueError("delta and r must be positive")
    top = min(d / (4 * r), Fraction(1, 2 * r))
    with mp.workprec(256):
        target = mpf(5 * d.numerator) / (8 * d.denominator)

        def middle(log_eta):
            t = mp.exp(log_eta) * r
            return 243 * (4 * (-(t * mp.log(t) + (1 - t) * mp.log1p(-t)) / mp.log(2)) + 4 * t) ** (mpf(1) / 64)

        hi = mp.log(mpf(top.numerator) / top.denominator) - mpf(2) ** -200
        if middle(hi) < mpf(d.numerator) / (2 * d.denominator):
            return EtaSolution(None, None, 0)
        lo = hi - 1
        steps = 0
        while middle(lo) > target:
            lo = hi - 2 * (hi - lo)
            steps += 1
            if steps > 64:
                return EtaSolution(None, None, steps)
        it = 0
        for it in range(1, max_iter + 1):
            m = (lo + hi) / 2
            if middle(m) < target:
                lo = m
            else:
                hi = m
            if hi - lo < mpf(2) ** -60 * (1 + abs(hi)):
                break
        guess = mp.exp((lo + hi) / 2)
        man, exp = mp.frexp(guess)
        eta = Fraction(int(mp.ldexp(man, 200))) / Fraction(2) ** (200 - int(exp))
    check = eta_window_check(d, r, eta)
    return EtaSolution(eta if check.all_hold else None, check, it)


# -- parameter constraints -------------------------------------------------


@dataclass(frozen=True)
class Params41:
    a: bool
    b: bool
    c: bool
    d: bool | None

    def to_json(self) -> dict:
        return {"a": self.a, "b": self.b, "c": self.c, "d": self.d}


def params_check_41(gamma, xi, delta, r: int | None = None) -> Params41:
    """gamma <= 1/1406; xi <= gamma^3/16; delta < min(1/400^2, gamma^2/(4*9^2), xi^3/36);
    r > max(r0(delta), 21^64).

    (d) compares log r against log_6 r0 * log 6 in intervals, so r0 is never
    built; it is None when r is not given.
    """
    g, x, dl = as_fraction(gamma), as_fraction(xi), as_fraction(delta)
    a = g <= Fraction(1, 1406)
    b = x <= g ** 3 / 16
    c = dl < min(Fraction(1, 400 ** 2), g ** 2 / (4 * 9 ** 2), x ** 3 / 36)
    if r is None:
        return Params41(a, b, c, None)
    if r <= 21 ** 64:
        return Params41(a, b, c, False)
    expo = r0_exponent_lemma(dl)
    log_r0 = to_iv(as_fraction(expo)) * iv.log(6)
    return Params41(a, b, c, certify_lt(log_r0, iv.log(iv.mpf(r))))


def pinned_parameters() -> tuple[Fraction, Fraction, Fraction]:
    """(gamma, xi, delta) with equality in the first two constraints."""
    gamma = Fraction(1, 1406)
    return gamma, gamma ** 3 / 16, THEOREM_DELTA


# -- counting constants ----------------------------------------------------


@dataclass(frozen=True)
class ExtensionCounts:
    r: int
    q: int
    fano_case_b: int

    def exact(self) -> dict[str, int]:
        """Exact counts the two constants bound.

        ``k4Sides``: colorings of the 4 remaining lines of a Fano plane, three
        of whose lines carry 3 distinct colors, that do not make it rainbow.
        ``fanoMinusOne``: colorings of 6 lines that, with a seventh line of
        fixed color, are not rainbow.
        """
        r = self.r
        return {
            "k4Sides": r ** 4 - falling_factorial(r - 3, 4),
            "fanoMinusOne": r ** 6 - falling_factorial(r - 1, 6),
        }

    def to_json(self, exact: bool = False) -> dict:
        out = {"r": self.r, "Q": str(self.q), "fanoCaseB": str(self.fano_case_b)}
        if exact:
            out.update({k: str(v) for k, v in self.exact().items()})
        return out


def extension_counts(r: int) -> ExtensionCounts:
    """Q = 3*4*r^3 + C(4,2) r^3 = 18 r^3 and 6 r^5 + C(6,2) r r^4 = 21 r^5."""
    if r < 1:
        raise ValueError("r must be positive")
    return ExtensionCounts(r, 3 * 4 * r ** 3 + comb(4, 2) * r ** 3, 6 * r ** 5 + comb(6, 2) * r * r ** 4)


def bn_edge_bounds(n: int) -> tuple[Fraction, int, Fraction]:
    """(n^3/8 - n^2/4 - n/8 + 1/4, |E(B_n)|, n^3/8 - n^2/4)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    lower = Fraction(n ** 3, 8) - Fraction(n ** 2, 4) - Fraction(n, 8) + Fraction(1, 4)
    upper = Fraction(n ** 3, 8) - Fraction(n ** 2, 4)
    return lower, bn_edge_count(n), upper


def claim43_lower_bound(gamma, n: int) -> Fraction:
    """(1/6) ((2 - 240 gamma) / 80) n^2 edge-disjoint K4s."""
    g = as_fraction(gamma)
    if g <= 0:
        raise ValueError("gamma must be positive")
    if n < 0:
        raise ValueError("n must be nonnegative")
    return Fraction(1, 6) * (2 - 240 * g) / 80 * n * n

"""Double-precision multiple zeta values and the identity-verification harness.

MZVs are evaluated from partial sums A_I(N) with a least-squares fit of the
tail.  A_I(N) - zeta(I) has an asymptotic expansion in terms
(log N)^m / N^j with m < depth, so fitting a truncated expansion over a
window of N and reading off the constant term removes most of the tail.
Error bounds are a policy (three times the change between the estimate
at N and at N/2, plus a rounding floor), not a proof; see the tests for
their validation against closed forms.
"""

from __future__ import annotations

import math
import threading
import warnings
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np
from numpy.polynomial import chebyshev

from .action import C, D_n, dot, tauCtau
from .algebra import NCPoly, as_poly, format_rational
from .finite_sums import A_float
from .qsym import decompose_H1_over_H0, star, sym_generator
from .shuffle import shuffle
from .words import (Composition, DomainError, Word, admissible_words, all_words,
                    composition_of_word, format_composition, gradings, is_admissible,
                    tau, z)

PI = math.pi
EULER_GAMMA = 0.57721566490153286061

DEFAULT_TOL = 1e-5
# below this, the rounding floor at the cap dominates; apportioning stops here
_MIN_TERM_TOL = 1e-9
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class MZVConfig:
    """Knobs of the partial-sum evaluator.

    The fit window is [N / window_ratio, N]; the tail model uses
    (log n)^m / n^j for m < depth and 1 <= j <= tail_orders.
    """
    start_n: int = 2 ** 12
    cap: int = 2 ** 21
    window_ratio: int = 1024
    tail_orders: int = 3
    bound_factor: float = 3.0
    samples: int = 400


DEFAULT_CONFIG = MZVConfig()


class PrecisionWarning(UserWarning):
    """The requested tolerance was not reached within the summation cap."""


@dataclass(frozen=True)
class ApproxValue:
    value: float
    error_bound: float = 0.0
    warning: bool = False

    def __add__(self, other):
        other = _approx(other)
        return ApproxValue(self.value + other.value,
                           self.error_bound + other.error_bound + _ulp(self.value + other.value),
                           self.warning or other.warning)

    __radd__ = __add__

    def __neg__(self):
        return ApproxValue(-self.value, self.error_bound, self.warning)

    def __sub__(self, other):
        return self + (-_approx(other))

    def __rsub__(self, other):
        return _approx(other) - self

    def __mul__(self, other):
        other = _approx(other)
        v = self.value * other.value
        err = (abs(self.value) * other.error_bound + abs(other.value) * self.error_bound
               + self.error_bound * other.error_bound + _ulp(v))
        return ApproxValue(v, err, self.warning or other.warning)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = ApproxValue(1.0)
        for _ in range(n):
            out = out * self
        return out

    def __float__(self):
        return self.value

    def __str__(self):
        return f"{self.value:.12g} +/- {self.error_bound:.2g}"


def _ulp(v: float) -> float:
    return abs(v) * _EPS


def _approx(v) -> ApproxValue:
    if isinstance(v, ApproxValue):
        return v
    if isinstance(v, Fraction):
        f = float(v)
        return ApproxValue(f, float(abs(Fraction(f) - v)))
    return ApproxValue(float(v))


# --- the evaluator -----------------------------------------------------------

def _tail_fit(partials: np.ndarray, N: int, depth: int, config: MZVConfig) -> float:
    """Constant term of a least-squares fit of A(n) over n in [N / window_ratio, N]."""
    lo = max(2, N // config.window_ratio)
    ns = np.unique(np.geomspace(lo, N, config.samples).astype(np.int64))
    f = partials[ns - 1]
    logs = np.log(ns)
    # Chebyshev polynomials in a rescaled log n keep the columns well conditioned
    u = (2 * logs - logs[0] - logs[-1]) / (logs[-1] - logs[0])
    cols = [np.ones_like(u)]
    scale = ns[0] / ns
    for j in range(1, config.tail_orders + 1):
        for m in range(depth):
            cols.append(chebyshev.chebval(u, [0] * m + [1]) * scale ** j)
    coef, *_ = np.linalg.lstsq(np.column_stack(cols), f, rcond=None)
    return float(coef[0])


_cache: dict[tuple[Composition, MZVConfig], ApproxValue] = {}
_cache_lock = threading.Lock()


def mzv(I: Composition, tol: float = DEFAULT_TOL, config: MZVConfig = DEFAULT_CONFIG) -> ApproxValue:
    """zeta(i1, ..., ik) for an admissible composition (i1 >= 2).

    N starts at ``config.start_n`` and doubles until the bound drops below
    ``tol`` or N reaches ``config.cap``; in the latter case the achieved bound
    is returned with ``warning`` set and a PrecisionWarning is issued.
    """
    I = tuple(I)
    if not I:
        return ApproxValue(1.0)
    if I[0] < 2:
        raise DomainError(f"zeta{format_composition(I)} diverges (first part must be >= 2)")
    if tol <= 0:
        raise ValueError("tol must be positive")
    key = (I, config)
    cached = _cache.get(key)
    if cached is not None and (cached.error_bound <= tol or cached.warning):
        return cached
    N = config.start_n
    while True:
        partials = A_float(I, N)
        est = _tail_fit(partials, N, len(I), config)
        # trust |E(N) - E(N/2)| only once successive fits contract; before
        # the asymptotic regime the fits can plateau together away from zeta
        half = _tail_fit(partials[: N // 2], N // 2, len(I), config)
        quarter = _tail_fit(partials[: N // 4], N // 4, len(I), config)
        rounding = 4 * N * float(_EPS) * max(1.0, abs(est))
        diff, prev_diff = abs(est - half), abs(half - quarter)
        converging = diff <= 0.5 * prev_diff or prev_diff <= rounding
        bound = float(config.bound_factor * diff + rounding)
        if not converging:
            bound = max(bound, float(config.bound_factor * prev_diff + rounding))
        if (bound <= tol and converging) or N >= config.cap:
            break
        N *= 2
    result = ApproxValue(est, bound, warning=bound > tol)
    if result.warning:
        warnings.warn(f"zeta{format_composition(I)}: bound {bound:.2g} exceeds tol {tol:.2g} "
                      f"at N = {N}", PrecisionWarning, stacklevel=2)
    with _cache_lock:
        old = _cache.get(key)
        if old is None or old.error_bound > result.error_bound:
            _cache[key] = result
    return result


def zeta_word(w: Word, tol: float = DEFAULT_TOL) -> ApproxValue:
    if not is_admissible(w):
        raise DomainError(f"word {w!r} is not admissible")
    return mzv(composition_of_word(w), tol)


def zeta_poly(p, tol: float = DEFAULT_TOL) -> ApproxValue:
    """Linear extension of zeta to admissible polynomials; zeta(1) = 1."""
    p = as_poly(p)
    for w in p:
        if not is_admissible(w):
            raise DomainError(f"word {w!r} is not admissible")
    weight_sum = float(sum(abs(c) for c in p.terms.values())) or 1.0
    per_term = max(tol / weight_sum, min(tol, _MIN_TERM_TOL))
    # the unit word contributes its coefficient exactly
    total = _approx(p.coeff(""))
    for w, c in sorted(p.items()):
        if w:
            total = total + _approx(c) * mzv(composition_of_word(w), per_term)
    return total


def zeta_hat_poly(p, tol: float = DEFAULT_TOL) -> ApproxValue:
    """Extension of zeta to H^1 that is a *-homomorphism with zeta_hat(y) = Euler's gamma."""
    parts = decompose_H1_over_H0(p)
    total = ApproxValue(0.0)
    gamma = ApproxValue(EULER_GAMMA, 1e-17)
    n = max(len(parts), 1)
    for c, j in parts:
        total = total + zeta_poly(c, tol / n) * gamma ** j
    return total


# --- Bernoulli numbers, Gamma ------------------------------------------------

_bernoulli: list[Fraction] = [Fraction(1)]


def bernoulli(n: int) -> Fraction:
    """B_n with B_1 = -1/2, from sum_{j<=n} binom(n+1, j) B_j = 0."""
    if n < 0:
        raise ValueError("n must be >= 0")
    while len(_bernoulli) <= n:
        m = len(_bernoulli)
        s = sum((math.comb(m + 1, j) * _bernoulli[j] for j in range(m)), Fraction(0))
        _bernoulli.append(-s / (m + 1))
    return _bernoulli[n]


def gamma_one_minus_t_coefficients(K: int, tol: float = DEFAULT_TOL) -> list[ApproxValue]:
    """Taylor coefficients of Gamma(1 - t) through t^K.

    log Gamma(1 - t) = gamma t + sum_{k >= 2} zeta(k) t^k / k; the
    exponential is taken with the recurrence n f_n = sum_k k L_k f_(n-k).
    """
    logs = [ApproxValue(0.0), ApproxValue(EULER_GAMMA, 1e-17)]
    logs += [mzv((k,), tol / 10) * Fraction(1, k) for k in range(2, K + 1)]
    f = [ApproxValue(1.0)]
    for n in range(1, K + 1):
        acc = ApproxValue(0.0)
        for k in range(1, n + 1):
            acc = acc + logs[k] * f[n - k] * k
        f.append(acc * Fraction(1, n))
    return f


# --- verification reports ---------------------------------------------------

@dataclass
class VerifyReport:
    identity: str
    params: dict
    lhs: ApproxValue
    rhs: ApproxValue
    difference: float
    passed: bool
    tolerance: float

    def to_json(self) -> dict:
        d = asdict(self)
        d["params"] = {k: _jsonable(v) for k, v in self.params.items()}
        return d

    def line(self) -> str:
        params = ", ".join(f"{k}={_jsonable(v)}" for k, v in self.params.items())
        status = "PASS" if self.passed else "FAIL"
        return (f"{status} {self.identity}({params}): lhs={self.lhs.value:.12g} "
                f"rhs={self.rhs.value:.12g} |diff|={self.difference:.2e} "
                f"bounds={self.lhs.error_bound:.1e}/{self.rhs.error_bound:.1e}")


def _jsonable(v):
    if isinstance(v, tuple):
        return list(v)
    if isinstance(v, Fraction):
        return format_rational(v)
    return v


def make_report(identity: str, params: dict, lhs, rhs, tol: float) -> VerifyReport:
    lhs, rhs = _approx(lhs), _approx(rhs)
    diff = float(abs(lhs.value - rhs.value))
    passed = bool(diff <= tol + lhs.error_bound + rhs.error_bound)
    return VerifyReport(identity, params, lhs, rhs, diff, passed, tol)


# individual identities; each takes keyword parameters plus tol

def check_duality(w: Word, tol: float = DEFAULT_TOL) -> VerifyReport:
    return make_report("duality", {"w": w}, zeta_poly(w, tol / 4), zeta_poly(tau(w), tol / 4), tol)


def sum_theorem_words(n: int, k: int) -> list[Word]:
    return [w for w in admissible_words(n) if w.count("y") == k]


def check_sum_theorem(n: int, k: int, tol: float = DEFAULT_TOL) -> VerifyReport:
    if not 1 <= k < n:
        raise ValueError("need 1 <= k < n")
    lhs = zeta_poly(NCPoly({w: 1 for w in sum_theorem_words(n, k)}), tol / 4)
    return make_report("sum_theorem", {"n": n, "k": k}, lhs, mzv((n,), tol / 4), tol)


def check_derivation(w: Word, tol: float = DEFAULT_TOL) -> VerifyReport:
    lhs = zeta_poly(D_n(w), tol / 4)
    rhs = zeta_poly(D_n(tau(w)), tol / 4)
    return make_report("derivation", {"w": w}, lhs, rhs, tol)


def check_ohno(w: Word, i: int, tol: float = DEFAULT_TOL) -> VerifyReport:
    h = sym_generator("h", i)
    return make_report("ohno", {"w": w, "i": i}, zeta_poly(dot(h, w), tol / 4),
                       zeta_poly(dot(h, tau(w)), tol / 4), tol)


def check_cyclic(w: Word, tol: float = DEFAULT_TOL) -> VerifyReport:
    if not w or w[-1] != "y" or set(w) == {"y"}:
        raise DomainError("cyclic check needs a word ending in y that is not a power of y")
    return make_report("cyclic", {"w": w}, zeta_poly(C(w), tol / 4),
                       zeta_poly(tauCtau(w), tol / 4), tol)


def check_cyclic_action(m: int, n: int, tol: float = DEFAULT_TOL) -> VerifyReport:
    lhs = zeta_poly(dot(z(n), "x" + "y" * m), tol / 4)
    rhs = zeta_poly(dot(z(m), "x" + "y" * n), tol / 4)
    return make_report("cyclic_action", {"m": m, "n": n}, lhs, rhs, tol)


def check_periodic_cyclic(n: int, tol: float = DEFAULT_TOL) -> VerifyReport:
    """zeta(4,3^(n-1)) = zeta(3^n,1) + zeta(2,3^(n-1),2): the cyclic identity on (x^2y)^n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    lhs = mzv((4,) + (3,) * (n - 1), tol / 4)
    rhs = mzv((3,) * n + (1,), tol / 8) + mzv((2,) + (3,) * (n - 1) + (2,), tol / 8)
    return make_report("periodic_cyclic", {"n": n}, lhs, rhs, tol)


def le_murakami_rhs_factor(n: int, k: int) -> Fraction:
    """sum_{j=0}^{n-k} binom(2n+1, 2j) (2 - 2^(2j)) B_(2j)."""
    return sum((math.comb(2 * n + 1, 2 * j) * (2 - 2 ** (2 * j)) * bernoulli(2 * j)
                for j in range(n - k + 1)), Fraction(0))


def check_le_murakami(n: int, k: int, tol: float = DEFAULT_TOL) -> VerifyReport:
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    words = [w for w in admissible_words(2 * n) if gradings(w)[3] == k]
    lhs = zeta_poly(NCPoly({w: (-1) ** w.count("y") for w in words}), tol / 4)
    rhs = zeta_poly("xy" * n, tol / 4) * le_murakami_rhs_factor(n, k) * (-1) ** n
    return make_report("le_murakami", {"n": n, "k": k}, lhs, rhs, tol)


def check_zagier_ratio(n: int, tol: float = DEFAULT_TOL) -> VerifyReport:
    lhs = zeta_poly("xxyy" * n, tol / 4)
    rhs = zeta_poly("xy" * (2 * n), tol / 4) * Fraction(1, 2 * n + 1)
    return make_report("zagier_ratio", {"n": n}, lhs, rhs, tol)


def check_pi_power(k: int, tol: float = DEFAULT_TOL) -> VerifyReport:
    rhs = ApproxValue(PI ** (2 * k) / math.factorial(2 * k + 1), 8 * _EPS * PI ** (2 * k))
    return make_report("pi_power", {"k": k}, zeta_poly("xy" * k, tol / 4), rhs, tol)


def check_gamma_coefficient(n: int, tol: float = DEFAULT_TOL) -> VerifyReport:
    lhs = zeta_hat_poly(sym_generator("h", n), tol / 4)
    rhs = gamma_one_minus_t_coefficients(n, tol / 4)[n]
    return make_report("gamma_series", {"n": n}, lhs, rhs, tol)


def height_one_coefficients(max_weight: int) -> dict[tuple[int, int], NCPoly]:
    """Coefficient of u^a v^b in 1 - H(u) H(v) E(-(u+v)) (harmonic product)."""
    h = [sym_generator("h", n) for n in range(max_weight + 1)]
    e = [sym_generator("e", n) for n in range(max_weight + 1)]
    out: dict[tuple[int, int], NCPoly] = {}
    for a in range(max_weight + 1):
        for b in range(max_weight + 1 - a):
            total = NCPoly.zero()
            # E(-(u+v)) contributes (-1)^m e_m binom(m, r) u^r v^(m-r)
            for r in range(a + 1):
                for s in range(b + 1):
                    m = r + s
                    coeff = (-1) ** m * math.comb(m, r)
                    total = total + star(star(h[a - r], h[b - s]), e[m]).scale(coeff)
            if a == 0 and b == 0:
                total = NCPoly.one() - total
            else:
                total = -total
            out[(a, b)] = total
    return out


def check_height_one(max_weight: int, tol: float = DEFAULT_TOL) -> list[VerifyReport]:
    """Compare sum over height-one words of zeta(w) u^colength v^length with zeta_hat of
    the same bidegree coefficient of 1 - H(u) H(v) E(-(u+v))."""
    reports = []
    for (a, b), coeff in sorted(height_one_coefficients(max_weight).items()):
        lhs = zeta_poly("x" * a + "y" * b, tol / 4) if a and b else ApproxValue(0.0)
        rhs = zeta_hat_poly(coeff, tol / 4) if coeff else ApproxValue(0.0)
        reports.append(make_report("height_one", {"colength": a, "length": b}, lhs, rhs, tol))
    return reports


def shuffle_regularized_zeta(p, tol: float = DEFAULT_TOL) -> ApproxValue:
    """zeta of the constant term of p written as a shuffle polynomial in y over H^0."""
    parts = dict((j, c) for c, j in decompose_H1_over_H0(p, "shuffle"))
    return zeta_poly(parts.get(0, NCPoly.zero()), tol)


def check_kernel(u: Word, v: Word, tol: float = DEFAULT_TOL,
                 regularization: str = "star") -> VerifyReport:
    """zeta(u sh v - u * v) = 0 for u in H^1, v admissible.

    When u is not admissible the difference leaves H^0 and is evaluated with
    a regularization: "star" (zeta_hat with Euler's gamma) or "shuffle".
    """
    if not is_admissible(v):
        raise DomainError(f"second argument {v!r} must be admissible")
    if u and u[-1] != "y":
        raise DomainError(f"first argument {u!r} must end in y")
    diff = shuffle(u, v) - star(u, v)
    if regularization == "star":
        value = zeta_hat_poly(diff, tol / 4)
    elif regularization == "shuffle":
        value = shuffle_regularized_zeta(diff, tol / 4)
    else:
        raise ValueError("regularization must be 'star' or 'shuffle'")
    return make_report("kernel_zero", {"u": u, "v": v}, value, 0.0, tol)


# --- families ------------------------------------------------------------------

def _duality_family(max_weight: int = 6, **kw):
    return [check_duality(w, **kw) for n in range(2, max_weight + 1) for w in admissible_words(n)]


def _sum_family(max_weight: int = 6, **kw):
    return [check_sum_theorem(n, k, **kw) for n in range(2, max_weight + 1) for k in range(1, n)]


def _derivation_family(max_weight: int = 5, **kw):
    return [check_derivation(w, **kw) for n in range(2, max_weight + 1) for w in admissible_words(n)]


def _ohno_family(max_weight: int = 6, **kw):
    return [check_ohno(w, i, **kw) for n in range(2, max_weight + 1)
            for w in admissible_words(n) for i in range(0, max_weight - n + 1)]


def _cyclic_family(max_weight: int = 5, **kw):
    return [check_cyclic(w, **kw) for n in range(1, max_weight + 1)
            for w in all_words(n) if w[-1] == "y" and "x" in w]


def _cyclic_action_family(max_weight: int = 6, **kw):
    return [check_cyclic_action(m, n, **kw) for m in range(1, max_weight)
            for n in range(1, max_weight) if m + n + 1 <= max_weight]


def _periodic_family(max_n: int = 3, **kw):
    return [check_periodic_cyclic(n, **kw) for n in range(1, max_n + 1)]


def _le_murakami_family(max_weight: int = 8, **kw):
    return [check_le_murakami(n, k, **kw) for n in range(1, max_weight // 2 + 1)
            for k in range(1, n + 1)]


def _zagier_family(max_n: int = 2, **kw):
    return [check_zagier_ratio(n, **kw) for n in range(1, max_n + 1)]


def _pi_family(max_k: int = 4, **kw):
    return [check_pi_power(k, **kw) for k in range(1, max_k + 1)]


def _gamma_family(order: int = 4, **kw):
    return [check_gamma_coefficient(n, **kw) for n in range(0, order + 1)]


def _kernel_family(max_weight: int = 6, **kw):
    out = []
    for a in range(0, max_weight + 1):
        for u in all_words(a):
            if u and u[-1] != "y":
                continue
            for b in range(2, max_weight - a + 1):
                for v in admissible_words(b):
                    out.append(check_kernel(u, v, **kw))
    return out


@dataclass(frozen=True)
class Identity:
    name: str
    single: Callable
    family: Callable
    caps: dict = field(default_factory=dict)


IDENTITIES: dict[str, Identity] = {
    "duality": Identity("duality", check_duality, _duality_family, {"max_weight": 8}),
    "sum_theorem": Identity("sum_theorem", check_sum_theorem, _sum_family, {"max_weight": 8}),
    "derivation": Identity("derivation", check_derivation, _derivation_family, {"max_weight": 7}),
    "ohno": Identity("ohno", check_ohno, _ohno_family, {"max_weight": 8}),
    "cyclic": Identity("cyclic", check_cyclic, _cyclic_family, {"max_weight": 7}),
    "cyclic_action": Identity("cyclic_action", check_cyclic_action, _cyclic_action_family,
                              {"max_weight": 8}),
    "periodic_cyclic": Identity("periodic_cyclic", check_periodic_cyclic, _periodic_family,
                                {"max_n": 3}),
    "le_murakami": Identity("le_murakami", check_le_murakami, _le_murakami_family,
                            {"max_weight": 8}),
    "zagier_ratio": Identity("zagier_ratio", check_zagier_ratio, _zagier_family, {"max_n": 2}),
    "pi_power": Identity("pi_power", check_pi_power, _pi_family, {"max_k": 4}),
    "gamma_series": Identity("gamma_series", check_gamma_coefficient, _gamma_family,
                             {"order": 6}),
    "height_one": Identity("height_one", None, check_height_one, {"max_weight": 6}),
    "kernel_zero": Identity("kernel_zero", check_kernel, _kernel_family, {"max_weight": 7}),
}

# ranges used by `verify all`
DEFAULT_RANGES = {
    "pi_power": {"max_k": 4},
    "duality": {"max_weight": 6},
    "sum_theorem": {"max_weight": 6},
    "derivation": {"max_weight": 5},
    "ohno": {"max_weight": 6},
    "cyclic": {"max_weight": 5},
    "cyclic_action": {"max_weight": 6},
    "periodic_cyclic": {"max_n": 3},
    "zagier_ratio": {"max_n": 2},
    "le_murakami": {"max_weight": 8},
    "kernel_zero": {"max_weight": 6},
    "gamma_series": {"order": 4},
    "height_one": {"max_weight": 5},
}


class CapExceeded(ValueError):
    """A verification was requested beyond its desk-scale cap."""


def verify(identity: str, tol: float = DEFAULT_TOL, **params) -> list[VerifyReport]:
    """Run one identity, either at a single parameter point or over a family range.

    Family ranges are given by ``max_weight`` / ``max_n`` / ``max_k`` /
    ``order``; anything else is passed to the single-point check.
    """
    if identity not in IDENTITIES:
        raise KeyError(f"unknown identity {identity!r}; known: {', '.join(sorted(IDENTITIES))}")
    ident = IDENTITIES[identity]
    range_keys = set(ident.caps)
    if not params:
        params = dict(DEFAULT_RANGES[identity])
    if set(params) <= range_keys:
        for key, value in params.items():
            if value > ident.caps[key]:
                raise CapExceeded(f"{identity}: {key}={value} exceeds the cap {ident.caps[key]} "
                                  f"(evaluation cost grows like 2^weight)")
        if identity == "height_one":
            return check_height_one(params["max_weight"], tol)
        return ident.family(tol=tol, **params)
    if ident.single is None:
        raise ValueError(f"{identity} only runs as a family (max_weight=...)")
    return [ident.single(tol=tol, **params)]


def verify_all(tol: float = DEFAULT_TOL, ranges: dict | None = None) -> dict[str, list[VerifyReport]]:
    ranges = ranges or DEFAULT_RANGES
    return {name: verify(name, tol, **rng) for name, rng in ranges.items()}

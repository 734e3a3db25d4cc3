"""Closed-form Ramsey bounds evaluated in log2 space.

Asymptotic factors such as (1 + o(1)) or 2^{O(a^2/s)} are dropped from the
numbers and listed in ``BoundReport.caveats``; unspecified constants are
defaulted and flagged in ``BoundReport.flags``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

LOG2E = math.log2(math.e)


class BoundError(ValueError):
    pass


@dataclass
class BoundReport:
    name: str
    params: dict
    log2_value: float
    exact: int | None = None
    flags: list[str] = field(default_factory=list)
    caveats: list[str] = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    @property
    def value(self) -> float:
        return 2.0 ** self.log2_value

    @property
    def hypotheses_met(self) -> bool:
        return not any(f.startswith("violated:") for f in self.flags)

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "params": self.params,
            "log2_value": float(f"{self.log2_value:.12g}") if math.isfinite(self.log2_value) else str(self.log2_value),
            "exact": str(self.exact) if self.exact is not None else None,
            "flags": self.flags,
            "caveats": self.caveats,
            "method": "formula",
            **({"extra": self.extra} if self.extra else {}),
        }

    def csv_row(self) -> list[str]:
        params = ";".join(f"{k}={v}" for k, v in self.params.items())
        return [
            self.name,
            params,
            f"{self.log2_value:.12g}",
            "" if self.exact is None else str(self.exact),
            "|".join(self.flags),
        ]


CSV_HEADER = ["name", "params", "log2_value", "exact_value", "flags"]


def erdos_szekeres_upper(s: int, k: int) -> BoundReport:
    """r(s, k) <= C(k + s - 2, s - 1)."""
    if s < 1 or k < 1:
        raise BoundError("s and k must be positive")
    value = math.comb(k + s - 2, s - 1)
    return BoundReport("erdos-szekeres", {"s": s, "k": k}, math.log2(value), exact=value)


def _log2_pos(x: float) -> float:
    return math.log2(x) if x > 0 else -math.inf


def lower_bound_formula(name: str, **params) -> BoundReport:
    """Evaluate one of the closed-form lower bounds by name.

    ============== ===================================== ==================
    name           value                                 parameters
    ============== ===================================== ==================
    thm-main       c_s k^{s-2} / (ln k)^{2s-6}           s, k, c_s=1
    thm-general    (k/s)^{(1-delta) s}                   s, k, delta
    thm-kck        (2^{1 - 1/(2C)})^s                    s, C
    thm-close      (s/e) 2^{(s+a-1)/2 - a^2/(2s)}        s, a
    thm-multicolor 2^{(ell-1) s / 2}                     s, ell
    spencer-close  (s/e) 2^{(s+1)/2 + a/4}               s, a
    ============== ===================================== ==================
    """
    s = params.get("s")
    if s is None or s <= 0:
        raise BoundError("every formula needs a positive s")
    flags: list[str] = []
    caveats: list[str] = []

    if name == "thm-main":
        k = params["k"]
        if k <= 1:
            raise BoundError("thm-main needs k > 1")
        c_s = params.get("c_s")
        if c_s is None:
            c_s = 1.0
            flags.append("non-paper-constant:c_s=1")
        if s < 3:
            flags.append("violated:s>=3")
        denom_exp = 2 * s - 6
        value = _log2_pos(c_s) + (s - 2) * math.log2(k) - denom_exp * _log2_pos(math.log(k))
        caveats.append("holds for k large enough in terms of s; c_s is existential")
        return BoundReport(name, {"s": s, "k": k, "c_s": c_s}, value, flags=flags, caveats=caveats)

    if name == "thm-general":
        k, delta = params["k"], params["delta"]
        if not 0 < delta < 1:
            flags.append("violated:0<delta<1")
        if k < s:
            flags.append("violated:k>=s")
        value = (1 - delta) * s * math.log2(k / s)
        exact = 1 if k == s else None
        caveats.append("requires s >= s_0(delta) and k/s >= L(delta); both unspecified")
        return BoundReport(name, {"s": s, "k": k, "delta": delta}, value, exact=exact, flags=flags, caveats=caveats)

    if name == "thm-kck":
        C = params["C"]
        if C <= 1:
            flags.append("violated:C>1")
        value = s * (1 - 1 / (2 * C)) if math.isfinite(C) else float(s)
        caveats.append("for s sufficiently large")
        return BoundReport(name, {"s": s, "C": C}, value, flags=flags, caveats=caveats)

    if name == "thm-close":
        a = params["a"]
        if a < 0:
            flags.append("violated:a>=0")
        value = math.log2(s / math.e) + (s + a - 1) / 2 - a * a / (2 * s)
        caveats.append("(1+o(1)) factor dropped; a = o(s) regime")
        return BoundReport(name, {"s": s, "a": a, "k": s + a}, value, flags=flags, caveats=caveats)

    if name == "thm-multicolor":
        ell = params["ell"]
        if ell < 2:
            flags.append("violated:ell>=2")
        value = (ell - 1) * s / 2
        exact = 2 ** ((ell - 1) * s // 2) if ((ell - 1) * s) % 2 == 0 else None
        caveats.append("Omega(.) constant dropped")
        return BoundReport(name, {"s": s, "ell": ell}, value, exact=exact, flags=flags, caveats=caveats)

    if name == "spencer-close":
        a = params["a"]
        if a < 0:
            flags.append("violated:a>=0")
        value = math.log2(s / math.e) + (s + 1) / 2 + a / 4
        caveats.append("(1+o(1)) factor dropped")
        caveats.append(f"2^(O(a^2/s)) term dropped; a^2/s = {a * a / s:.6g}")
        return BoundReport(name, {"s": s, "a": a, "k": s + a}, value, flags=flags, caveats=caveats)

    raise BoundError(f"unknown bound {name!r}")


FORMULAS = ("thm-main", "thm-general", "thm-kck", "thm-close", "thm-multicolor", "spencer-close")


# -- product-pair bound -------------------------------------------------------------

def thm28_eval(pair, k: float) -> BoundReport:
    """Both branches of the lower bound obtained from an H_s-free pseudorandom pair.

    first  = k eta^{(w-k)/k} / 50 - 1      valid for w <= k <= eta d(F) n
    second = k / (100 eta) - 1             valid for 100 n ln^2 n / d(G) <= k <= eta d(F) n
    """
    n, w = pair.n, pair.w
    eta = pair.eta
    log2_eta = pair.log2_eta
    upper = eta * pair.product_size
    lower_second = 100 * n * math.log(n) ** 2 / pair.d_G
    if k == w or eta == 1:
        first = k / 50 - 1
    else:
        first = k * 2.0 ** (log2_eta * (w - k) / k) / 50 - 1
    second = k / (100 * eta) - 1 if eta > 0 else math.inf
    lo = max(w, lower_second)
    flags = []
    if not w <= k <= upper:
        flags.append("violated:w<=k<=eta*d(F)*n")
    if not lower_second <= k <= upper:
        flags.append("violated:100n(ln n)^2/d(G)<=k<=eta*d(F)*n")
    empty = lo > upper
    if empty:
        flags.append("admissible-interval-empty")
    eta_exact = pair.eta_exact
    extra = {
        "first_branch": first,
        "second_branch": second,
        "eta": str(eta_exact) if eta_exact is not None else eta,
        "eta_squared": str(pair.eta_squared),
        "w": w,
        "interval_first": [w, upper],
        "interval_second": [lower_second, upper],
        "admissible_interval": [lo, upper],
        "admissible_empty": empty,
    }
    return BoundReport("thm-pair", {"k": k, "n": n, "d_F": pair.d_F, "d_G": pair.d_G},
                       _log2_pos(first + 1) if first > -1 else -math.inf,
                       flags=flags, extra=extra,
                       caveats=["log2_value is log2(first branch + 1)"])


# -- p_C ------------------------------------------------------------------------

def pc_ratio(p: float) -> float:
    return math.log(p) / math.log1p(-p)


def pc_solve(C: float) -> float:
    """The p in (0, 1/2] with log p / log(1 - p) = C, by bisection to float precision.

    The ratio is steep near 0 (large C), so a fixed width in p would not bound
    the residual in C; bisection runs until the midpoint stops moving.
    """
    if C < 1:
        raise BoundError(f"C must be >= 1, got {C}")
    if C == 1:
        return 0.5
    lo, hi = 0.0, 0.5  # ratio decreases from +inf at 0 to 1 at 1/2
    while True:
        mid = (lo + hi) / 2
        if mid in (lo, hi):
            break
        if pc_ratio(mid) > C:
            lo = mid
        else:
            hi = mid
    if lo == 0.0:
        return hi
    return lo if abs(pc_ratio(lo) - C) <= abs(pc_ratio(hi) - C) else hi


# -- local lemma optimisation -----------------------------------------------------

@dataclass
class LLLSolution:
    s: int
    a: int
    delta: float
    p: float
    log2_bound_p: float
    log2_bound_q: float
    residual: float
    caveats: list[str] = field(default_factory=list)

    @property
    def log2_n_bound(self) -> float:
        return min(self.log2_bound_p, self.log2_bound_q)

    def as_dict(self) -> dict:
        return {
            "s": self.s, "a": self.a, "delta": self.delta, "p": self.p,
            "log2_n_bound": float(f"{self.log2_n_bound:.12g}"),
            "log2_bound_clique": self.log2_bound_p,
            "log2_bound_independent": self.log2_bound_q,
            "residual": self.residual,
            "caveats": self.caveats,
            "method": "formula",
        }


def _lll_gap(delta: float, s: int, a: int) -> float:
    """ln LHS - ln RHS of ((1+d)/(1-d))^{s+1} (1+d)^a = 2^a."""
    return (s + 1) * (math.log1p(delta) - math.log1p(-delta)) + a * math.log1p(delta) - a * math.log(2)


def spencer_lll(s: int, a: int) -> LLLSolution:
    """Balance the clique and independent-set local lemma bounds at p = (1 - delta)/2."""
    if s < 3 or a < 0:
        raise BoundError("need s >= 3 and a >= 0")
    if a == 0:
        delta = 0.0
    else:
        lo, hi = 0.0, 1.0 - 1e-15
        assert _lll_gap(lo, s, a) < 0 < _lll_gap(hi, s, a)
        for _ in range(200):
            mid = (lo + hi) / 2
            if _lll_gap(mid, s, a) < 0:
                lo = mid
            else:
                hi = mid
            if hi - lo <= 1e-17:
                break
        delta = lo if abs(_lll_gap(lo, s, a)) <= abs(_lll_gap(hi, s, a)) else hi
    p = (1 - delta) / 2
    k = s + a
    base = math.log2(s) - LOG2E
    bound_p = base + (s + 1) / 2 * -math.log2(p)
    bound_q = base + (k + 1) / 2 * -math.log2(1 - p)
    # |LHS - 2^a| / 2^a = |exp(gap) - 1|
    residual = abs(math.expm1(_lll_gap(delta, s, a)))
    return LLLSolution(s, a, delta, p, bound_p, bound_q, residual,
                       ["(1+o(1)) factors of both n-bounds dropped"])

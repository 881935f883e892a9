"""Arbitrary-precision evaluation of the theoretical constant schedule.

These numbers are documentation: at any realistic tau they are far beyond
what can be run, so they are reported, never used to drive computation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

PRECISION = 60  # decimal digits


def _mp(x) -> mpmath.mpf:
    """mpf from int, float, str or Fraction (exact numerator / denominator)."""
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


@dataclass
class TheoreticalConstants:
    k: int
    tau: mpmath.mpf
    c1: mpmath.mpf
    C1: mpmath.mpf
    D: int
    c2: mpmath.mpf
    c3: mpmath.mpf
    c4: int
    K1: mpmath.mpf
    K2: mpmath.mpf
    K3: mpmath.mpf
    K: mpmath.mpf
    eps: mpmath.mpf
    mu: mpmath.mpf
    ell: mpmath.mpf
    loglog_bound: mpmath.mpf  # log2(log2(size bound)) = tau^(-K)

    def formulas(self) -> dict[str, str]:
        return {
            "D": "2k+2",
            "c2": "16*c1^4",
            "c3": "c2^(1/((4k+4)*100000))/2",
            "c4": "(4k+4)*100000*16",
            "K1": "max(2, C1, D)",
            "K2": "300*K1^2*c3^(-200*K1)",
            "K3": "200*c4*K1",
            "K": "K2+K3",
            "eps": "(c3*tau)^c4",
            "mu": "8*(c2*eps^(1/16))^(1/(4k+4))",
            "ell": "K1*eps^(-100*K1)",
            "loglog_bound": "tau^(-K)",
        }

    def to_json(self) -> dict:
        out = {"k": self.k, "formulas": self.formulas()}
        for name in ("tau", "c1", "C1", "c2", "c3", "K1", "K2", "K3", "K", "eps", "mu", "ell", "loglog_bound"):
            out[name] = mpmath.nstr(getattr(self, name), 20)
        out["D"] = self.D
        out["c4"] = self.c4
        return out


def mu_of(eps, c1, k: int) -> mpmath.mpf:
    """8 (16 c1^4 eps^(1/16))^(1/(4k+4))."""
    with mpmath.workdps(PRECISION):
        c2 = 16 * _mp(c1) ** 4
        return 8 * (c2 * _mp(eps) ** (mpmath.mpf(1) / 16)) ** (mpmath.mpf(1) / (4 * k + 4))


def theoretical_constants(k: int, tau, c1=1, C1=1) -> TheoreticalConstants:
    """Evaluate the schedule for slicewise VC below k and target homogeneity tau.

    ``c1`` (packing constant) and ``C1`` (equipartition size constant) are not
    determined explicitly and must be supplied.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    with mpmath.workdps(PRECISION):
        tau = _mp(tau)
        if not (0 < tau < 1):
            raise ValueError("tau must lie in (0, 1)")
        c1, C1 = _mp(c1), _mp(C1)
        D = 2 * k + 2
        c2 = 16 * c1**4
        c3 = c2 ** (mpmath.mpf(1) / ((4 * k + 4) * 100000)) / 2
        c4 = (4 * k + 4) * 100000 * 16
        K1 = max(mpmath.mpf(2), C1, mpmath.mpf(D))
        K2 = 300 * K1**2 * c3 ** (-200 * K1)
        K3 = 200 * c4 * K1
        K = K2 + K3
        eps = (c3 * tau) ** c4
        mu = mu_of(eps, c1, k)
        ell = K1 * eps ** (-100 * K1)
        loglog = tau ** (-K)
        return TheoreticalConstants(k, tau, c1, C1, D, c2, c3, c4, K1, K2, K3, K, eps, mu, ell, loglog)

"""Closed-form parameter derivation for the hierarchical matching pipeline.

All ratio-bearing quantities are exact Fractions so that threshold
comparisons against integer degrees never suffer float drift.  The
exponential slack factors (e^gamma) are evaluated as floats; they only
enter audit bands that hold with strict margin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional


def _ceil_log(base: Fraction, x: Fraction) -> int:
    """Smallest integer k with base**k >= x (base > 1)."""
    if x <= 1:
        k = 0
        acc = Fraction(1)
        while acc > x:
            acc /= base
            k -= 1
        if acc == x:
            return k
        return k + 1 if acc < x else k
    k = 0
    acc = Fraction(1)
    while acc < x:
        acc *= base
        k += 1
    return k


def _ceil_log2(x: Fraction) -> int:
    k = 0
    acc = Fraction(1)
    while acc < x:
        acc *= 2
        k += 1
    return k


@dataclass(frozen=True)
class LevelInfo:
    index: int
    d: Fraction          # degree threshold of the level
    n_layers: int        # number of halving layers (>= 1 on skeleton levels)
    lam: Fraction        # 2**n_layers == d / (lam * skel_target)


@dataclass(frozen=True)
class Params:
    n: int
    eps: Fraction
    gamma: Fraction
    delta: Fraction
    K: int
    alpha: Fraction
    beta: Fraction
    L: int
    Lprime: int                  # first skeleton level (clamped at 0)
    Lprime_raw: int
    skel_target: Fraction        # stands in for L^4 in all skeleton bounds
    levels: tuple[LevelInfo, ...] = ()
    h0: float = 0.0
    h1: float = 0.0
    h2: float = 0.0
    preconditions: dict = field(default_factory=dict)
    preconditions_ok: bool = False
    deviation_flags: tuple[str, ...] = ()

    def d_of(self, i: int) -> Fraction:
        return self.beta**i * (self.alpha * self.beta)

    def level_info(self, i: int) -> LevelInfo:
        return self.levels[i - self.Lprime]

    @property
    def skeleton_levels(self) -> range:
        return range(self.Lprime, self.L + 1)

    def general_ratio_bound(self) -> Optional[float]:
        """(2/h2)*(1+eps)^2 bound on |max matching| / |maintained|.

        Meaningful only when the whole h-chain is positive; with a negative
        h1 the product for h2 can turn spuriously positive, so both factors
        are checked.
        """
        factor = 1.0 - 32.0 * float(self.delta) * float(
            max(self.L, 1) ** 4
        ) / float(self.eps) ** 2
        if self.h0 <= 0 or self.h1 <= 0 or factor <= 0 or self.h2 <= 0:
            return None
        e = float(self.eps)
        return (2.0 / self.h2) * (1.0 + e) ** 2

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "eps": str(self.eps),
            "gamma": str(self.gamma),
            "delta": str(self.delta),
            "K": self.K,
            "alpha": str(self.alpha),
            "beta": str(self.beta),
            "L": self.L,
            "Lprime": self.Lprime,
            "skel_target": str(self.skel_target),
            "h0": self.h0,
            "h1": self.h1,
            "h2": self.h2,
            "preconditions_ok": self.preconditions_ok,
            "preconditions": self.preconditions,
            "deviation_flags": list(self.deviation_flags),
        }


def derive_params(
    n: int,
    eps: Fraction,
    gamma: Optional[Fraction] = None,
    delta: Optional[Fraction] = None,
    K: int = 100,
    skel_target: Optional[Fraction] = None,
) -> Params:
    """Evaluate every derived parameter at (n, eps).

    Precondition failures are recorded, never fatal: small n legitimately
    violates the "sufficiently large" inequalities, and the caller decides
    which assertions to suppress based on `preconditions_ok`.
    """
    if not (0 < eps < 1):
        raise ValueError("eps must lie in (0,1)")
    if n < 2:
        raise ValueError("need n >= 2")
    eps = Fraction(eps)
    alpha = 1 + 3 * eps
    beta = 1 + eps
    L = _ceil_log(beta, Fraction(n) / alpha)

    flags: list[str] = []
    if gamma is None:
        gamma = eps
    else:
        gamma = Fraction(gamma)
        if gamma != eps:
            flags.append("gamma-override")
    L4 = Fraction(max(L, 1) ** 4)
    if delta is None:
        delta = eps**3 / L4
    else:
        delta = Fraction(delta)
        if delta != eps**3 / L4:
            flags.append("delta-override")
    if skel_target is None:
        target = L4
    else:
        target = Fraction(skel_target)
        if target != L4:
            flags.append("skel-target-override")

    lprime_raw = _ceil_log(beta, 2 * target / (alpha * beta))
    lprime = max(0, lprime_raw)

    levels = []
    for i in range(lprime, L + 1):
        d = beta**i * (alpha * beta)
        n_layers = max(1, _ceil_log2(d / target))
        lam = d / (2**n_layers * target)
        levels.append(LevelInfo(index=i, d=d, n_layers=n_layers, lam=lam))

    eg = math.exp(float(gamma))
    h0 = (1.0 / eg) / (1.0 + 4.0 * float(eps))
    h1 = h0 * (1.0 / eg) * (1.0 / float(alpha * beta) - 3.0 * float(eps))
    h2 = (1.0 - 32.0 * float(delta) * float(L4) / float(eps) ** 2) * (
        h1 - float(eps) - 1.0 / K
    )

    pre: dict[str, bool] = {}
    pre["L_positive"] = L >= 1
    pre["floor_L4_half_ge_quarter_ge_inv_eps"] = (
        Fraction(math.floor(L4 / 2)) >= L4 / 4 >= 1 / eps
    )
    pre["delta_in_0_half"] = 0 < delta < Fraction(1, 2)
    pre["L2_ge_4_over_eps"] = L * L >= 4 / eps
    pre["L_ge_3ab"] = L >= 3 * alpha * beta
    pre["L_ge_3"] = L >= 3
    pre["target_le_levels_le_n"] = all(
        target <= lv.d and lv.d <= n for lv in levels
    )
    pre["Ld_le_L"] = all(lv.n_layers <= L for lv in levels)
    pre["Ld_ge_gamma"] = all(lv.n_layers >= gamma for lv in levels)
    pre["L_ge_4Ld_over_gamma"] = all(L >= 4 * lv.n_layers / gamma for lv in levels)
    pre["L2_ge_8e_gamma_Ld"] = all(
        L * L >= 8 * eg * lv.n_layers / (float(eps) * float(gamma) * float(lv.lam))
        for lv in levels
    )
    pre["lambda_in_half_one"] = all(
        Fraction(1, 2) <= lv.lam <= 1 for lv in levels
    )
    pre["h0_band"] = 0.5 <= h0 <= 1.0 / (1.0 + 4.0 * float(eps))
    pre["h_chain_positive"] = h1 > 0 and h2 > 0

    return Params(
        n=n,
        eps=eps,
        gamma=gamma,
        delta=delta,
        K=K,
        alpha=alpha,
        beta=beta,
        L=L,
        Lprime=lprime,
        Lprime_raw=lprime_raw,
        skel_target=target,
        levels=tuple(levels),
        h0=h0,
        h1=h1,
        h2=h2,
        preconditions=pre,
        preconditions_ok=all(pre.values()),
        deviation_flags=tuple(flags),
    )

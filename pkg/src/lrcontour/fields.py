"""Decaying-field stability: the min-max criterion and its certificates.

The criterion compares the worst field energy at fixed minus-count n,
Ebar(n), against the minimal contour energy Hbar(n) (a single bubble of
n minuses).  Stability holds when the ratio stays below some eta < 1 for
every n; a scan covers n up to a limit and closed-form bounds carry the
tail.  Branches by decay exponent delta against alpha - 1:

  delta < alpha-1          outside the theorem
  delta = alpha-1          stable iff h_* below the critical amplitude
  alpha-1 < delta < 1      stable for every h_* after truncating the
                           field on [-R, R], R from the two radii of the
                           subcritical argument
  delta = 1, alpha < 2     same, with the radii computed at delta' = alpha/2
  delta > 1                stable once the summable field mass is small
                           against the bubble energies, truncating if needed

The closed-form field bound counts both signs: the top n field values
are the origin plus symmetric pairs +-x, so the supremum at count n
spends ceil(n/2) distinct radii, each twice.  An interval-bracketing
walk (bound at the right endpoint against the target at the left one,
both monotone in n) makes the tail check rigorous between grid points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .energy import FieldProfile, ModelParams, hamiltonian, tail_sum
from .errors import ResourceLimitError
from .lattice import SpinFlipSet

_TAIL_GRID_RATIO = 1.1
_TAIL_GRID_END = 2.0 ** 60


def bubble_energy(n: int, params: ModelParams):
    """Hbar(n) = H_J({1/2, n+1/2}), the minimal energy at minus-count n."""
    if n < 1:
        raise ValueError("bubble size must be >= 1")
    return hamiltonian(SpinFlipSet((1, 2 * n + 1)), params)


def bubble_energy_scan(n_max: int, params: ModelParams):
    """Cumulative certified Hbar(1..n_max) via Hbar(n) = 4 Sum_{k<=n} T(k).

    T(k) is the coupling tail Sum_{r>=k} J(r): the bubble [1, n] interacts
    with each side of its complement through exactly the tails T(1)..T(n).
    Returns (values, error_bounds) indexed by n - 1.
    """
    if n_max < 1:
        raise ValueError("scan size must be >= 1")
    t_vals = np.empty(n_max)
    t_errs = np.empty(n_max)
    for k in range(1, n_max + 1):
        t_vals[k - 1], t_errs[k - 1] = tail_sum(params.alpha, k)
    values = 4.0 * np.cumsum(t_vals)
    errs = 4.0 * np.cumsum(t_errs) + 1e-15 * values
    return values, errs


def bubble_lower_bound(n: float, alpha: float) -> float:
    """Closed-form lower bound for Hbar(n), monotone increasing in n."""
    if n < 1:
        raise ValueError("bubble size must be >= 1")
    if alpha == 2.0:
        return 4.0 + 4.0 * math.log(1.0 + n) - 4.0 * math.log(2.0)
    return 4.0 + 4.0 / ((alpha - 1.0) * (2.0 - alpha)) * (
        (n + 1.0) ** (2.0 - alpha) - 2.0 ** (2.0 - alpha))


def max_field_energy(n: int, profile: FieldProfile) -> float:
    """Ebar(n) = sup over |B| = n of Sum_{x in B} 2 h_x, an exact finite sum.

    The field is symmetric and non-increasing in |x|, so the supremum picks
    the origin (when untruncated) and then pairs +-x moving outward.
    """
    if n < 1:
        raise ValueError("site count must be >= 1")
    vals = []
    if profile.truncation_radius == 0:
        vals.append(profile.field_at(0))
        x = 1
    else:
        x = profile.truncation_radius + 1
    while len(vals) < n:
        v = profile.field_at(x)
        vals.append(v)
        if len(vals) < n:
            vals.append(v)
        x += 1
    return 2.0 * math.fsum(vals)


def max_field_energy_scan(n_max: int, profile: FieldProfile) -> np.ndarray:
    """Ebar(1..n_max) as one cumulative pass, indexed by n - 1."""
    if n_max < 1:
        raise ValueError("scan size must be >= 1")
    vals = np.empty(n_max)
    if profile.truncation_radius == 0:
        vals[0] = profile.field_at(0)
        filled = 1
        x = 1
    else:
        filled = 0
        x = profile.truncation_radius + 1
    while filled < n_max:
        v = profile.field_at(x)
        take = min(2, n_max - filled)
        vals[filled:filled + take] = v
        filled += take
        x += 1
    return 2.0 * np.cumsum(vals)


def field_upper_bound(n: float, profile: FieldProfile) -> float:
    """Closed-form upper bound for Ebar(n), monotone increasing in n.

    With m = ceil(n/2) distinct radii, each taken on both sides,
      untruncated:  Ebar(n) <= 2 h (3 + 2 (m^(1-d) - 1)/(1-d))
      truncated R:  Ebar(n) <= 4 h ((R+1)^(-d) + [(R+m)^(1-d)-(R+1)^(1-d)]/(1-d))
    with the logarithm replacing the power integral at d = 1.
    """
    if n < 1:
        raise ValueError("site count must be >= 1")
    h, d, r = profile.h_star, profile.delta, profile.truncation_radius
    if d > 1.0:
        raise ValueError("no closed form kept for summable decay")
    m = math.ceil(n / 2.0)
    if r == 0:
        if d == 1.0:
            return 2.0 * h * (3.0 + 2.0 * math.log(m))
        return 2.0 * h * (3.0 + 2.0 * (m ** (1.0 - d) - 1.0) / (1.0 - d))
    if d == 1.0:
        integral = math.log((r + m) / (r + 1.0))
    else:
        integral = ((r + m) ** (1.0 - d) - (r + 1.0) ** (1.0 - d)) / (1.0 - d)
    return 4.0 * h * ((r + 1.0) ** (-d) + integral)


def critical_amplitude(alpha: float) -> float:
    """The h_* threshold of the critical branch delta = alpha - 1."""
    if not (1.0 < alpha <= 2.0):
        raise ValueError(f"alpha must lie in (1, 2], got {alpha}")
    if alpha == 2.0:
        return 4.0 / (3.0 + 2.0 * math.log(2.0))
    return (8.0 - 4.0 * alpha) / (2.0 ** (3.0 - alpha) + 6.0 - 3.0 * alpha)


def ybar(big_k: float, mu: float, nu: float) -> float:
    """Threshold with K x^nu >= (x+y)^mu - (y+1)^mu for all x >= 1, y > ybar."""
    if not (big_k > 0.0 and 0.0 < mu < nu < 1.0):
        raise ValueError("need K > 0 and 0 < mu < nu < 1")
    q = (1.0 - nu) / (1.0 - mu)
    e = nu - mu
    return (mu / (big_k * nu)) ** (1.0 / e) * (
        q ** ((1.0 - nu) / e) - q ** ((1.0 - mu) / e))


def subcritical_radius(alpha: float, delta: float,
                       h_star: float) -> tuple[float, float, float]:
    """(R1, R2, ybar) of the subcritical argument, alpha-1 < delta < 1.

    R1 caps the head term 2 h (R+1)^-delta; R2 is the explicit closed form
    of the exponent-comparison threshold and must agree with the ybar
    evaluation under K = K_alpha (1-delta) / (h (2-alpha)), mu = 1-delta,
    nu = 2-alpha.
    """
    if not (alpha - 1.0 < delta < 1.0):
        raise ValueError("radius formulas need alpha - 1 < delta < 1")
    if not h_star > 0.0:
        raise ValueError("radius formulas need a positive amplitude")
    k_alpha = critical_amplitude(alpha) / 2.0
    r1 = (2.0 * h_star / (3.0 * k_alpha)) ** (1.0 / delta)
    yb = ybar(k_alpha * (1.0 - delta) / (h_star * (2.0 - alpha)),
              1.0 - delta, 2.0 - alpha)
    e = delta - (alpha - 1.0)
    q = (alpha - 1.0) / delta
    r2 = (q ** ((alpha - 1.0) / e) - q ** (delta / e)) \
        * (h_star / k_alpha) ** (1.0 / e)
    return r1, r2, yb


@dataclass(frozen=True)
class StabilityCertificate:
    """Outcome of the min-max criterion for one (alpha, delta, h_*) point.

    eta is the analytic ratio bound h_*/(2 K_alpha) on the critical branch
    and the scanned supremum elsewhere; in the scanned branches the range
    beyond scan_limit is certified separately by closed-form dominance,
    not by eta.
    """

    decision: str
    eta: float | None
    truncation_radius: int
    scan_limit: int
    constants: dict

    def as_payload(self) -> dict:
        return {"decision": self.decision, "eta": self.eta,
                "truncation_radius": self.truncation_radius,
                "scan_limit": self.scan_limit, "constants": self.constants}


def _scan_sup(profile: FieldProfile, params: ModelParams,
              scan_limit: int) -> float:
    """sup over n <= scan_limit of Ebar(n) / lower(Hbar(n))."""
    h_vals, h_errs = bubble_energy_scan(scan_limit, params)
    e_vals = max_field_energy_scan(scan_limit, profile)
    return float(np.max(e_vals / (h_vals - h_errs)))


def _check_tail_dominance(bound_profile: FieldProfile, alpha: float,
                          target_factor: float, start: int) -> None:
    """field_upper_bound <= target_factor * bubble_lower_bound beyond start.

    Both sides are monotone in n, so checking the bound at each grid
    point's successor against the target at the point itself covers every
    n in between; the grid is geometric with a small ratio.
    """
    n = float(start)
    while n < _TAIL_GRID_END:
        n_next = n * _TAIL_GRID_RATIO
        if field_upper_bound(n_next, bound_profile) > \
                target_factor * bubble_lower_bound(n, alpha):
            raise ArithmeticError(
                f"closed-form tail dominance fails near n={n:.3g}")
        n = n_next


def stability_certificate(model_params: ModelParams, profile: FieldProfile,
                          scan_limit: int = 10 ** 4) -> StabilityCertificate:
    if scan_limit < 1000:
        raise ValueError("scan limit below 1000 cannot meet the tail grid")
    alpha = model_params.alpha
    delta = profile.delta
    h_star = profile.h_star
    amp = critical_amplitude(alpha)
    consts: dict = {"K_alpha": amp / 2.0, "R1": None, "R2": None, "ybar": None}

    if h_star == 0.0:
        return StabilityCertificate("stable", 0.0, 0, scan_limit, consts)

    if delta < alpha - 1.0:
        return StabilityCertificate("outside_theorem", None, 0,
                                    scan_limit, consts)

    if delta == alpha - 1.0:
        eta = h_star / amp
        if eta >= 1.0:
            return StabilityCertificate("needs_small_h", eta, 0,
                                        scan_limit, consts)
        base = FieldProfile(h_star, delta)
        scanned = _scan_sup(base, model_params, scan_limit)
        if scanned > eta * (1.0 + 1e-12):
            raise ArithmeticError(
                f"scan exceeded the critical eta: {scanned} > {eta}")
        _check_tail_dominance(base, alpha, eta, scan_limit)
        return StabilityCertificate("stable", eta, 0, scan_limit, consts)

    if delta <= 1.0:
        # only alpha < 2 reaches here; radii at the actual exponent, or at
        # alpha/2 when delta = 1, whose field dominates the actual one
        d_eff = delta if delta < 1.0 else alpha / 2.0
        r1, r2, yb = subcritical_radius(alpha, d_eff, h_star)
        radius = max(1, math.ceil(2.0 * max(r1, r2)))
        consts.update({"R1": r1, "R2": r2, "ybar": yb})
        k_alpha = amp / 2.0
        if 2.0 * h_star * (radius + 1.0) ** (-d_eff) > 3.0 * k_alpha:
            raise ArithmeticError("head condition fails at the chosen radius")
        if not radius > yb:
            raise ArithmeticError("truncation radius at or below ybar")
        _check_tail_dominance(FieldProfile(h_star, d_eff, radius), alpha,
                              0.95, scan_limit)
        truncated = FieldProfile(h_star, delta, radius)
        eta = _scan_sup(truncated, model_params, scan_limit)
        if eta >= 1.0:
            raise ArithmeticError(
                f"subcritical scan failed to certify: eta={eta}")
        return StabilityCertificate("stable", eta, radius, scan_limit, consts)

    # summable decay: pick the smallest power-of-two truncation whose
    # remaining field mass is at most half the first bubble energy; the
    # mass bounds Ebar(n) for every n, so the tail needs no grid walk
    h1 = bubble_energy(1, model_params)
    radius = 0
    while True:
        tv, te = tail_sum(delta, radius + 1)
        mass = 4.0 * h_star * (tv + te) + (2.0 * h_star if radius == 0 else 0.0)
        if mass <= 0.5 * h1.lower:
            break
        radius = 1 if radius == 0 else radius * 2
        if radius > 2 ** 40:
            raise ResourceLimitError(
                "summable-field truncation radius beyond the search cap")
    truncated = FieldProfile(h_star, delta, radius)
    eta = _scan_sup(truncated, model_params, scan_limit)
    if eta >= 1.0:
        raise ArithmeticError(f"summable scan failed to certify: eta={eta}")
    return StabilityCertificate("stable", eta, radius, scan_limit, consts)

"""Numerical verification sweeps for the inequality lemmas.

Each sweep walks an exhaustively enumerated corpus, checks one
inequality with certified arithmetic (a claim A >= B passes only when
lower(A) >= upper(B)), and reports the minimum slack together with the
witness attaining it.  Instances whose right side is negative prove
nothing and are tallied as vacuous, never as passes.
"""

from __future__ import annotations

from bisect import bisect_left
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .bounds import c_of, energy_bracket
from .contours import externals, is_irreducible, negative_set, partition
from .covers import ContourParams, cover_size, isolated_cover, \
    isolated_cover_size, top_scale
from .energy import ModelParams, WindowEnergy, epsilon_j, field_energy, \
    field_energy_of_sites, tail_sum, FieldProfile
from .enumeration import enumerate_flip_sets, translation_classes
from .lattice import IntervalZ, SpinFlipSet, diam


@dataclass(frozen=True)
class CorpusSpec:
    """Exhaustive flip-set-class corpus: size and diameter caps."""

    max_flips: int
    max_diam: int

    def describe(self) -> str:
        return (f"translation classes with |gamma| <= {self.max_flips}, "
                f"diam <= {self.max_diam}")


@dataclass(frozen=True)
class VerificationReport:
    lemma_id: str
    corpus: str
    instances_checked: int
    violations: int
    vacuous: int = 0
    extremal_margin: float | None = None
    witness: dict | None = None
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def as_payload(self) -> dict:
        return {"lemma_id": self.lemma_id, "corpus": self.corpus,
                "instances_checked": self.instances_checked,
                "violations": self.violations, "vacuous": self.vacuous,
                "extremal_margin": self.extremal_margin,
                "witness": self.witness, "extra": self.extra}


class _Extremal:
    """Track the smallest margin and its witness."""

    def __init__(self):
        self.margin: float | None = None
        self.witness: dict | None = None

    def offer(self, margin: float, witness: dict) -> None:
        if self.margin is None or margin < self.margin:
            self.margin = margin
            self.witness = witness


def _energy_estimate_instance(window: WindowEnergy, gamma_union: SpinFlipSet,
                              gamma: SpinFlipSet, remainder: SpinFlipSet,
                              bracket: float) -> tuple[float, float, float]:
    """(certified slack, ratio lower bound, ratio upper bound)."""
    h_total = window.hamiltonian_of(gamma_union)
    h_rest = window.hamiltonian_of(remainder)
    h_gamma = window.hamiltonian_of(gamma)
    lhs_lower = h_total.lower - h_rest.upper
    lhs_upper = h_total.upper - h_rest.lower
    rhs_upper = bracket * (h_gamma.upper if bracket >= 0 else h_gamma.lower)
    return (lhs_lower - rhs_upper, lhs_lower / h_gamma.upper,
            lhs_upper / h_gamma.lower)


def sweep_energy_estimate(L: int, model_params: ModelParams,
                          contour_params: ContourParams) -> VerificationReport:
    """H_J(Gamma) - H_J(Gamma minus gamma) >= bracket * H_J(gamma).

    Exhaustive over every configuration of the window [-L, L] with plus
    boundary, every external contour of its partition.
    """
    if L > 8:
        raise ValueError("window half-width capped at 8 for the full sweep")
    bracket = energy_bracket(model_params.alpha, contour_params)
    window = WindowEnergy(model_params, -L, L)
    best = _Extremal()
    checked = violations = vacuous = 0
    min_ratio = max_ratio = None
    for flips in enumerate_flip_sets(IntervalZ(-L, L), 2 * L + 2):
        parts = partition(flips, contour_params)
        exts = parts.externals()
        for gamma in exts:
            rest_twice = tuple(t for t in flips.twice if t not in set(gamma.twice))
            remainder = SpinFlipSet(rest_twice)
            slack, ratio, ratio_hi = _energy_estimate_instance(
                window, flips, gamma, remainder, bracket)
            if min_ratio is None or ratio < min_ratio:
                min_ratio = ratio
            if max_ratio is None or ratio_hi > max_ratio:
                max_ratio = ratio_hi
            witness = {"flips": flips.to_text(), "gamma": gamma.to_text(),
                       "slack": slack, "ratio_lower": ratio}
            if bracket < 0:
                vacuous += 1
                best.offer(slack, witness)
                continue
            checked += 1
            if slack < 0.0:
                violations += 1
            best.offer(slack, witness)
    return VerificationReport(
        "energy-estimate",
        f"all configurations on [-{L}, {L}], plus boundary, "
        f"M={contour_params.M}, a={contour_params.a}, "
        f"alpha={model_params.alpha}",
        checked, violations, vacuous, best.margin, best.witness,
        # the max ratio is recorded, never asserted: whether removals can
        # gain more than H_J(gamma) is left as an observation
        {"bracket": bracket, "min_ratio_lower": min_ratio,
         "max_ratio_upper": max_ratio})


def _irreducible_shard(spec: CorpusSpec, contour_params: ContourParams,
                       shard: int, step: int):
    for k, gamma in enumerate(translation_classes(spec.max_flips,
                                                  spec.max_diam)):
        if k % step != shard:
            continue
        if is_irreducible(gamma, contour_params):
            yield gamma


def _merge_shards(partials: list[dict]) -> dict:
    """Combine per-shard tallies; strict < keeps the lowest-shard witness."""
    total = {"checked": 0, "violations": 0, "margin": None, "witness": None,
             "lo": None, "hi": None, "with_isolation": 0}
    for p in partials:
        total["checked"] += p["checked"]
        total["violations"] += p["violations"]
        total["with_isolation"] += p.get("with_isolation", 0)
        if p["margin"] is not None and (total["margin"] is None
                                        or p["margin"] < total["margin"]):
            total["margin"] = p["margin"]
            total["witness"] = p["witness"]
        for key, pick in (("lo", min), ("hi", max)):
            if p[key] is not None:
                total[key] = p[key] if total[key] is None \
                    else pick(total[key], p[key])
    return total


def _run_sharded(worker, args: tuple, threads: int) -> dict:
    if threads < 1:
        raise ValueError("threads must be >= 1")
    if threads == 1:
        return _merge_shards([worker(*args, 0, 1)])
    with ProcessPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(worker, *args, shard, threads)
                   for shard in range(threads)]
        return _merge_shards([f.result() for f in futures])


def _geometric_shard(spec: CorpusSpec, model_params: ModelParams,
                     contour_params: ContourParams, shard: int,
                     step: int) -> dict:
    eps = epsilon_j(model_params)
    window = WindowEnergy(model_params, 0, spec.max_diam + 1)
    best = _Extremal()
    checked = violations = 0
    min_ratio = None
    for gamma in _irreducible_shard(spec, contour_params, shard, step):
        n_iso = isolated_cover_size(gamma, contour_params)
        h = window.hamiltonian_of(gamma)
        slack = h.lower - eps * n_iso
        ratio = h.lower / n_iso
        checked += 1
        if slack < 0.0:
            violations += 1
        if min_ratio is None or ratio < min_ratio:
            min_ratio = ratio
        best.offer(slack, {"gamma": gamma.to_text(), "n_isolated": n_iso,
                           "hamiltonian_lower": h.lower, "slack": slack})
    return {"checked": checked, "violations": violations,
            "margin": best.margin, "witness": best.witness,
            "lo": min_ratio, "hi": None}


def sweep_geometric_estimate(spec: CorpusSpec, model_params: ModelParams,
                             contour_params: ContourParams,
                             threads: int = 1) -> VerificationReport:
    """H_J(gamma) >= epsilon_lower * N'(gamma) over irreducible classes."""
    merged = _run_sharded(_geometric_shard, (spec, model_params,
                                             contour_params), threads)
    return VerificationReport(
        "geometric-estimate",
        f"irreducible {spec.describe()}, alpha={model_params.alpha}, "
        f"M={contour_params.M}, a={contour_params.a}",
        merged["checked"], merged["violations"], 0,
        merged["margin"], merged["witness"],
        {"epsilon_lower": epsilon_j(model_params),
         "min_ratio": merged["lo"]})


def _cover_shard(spec: CorpusSpec, contour_params: ContourParams,
                 shard: int, step: int) -> dict:
    c_ma = c_of(contour_params)
    best = _Extremal()
    checked = violations = 0
    max_ratio = None
    for gamma in _irreducible_shard(spec, contour_params, shard, step):
        n_cover = cover_size(gamma)
        n_iso = isolated_cover_size(gamma, contour_params)
        slack = c_ma * n_iso - n_cover
        ratio = n_cover / n_iso
        checked += 1
        if slack < 0.0:
            violations += 1
        if max_ratio is None or ratio > max_ratio:
            max_ratio = ratio
        best.offer(slack, {"gamma": gamma.to_text(), "n_cover": n_cover,
                           "n_isolated": n_iso, "slack": slack})
    return {"checked": checked, "violations": violations,
            "margin": best.margin, "witness": best.witness,
            "lo": None, "hi": max_ratio}


def sweep_cover_relation(spec: CorpusSpec, contour_params: ContourParams,
                         threads: int = 1) -> VerificationReport:
    """N(gamma) <= c(M,a) N'(gamma) over irreducible classes."""
    merged = _run_sharded(_cover_shard, (spec, contour_params), threads)
    return VerificationReport(
        "cover-relation",
        f"irreducible {spec.describe()}, M={contour_params.M}, "
        f"a={contour_params.a}",
        merged["checked"], merged["violations"], 0,
        merged["margin"], merged["witness"],
        {"c_Ma": c_of(contour_params), "max_ratio": merged["hi"]})


def _flanks(left: int, scale: int) -> tuple[tuple[int, int], tuple[int, int]]:
    """Closed flanking site blocks of the open interval (left, left+2^scale)."""
    half = 1 << (scale - 1)
    right = left + (1 << scale)
    return (left - half + 1, left), (right, right + half - 1)


def _blocks_overlap(b1: tuple[int, int], b2: tuple[int, int]) -> bool:
    return b1[0] <= b2[1] and b2[0] <= b1[1]


def _flip_free(gamma: SpinFlipSet, block: tuple[int, int]) -> bool:
    lo, hi = block
    return not any(2 * lo < t < 2 * hi for t in gamma.twice)


def _parity_at(gamma: SpinFlipSet, site: int) -> int:
    """Number of flips below the site, mod 2."""
    return bisect_left(gamma.twice, 2 * site) & 1


def _disjointness_shard(spec: CorpusSpec, contour_params: ContourParams,
                        shard: int, step: int) -> dict:
    best = _Extremal()
    checked = violations = with_isolation = 0
    for gamma in _irreducible_shard(spec, contour_params, shard, step):
        if diam(gamma) < 2:
            iso_all = []
        else:
            iso_all = [
                (iv.left, n)
                for n in range(1, top_scale(gamma) + 1)
                for iv in isolated_cover(gamma, n, contour_params)]
        flank_list = [_flanks(left, n) for left, n in iso_all]
        if flank_list:
            with_isolation += 1
        for i, (minus_i, plus_i) in enumerate(flank_list):
            checked += 1
            ok = (_flip_free(gamma, minus_i) and _flip_free(gamma, plus_i)
                  and _parity_at(gamma, minus_i[1])
                  != _parity_at(gamma, plus_i[0]))
            if not ok:
                violations += 1
                best.offer(-1.0, {"gamma": gamma.to_text(),
                                  "interval": iso_all[i],
                                  "kind": "chi-inclusion"})
            for j in range(i + 1, len(flank_list)):
                minus_j, plus_j = flank_list[j]
                checked += 1
                collide = ((_blocks_overlap(minus_i, minus_j)
                            and _blocks_overlap(plus_i, plus_j))
                           or (_blocks_overlap(minus_i, plus_j)
                               and _blocks_overlap(plus_i, minus_j)))
                if collide:
                    violations += 1
                    best.offer(-1.0, {"gamma": gamma.to_text(),
                                      "intervals": [iso_all[i], iso_all[j]],
                                      "kind": "product-collision"})
    return {"checked": checked, "violations": violations,
            "margin": best.margin, "witness": best.witness,
            "lo": None, "hi": None, "with_isolation": with_isolation}


def sweep_interval_disjointness(spec: CorpusSpec,
                                contour_params: ContourParams,
                                threads: int = 1) -> VerificationReport:
    """Flanking products of isolated intervals never collide, and pairs
    across each product straddle an odd flip count.

    Isolation needs gaps of at least 2M 2^(a n), so corpora whose diameter
    cap sits below that threshold check nothing; the report then shows
    zero instances and classes_with_isolation = 0 rather than pretending
    the lemma was exercised.
    """
    merged = _run_sharded(_disjointness_shard, (spec, contour_params), threads)
    return VerificationReport(
        "interval-disjointness",
        f"irreducible {spec.describe()}, M={contour_params.M}, "
        f"a={contour_params.a}",
        merged["checked"], merged["violations"], 0,
        merged["margin"] if merged["violations"] else 1.0,
        merged["witness"],
        {"classes_with_isolation": merged["with_isolation"]})


def sweep_field_difference(L: int, profile: FieldProfile,
                           contour_params: ContourParams = ContourParams(2.0, 1.5),
                           ) -> VerificationReport:
    """|E_h(Gamma) - E_h(Gamma minus gamma)| <= E_h(gamma), exact sums.

    The partition parameters do not enter the statement; the default pair
    just fixes a concrete boundary decomposition to quantify over.
    """
    if L > 8:
        raise ValueError("window half-width capped at 8 for the full sweep")
    best = _Extremal()
    checked = violations = 0
    for flips in enumerate_flip_sets(IntervalZ(-L, L), 2 * L + 2):
        parts = list(partition(flips, contour_params))
        e_total = field_energy_of_sites(negative_set(parts), profile)
        for gamma in externals(parts):
            rest = [p for p in parts if p != gamma]
            e_rest = field_energy_of_sites(negative_set(rest), profile)
            e_gamma = field_energy(gamma, profile)
            slack = e_gamma - abs(e_total - e_rest)
            checked += 1
            if slack < -1e-12 * (1.0 + e_gamma):
                violations += 1
            best.offer(slack, {"flips": flips.to_text(),
                               "gamma": gamma.to_text(), "slack": slack})
    return VerificationReport(
        "field-difference",
        f"all configurations on [-{L}, {L}], h_star={profile.h_star}, "
        f"delta={profile.delta}, R={profile.truncation_radius}",
        checked, violations, 0, best.margin, best.witness, {})


def ratio_tail_check(model_params: ModelParams,
                     m_list: list[int], n_max: int = 10 ** 4) -> VerificationReport:
    """Sum_{r >= nM} J(r) <= alpha M^(1-alpha) Sum_{r >= n} J(r), certified."""
    alpha = model_params.alpha
    best = _Extremal()
    checked = violations = 0
    for big_m in m_list:
        if big_m < 2:
            raise ValueError("M values must be >= 2")
        bound = alpha * float(big_m) ** (1.0 - alpha)
        for n in range(1, n_max + 1):
            tv_far, te_far = tail_sum(alpha, n * big_m)
            tv_near, te_near = tail_sum(alpha, n)
            slack = bound * (tv_near - te_near) - (tv_far + te_far)
            checked += 1
            if slack < 0.0:
                violations += 1
            best.offer(slack, {"M": big_m, "n": n, "slack": slack,
                               "bound": bound})
    return VerificationReport(
        "ratio-tail",
        f"alpha={alpha}, M in {m_list}, n <= {n_max}",
        checked, violations, 0, best.margin, best.witness, {})

"""Command-line surface.

Every command prints one report (JSON by default) carrying the fully
resolved configuration, so a run can be reproduced from its own output.
Exit codes: 0 success or zero violations, 1 violations found, 2 usage
error, 3 resource limit hit.
"""

from __future__ import annotations

import argparse
import re
import sys

from . import serialize
from .bounds import beta_threshold, peierls_constants, peierls_series
from .covers import ContourParams, cover_family, cover_size, \
    isolated_cover_size
from .energy import FieldProfile, ModelParams, hamiltonian
from .enumeration import census
from .errors import ResourceLimitError
from .fields import stability_certificate
from .lattice import SpinFlipSet
from .contours import partition
from .montecarlo import ChainSpec, exact_expectation, run_chain
from .verify import CorpusSpec, VerificationReport, ratio_tail_check, \
    sweep_cover_relation, sweep_energy_estimate, sweep_field_difference, \
    sweep_geometric_estimate, sweep_interval_disjointness

_LEMMA_IDS = ("energy-estimate", "geometric-estimate", "cover-relation",
              "interval-disjointness", "field-difference", "ratio-tail")


class _Parser(argparse.ArgumentParser):
    """Usage problems exit 2 and negative flip lists parse as positionals."""

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._negative_number_matcher = re.compile(r"^-\d")

    def error(self, message):
        self.exit(2, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    top = _Parser(prog="lrcontour",
                  description="Contour machinery for the one-dimensional "
                              "long-range Ising model, with numerical "
                              "verification of its inequality lemmas.")
    sub = top.add_subparsers(dest="command", required=True,
                             parser_class=_Parser)

    def common(p):
        p.add_argument("--output", metavar="PATH",
                       help="write the report here instead of stdout")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--threads", type=int, default=1,
                       help="parallelism cap for sweeps that shard")

    p = sub.add_parser("hamiltonian", help="certified H_J of one flip set")
    p.add_argument("flips", help='twice-value list, e.g. "-1,1" for '
                                 "{-1/2, 1/2}")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--tol", type=float, default=1e-10)
    common(p)

    p = sub.add_parser("partition", help="(M,a)-partition of a flip set")
    p.add_argument("flips")
    p.add_argument("--M", type=float, required=True)
    p.add_argument("--a", type=float, required=True)
    common(p)

    p = sub.add_parser("covers", help="multiscale covers, optionally with "
                                      "the isolated subfamilies")
    p.add_argument("flips")
    p.add_argument("--M", type=float)
    p.add_argument("--a", type=float)
    common(p)

    p = sub.add_parser("census", help="exact contour counts |C(R)| vs the "
                                      "entropy bound")
    p.add_argument("--rmax", type=int, required=True)
    common(p)

    p = sub.add_parser("verify", help="run one verification sweep")
    p.add_argument("lemma", choices=_LEMMA_IDS)
    p.add_argument("--L", type=int, help="window half-width (exhaustive "
                                         "configuration sweeps)")
    p.add_argument("--alpha", type=float)
    p.add_argument("--M", type=float)
    p.add_argument("--a", type=float)
    p.add_argument("--max-flips", type=int, default=6)
    p.add_argument("--max-diam", type=int, default=32)
    p.add_argument("--hstar", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--R", type=int, default=0, help="field truncation radius")
    p.add_argument("--M-list", default="4,16,64",
                   help="comma list of scale factors (ratio-tail)")
    p.add_argument("--nmax", type=int, default=10 ** 4)
    common(p)

    p = sub.add_parser("constants", help="Peierls constant pack")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--M", type=float, required=True)
    p.add_argument("--eta", type=float, default=0.0)
    common(p)

    p = sub.add_parser("beta-threshold", help="inverse temperature making "
                                              "the contour series small")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--M", type=float, required=True)
    p.add_argument("--eta", type=float, default=0.0)
    p.add_argument("--target", type=float, required=True)
    common(p)

    p = sub.add_parser("stability", help="decaying-field stability "
                                         "certificate")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--hstar", type=float, required=True)
    p.add_argument("--scan-limit", type=int, default=10 ** 4)
    common(p)

    p = sub.add_parser("mc", help="Metropolis window chain, with the exact "
                                  "summation when the window is small")
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--hstar", type=float, default=0.0)
    p.add_argument("--delta", type=float, default=1.0)
    p.add_argument("--boundary", type=int, choices=(1, -1), default=1)
    p.add_argument("--steps", type=int, default=10 ** 6)
    p.add_argument("--burn-in", type=int)
    p.add_argument("--thin", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--exact", action="store_true",
                   help="include the exact expectation (small windows only)")
    common(p)

    return top


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _verify_dispatch(ns) -> VerificationReport:
    def need(*names):
        missing = [n for n in names if getattr(ns, n.replace("-", "_")) is None]
        if missing:
            raise _Usage(f"verify {ns.lemma} requires --" + " --".join(missing))

    spec = CorpusSpec(ns.max_flips, ns.max_diam)
    if ns.lemma == "energy-estimate":
        need("L", "alpha", "M", "a")
        return sweep_energy_estimate(ns.L, ModelParams(ns.alpha),
                                     ContourParams(ns.M, ns.a))
    if ns.lemma == "geometric-estimate":
        need("alpha", "M", "a")
        return sweep_geometric_estimate(spec, ModelParams(ns.alpha),
                                        ContourParams(ns.M, ns.a), ns.threads)
    if ns.lemma == "cover-relation":
        need("M", "a")
        return sweep_cover_relation(spec, ContourParams(ns.M, ns.a),
                                    ns.threads)
    if ns.lemma == "interval-disjointness":
        need("M", "a")
        return sweep_interval_disjointness(spec, ContourParams(ns.M, ns.a),
                                           ns.threads)
    if ns.lemma == "field-difference":
        need("L", "hstar", "delta")
        profile = FieldProfile(ns.hstar, ns.delta, ns.R)
        if ns.M is not None and ns.a is not None:
            return sweep_field_difference(ns.L, profile,
                                          ContourParams(ns.M, ns.a))
        return sweep_field_difference(ns.L, profile)
    need("alpha")
    m_list = [int(tok) for tok in ns.M_list.split(",") if tok]
    return ratio_tail_check(ModelParams(ns.alpha), m_list, ns.nmax)


class _Usage(Exception):
    pass


def _config_of(ns) -> dict:
    skip = {"command", "output", "format"}
    out = {}
    for key in sorted(vars(ns)):
        if key not in skip:
            out[key] = getattr(ns, key)
    return out


def _run(ns) -> int:
    cfg = _config_of(ns)
    if ns.format == "csv" and ns.command != "census":
        raise _Usage(f"{ns.command} only emits JSON")
    exit_code = 0

    if ns.command == "hamiltonian":
        gamma = SpinFlipSet.from_text(ns.flips)
        h = hamiltonian(gamma, ModelParams(ns.alpha, ns.tol))
        result = {"flips": gamma.to_text(), "value": h.value,
                  "error_bound": h.error_bound}

    elif ns.command == "partition":
        gamma = SpinFlipSet.from_text(ns.flips)
        parts = partition(gamma, ContourParams(ns.M, ns.a))
        result = parts.as_payload()
        result["externals"] = [g.to_text() for g in parts.externals()]
        result["negative_sites"] = sorted(parts.negative_set())

    elif ns.command == "covers":
        if (ns.M is None) != (ns.a is None):
            raise _Usage("covers needs --M and --a together or neither")
        gamma = SpinFlipSet.from_text(ns.flips)
        params = None if ns.M is None else ContourParams(ns.M, ns.a)
        result = cover_family(gamma, params).as_payload()
        result["n_cover"] = cover_size(gamma)
        if params is not None:
            result["n_isolated"] = isolated_cover_size(gamma, params)

    elif ns.command == "census":
        rows = census(ns.rmax)
        if ns.format == "csv":
            _emit(serialize.census_csv(rows), ns.output)
            return 0
        result = {"rows": [r.as_payload() for r in rows]}

    elif ns.command == "verify":
        report = _verify_dispatch(ns)
        result = report.as_payload()
        exit_code = 0 if report.violations == 0 else 1

    elif ns.command == "constants":
        pack = peierls_constants(ModelParams(ns.alpha),
                                 ContourParams(ns.M, ns.a), ns.eta)
        result = pack.as_payload()

    elif ns.command == "beta-threshold":
        model = ModelParams(ns.alpha)
        contour = ContourParams(ns.M, ns.a)
        pack = peierls_constants(model, contour, ns.eta)
        beta = beta_threshold(model, contour, ns.eta, ns.target)
        result = {"beta_threshold": beta,
                  "series_at_threshold":
                      peierls_series(pack.C2 - beta * pack.C3),
                  "constants": pack.as_payload()}

    elif ns.command == "stability":
        profile = FieldProfile(ns.hstar, ns.delta)
        cert = stability_certificate(ModelParams(ns.alpha), profile,
                                     ns.scan_limit)
        result = cert.as_payload()

    elif ns.command == "mc":
        profile = None
        if ns.hstar > 0.0:
            profile = FieldProfile(ns.hstar, ns.delta)
        spec = ChainSpec(L=ns.L, beta=ns.beta, params=ModelParams(ns.alpha),
                         boundary_sign=ns.boundary, profile=profile,
                         steps=ns.steps, burn_in=ns.burn_in, thin=ns.thin,
                         seed=ns.seed)
        chain = run_chain(spec)
        result = chain.as_payload()
        if ns.exact:
            result["exact_sigma0"] = exact_expectation(
                ns.L, ns.beta, spec.params, ns.boundary, profile)

    else:
        raise _Usage(f"unknown command {ns.command!r}")

    _emit(serialize.report(ns.command, cfg, result), ns.output)
    return exit_code


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _run(ns)
    except _Usage as exc:
        sys.stderr.write(f"lrcontour: error: {exc}\n")
        return 2
    except (ValueError, KeyError) as exc:
        sys.stderr.write(f"lrcontour: error: {exc}\n")
        return 2
    except ResourceLimitError as exc:
        sys.stderr.write(f"lrcontour: resource limit: {exc}\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())

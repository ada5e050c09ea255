"""Command-line entry point: ``python -m qsteenrod <command> [options]``.

Exit codes: 0 when every check passes, 1 on a usage error, 2 when a
verification fails.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence

from . import golden as golden_mod
from .connection import (
    char0_recursion,
    covariant_constancy_defect,
    geometric_connection,
    normalize_traceless,
    rank2_decompose,
    stable_connection,
    steenrod_matrix,
    steenrod_pairings,
    to_stable_basis,
)
from .errors import QSteenrodError
from .exact_arith import PrimeModulus, is_prime
from .flat_sections import (
    annihilation_check,
    arithmetic_flat_section,
    reduced_dde_check,
    sigma_d_specialized,
    stable_qde_holds,
)
from .harness import (
    FAIL,
    INCONCLUSIVE,
    PASS,
    REGISTRY,
    CheckReport,
    char0_matrix,
    random_q_p_series,
    run_all,
)
from .localization import (
    INSERTION_PAIRS,
    InsertionClass,
    h_expansion_closed_form,
    integral_quotient_ring,
    local_p1_closed_form,
    pairing_weight,
    structure_constant_noneq,
    structure_constant_s1,
)
from .poly_series import GEOMETRIC, GF, QQ, STABLE, Endo2, GradedSeries, format_series, homogeneity_check, substitute_h
from .reference import CHAR0_MATRICES, CHAR0_SEED_SIGN

EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    prime: int = 3
    q_max: Optional[int] = None  # None means 3p
    h_max: int = 4
    basis: str = GEOMETRIC
    b0: Optional[str] = None  # None means every insertion pair
    binf: Optional[str] = None
    mu: Optional[int] = None
    output: str = "table"
    seed: int = 0
    out: Optional[str] = None
    regen_golden: bool = False
    golden_dir: Optional[str] = None
    closed_form: str = "corrected"
    primes: Optional[List[int]] = None
    timings: bool = False
    t_min: Optional[int] = None
    h_min: int = -2

    def __post_init__(self):
        if self.prime == 2 or not is_prime(self.prime):
            raise UsageError(f"--prime must be an odd prime, got {self.prime}")
        for p in self.primes or ():
            if p == 2 or not is_prime(p):
                raise UsageError(f"--prime must be an odd prime, got {p}")
        if self.q_max is None:
            self.q_max = 3 * self.prime
        if self.t_min is None:
            self.t_min = -(self.prime + 4)
        if self.q_max < 0 or self.h_max < 0:
            raise UsageError("--q-max and --h-max must be non-negative")
        if self.basis not in (GEOMETRIC, STABLE):
            raise UsageError(f"unknown basis {self.basis!r}")
        if self.output not in ("json", "table"):
            raise UsageError(f"unknown format {self.output!r}")
        if self.mu is not None:
            self.mu %= self.prime

    @property
    def modulus(self) -> PrimeModulus:
        return PrimeModulus(self.prime)

    def pairs(self):
        sel = []
        for b0, binf in INSERTION_PAIRS:
            if self.b0 is not None and InsertionClass.parse(self.b0) != b0:
                continue
            if self.binf is not None and InsertionClass.parse(self.binf) != binf:
                continue
            sel.append((b0, binf))
        return sel

    def require_mu(self, command: str) -> int:
        if self.mu is None:
            raise UsageError(f"{command} needs --mu")
        return self.mu

    def public(self) -> dict:
        d = asdict(self)
        for k in ("out", "regen_golden", "golden_dir", "timings", "output"):
            d.pop(k)
        return d


@dataclass
class Outcome:
    command: str
    config: RunConfig
    reports: List[CheckReport] = field(default_factory=list)
    result: dict = field(default_factory=dict)
    table: List[str] = field(default_factory=list)

    @property
    def status(self) -> str:
        if any(r.status == FAIL for r in self.reports):
            return FAIL
        if any(r.status == INCONCLUSIVE for r in self.reports):
            return INCONCLUSIVE
        return PASS

    def to_json(self) -> str:
        payload = {
            "command": self.command,
            "config": self.config.public(),
            "status": self.status,
            "reports": [r.to_dict(self.config.timings) for r in self.reports],
            "result": self.result,
        }
        return json.dumps(payload, indent=1, sort_keys=True, default=str) + "\n"

    def to_table(self) -> str:
        lines = list(self.table)
        if lines:
            lines.append("")
        lines.extend(r.line() for r in self.reports)
        lines.append(f"status: {self.status}")
        return "\n".join(lines) + "\n"


def _report(check_id: str, anchor: str, failures, t0: float, detail: str = "") -> CheckReport:
    return CheckReport(check_id, anchor, PASS if not failures else FAIL, failures or None,
                       time.perf_counter() - t0, detail)


def _pair_label(pair) -> str:
    return f"({pair[0]},{pair[1]})"


def _matrix_lines(title: str, m: Endo2) -> List[str]:
    lines = [f"{title} [{m.basis}]"]
    for i in range(2):
        for j in range(2):
            lines.append(f"  [{i}{j}] {format_series(m[i, j])}")
    return lines


# --------------------------------------------------------------------------
# commands


def cmd_local_p1(cfg: RunConfig) -> Outcome:
    p, out = cfg.prime, Outcome("local-p1", cfg)
    t0 = time.perf_counter()
    failures, result = [], {}
    R = GF(p)
    for pair in cfg.pairs():
        engine = GradedSeries.zero(R)
        closed = GradedSeries.zero(R)
        for d in range(1, cfg.q_max + 1):
            engine = engine + structure_constant_noneq(p, d, *pair).shift(q=d)
            closed = closed + local_p1_closed_form(p, d, *pair).shift(q=d)
        if engine != closed:
            failures.append(_pair_label(pair))
        result[_pair_label(pair)] = engine.to_records()
        out.table.append(f"{_pair_label(pair):<8} {format_series(engine)}")
    out.reports.append(_report("local_p1_closed_form", REGISTRY["local_p1_closed_form"].anchor, failures, t0,
                               f"p={p}, q^1..q^{cfg.q_max}"))
    out.result = {"pairings": result}
    return out


def cmd_tstar_p1(cfg: RunConfig) -> Outcome:
    p, out = cfg.prime, Outcome("tstar-p1", cfg)
    pairs = cfg.pairs()
    values = steenrod_pairings(p, cfg.q_max, cfg.h_max)
    out.result = {"pairings": {_pair_label(k): values[k].to_records() for k in pairs}}
    for k in pairs:
        out.table.append(f"{_pair_label(k):<8} {format_series(values[k])}")

    t0 = time.perf_counter()
    bad = []
    for d in range(1, cfg.q_max + 1):
        for pair in pairs:
            if cfg.h_max >= 1 and structure_constant_s1(p, d, *pair, cfg.h_max) != integral_quotient_ring(
                    p, d, *pair, cfg.h_max):
                bad.append([d, _pair_label(pair)])
    out.reports.append(_report("dual_path", REGISTRY["dual_path"].anchor, bad, t0))

    t0 = time.perf_counter()
    bad = []
    for pair in pairs:
        for d in range(1, cfg.q_max + 1):
            if not homogeneity_check(values[pair].select("q", d), pairing_weight(p, *pair)):
                bad.append([d, _pair_label(pair)])
    out.reports.append(_report("grading", "pairing values are homogeneous of the expected (t, h)-weight", bad, t0))

    t0 = time.perf_counter()
    printed = cfg.closed_form == "printed"
    check_id = "low_order_closed_forms" if printed else "low_order_closed_forms_corrected"
    bad = []
    for d in range(1, cfg.q_max + 1):
        for pair in pairs:
            for order in range(1, min(2, cfg.h_max) + 1):
                engine = values[pair].select("q", d).h_coefficient(order)
                if engine != h_expansion_closed_form(p, d, *pair, order, printed):
                    bad.append([d, _pair_label(pair), order])
    out.reports.append(_report(check_id, REGISTRY[check_id].anchor, bad, t0, f"{cfg.closed_form} forms"))

    if cfg.mu is not None and cfg.q_max >= 2 * p:
        t0 = time.perf_counter()
        exact = steenrod_pairings(p, cfg.q_max, None)
        bad = []
        for pair in pairs:
            spec = substitute_h(exact[pair], cfg.mu)
            for d in range(1, cfg.q_max - p + 1):
                if spec.select("q", d) != spec.select("q", d + p):
                    bad.append([d, _pair_label(pair)])
        out.reports.append(_report("periodicity", REGISTRY["periodicity"].anchor, bad, t0, f"mu={cfg.mu}"))
    return out


def cmd_char0(cfg: RunConfig) -> Outcome:
    out = Outcome("char0", cfg)
    t0 = time.perf_counter()
    z = GradedSeries.zero(QQ)
    cup = Endo2([[z, z], [GradedSeries.one(QQ), z]])
    sol = char0_recursion(cup * CHAR0_SEED_SIGN, cfg.q_max)
    bad = []
    matrices = {}
    for k in range(1, cfg.q_max + 1):
        mk = sol.map(lambda s, k=k: s.select("q", k))
        matrices[str(k)] = mk.to_dict()
        out.table.extend(_matrix_lines(f"q^{k}", mk))
        if k in CHAR0_MATRICES and mk != char0_matrix(k):
            bad.append(k)
    out.result = {"seed_sign": CHAR0_SEED_SIGN, "matrices": matrices}
    out.reports.append(_report("char0_recursion", REGISTRY["char0_recursion"].anchor, bad, t0,
                               f"reference orders {sorted(CHAR0_MATRICES)}"))
    return out


def cmd_flat_section(cfg: RunConfig) -> Outcome:
    p, out = cfg.prime, Outcome("flat-section", cfg)
    m = cfg.require_mu("flat-section")
    t0 = time.perf_counter()
    sec = arithmetic_flat_section(p, m)
    bad = []
    if not stable_qde_holds(p, m, sec.polys()):
        bad.append("stable equation")
    if not reduced_dde_check(p, m):
        bad.append("pre-gauge equation")
    out.result = {"section": sec.to_dict()}
    for name, e in zip(("I_0", "I_1"), sec.entries):
        out.table.append(f"{name}: " + " + ".join(f"{c}·q^{d}" for d, c in enumerate(e) if c))
    out.reports.append(_report("flat_section", REGISTRY["flat_section"].anchor, bad, t0, f"p={p}, m={m}"))
    return out


def cmd_annihilation(cfg: RunConfig) -> Outcome:
    p, out = cfg.prime, Outcome("annihilation", cfg)
    m = cfg.require_mu("annihilation")
    t0 = time.perf_counter()
    ok, defect = annihilation_check(p, m)
    mats = {str(d): [list(r) for r in sigma_d_specialized(p, m, d).matrix] for d in range(p + 1)}
    out.result = {"sigma_t_p_coefficients": mats, "defect": [list(x) for x in defect]}
    for d, mat in mats.items():
        out.table.append(f"Sigma_{d} / t^{p} = {mat}")
    out.reports.append(_report("annihilation", REGISTRY["annihilation"].anchor, [] if ok else [defect], t0,
                               f"p={p}, m={m}"))
    return out


def _engine(cfg: RunConfig):
    R = GF(cfg.prime)
    M = steenrod_matrix(cfg.prime, cfg.q_max, cfg.h_max)
    if cfg.basis == STABLE:
        return to_stable_basis(M), stable_connection(R, cfg.q_max)
    return M, geometric_connection(R, cfg.q_max)


def cmd_flatness(cfg: RunConfig) -> Outcome:
    out = Outcome("flatness", cfg)
    t0 = time.perf_counter()
    M, conn = _engine(cfg)
    D = covariant_constancy_defect(M, conn)
    out.result = {"defect": D.to_dict()}
    out.table.extend(_matrix_lines("defect", D))
    out.reports.append(_report("flatness", REGISTRY["flatness"].anchor, [] if D.is_zero() else [D.to_dict()], t0,
                               f"p={cfg.prime}, q^{cfg.q_max}, h^{cfg.h_max}"))
    return out


def cmd_decompose(cfg: RunConfig) -> Outcome:
    p, out = cfg.prime, Outcome("decompose", cfg)
    R = GF(p)
    t0 = time.perf_counter()
    M = steenrod_matrix(p, cfg.q_max, cfg.h_max)
    f1, f2 = rank2_decompose(normalize_traceless(M), M, p)
    out.result = {"normalized": {"f1": f1.to_records(), "f2": f2.to_records()}}
    out.table.append(f"normalized operation = ({format_series(f1)}) id + ({format_series(f2)}) QSigma")
    bad = []
    rng = random.Random(cfg.seed)
    g1 = random_q_p_series(rng, p, cfg.q_max, R)
    g2 = random_q_p_series(rng, p, cfg.q_max, R)
    h1, h2 = rank2_decompose(Endo2.scalar(R, g1) + M * g2, M, p)
    if h1 != g1 or h2 != g2:
        bad.append("round trip")
    out.result["round_trip"] = {"f1": g1.to_records(), "f2": g2.to_records()}
    out.reports.append(_report("rank_two", REGISTRY["rank_two"].anchor, bad, t0, f"seed {cfg.seed}"))
    return out


def cmd_verify_all(cfg: RunConfig) -> Outcome:
    out = Outcome("verify-all", cfg)
    root = Path(cfg.golden_dir) if cfg.golden_dir else golden_mod.DEFAULT_ROOT
    if cfg.regen_golden:
        for key in golden_mod.DEFAULT_KEYS:
            out.table.append(f"wrote {golden_mod.write_golden(root, *key)}")
    out.reports = run_all(cfg.primes, cfg.seed, golden_root=root)
    return out


COMMANDS = {
    "local-p1": cmd_local_p1,
    "tstar-p1": cmd_tstar_p1,
    "verify-all": cmd_verify_all,
    "char0": cmd_char0,
    "flat-section": cmd_flat_section,
    "annihilation": cmd_annihilation,
    "flatness": cmd_flatness,
    "decompose": cmd_decompose,
}


# --------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--prime", type=int, action="append", help="odd prime (repeat for verify-all sweeps)")
    common.add_argument("--q-max", type=int, help="q truncation (default 3p)")
    common.add_argument("--h-max", type=int, default=4)
    common.add_argument("--basis", choices=(GEOMETRIC, STABLE), default=GEOMETRIC)
    common.add_argument("--b0", choices=("1", "b"))
    common.add_argument("--binf", choices=("1", "b"))
    common.add_argument("--mu", type=int, help="integer lift of h/t")
    common.add_argument("--format", dest="output", choices=("json", "table"), default="table")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--regen-golden", action="store_true", help="rewrite golden fixtures before checking")
    common.add_argument("--golden-dir", help="golden fixture root")
    common.add_argument("--closed-form", choices=("printed", "corrected"), default="corrected")
    common.add_argument("--timings", action="store_true", help="include wall times in JSON")

    parser = _Parser(prog="qsteenrod", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    helps = {
        "local-p1": "non-equivariant structure constants of local P^1",
        "tstar-p1": "S^1-equivariant structure constants of T*P^1",
        "verify-all": "run every registered check",
        "char0": "characteristic-0 flat extension",
        "flat-section": "arithmetic flat section at h = mu t",
        "annihilation": "annihilation of the flat section",
        "flatness": "covariant-constancy defect of the operation",
        "decompose": "rank-2 decomposition over F_p[[q^p]]",
    }
    for name, text in helps.items():
        sub.add_parser(name, parents=[common], help=text)
    return parser


def config_from_args(args) -> RunConfig:
    primes = args.prime or []
    if args.command != "verify-all" and len(primes) > 1:
        raise UsageError("--prime given more than once")
    return RunConfig(
        prime=primes[0] if primes else 3,
        q_max=args.q_max,
        h_max=args.h_max,
        basis=args.basis,
        b0=args.b0,
        binf=args.binf,
        mu=args.mu,
        output=args.output,
        seed=args.seed,
        out=args.out,
        regen_golden=args.regen_golden,
        golden_dir=args.golden_dir,
        closed_form=args.closed_form,
        primes=primes or None,
        timings=args.timings,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        outcome = COMMANDS[args.command](cfg)
    except UsageError as exc:
        print(f"qsteenrod: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except QSteenrodError as exc:
        print(f"qsteenrod: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    text = outcome.to_json() if cfg.output == "json" else outcome.to_table()
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if outcome.status == PASS else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())

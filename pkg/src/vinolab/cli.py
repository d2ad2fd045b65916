"""Command-line driver: ``vinolab <command> [options]``.

Commands: compare, count, sseries, denumerant, expsum, vaughan, landau.
Tables go to CSV (default when --output is given) or JSON; with neither
--output nor --format a single-value result is printed bare.

Exit codes: 0 ok, 1 usage or constraint error, 2 --assert failed, 3 I/O.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from collections.abc import Sequence
from dataclasses import asdict, dataclass, field, fields
from fractions import Fraction
from functools import reduce

from . import __version__
from .arith import WeightKind, build_factor_sieve, count_omega_equals
from .asymptotics import (
    compare_almost_prime,
    compare_weighted,
    denumerant_main_term,
    landau_main_term,
)
from .circle import ArcConfig, ArcKind, ArcPartition, exp_sum, major_arc_main_term, vaughan_decompose
from .counting import ProblemInstance, batch_counts, count_prime_tuples, denumerant_exact
from .errors import VlabError
from .singular_series import (
    DEFAULT_PRIME_CUTOFF,
    DEFAULT_Q_CUTOFF,
    singular_series_partial,
    singular_series_product,
    vanishing_criterion,
)

COMMANDS = ("compare", "count", "sseries", "denumerant", "expsum", "vaughan", "landau")
FORMATS = ("csv", "json")
# Q = log^B N with B = 2A + 12 at A = 1
DEFAULT_B = 14.0
COMPARE_HEADER = ("N", "exact", "main_term", "ratio", "sseries", "flags")

EXIT_OK, EXIT_USAGE, EXIT_ASSERT, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    def __init__(self, problems: list[str]):
        super().__init__("; ".join(problems))
        self.problems = problems


@dataclass(frozen=True)
class ExperimentConfig:
    command: str
    c: tuple[int, ...] = ()
    r: tuple[int, ...] = ()
    n: int | None = None
    n_min: int | None = None
    n_max: int | None = None
    weight: str = "prime"
    B: float = DEFAULT_B
    prime_cutoff: int = DEFAULT_PRIME_CUTOFF
    q_cutoff: int = DEFAULT_Q_CUTOFF
    alpha: str | None = None
    coef: int = 1
    U: float | None = None
    V: float | None = None
    k: tuple[int, ...] = (1, 2, 3)
    tuples: bool = False
    include_degenerate: bool = False
    output: str | None = None
    format: str | None = None
    assert_range: tuple[float, float] | None = None
    sieve_limit: int = 2
    timing: bool = False

    def to_dict(self) -> dict:
        d = asdict(self)
        for key in ("c", "r", "k", "assert_range"):
            if d[key] is not None:
                d[key] = list(d[key])
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        kw = {key: v for key, v in d.items() if key in known}
        for key in ("c", "r", "k", "assert_range"):
            if kw.get(key) is not None:
                kw[key] = tuple(kw[key])
        return cls(**kw)

    @property
    def targets(self) -> list[int]:
        if self.n is not None:
            return [self.n]
        return list(range(self.n_min, self.n_max + 1))


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError([message])


def _build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="vinolab", allow_abbrev=False, description="Representation counts, singular series and circle-method sums.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--c", help="coefficients, comma separated (b for denumerant)")
    p.add_argument("--r", help="Omega targets, comma separated (default all 1)")
    p.add_argument("--n", help="single N (x for expsum, vaughan, landau)")
    p.add_argument("--n-min", help="range start")
    p.add_argument("--n-max", help="range end")
    p.add_argument("--weight", help="prime, omega, lambda or theta")
    p.add_argument("--B", default=str(DEFAULT_B), help="arc exponent, Q = log^B N")
    p.add_argument("--prime-cutoff", default=str(DEFAULT_PRIME_CUTOFF), help="Euler product cutoff P")
    p.add_argument("--q-cutoff", default=str(DEFAULT_Q_CUTOFF), help="q-sum cutoff")
    p.add_argument("--alpha", help="frequency, decimal or a/q")
    p.add_argument("--coef", default="1", help="coefficient b in S(x/b, b alpha)")
    p.add_argument("--U", help="Vaughan parameter U")
    p.add_argument("--V", help="Vaughan parameter V")
    p.add_argument("--k", default="1,2,3", help="Omega values for landau")
    p.add_argument("--tuples", action="store_true", help="count prime tuples instead of almost primes")
    p.add_argument("--include-degenerate", action="store_true", help="keep N where the singular series vanishes")
    p.add_argument("--output", help="output file (default stdout)")
    p.add_argument("--format", choices=FORMATS)
    p.add_argument("--assert", dest="assert_range", metavar="LO:HI", help="fail with exit 2 unless the checked value lies in [LO, HI]")
    p.add_argument("--sieve-limit", help="override the derived sieve limit")
    p.add_argument("--timing", action="store_true", help="record runtime_ms in JSON meta")
    return p


def _int_list(raw: str, name: str, problems: list[str]) -> tuple[int, ...]:
    try:
        vals = tuple(int(x) for x in raw.split(","))
    except ValueError:
        problems.append(f"--{name}: malformed integer list {raw!r}")
        return ()
    if any(v < 1 for v in vals):
        problems.append(f"--{name}: entries must be positive")
    return vals


def _int(raw: str | None, name: str, problems: list[str]) -> int | None:
    if raw is None:
        return None
    try:
        v = float(raw) if any(ch in raw for ch in ".eE") else int(raw)
    except ValueError:
        problems.append(f"--{name}: not an integer: {raw!r}")
        return None
    if isinstance(v, float):
        if not v.is_integer():
            problems.append(f"--{name}: not an integer: {raw!r}")
            return None
        v = int(v)
    return v


def _float(raw: str | None, name: str, problems: list[str]) -> float | None:
    if raw is None:
        return None
    try:
        return float(raw)
    except ValueError:
        problems.append(f"--{name}: not a number: {raw!r}")
        return None


def parse_alpha(raw: str) -> float | Fraction:
    """Decimal strings give floats, 'a/q' gives an exact Fraction."""
    if "/" in raw:
        return Fraction(raw)
    return float(raw)


def _required_sieve(cmd: str, n_top: int | None, x: float | None) -> int:
    if cmd in ("compare", "count") and n_top is not None:
        return max(n_top, 2)
    if cmd in ("expsum", "vaughan", "landau") and x is not None:
        return max(int(math.floor(x)), 2)
    return 2


def parse_args(argv: Sequence[str]) -> ExperimentConfig:
    """Validate argv fully; raise UsageError listing every problem found."""
    ns = _build_parser().parse_args(list(argv))
    cmd = ns.command
    problems: list[str] = []

    c = _int_list(ns.c, "c", problems) if ns.c else ()
    r = _int_list(ns.r, "r", problems) if ns.r else ()
    k = _int_list(ns.k, "k", problems)
    n = _int(ns.n, "n", problems)
    n_min = _int(ns.n_min, "n-min", problems)
    n_max = _int(ns.n_max, "n-max", problems)
    B = _float(ns.B, "B", problems)
    P = _int(ns.prime_cutoff, "prime-cutoff", problems)
    Q = _int(ns.q_cutoff, "q-cutoff", problems)
    coef = _int(ns.coef, "coef", problems)
    U = _float(ns.U, "U", problems)
    V = _float(ns.V, "V", problems)
    sieve_override = _int(ns.sieve_limit, "sieve-limit", problems)

    if B is not None and B <= 0:
        problems.append("--B must be positive")
    if P is not None and P < 2:
        problems.append("--prime-cutoff must be >= 2")
    if Q is not None and Q < 1:
        problems.append("--q-cutoff must be >= 1")
    if coef is not None and coef < 1:
        problems.append("--coef must be positive")

    # coefficients
    if cmd in ("compare", "count", "sseries", "denumerant"):
        min_m = 3 if cmd in ("compare", "sseries") else 2
        if not ns.c:
            problems.append(f"{cmd} needs --c")
        elif c and len(c) < min_m:
            problems.append(f"{cmd} needs at least {min_m} coefficients")
        if c and cmd in ("compare", "sseries") and reduce(math.gcd, c) != 1:
            problems.append(f"gcd(c) = {reduce(math.gcd, c)} != 1")
    if c and not r:
        r = (1,) * len(c)
    if c and r and len(r) != len(c):
        problems.append(f"--r has {len(r)} entries but --c has {len(c)}")

    # weight
    all_ones = all(x == 1 for x in r)
    if ns.weight is None:
        weight = {"expsum": "lambda"}.get(cmd, "prime" if all_ones else "omega")
    else:
        weight = ns.weight
    try:
        WeightKind(weight)
    except ValueError:
        problems.append(f"--weight: unknown weight {weight!r}")
    else:
        if cmd in ("compare", "count") and not all_ones and weight != "omega":
            problems.append("Omega targets other than 1 need --weight omega")
        if cmd == "count" and ns.tuples and weight not in ("prime", "omega"):
            problems.append("--tuples counts are unweighted")
        if cmd == "expsum" and weight == "omega":
            problems.append("expsum supports prime, lambda and theta weights")

    # N or range
    if cmd in ("expsum", "vaughan", "landau"):
        if n is None:
            problems.append(f"{cmd} needs --n")
    elif cmd == "compare":
        if n_max is None:
            problems.append("compare needs --n-max")
        n_min = 21 if n_min is None else n_min
        if n_min <= 20:
            problems.append("compare needs --n-min > 20")
        if n_max is not None and n_max < n_min:
            problems.append("--n-max must be >= --n-min")
        n = None
    else:
        if n is None and n_max is None:
            problems.append(f"{cmd} needs --n or --n-max")
        if n is not None and n_max is not None:
            problems.append("give either --n or a range, not both")
        if n is None and n_max is not None:
            n_min = 1 if n_min is None else n_min
            if n_max < n_min:
                problems.append("--n-max must be >= --n-min")
    for name, v in (("n", n), ("n-min", n_min), ("n-max", n_max)):
        if v is not None and v < 1:
            problems.append(f"--{name} must be positive")
    if cmd in ("expsum", "vaughan") and n is not None and n < 3:
        problems.append(f"{cmd} needs --n >= 3")
    if cmd == "landau" and n is not None and n < 3:
        problems.append("landau needs --n >= 3")

    alpha = ns.alpha
    if cmd in ("expsum", "vaughan"):
        if alpha is None:
            problems.append(f"{cmd} needs --alpha")
        else:
            try:
                parse_alpha(alpha)
            except (ValueError, ZeroDivisionError):
                problems.append(f"--alpha: cannot parse {alpha!r}")
    if cmd == "vaughan":
        for name, v in (("U", U), ("V", V)):
            if v is not None and v < 2:
                problems.append(f"--{name} must be >= 2")

    assert_range = None
    if ns.assert_range is not None:
        try:
            lo, hi = (float(x) for x in ns.assert_range.split(":"))
            if lo > hi:
                problems.append("--assert needs LO <= HI")
            assert_range = (lo, hi)
        except ValueError:
            problems.append(f"--assert: expected LO:HI, got {ns.assert_range!r}")

    top = n if n is not None else n_max
    need = _required_sieve(cmd, top, top)
    sieve_limit = need
    if sieve_override is not None:
        if sieve_override < need:
            problems.append(f"--sieve-limit {sieve_override} is below the required {need}")
        sieve_limit = max(sieve_override, 2)

    if problems:
        raise UsageError(problems)
    return ExperimentConfig(
        command=cmd,
        c=c,
        r=r,
        n=n,
        n_min=n_min if n is None else None,
        n_max=n_max if n is None else None,
        weight=weight,
        B=B,
        prime_cutoff=P,
        q_cutoff=Q,
        alpha=alpha,
        coef=coef,
        U=U,
        V=V,
        k=k,
        tuples=ns.tuples,
        include_degenerate=ns.include_degenerate,
        output=ns.output,
        format=ns.format,
        assert_range=assert_range,
        sieve_limit=sieve_limit,
        timing=ns.timing,
    )


# -- table builders ---------------------------------------------------------
# each returns (columns, rows, checked values for --assert)


@dataclass
class Table:
    columns: tuple[str, ...]
    rows: list[dict]
    checked: list[float] = field(default_factory=list)


def _sieve(cfg: ExperimentConfig):
    return build_factor_sieve(cfg.sieve_limit)


def _compare(cfg: ExperimentConfig) -> Table:
    sieve = _sieve(cfg)
    Ns = range(cfg.n_min, cfg.n_max + 1)
    if cfg.weight in ("lambda", "theta"):
        rows = compare_weighted(sieve, cfg.c, Ns, cfg.weight, cfg.prime_cutoff)
    else:
        rows = compare_almost_prime(sieve, cfg.c, cfg.r, Ns, cfg.prime_cutoff)
    out = []
    for row in rows:
        if row.degenerate and not cfg.include_degenerate:
            continue
        out.append(
            {"N": row.N, "exact": row.exact, "main_term": row.main_term, "ratio": row.ratio, "sseries": row.sseries, "flags": row.flags}
        )
    return Table(COMPARE_HEADER, out, [r["ratio"] for r in out if r["ratio"] is not None])


def _count(cfg: ExperimentConfig) -> Table:
    sieve = _sieve(cfg)
    Ns = cfg.targets
    w = WeightKind(cfg.weight)
    if cfg.tuples:
        vals = [count_prime_tuples(sieve, ProblemInstance(cfg.c, cfg.r, N)).exact_count for N in Ns]
    else:
        batch = batch_counts(sieve, cfg.c, cfg.r if w is WeightKind.OMEGA else None, Ns[-1], w).values
        vals = [int(batch[N]) if w.is_integral else float(batch[N]) for N in Ns]
    rows = [{"N": N, "value": v} for N, v in zip(Ns, vals)]
    return Table(("N", "value"), rows, [float(v) for v in vals])


def _sseries(cfg: ExperimentConfig) -> Table:
    rows = []
    for N in cfg.targets:
        prod = singular_series_product(N, cfg.c, cfg.prime_cutoff)
        part = singular_series_partial(N, cfg.c, cfg.q_cutoff)
        rep = vanishing_criterion(N, cfg.c)
        rows.append(
            {
                "N": N,
                "value": prod.value,
                "tail_bound": prod.tail_bound,
                "q_sum": part.value,
                "q_tail_bound": part.tail_bound,
                "vanishes": rep.vanishes,
                "reason": rep.reason or "",
            }
        )
    cols = ("N", "value", "tail_bound", "q_sum", "q_tail_bound", "vanishes", "reason")
    return Table(cols, rows, [r["value"] for r in rows])


def _denumerant(cfg: ExperimentConfig) -> Table:
    rows = []
    for N in cfg.targets:
        J = denumerant_exact(N, cfg.c)
        main = denumerant_main_term(N, cfg.c)
        rows.append({"N": N, "exact": J, "main_term": main, "ratio": J / main})
    return Table(("N", "exact", "main_term", "ratio"), rows, [r["ratio"] for r in rows])


def _expsum(cfg: ExperimentConfig) -> Table:
    sieve = _sieve(cfg)
    alpha = parse_alpha(cfg.alpha)
    S = exp_sum(sieve, cfg.n, alpha, cfg.weight, b=cfg.coef)
    row = {"x": cfg.n, "alpha": float(alpha), "re": S.real, "im": S.imag, "abs": abs(S)}
    arc_cfg = ArcConfig(cfg.n, cfg.B)
    row.update({"arc": "degenerate", "a": None, "q": None, "main_re": None, "main_im": None, "rel_error": None})
    if arc_cfg.nondegenerate:
        label = ArcPartition(arc_cfg).classify(float(alpha))
        row["arc"] = label.kind.value
        if label.kind is ArcKind.MAJOR:
            M = major_arc_main_term(cfg.n, label.a, label.q, label.y, cfg.coef)
            row.update({"a": label.a, "q": label.q, "main_re": M.real, "main_im": M.imag, "rel_error": abs(S - M) / cfg.n})
    checked = row["rel_error"] if row["rel_error"] is not None else abs(S) / cfg.n
    return Table(tuple(row), [row], [checked])


def _vaughan(cfg: ExperimentConfig) -> Table:
    sieve = _sieve(cfg)
    alpha = float(parse_alpha(cfg.alpha))
    pieces = vaughan_decompose(sieve, cfg.n, alpha, cfg.U, cfg.V, cfg.coef)
    direct = exp_sum(sieve, cfg.n, alpha, WeightKind.LAMBDA, b=cfg.coef)
    named = [
        ("S", direct),
        ("S_I1", pieces.s_i1),
        ("S_I2", pieces.s_i2),
        ("S_II", pieces.s_ii),
        ("S_0", pieces.s_0),
        ("reconstruction", pieces.reconstruction),
    ]
    rows = [{"piece": name, "re": z.real, "im": z.imag, "abs": abs(z), "U": pieces.U, "V": pieces.V} for name, z in named]
    err = abs(pieces.reconstruction - direct) / cfg.n
    return Table(("piece", "re", "im", "abs", "U", "V"), rows, [err])


def _landau(cfg: ExperimentConfig) -> Table:
    sieve = _sieve(cfg)
    rows = []
    for k in cfg.k:
        cnt = count_omega_equals(sieve, cfg.n, k)
        main = landau_main_term(cfg.n, k)
        rows.append({"x": cfg.n, "k": k, "count": cnt, "main_term": main, "ratio": cnt / main})
    return Table(("x", "k", "count", "main_term", "ratio"), rows, [r["ratio"] for r in rows])


_BUILDERS = {
    "compare": _compare,
    "count": _count,
    "sseries": _sseries,
    "denumerant": _denumerant,
    "expsum": _expsum,
    "vaughan": _vaughan,
    "landau": _landau,
}


def build_table(cfg: ExperimentConfig) -> Table:
    return _BUILDERS[cfg.command](cfg)


# -- rendering ---------------------------------------------------------------


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".10g")
    return str(v)


def render_csv(table: Table) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(table.columns)
    for row in table.rows:
        w.writerow([_csv_cell(row[col]) for col in table.columns])
    return buf.getvalue()


def _json_value(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


def render_json(cfg: ExperimentConfig, table: Table, runtime_ms: float | None) -> str:
    doc = {
        "config": cfg.to_dict(),
        "rows": [{col: _json_value(row[col]) for col in table.columns} for row in table.rows],
        "meta": {"version": __version__, "sieve_limit": cfg.sieve_limit, "runtime_ms": runtime_ms},
    }
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def render_text(cfg: ExperimentConfig, table: Table) -> str:
    if len(table.rows) == 1 and cfg.command in ("count", "sseries"):
        row = table.rows[0]
        lines = [_csv_cell(row["value"])]
        if cfg.command == "sseries" and row["vanishes"]:
            lines.append(f"vanishing: {row['reason']}")
        return "\n".join(lines) + "\n"
    return render_csv(table)


def run(cfg: ExperimentConfig) -> int:
    t0 = time.perf_counter()
    try:
        table = build_table(cfg)
    except VlabError as exc:
        print(f"vinolab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    runtime_ms = (time.perf_counter() - t0) * 1000 if cfg.timing else None

    fmt = cfg.format or ("csv" if cfg.output else "text")
    if fmt == "json":
        text = render_json(cfg, table, runtime_ms)
    elif fmt == "csv":
        text = render_csv(table)
    else:
        text = render_text(cfg, table)
    try:
        if cfg.output:
            with open(cfg.output, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
            sys.stdout.flush()
    except OSError as exc:
        print(f"vinolab: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO

    if cfg.assert_range is not None:
        lo, hi = cfg.assert_range
        bad = [v for v in table.checked if not lo <= v <= hi]
        if bad or not table.checked:
            print(f"vinolab: assertion failed: {len(bad)} value(s) outside [{lo}, {hi}]", file=sys.stderr)
            return EXIT_ASSERT
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    try:
        cfg = parse_args(sys.argv[1:] if argv is None else argv)
    except UsageError as exc:
        for msg in exc.problems:
            print(f"vinolab: error: {msg}", file=sys.stderr)
        return EXIT_USAGE
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())

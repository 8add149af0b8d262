"""Multi-run experiments, per-instance statistics and the two-tailed sign test."""
from __future__ import annotations

import csv
import io
import logging
import math
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from statistics import NormalDist
from typing import Callable, Iterable, Mapping, Optional, Sequence, Union

from .instances import read_instance
from .model import TOL, ConfigurationError, Instance, MinDiffError
from .search import SearchParams, default_params_for, ils_mindiff

log = logging.getLogger(__name__)

STATS_HEADER = ["instance", "n", "m", "runs", "f_best", "f_avg", "f_worst", "sigma", "t_avg_s"]
COMPARE_HEADER = STATS_HEADER + ["baseline_f_best", "delta_f_best", "win"]
SWEEP_HEADER = ["param", "value", "f_best", "f_avg"]
SWEEPABLE = ("nbr_max", "p_w", "alpha")
INDICATORS = ("f_best", "f_avg", "f_worst", "t_avg")


@dataclass
class InstanceStats:
    instance: str
    n: int
    m: int
    runs: int
    f_best: float = math.nan
    f_avg: float = math.nan
    f_worst: float = math.nan
    sigma: float = math.nan
    t_avg: float = math.nan
    objectives: list = field(default_factory=list)
    error: Optional[str] = None

    @property
    def failed(self) -> bool:
        return self.error is not None


def aggregate(name: str, n: int, m: int, objectives: Sequence[float],
              times: Sequence[float]) -> InstanceStats:
    # statistics.mean/pstdev sum exactly: identical runs give sigma == 0 and f_avg == f_best
    return InstanceStats(
        instance=name, n=n, m=m, runs=len(objectives),
        f_best=min(objectives), f_avg=statistics.mean(objectives),
        f_worst=max(objectives), sigma=statistics.pstdev(objectives),
        t_avg=statistics.fmean(times), objectives=list(objectives),
    )


def _one_run(instance: Instance, params: SearchParams):
    res = ils_mindiff(instance, params)
    return res.best_objective, res.elapsed_to_best


ParamsSource = Callable[[Instance], SearchParams]


def run_experiment(instances: Iterable[Union[Instance, str, Path]], runs: int = 40,
                   seed_base: int = 0, params_source: Optional[ParamsSource] = None,
                   overrides: Optional[Mapping] = None, jobs: int = 1,
                   m_override: Optional[int] = None) -> list:
    """Run ILS ``runs`` times per instance with seeds ``seed_base + r``.

    Paths are read lazily; an unreadable file yields a failed row.  With
    ``jobs > 1`` the (instance, seed) pairs are spread over worker processes.
    """
    if runs < 1:
        raise ConfigurationError("runs must be >= 1")
    params_source = params_source or default_params_for
    overrides = dict(overrides or {})

    loaded = []
    for item in instances:
        if isinstance(item, Instance):
            loaded.append((item.name or f"instance{len(loaded)}", item, None))
            continue
        try:
            loaded.append((Path(item).stem, read_instance(item, m_override), None))
        except (OSError, MinDiffError) as exc:
            log.warning("skipping %s: %s", item, exc)
            loaded.append((Path(item).stem, None, str(exc)))

    tasks = []
    for name, inst, _ in loaded:
        if inst is None:
            continue
        base = replace(params_source(inst), **overrides)
        for r in range(runs):
            tasks.append((inst, replace(base, seed=seed_base + r)))

    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_one_run, *zip(*tasks)))
    else:
        results = [_one_run(inst, p) for inst, p in tasks]

    out = []
    pos = 0
    for name, inst, err in loaded:
        if inst is None:
            out.append(InstanceStats(name, 0, 0, 0, error=err))
            continue
        chunk = results[pos:pos + runs]
        pos += runs
        out.append(aggregate(name, inst.n, inst.m, [c[0] for c in chunk], [c[1] for c in chunk]))
        log.info("%s: f_best=%.4f f_avg=%.4f", name, out[-1].f_best, out[-1].f_avg)
    return out


# --- sign test -------------------------------------------------------------

def _upper_tail(x: int, w: int) -> Fraction:
    """P(Binomial(x, 1/2) >= w), exactly."""
    return Fraction(sum(math.comb(x, k) for k in range(max(w, 0), x + 1)), 2**x)


def critical_value(x: int, level: float = 0.05, method: str = "normal") -> int:
    """Minimum number of wins (out of ``x``) for a significant two-tailed sign test.

    ``normal`` uses the usual large-sample rule ceil(x/2 + z*sqrt(x)/2), which
    gives the tabulated 15, 27 and 32 for x = 20, 40, 50.  ``exact`` is the
    smallest w with 2*P(Binomial(x, 1/2) >= w) <= level.
    """
    if method == "normal":
        z = NormalDist().inv_cdf(1 - level / 2)
        return math.ceil(x / 2 + z * math.sqrt(x) / 2)
    if method != "exact":
        raise ValueError(f"unknown method {method!r}")
    lvl = Fraction(level).limit_denominator(10**9)
    for w in range(x + 1):
        if 2 * _upper_tail(x, w) <= lvl:
            return w
    return x + 1


@dataclass(frozen=True)
class SignTestReport:
    wins_a: float
    wins_b: float
    x: int
    critical_value: int
    significant: bool
    p_value: float


def sign_test(column_a: Sequence[float], column_b: Sequence[float],
              level: float = 0.05, method: str = "normal") -> SignTestReport:
    """Paired sign test where the smaller value wins and ties count 0.5 each side."""
    if len(column_a) != len(column_b):
        raise ValueError(f"columns differ in length: {len(column_a)} vs {len(column_b)}")
    if not column_a:
        raise ValueError("sign test needs at least one pair")
    strict_a = sum(1 for a, b in zip(column_a, column_b) if a < b - TOL)
    strict_b = sum(1 for a, b in zip(column_a, column_b) if b < a - TOL)
    x = len(column_a)
    ties = x - strict_a - strict_b
    wins_a = strict_a + 0.5 * ties
    wins_b = strict_b + 0.5 * ties
    cv = critical_value(x, level, method)
    # exact test on the untied pairs only
    k = strict_a + strict_b
    if k == 0:
        p = 1.0
    else:
        p = float(min(Fraction(1), 2 * _upper_tail(k, max(strict_a, strict_b))))
    return SignTestReport(wins_a, wins_b, x, cv, max(wins_a, wins_b) >= cv, p)


# --- reports ---------------------------------------------------------------

def _fmt(x: float) -> str:
    return "" if x is None or (isinstance(x, float) and math.isnan(x)) else repr(float(x))


def stats_rows(stats: Sequence[InstanceStats]) -> list:
    return [
        [s.instance, s.n, s.m, s.runs, _fmt(s.f_best), _fmt(s.f_avg), _fmt(s.f_worst),
         _fmt(s.sigma), f"{s.t_avg:.4f}" if not math.isnan(s.t_avg) else ""]
        for s in stats
    ]


def _to_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def read_table(path: Union[str, Path]) -> dict:
    """CSV keyed by the ``instance`` column; numeric cells converted to float."""
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    table = {}
    for row in rows:
        rec = {}
        for key, val in row.items():
            if key == "instance":
                continue
            try:
                rec[key] = float(val)
            except (TypeError, ValueError):
                rec[key] = val
        table[row["instance"]] = rec
    return table


@dataclass
class Report:
    text: str
    csv: str
    comparison_csv: Optional[str] = None
    sign_tests: dict = field(default_factory=dict)
    unmatched: list = field(default_factory=list)


def emit_report(stats: Sequence[InstanceStats], baseline: Optional[Mapping] = None) -> Report:
    """Stats CSV plus, given a baseline table keyed by instance, a comparison.

    The baseline maps instance name to a dict holding at least ``f_best``;
    ``f_avg``, ``f_worst`` and ``t_avg`` (or ``t_avg_s``) are compared when present.
    """
    ok = [s for s in stats if not s.failed]
    stats_csv = _to_csv(STATS_HEADER, stats_rows(stats))
    lines = [f"{len(ok)} instances ({len(stats) - len(ok)} failed)"]
    for s in stats:
        if s.failed:
            lines.append(f"  FAILED {s.instance}: {s.error}")
    if ok:
        lines.append(
            "  average: f_best={:.4f} f_avg={:.4f} f_worst={:.4f} sigma={:.4f} t_avg={:.2f}s".format(
                *(statistics.fmean(getattr(s, k) for s in ok)
                  for k in ("f_best", "f_avg", "f_worst", "sigma", "t_avg"))
            )
        )
    if baseline is None:
        return Report("\n".join(lines) + "\n", stats_csv)

    matched = [s for s in ok if s.instance in baseline]
    unmatched = [s.instance for s in ok if s.instance not in baseline]
    unmatched += [name for name in baseline if name not in {s.instance for s in ok}]
    rows = []
    for s in matched:
        b = baseline[s.instance]["f_best"]
        delta = s.f_best - b
        win = "ours" if delta < -TOL else "baseline" if delta > TOL else "tie"
        rows.append(stats_rows([s])[0] + [_fmt(b), _fmt(round(delta, 10)), win])

    tests = {}
    lines.append(f"comparison against baseline on {len(matched)} matched instances")
    if unmatched:
        lines.append("  unmatched: " + ", ".join(unmatched))
    for ind in INDICATORS:
        keys = (ind, "t_avg_s") if ind == "t_avg" else (ind,)
        col_b = [next((baseline[s.instance][k] for k in keys if k in baseline[s.instance]), None)
                 for s in matched]
        if not matched or not all(isinstance(v, float) for v in col_b):
            continue
        col_a = [getattr(s, ind) for s in matched]
        rep = sign_test(col_a, col_b)
        tests[ind] = rep
        lines.append(
            f"  {ind:8s} average ours={statistics.fmean(col_a):.4f} "
            f"baseline={statistics.fmean(col_b):.4f} "
            f"diff={statistics.fmean(col_a) - statistics.fmean(col_b):+.4f} | "
            f"wins ours={rep.wins_a:g} baseline={rep.wins_b:g} "
            f"CV={rep.critical_value} significant={'yes' if rep.significant else 'no'} "
            f"p={rep.p_value:.4g}"
        )
    if matched:
        avg = [statistics.fmean(getattr(s, k) for s in matched) for k in ("f_best", "f_avg", "f_worst", "sigma", "t_avg")]
        avg_b = statistics.fmean(baseline[s.instance]["f_best"] for s in matched)
        rows.append(["Average value", "", "", ""] + [_fmt(round(v, 10)) for v in avg[:4]]
                    + [f"{avg[4]:.4f}", _fmt(round(avg_b, 10)), _fmt(round(avg[0] - avg_b, 10)), ""])
        if "f_best" in tests:
            t = tests["f_best"]
            rows.append(["Wins", "", "", "", f"{t.wins_a:g}", "", "", "", "", f"{t.wins_b:g}", "", ""])
    return Report("\n".join(lines) + "\n", stats_csv, _to_csv(COMPARE_HEADER, rows), tests, unmatched)


def parameter_sweep(instance: Instance, param_name: str, values: Sequence, runs: int = 20,
                    seed_base: int = 0, overrides: Optional[Mapping] = None,
                    jobs: int = 1) -> list:
    """One experiment per parameter value; rows ``(param, value, f_best, f_avg)``."""
    if param_name not in SWEEPABLE:
        raise ConfigurationError(f"cannot sweep {param_name!r}; choose from {', '.join(SWEEPABLE)}")
    rows = []
    for v in values:
        ov = dict(overrides or {})
        ov[param_name] = v
        (st,) = run_experiment([instance], runs=runs, seed_base=seed_base, overrides=ov, jobs=jobs)
        rows.append((param_name, v, st.f_best, st.f_avg))
    return rows


def sweep_csv(rows: Sequence) -> str:
    return _to_csv(SWEEP_HEADER, [[p, v, _fmt(b), _fmt(a)] for p, v, b, a in rows])

"""Desk-scale experiments: exhaustive mixed complete graphs, known periodic families, prime orders."""

from __future__ import annotations

import csv
import io
import itertools
import math
import random
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .cyclo import Angle, FloatAngle, RationalAngle
from .errors import InputError
from .graph import (BadParameters, MixedGraph, complete, complete_bipartite, complete_multipartite, cycle,
                    hamming, random_connected, random_regular, triangle_count)
from .periodicity import NOT_PERIODIC, PERIODIC, TAU_MAX, check_2nk, decide_periodicity

SCHEMA = 1
MAX_COMPLETE_N = 5
MAX_PRIME = 13
MAX_ARCS = 400


class NTooLarge(InputError):
    pass


class NotPrime(InputError):
    pass


@dataclass
class ExperimentReport:
    experiment: str
    params: dict
    rows: list[dict] = field(default_factory=list)
    expected: str = ""
    wall_time: float = 0.0
    counterexamples: list[dict] = field(default_factory=list)

    @property
    def counts(self) -> dict[str, int]:
        return dict(Counter(r["verdict"] for r in self.rows))

    @property
    def aggregate(self) -> str:
        counts = self.counts
        if len(counts) == 1:
            (verdict, num), = counts.items()
            return f"all {num} {verdict}"
        return ", ".join(f"{num} {v}" for v, num in sorted(counts.items()))

    @property
    def consistent(self) -> bool:
        return not self.counterexamples

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "experiment": self.experiment,
            "params": self.params,
            "expected": self.expected,
            "instances": len(self.rows),
            "counts": self.counts,
            "aggregate": self.aggregate,
            "consistent": self.consistent,
            "counterexamples": self.counterexamples,
            "wall_time": round(self.wall_time, 3),
            "rows": self.rows,
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["index", "verdict", "tau", "alpha_2n_2"])
        for r in self.rows:
            w.writerow([r["index"], r["verdict"], "" if r["tau"] is None else r["tau"],
                        "" if r.get("alpha_2n_2") is None else r["alpha_2n_2"]])
        return buf.getvalue()


def _row(index: int, g: MixedGraph, report, **extra) -> dict:
    row = {
        "index": index,
        "orientation": "".join(map(str, g.orientation_code())),
        "verdict": report.verdict,
        "tau": report.tau,
        "method": report.method,
        "conditions": report.conditions,
        "witness": report.witness,
        "alpha_2n_2": None if report.alpha_2n_2 is None else str(report.alpha_2n_2),
    }
    row.update(extra)
    return row


def _eta_to_json(eta: Angle) -> str:
    return str(eta) if isinstance(eta, RationalAngle) else f"{eta.radians!r} rad"


def _run_pool(fn, jobs: list, workers: int) -> list:
    if workers <= 1 or len(jobs) < 2:
        return [fn(job) for job in jobs]
    chunk = max(1, len(jobs) // (workers * 8))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, jobs, chunksize=chunk))


# --- mixed complete graphs ---------------------------------------------------

def _complete_job(job):
    n, index, code, eta, tau_max = job
    g = complete(n, code)
    return _row(index, g, decide_periodicity(g, eta, tau_max))


def enumerate_complete(n: int, eta: Angle, workers: int = 1, tau_max: int = TAU_MAX) -> ExperimentReport:
    """Decide every one of the 3^(n(n-1)/2) orientations of K_n.

    Instance ``index`` enumerates class digits over the lexicographic pairs, the
    first pair being the most significant base-3 digit (0 bidirected, 1 u->v, 2 v->u).
    """
    if n < 2:
        raise BadParameters(f"n must be >= 2, got {n}")
    if n > MAX_COMPLETE_N:
        raise NTooLarge(f"n = {n} exceeds {MAX_COMPLETE_N} (3^{n * (n - 1) // 2} instances)")
    pairs = n * (n - 1) // 2
    start = time.perf_counter()
    jobs = [(n, i, code, eta, tau_max) for i, code in enumerate(itertools.product(range(3), repeat=pairs))]
    rep = ExperimentReport("enumerate-complete", {"n": n, "eta": _eta_to_json(eta)})
    rep.rows = _run_pool(_complete_job, jobs, workers)
    if n >= 4:
        rep.expected = "no mixed complete graph with n >= 4 is periodic"
        bad = [r for r in rep.rows if r["verdict"] != NOT_PERIODIC]
    elif n == 2 or isinstance(eta, RationalAngle):
        rep.expected = "every mixed K_2 (any eta) and mixed K_3 (eta in Q pi) is periodic"
        bad = [r for r in rep.rows if r["verdict"] != PERIODIC]
    else:
        rep.expected = "no mixed K_3 is periodic when eta is not in Q pi"
        bad = [r for r in rep.rows if r["verdict"] == PERIODIC]
    rep.counterexamples = bad
    rep.wall_time = time.perf_counter() - start
    return rep


# --- known periodic families -------------------------------------------------

FAMILIES = ("cycle", "complete-bipartite", "multipartite", "hamming")


def family_graph(family: str, params: list[int]) -> MixedGraph:
    try:
        if family == "cycle":
            (n,) = params
            return cycle(n)
        if family == "complete-bipartite":
            if len(params) == 1:
                params = params * 2
            a, b = params
            return complete_bipartite(a, b)
        if family == "multipartite":
            if len(params) == 1:
                params = params * 3
            return complete_multipartite(*params)
        if family == "hamming":
            d, q = params
            return hamming(d, q)
    except ValueError as exc:
        raise BadParameters(f"wrong number of parameters for {family}: {params}") from exc
    raise BadParameters(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")


def graph_invariants(g: MixedGraph) -> dict:
    k = g.is_regular()
    t = triangle_count(g)
    out = {"n": g.n, "m": g.m, "k": k, "t": t, "2n/k": None, "16t/k^3": None}
    if k:
        out["2n/k"] = str(Fraction(2 * g.n, k))
        out["16t/k^3"] = str(Fraction(16 * t, k**3))
    return out


def verify_known(family: str, params: list[int], eta: Angle = RationalAngle(0, 1),
                 tau_max: int = TAU_MAX) -> ExperimentReport:
    g = family_graph(family, list(params))
    if 2 * g.m > MAX_ARCS:
        raise BadParameters(f"{family}{tuple(params)} has {2 * g.m} arcs, limit is {MAX_ARCS}")
    start = time.perf_counter()
    rep = ExperimentReport("verify-known", {"family": family, "params": list(params), "eta": _eta_to_json(eta)},
                           expected="listed as a periodic regular graph")
    report = decide_periodicity(g, eta, tau_max)
    row = _row(0, g, report, **graph_invariants(g))
    rep.rows = [row]
    ok = report.verdict == PERIODIC and all(v != "fail" for v in report.conditions.values())
    if not ok:
        rep.counterexamples = [row]
    rep.wall_time = time.perf_counter() - start
    return rep


# --- prime number of vertices ------------------------------------------------

def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, math.isqrt(p) + 1))


def prime_scan(p: int, eta: Angle, samples: int = 10, seed: int = 0, degrees: list[int] | None = None,
               tau_max: int = TAU_MAX, exhaustive_limit: int = 7) -> ExperimentReport:
    """Mixed C_p must be periodic; sampled k-regular graphs on p vertices (k not 1, 2) must fail 2n/k."""
    if not _is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if p > MAX_PRIME:
        raise BadParameters(f"p = {p} exceeds {MAX_PRIME}")
    rng = random.Random(seed)
    start = time.perf_counter()
    rep = ExperimentReport("prime-scan", {"p": p, "eta": _eta_to_json(eta), "samples": samples, "seed": seed},
                           expected="mixed C_p periodic; regular graphs of other degrees fail 2n/k")
    if p >= 3:
        if p <= exhaustive_limit:
            codes = list(itertools.product(range(3), repeat=p))
        else:
            codes = [tuple(rng.randrange(3) for _ in range(p)) for _ in range(samples)]
        for code in codes:
            g = cycle(p, code)
            row = _row(len(rep.rows), g, decide_periodicity(g, eta, tau_max), kind="cycle", k=2)
            rep.rows.append(row)
            if row["verdict"] != PERIODIC:
                rep.counterexamples.append(row)
    ks = degrees if degrees is not None else [k for k in range(3, p) if (p * k) % 2 == 0]
    for k in ks:
        if k in (1, 2) or not 0 < k < p or (p * k) % 2:
            raise BadParameters(f"no sampled regular non-cycle graph of degree {k} on {p} vertices")
        for _ in range(samples):
            g = random_regular(p, k, rng)
            report = decide_periodicity(g, eta, tau_max)
            row = _row(len(rep.rows), g, report, kind="regular", k=k, edges=[[u, v] for u, v, _ in g.edges])
            rep.rows.append(row)
            if check_2nk(g) or report.verdict == PERIODIC:
                rep.counterexamples.append(row)
    rep.wall_time = time.perf_counter() - start
    return rep


# --- random corpus -----------------------------------------------------------

def random_corpus(count: int = 200, n_max: int = 7, seed: int = 20241017, edge_prob: float = 0.4
                  ) -> list[MixedGraph]:
    """Random weakly connected mixed graphs with 2 <= n <= n_max."""
    rng = random.Random(seed)
    return [random_connected(rng.randint(2, n_max), rng, edge_prob) for _ in range(count)]


def parse_eta(rational: str | None, radians: float | None) -> Angle:
    from .cyclo import parse_angle

    if (rational is None) == (radians is None):
        raise InputError("give exactly one of --eta A/B or --eta-float X")
    return parse_angle(rational) if rational is not None else FloatAngle(float(radians))

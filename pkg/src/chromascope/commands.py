"""Command implementations behind the CLI. Each returns a RunReport."""

from __future__ import annotations

import csv
import io
import math
import re
from fractions import Fraction
from pathlib import Path

from . import families as fam
from .chromatic import DEFAULT_NODE_BUDGET, aks_lower_bound, chromatic_number, independence_number, is_edge_critical
from .expectation import (DEFAULT_ENUMERATION_CAP, evaluate, exact_expectation_polynomial,
                          expected_chi_montecarlo, p_grid)
from .graph import Graph, GraphError, count_triangles, max_degree
from .io import format_edge_list, read_graph, write_graph
from .report import RunReport
from .spectral import (ENVELOPE_C, compact_bound, deviation_bench, hoffman_bound, spectrum_summary,
                       subgraph_spectral_bound)

CATALOG_TOLERANCE = Fraction(5, 100_000)
SIGMA_VERDICT = 4

_NAMED = [
    (re.compile(r"k(\d+)$"), lambda a: fam.complete(a[0])),
    (re.compile(r"c(\d+)$"), lambda a: fam.cycle(a[0])),
    (re.compile(r"p(\d+)$"), lambda a: fam.path(a[0])),
    (re.compile(r"m(\d+)$"), lambda a: fam.mycielski_sequence(a[0])),
    (re.compile(r"kg(\d+),(\d+)$"), lambda a: fam.kneser(a[0], a[1])),
]


def resolve_graph(spec: str) -> Graph:
    """A file path, or a built-in name: K4, C7, P5, M5, KG6,2, petersen, grotzsch, G1..G10."""
    path = Path(spec)
    if path.exists():
        return read_graph(path)
    key = spec.strip().lower()
    if key == "petersen":
        return fam.petersen()
    if key == "grotzsch":
        return fam.mycielski_sequence(4)
    if re.fullmatch(r"g\d+", key):
        return fam.catalog_graph(key)
    for pattern, build in _NAMED:
        hit = pattern.match(key)
        if hit:
            return build([int(x) for x in hit.groups()])
    raise GraphError(f"no such file and not a built-in graph name: {spec!r}")


def parse_probability(text: str) -> Fraction:
    """Decimal or A/B text as an exact rational in [0, 1]."""
    try:
        p = Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"not a probability: {text!r}") from None
    if not 0 <= p <= 1:
        raise ValueError(f"probability must lie in [0, 1], got {text}")
    return p


def _graph_results(report: RunReport, g: Graph) -> None:
    report.add("n", g.n, "input")
    report.add("m", g.m, "input")


# ---------------------------------------------------------------- gen

def generate(family: str, params: list[int]) -> tuple[Graph, dict, dict]:
    """(graph, certificates, extra part graphs) for a family name and integer params."""
    def need(k):
        if len(params) != k:
            raise GraphError(f"family {family!r} takes {k} integer parameter(s), got {len(params)}")
        return params

    certs: dict = {}
    extra: dict = {}
    if family == "complete":
        (n,) = need(1)
        g = fam.complete(n)
        certs = {"chi": n, "lambda_max": n - 1, "lambda_min": -1 if n > 1 else 0}
    elif family == "cycle":
        (n,) = need(1)
        g = fam.cycle(n)
        certs = {"chi": 2 if n % 2 == 0 else 3}
    elif family == "path":
        (n,) = need(1)
        g = fam.path(n)
        certs = {"chi": 1 if n == 1 else 2}
    elif family == "mycielski":
        (k,) = need(1)
        g = fam.mycielski_sequence(k)
        certs = {"chi": k}
    elif family == "kneser":
        n, k = need(2)
        g = fam.kneser(n, k)
        if n >= 2 * k >= 2:
            c = fam.kneser_certificates(n, k)
            certs = {"lambda_max": c.lambda_max, "lambda_min": c.lambda_min, "alpha": c.alpha, "chi": c.chi}
    elif family == "petersen":
        need(0)
        g = fam.petersen()
        certs = {"lambda_max": 3, "lambda_min": -2, "alpha": 4, "chi": 3}
    elif family == "zykov":
        q, n, t = need(3)
        z = fam.zykov_family(q, n, t)
        g = z.base
        certs = {"chi_base": q ** (t + 1), "chi_part": q, "min_coverage_at_least": n - t}
        extra = {f"part{i + 1}": part for i, part in enumerate(z.parts)}
    elif family == "critical":
        chi, girth = need(2)
        g = fam.edge_critical_witness(chi, girth)
        certs = {"chi": chi}
    else:
        raise GraphError(f"unknown family {family!r}")
    return g, certs, extra


def cmd_gen(family: str, params: list[int], out: str | None = None) -> tuple[RunReport, str]:
    """Returns the report and the primary graph's edge-list text."""
    if family == "catalog":
        if len(params) != 1:
            raise GraphError("catalog takes one entry name")
        g = fam.catalog_graph(str(params[0]))
        certs, extra = {"triangles": 4}, {}
    else:
        g, certs, extra = generate(family, [int(x) for x in params])
    report = RunReport("gen", {"family": family, "params": [str(x) for x in params], "out": out})
    _graph_results(report, g)
    for k, v in certs.items():
        report.add(k, v, "closed-form")
    if out is not None:
        path = Path(out)
        if extra:
            written = [path.with_name(f"{path.stem}.base{path.suffix}")]
            write_graph(g, written[0])
            for name, part in extra.items():
                written.append(path.with_name(f"{path.stem}.{name}{path.suffix}"))
                write_graph(part, written[-1])
        else:
            written = [path]
            write_graph(g, path)
        report.add("files", [str(w) for w in written], "output")
    return report, format_edge_list(g)


# ---------------------------------------------------------------- expectation

def _seed_inputs(report: RunReport, seed: int | None) -> int:
    if seed is None:
        import secrets

        seed = secrets.randbits(63)
        report.inputs["seed_generated"] = True
    report.inputs["seed"] = seed
    return seed


def cmd_expect(g: Graph, p: Fraction, mode: str = "exact", samples: int = 100_000,
               seed: int | None = None, edge_cap: int = DEFAULT_ENUMERATION_CAP,
               source: str = "-", node_budget: int = DEFAULT_NODE_BUDGET) -> RunReport:
    report = RunReport("expect", {"graph": source, "p": p, "mode": mode})
    _graph_results(report, g)
    if mode == "exact":
        report.inputs["edge_cap"] = edge_cap
        poly = exact_expectation_polynomial(g, edge_cap=edge_cap, node_budget=node_budget)
        value = evaluate(poly, p)
        report.add("chi", poly.chi, "exact")
        report.add("expectation", value, "exact", decimal=float(value))
        return report
    report.inputs["samples"] = samples
    seed = _seed_inputs(report, seed)
    est = expected_chi_montecarlo(g, float(p), samples, seed, node_budget=node_budget)
    half = 1.96 * est.std_error
    report.add("expectation", est.mean, f"monte-carlo seed={seed} samples={samples}",
               std_error=est.std_error, ci95=[est.mean - half, est.mean + half])
    report.add("histogram", list(est.histogram), f"monte-carlo seed={seed} samples={samples}")
    return report


def cmd_poly(g: Graph, edge_cap: int = DEFAULT_ENUMERATION_CAP) -> dict:
    return exact_expectation_polynomial(g, edge_cap=edge_cap).to_json()


def cmd_verify_catalog(grid=(Fraction(1, 10), Fraction(1, 5), Fraction(3, 10), Fraction(2, 5),
                              Fraction(1, 2))) -> RunReport:
    report = RunReport("verify-catalog", {"p": Fraction(1, 2), "tolerance": CATALOG_TOLERANCE,
                                           "grid": list(grid)})
    entries = fam.triangle_catalog()
    polys = {e.name: exact_expectation_polynomial(e.graph) for e in entries}
    half = {}
    for e in entries:
        tri, _ = count_triangles(e.graph)
        report.check(f"{e.name} triangles", 4, tri, tri == 4)
        value = evaluate(polys[e.name], Fraction(1, 2))
        half[e.name] = value
        report.add(e.name, value, "exact", decimal=float(value), description=e.description)
        err = abs(value - e.expected_value_at_half)
        report.check(f"{e.name} value at 1/2", e.expected_value_at_half, float(value),
                     err <= CATALOG_TOLERANCE, CATALOG_TOLERANCE)
    report.add("ranking_at_half", sorted(half, key=half.get), "exact")
    for p in grid:
        k4 = evaluate(polys["K4"], p)
        low = min((name for name in polys if name != "K4"), key=lambda name: evaluate(polys[name], p))
        other = evaluate(polys[low], p)
        report.check(f"K4 strictly minimal at p={p}", f"< {low} = {float(other):.6f}", float(k4), k4 < other)
        if k4 >= other:
            report.notes.append(f"at p={p} {low} (chi {chromatic_number(fam.catalog_graph(low)).chi}) "
                                f"is at or below K4")
    return report


def _curve_rows(g: Graph, grid, mode, samples, seed, edge_cap):
    rows = []
    if mode == "exact":
        poly = exact_expectation_polynomial(g, edge_cap=edge_cap)
        for p in grid:
            rows.append((p, float(evaluate(poly, Fraction(str(p)))), None))
    else:
        for p in grid:
            est = expected_chi_montecarlo(g, p, samples, seed)
            rows.append((p, est.mean, est.std_error))
    return rows


def curve_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["p", "value", "std_error"])
    for p, value, se in rows:
        w.writerow([repr(float(p)), repr(float(value)), "" if se is None else repr(float(se))])
    return buf.getvalue()


def cmd_curve(g: Graph, p_min: float, p_max: float, steps: int, mode: str = "exact",
              samples: int = 10_000, seed: int | None = None, out: str | None = None,
              edge_cap: int = DEFAULT_ENUMERATION_CAP, source: str = "-") -> tuple[RunReport, str]:
    report = RunReport("curve", {"graph": source, "p_min": p_min, "p_max": p_max, "steps": steps,
                                 "mode": mode})
    if mode != "exact":
        report.inputs["samples"] = samples
        seed = _seed_inputs(report, seed)
    rows = _curve_rows(g, p_grid(p_min, p_max, steps), mode, samples, seed, edge_cap)
    text = curve_csv(rows)
    prov = "exact" if mode == "exact" else f"monte-carlo seed={seed} samples={samples}"
    report.tables["curve"] = [{"p": p, "value": v, "std_error": se, "provenance": prov} for p, v, se in rows]
    if out is not None:
        Path(out).write_text(text)
        report.add("csv", out, "output")
    return report, text


def verdict(m_value: float, m_se: float | None, k_value: float) -> str:
    """Compare a (possibly sampled) M_k value against the exact K_k value."""
    diff = m_value - k_value
    if m_se is None:
        return "consistent" if diff >= 0 else "violation"
    if diff >= 0:
        return "consistent"
    if diff <= -SIGMA_VERDICT * m_se:
        return "violation at >=4 sigma"
    return "inconclusive"


def cmd_compare_complete(k: int, p_min: float = 0.05, p_max: float = 0.5, steps: int = 10,
                         mode: str = "auto", samples: int = 100_000, seed: int | None = None,
                         edge_cap: int = DEFAULT_ENUMERATION_CAP, out: str | None = None) -> RunReport:
    """E[χ] of the k-th Mycielski graph against K_k along a grid.

    Checks only cover p <= 1/2; larger p are reported without a check.
    """
    mk, kk = fam.mycielski_sequence(k), fam.complete(k)
    if mode == "auto":
        mode = "exact" if mk.m <= edge_cap else "mc"
    report = RunReport("compare-complete", {"k": k, "p_min": p_min, "p_max": p_max, "steps": steps,
                                            "mode": mode})
    if mode != "exact":
        report.inputs["samples"] = samples
        seed = _seed_inputs(report, seed)
    grid = p_grid(p_min, p_max, steps)
    m_rows = _curve_rows(mk, grid, mode, samples, seed, edge_cap)
    k_rows = _curve_rows(kk, grid, "exact", samples, seed, edge_cap)
    prov = "exact" if mode == "exact" else f"monte-carlo seed={seed} samples={samples}"
    rows = []
    for (p, mv, mse), (_, kv, _) in zip(m_rows, k_rows):
        v = verdict(mv, mse, kv)
        rows.append({"p": p, "mycielski": mv, "std_error": mse, "complete": kv,
                     "difference": mv - kv, "verdict": v, "provenance": prov})
        if p <= 0.5:
            report.check(f"M{k} >= K{k} at p={p}", "not a violation", v, not v.startswith("violation"))
    report.tables["comparison"] = rows
    counts: dict[str, int] = {}
    for r in rows:
        counts[r["verdict"]] = counts.get(r["verdict"], 0) + 1
    report.add("verdicts", counts, prov)
    if out is not None:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["p", "mycielski", "std_error", "complete", "verdict"])
        for r in rows:
            w.writerow([repr(r["p"]), repr(r["mycielski"]), "" if r["std_error"] is None else repr(r["std_error"]),
                        repr(r["complete"]), r["verdict"]])
        Path(out).write_text(buf.getvalue())
    return report


# ---------------------------------------------------------------- bounds

def cmd_bounds(g: Graph, p: Fraction, c: float = 1.0, source: str = "-",
               node_budget: int = DEFAULT_NODE_BUDGET) -> RunReport:
    report = RunReport("bounds", {"graph": source, "p": p, "c": c})
    _graph_results(report, g)
    chi = chromatic_number(g, node_budget).chi
    alpha, _ = independence_number(g, node_budget)
    report.add("chi", chi, "exact")
    report.add("alpha", alpha, "exact")
    ratio = Fraction(g.n, alpha) if alpha else None
    report.add("n_over_alpha", ratio, "exact")
    if g.n >= 2:
        report.add("aks_comparison", aks_lower_bound(chi, g.n), "closed-form")
    report.add("chi_pow_p", chi ** float(p), "closed-form")
    if g.m == 0:
        report.notes.append("edgeless graph: spectral bounds undefined, chi >= 1 trivially")
        return report
    summary = spectrum_summary(g)
    report.add("lambda_max", summary.lambda_max, "eigensolver", tolerance=summary.tolerance)
    report.add("lambda_min", summary.lambda_min, "eigensolver", tolerance=summary.tolerance)
    report.add("delta", max_degree(g), "exact")
    hoff = hoffman_bound(g)
    report.add("hoffman", hoff, "eigensolver")
    report.check("hoffman <= chi", chi, hoff, hoff <= chi + 1e-8, 1e-8)
    if ratio is not None and len(set(g.degrees())) == 1:
        report.check("hoffman <= n/alpha (regular)", float(ratio), hoff, hoff <= ratio + 1e-8, 1e-8)
    elif ratio is not None:
        report.notes.append("not regular: hoffman vs n/alpha is not a theorem here, no check")
    if p > 0:
        t2 = subgraph_spectral_bound(g, p, c, summary)
        report.add("spectral_ratio_bound", t2.ratio_bound, "eigensolver")
        report.add("spectral_chi_bound", t2.chi_bound, "eigensolver")
        report.add("compact_bound", compact_bound(g, p, c, summary), "eigensolver")
        report.notes.append(f"c={c} is a chosen constant; log is natural")
        if summary.delta <= math.log(g.n):
            report.notes.append("compact bound assumes max degree > ln n; shown anyway")
    else:
        report.notes.append("p = 0: spectral bounds for G_p undefined")
    return report


def cmd_verify_product_bound(q: int, n: int, t: int, node_budget: int = DEFAULT_NODE_BUDGET) -> RunReport:
    report = RunReport("verify-product-bound", {"q": q, "n": n, "t": t})
    z = fam.zykov_family(q, n, t)
    report.add("vertices", z.base.n, "exact")
    cover, edge = fam.edge_coverage_check(z)
    report.add("min_coverage", cover, "exact", witness_edge=list(edge) if edge else None)
    report.check("edge coverage >= n - t", n - t, cover, cover >= n - t)
    chis = []
    for i, part in enumerate(z.parts, start=1):
        res = chromatic_number(part, node_budget)
        chis.append(res.chi)
        report.check(f"chi(G_{i}) = q", q, res.chi, res.chi == q)
    product = math.prod(chis)
    chi_base = z.base.n  # complete graph
    report.add("part_chis", chis, "exact")
    report.add("product", product, "exact")
    report.add("chi_base", chi_base, "closed-form")
    # product == chi_base^(n/(t+1))  <=>  product^(t+1) == chi_base^n
    report.check("product = chi(base)^(n/(t+1))", f"{chi_base}^({n}/{t + 1})", product,
                 product ** (t + 1) == chi_base**n)
    report.check("product = q^n", q**n, product, product == q**n)
    return report


def cmd_deviation_bench(g: Graph, p: Fraction, trials: int = 100, seed: int | None = None,
                        c: float = ENVELOPE_C, out: str | None = None,
                        source: str = "-") -> tuple[RunReport, str]:
    report = RunReport("deviation-bench", {"graph": source, "p": p, "trials": trials, "c_envelope": c})
    seed = _seed_inputs(report, seed)
    bench = deviation_bench(g, float(p), trials, seed, c)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["seed", "p", "norm_x", "sigma_exact", "envelope_c4", "perturb_slack_max", "perturb_slack_min"])
    for tr in bench.trials:
        w.writerow([tr.seed, repr(tr.p), repr(tr.norm_x), repr(tr.sigma_exact), repr(tr.envelope(ENVELOPE_C)),
                    repr(tr.perturb_slack_max), repr(tr.perturb_slack_min)])
    text = buf.getvalue()
    prov = f"eigensolver seeds={seed}..{seed + trials - 1}"
    report.add("max_ratio", bench.max_ratio, prov)
    report.add("violations", bench.violations, prov)
    report.add("min_slack", bench.min_slack, prov)
    report.check(f"envelope c={c} violations", 0, bench.violations, bench.violations == 0)
    report.check("perturbation slack >= -1e-7", ">= -1e-7", bench.min_slack, bench.min_slack >= -1e-7, 1e-7)
    if out is not None:
        Path(out).write_text(text)
        report.add("csv", out, "output")
    return report, text


def cmd_verify_shinkar(s: int, k: int, samples: int | None = None, seed: int | None = None,
                       node_budget: int = DEFAULT_NODE_BUDGET) -> RunReport:
    report = RunReport("verify-shinkar", {"s": s, "k": k})
    if samples is None:
        res = fam.shinkar_ratio_check(s, k)
        prov = "exact"
    else:
        report.inputs["samples"] = samples
        seed = _seed_inputs(report, seed)
        res = fam.shinkar_ratio_sample(s, k, samples, seed)
        prov = f"sampled seed={seed} samples={samples}"
        report.notes.append("sampled subsets: no completeness claim")
    g = fam.kneser(s * k, k)
    report.add("max_ratio", res.max_ratio, prov, subsets=res.subsets_checked)
    report.add("witness", list(res.witness), prov, full_vertex_set=len(res.witness) == g.n)
    report.check("max |V(H)|/alpha(H) <= s", s, res.max_ratio, res.max_ratio <= s)
    chi = chromatic_number(g, node_budget).chi
    report.add("chi", chi, "exact")
    expected = (s - 2) * k + 2
    report.check("chi(KG(sk,k)) = (s-2)k+2", expected, chi, chi == expected)
    return report


def cmd_critical(g: Graph, source: str = "-", node_budget: int = DEFAULT_NODE_BUDGET) -> RunReport:
    report = RunReport("critical", {"graph": source})
    _graph_results(report, g)
    report.add("chi", chromatic_number(g, node_budget).chi, "exact")
    ok, edge = is_edge_critical(g, node_budget)
    report.add("edge_critical", ok, "exact", first_noncritical_edge=list(edge) if edge else None)
    return report

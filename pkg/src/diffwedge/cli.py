"""Command line front end: JSON configs in, deterministic JSON reports out.

Commands: check, dual-metric, clifford-table, dirac, report.  Exit code
0 means every verdict passed, 1 means some named invariant failed, 2
means the configuration itself was unusable.  Reports are byte-stable
for a fixed config and seed: keys are sorted, rationals print as "p/q",
floats with 17 significant digits.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from . import symexpr
from .symexpr import Const, Expr, ExprSyntaxError
from .bundle import as_expr, eval_vector
from .clifford import build_algebra, multiplication_table
from .connection import check_leibniz, check_metric_compatibility, \
    dual_connection, is_symmetric_connection, koszul_check, levi_civita
from .dirac import apply_dirac, check_action_compatibility, \
    check_algebra_morphism, check_clifford_connection, check_unitarity, \
    clifford_connection, dirac, dirac_value_at, exterior_module, glue_dirac, \
    verify_splitting
from .dvspace import DvsModel, dual_space, dual_metric, is_pseudo_metric, \
    pairing_map, smooth_form_basis, apply_form
from .forms import dual_metric_identity_check, g_lambda, lambda1
from .linalg import frac_matrix
from .wedge import Chart, WedgeComplex


class ConfigError(ValueError):
    pass


def _frac(v):
    try:
        if isinstance(v, str):
            return Fraction(v)
        if isinstance(v, (int, Fraction)):
            return Fraction(v)
    except (ValueError, ZeroDivisionError):
        pass
    raise ConfigError(f"not a rational number: {v!r}")


def _expr(text, where):
    try:
        return as_expr(text)
    except ExprSyntaxError as exc:
        raise ConfigError(f"bad expression at {where}: {exc}")


def load_config(path):
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}")
    if not isinstance(raw, dict):
        raise ConfigError("config root must be an object")
    cfg = {"name": raw.get("name", ""), "tol": float(raw.get("tol", 1e-10))}
    charts = []
    for i, c in enumerate(raw.get("charts", [])):
        if "id" not in c:
            raise ConfigError(f"/charts/{i}: missing id")
        charts.append({"id": c["id"],
                       "h": _expr(c.get("h", "1"), f"/charts/{i}/h")})
    cfg["charts"] = charts
    ids = [c["id"] for c in charts]
    if len(set(ids)) != len(ids):
        raise ConfigError("duplicate chart ids")
    gluings = []
    for i, g in enumerate(raw.get("gluings", [])):
        pts = g.get("points")
        if not pts or len(pts) != 2:
            raise ConfigError(f"/gluings/{i}: needs [from, to] points")
        (c1, x1), (c2, x2) = pts
        if c1 not in ids or c2 not in ids:
            raise ConfigError(f"/gluings/{i}: unknown chart id")
        gluings.append({"from": (c1, _frac(x1)), "to": (c2, _frac(x2)),
                        "scale": _frac(g.get("scale", 1))})
    cfg["gluings"] = gluings
    fibre = raw.get("fibre")
    if fibre is not None:
        dim = fibre.get("dim")
        if not isinstance(dim, int) or dim <= 0:
            raise ConfigError("/fibre/dim: must be a positive integer")
        gens = [[_frac(v) for v in g] for g in fibre.get("nonsmooth", [])]
        for g in gens:
            if len(g) != dim:
                raise ConfigError("/fibre/nonsmooth: wrong vector length")
        metric = fibre.get("metric")
        if metric is not None:
            metric = [[_frac(v) for v in row] for row in metric]
            if len(metric) != dim or any(len(r) != dim for r in metric):
                raise ConfigError("/fibre/metric: wrong shape")
        cfg["fibre"] = {"model": DvsModel(dim, tuple(tuple(g) for g in gens)),
                        "metric": metric}
    else:
        cfg["fibre"] = None
    dd = raw.get("dirac")
    if dd is not None:
        sections = []
        for j, s in enumerate(dd.get("sections", [])):
            comp = {}
            for cid, vec in s.items():
                if cid not in ids:
                    raise ConfigError(f"/dirac/sections/{j}: unknown chart {cid}")
                comp[cid] = [_expr(e, f"/dirac/sections/{j}/{cid}") for e in vec]
            sections.append(comp)
        points = [(p[0], _frac(p[1])) for p in dd.get("points", [])]
        cfg["dirac"] = {"sections": sections, "points": points}
    else:
        cfg["dirac"] = None
    return cfg


# ---------------------------------------------------------------------------
# report assembly

def _canon(v):
    if isinstance(v, bool) or v is None or isinstance(v, (str, int)):
        return v
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}" if v.denominator != 1 else str(v.numerator)
    if isinstance(v, float):
        return format(v, ".17g")
    if isinstance(v, Expr):
        return symexpr.to_str(v)
    if isinstance(v, dict):
        return {str(k): _canon(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_canon(x) for x in v]
    return str(v)


def render_report(report):
    return json.dumps(_canon(report), sort_keys=True, indent=2) + "\n"


def _verdict(name, ok, **extra):
    v = {"name": name, "pass": bool(ok)}
    v.update(extra)
    return v


# ---------------------------------------------------------------------------
# geometry assembly from a config

def _grid():
    return [Fraction(i, 5) for i in range(-10, 11)]


def _points_per_chart(cfg):
    pts = {c["id"]: list(_grid()) for c in cfg["charts"]}
    for g in cfg["gluings"]:
        for cid, x in (g["from"], g["to"]):
            if x not in pts[cid]:
                pts[cid].append(x)
    return pts


def _build_module(cfg):
    """Exterior module over the configured wedge (single gluing supported)."""
    if len(cfg["gluings"]) != 1:
        raise ConfigError("exactly one gluing is supported for the glued suites")
    g = cfg["gluings"][0]
    legs1 = [c for c in cfg["charts"] if c["id"] == g["from"][0]]
    legs2 = [c for c in cfg["charts"] if c["id"] == g["to"][0]]
    lam1 = lambda1(WedgeComplex((Chart(legs1[0]["id"]),)),
                   {legs1[0]["id"]: legs1[0]["h"]})
    lam2 = lambda1(WedgeComplex((Chart(legs2[0]["id"]),)),
                   {legs2[0]["id"]: legs2[0]["h"]})
    return exterior_module(lam1, lam2, [(g["from"], g["to"])], g["scale"])


def _random_poly(rng, var_free=False):
    coeffs = [Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(3)]
    e = Const(coeffs[0])
    x = symexpr.X
    e = e + Const(coeffs[1]) * x + Const(coeffs[2]) * x * x
    return e


def _compatible_sections(module, cfg, rng):
    """Random module section pair matching through the glue maps."""
    g = cfg["gluings"][0]
    (c1, x1), (c2, x2) = g["from"], g["to"]
    a = g["scale"]
    u1, w1 = _random_poly(rng), _random_poly(rng)
    u2, w2 = _random_poly(rng), _random_poly(rng)
    # shift the second leg's constants so values pair at the glue point
    du = symexpr.evaluate(u1, x1) - symexpr.evaluate(u2, x2)
    dw = a * symexpr.evaluate(w1, x1) - symexpr.evaluate(w2, x2)
    u2 = symexpr.simplify(u2 + Const(du))
    w2 = symexpr.simplify(w2 + Const(dw))
    return {c1: [u1, w1]}, {c2: [u2, w2]}


def _glued_suite(cfg, seed, tol):
    verdicts = []
    rng = random.Random(seed)
    pts = _points_per_chart(cfg)
    g = cfg["gluings"][0]
    (c1, x1), (c2, x2) = g["from"], g["to"]
    a = g["scale"]
    h = {c["id"]: c["h"] for c in cfg["charts"]}

    h1 = symexpr.evaluate(h[c1], x1)
    h2 = symexpr.evaluate(h[c2], x2)
    gate = abs(float(h1 - a * a * h2)) <= 1e-12
    verdicts.append(_verdict(
        "metric-glue-compatibility", gate,
        witness=f"h[{c1}]({x1}) = {float(h1):.6g}, "
                f"scale^2 h[{c2}]({x2}) = {float(a * a * h2):.6g}"))
    if not gate:
        return verdicts, None

    module = _build_module(cfg)
    ok, witness = check_action_compatibility(module)
    verdicts.append(_verdict("action-equivariance", ok, witness=witness))
    ok, witness = check_algebra_morphism(module, g["from"])
    verdicts.append(_verdict("algebra-morphism", ok, witness=witness))

    # glued Clifford product against the closed rank-1 formula
    worst = 0.0
    for x in (Fraction(-1), Fraction(0), Fraction(1, 2), Fraction(2)):
        hv = symexpr.evaluate(h[c1], x)
        alg = build_algebra(DvsModel(1), [[hv if isinstance(hv, Fraction)
                                           else Fraction(hv).limit_denominator(10**15)]])
        from .clifford import cl_mul
        for (z1, w1), (z2, w2) in [((1, 2), (3, -1)), ((0, 1), (0, 1)),
                                   ((2, 0), (0, 3))]:
            prod = cl_mul(alg, {1: Fraction(z1), 0: Fraction(w1)},
                          {1: Fraction(z2), 0: Fraction(w2)})
            want_e = Fraction(z1 * w2 + z2 * w1)
            want_1 = -hv * z1 * z2 + w1 * w2
            worst = max(worst,
                        abs(float(prod.get(1, 0) - want_e)),
                        abs(float(prod.get(0, 0) - want_1)))
    verdicts.append(_verdict("glued-clifford-product", worst <= 1e-12,
                             residual=worst))

    lam = module.lam
    branch_ok = all(lam.fibre_dim(cls[0]) == len(cls)
                    for cls in lam.base.glue_classes)
    verdicts.append(_verdict("one-form-fibre-dimensions", branch_ok))
    ok, witness = dual_metric_identity_check(lam)
    verdicts.append(_verdict("dual-metric-coincidence", ok, witness=witness))

    lc = levi_civita(lam)
    trials = []
    for _ in range(5):
        f = {cid: _random_poly(rng) for cid in h}
        s = {cid: [_random_poly(rng)] for cid in h}
        trials.append((f, s))
    ok, worst = check_leibniz(lc, trials, pts, tol)
    verdicts.append(_verdict("leibniz", ok, residual=worst))

    pairs = [( {cid: [_random_poly(rng)] for cid in h},
               {cid: [_random_poly(rng)] for cid in h}) for _ in range(3)]
    ok, worst, witness = check_metric_compatibility(lc, pairs, pts, tol)
    verdicts.append(_verdict("metric-compatibility", ok, residual=worst,
                             witness=witness))

    fields = [{cid: _random_poly(rng) for cid in h} for _ in range(3)]
    ok = is_symmetric_connection(dual_connection(lc), fields, pts, tol)
    verdicts.append(_verdict("torsion-free", ok))

    triples = [tuple({cid: _random_poly(rng) for cid in h} for _ in range(3))
               for _ in range(4)]
    ok, worst = koszul_check(lam, triples, pts, 1e-9)
    verdicts.append(_verdict("koszul", ok, residual=worst))

    conn_e = clifford_connection(module)
    batteries = [({cid: _random_poly(rng) for cid in h},
                  {cid: _random_poly(rng) for cid in h},
                  {cid: [_random_poly(rng), _random_poly(rng)] for cid in h})
                 for _ in range(3)]
    ok, worst = check_clifford_connection(module, conn_e, lc, batteries, pts,
                                          1e-9)
    verdicts.append(_verdict("clifford-connection", ok, residual=worst))

    ok, worst = check_unitarity(module, pts, glue=True, tol=1e-9)
    verdicts.append(_verdict("unitarity", ok, residual=worst))

    d1 = dirac(module)
    d = glue_dirac(d1, d1, module)
    eval_points = [(c1, Fraction(i, 3)) for i in range(-6, 7) if i != 0]
    eval_points += [(c2, Fraction(i, 3)) for i in range(1, 7)]
    eval_points.append(g["from"])
    for _ in range(5):
        s1, s2 = _compatible_sections(module, cfg, rng)
        ok, worst = verify_splitting(d, s1, s2, eval_points, tol)
        if not ok:
            verdicts.append(_verdict("dirac-splitting", False, residual=worst))
            break
    else:
        verdicts.append(_verdict("dirac-splitting", True))
    return verdicts, module


def _fibre_suite(cfg):
    verdicts = []
    values = {}
    model = cfg["fibre"]["model"]
    values["dual_basis"] = dual_space(model)
    values["smooth_form_basis"] = smooth_form_basis(model)
    metric = cfg["fibre"]["metric"]
    if metric is not None:
        v = is_pseudo_metric(model, metric)
        verdicts.append(_verdict("pseudo-metric", v.ok, reason=v.reason,
                                 rank=v.rank))
        if v.ok:
            b = dual_metric(model, metric)
            values["dual_metric"] = b
            # the defining identity, checked on basis pairs
            dual = dual_space(model)
            ok = True
            n = model.dim
            for i in range(n):
                for j in range(n):
                    phi_i = pairing_map(model, metric, _unit(n, i))
                    phi_j = pairing_map(model, metric, _unit(n, j))
                    lhs = sum(phi_i[s] * b[s][t] * phi_j[t]
                              for s in range(len(b)) for t in range(len(b)))
                    if lhs != Fraction(metric[i][j]):
                        ok = False
            verdicts.append(_verdict("dual-metric-defining-identity", ok))
            values["note"] = (
                "the dual matrix is forced by the identity "
                "B(phi(u), phi(v)) = g(u, v); for the 3-dimensional example "
                "with one non-smooth direction this gives (1/9)[[6,-3],[-3,6]], "
                "not the sometimes-quoted (1/9)[[6,5],[5,6]], which fails "
                "the identity")
    return verdicts, values


def _unit(n, i):
    v = [Fraction(0)] * n
    v[i] = Fraction(1)
    return v


# ---------------------------------------------------------------------------
# commands

def run(command, cfg, seed=0, tol=None):
    tol = cfg["tol"] if tol is None else tol
    report = {"command": command, "name": cfg["name"], "seed": seed,
              "verdicts": [], "values": {}}
    if command in ("check", "report"):
        if cfg["gluings"]:
            verdicts, _ = _glued_suite(cfg, seed, tol)
            report["verdicts"] += verdicts
        if cfg["fibre"] is not None:
            verdicts, values = _fibre_suite(cfg)
            report["verdicts"] += verdicts
            report["values"].update(values)
    if command in ("dual-metric", "report"):
        if cfg["fibre"] is None:
            raise ConfigError("dual-metric needs a fibre block")
        verdicts, values = _fibre_suite(cfg)
        if command == "dual-metric":
            report["verdicts"] += verdicts
        report["values"].update(values)
    if command in ("clifford-table", "report"):
        if cfg["fibre"] is not None and cfg["fibre"]["metric"] is not None:
            alg = build_algebra(cfg["fibre"]["model"], cfg["fibre"]["metric"])
            table = multiplication_table(alg)
            report["values"]["clifford_table"] = {
                f"{a} . {b}": v for (a, b), v in table.items()}
        elif command == "clifford-table":
            raise ConfigError("clifford-table needs a fibre block with a metric")
    if command in ("dirac", "report"):
        if cfg["dirac"] is not None:
            module = _build_module(cfg)
            d = dirac(module)
            d = glue_dirac(d, d, module)
            out = []
            for comp in cfg["dirac"]["sections"]:
                row = {}
                for p in cfg["dirac"]["points"]:
                    row[f"{p[0]}@{p[1]}"] = dirac_value_at(d, comp, p)
                out.append(row)
            report["values"]["dirac"] = out
        elif command == "dirac":
            raise ConfigError("dirac command needs a dirac block")
    failed = [v["name"] for v in report["verdicts"] if not v["pass"]]
    report["failed"] = failed
    return report, (1 if failed else 0)


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="diffeo",
        description="exact checks and computations for glued line geometries")
    parser.add_argument("command", choices=["check", "dual-metric",
                                            "clifford-table", "dirac",
                                            "report"])
    parser.add_argument("config")
    parser.add_argument("--json", dest="out", help="write the report here")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--tol", type=float, default=None)
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
        report, code = run(args.command, cfg, args.seed, args.tol)
    except (ConfigError, ExprSyntaxError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    text = render_report(report)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())

"""JSON and CSV plumbing. Rationals cross the boundary as "p/q" strings."""

import csv
import io as _io
import json
import re
from fractions import Fraction

from .direction import FormalReal
from .errors import BadParameters, UnknownKind
from .linalg import vandermonde_generators

_RAT = re.compile(r"^\s*[+-]?\d+(\s*/\s*\d+)?\s*$")


def frac(q):
    """Canonical string form ``p/q`` with q > 0 (q = 1 included)."""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(x, what="value"):
    if isinstance(x, bool):
        raise BadParameters(f"{what}: expected a rational, got {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str) and _RAT.match(x):
        q = Fraction(x.replace(" ", ""))
        return q
    raise BadParameters(f"{what}: expected an integer or a 'p/q' string, got {x!r}")


def parse_rational_list(text, what="vector"):
    """Comma-separated rationals, or a JSON list of them."""
    text = text.strip()
    if text.startswith("["):
        try:
            items = json.loads(text)
        except json.JSONDecodeError as e:
            raise BadParameters(f"{what}: invalid JSON ({e})") from None
    else:
        items = [s for s in text.split(",") if s.strip()]
    return tuple(parse_rational(s, f"{what}[{i}]") for i, s in enumerate(items))


def parse_direction(obj):
    """Direction from ``{"symbols": d, "alpha": [[q0, .., qd], ..]}`` or a list of rationals."""
    if isinstance(obj, str):
        s = obj.strip()
        if s.startswith("{") or s.startswith("["):
            try:
                obj = json.loads(s)
            except json.JSONDecodeError as e:
                raise BadParameters(f"direction: invalid JSON ({e})") from None
        else:
            return parse_rational_list(s, "alpha")
    if isinstance(obj, list):
        return tuple(parse_rational(x, f"alpha[{i}]") for i, x in enumerate(obj))
    if not isinstance(obj, dict) or "alpha" not in obj:
        raise BadParameters("direction: expected an object with an 'alpha' field")
    d = obj.get("symbols", 0)
    if not isinstance(d, int) or d < 0:
        raise BadParameters(f"symbols: expected a non-negative integer, got {d!r}")
    out = []
    for i, row in enumerate(obj["alpha"]):
        if isinstance(row, list):
            if len(row) != d + 1:
                raise BadParameters(f"alpha[{i}]: expected {d + 1} coefficients, got {len(row)}")
            out.append(FormalReal(parse_rational(x, f"alpha[{i}][{j}]") for j, x in enumerate(row)))
        else:
            out.append(FormalReal.rational(parse_rational(row, f"alpha[{i}]"), d))
    return tuple(out)


def direction_to_json(alpha):
    alpha = tuple(alpha)
    if all(not isinstance(a, FormalReal) or a.is_rational() for a in alpha):
        return [frac(a.coeffs[0] if isinstance(a, FormalReal) else a) for a in alpha]
    d = max(a.symbols for a in alpha if isinstance(a, FormalReal))
    rows = []
    for a in alpha:
        c = a.coeffs if isinstance(a, FormalReal) else (Fraction(a),)
        rows.append([frac(x) for x in c + (0,) * (d + 1 - len(c))])
    return {"symbols": d, "alpha": rows}


def parse_generators(text):
    """Generators from JSON (a list, or an object with "generators") or ``vandermonde:n,m``."""
    if isinstance(text, str):
        s = text.strip()
        if s.startswith("vandermonde:"):
            try:
                n, m = (int(x) for x in s.split(":", 1)[1].split(","))
            except ValueError:
                raise BadParameters(f"generators: bad vandermonde spec {s!r}") from None
            return tuple(tuple(g) for g in vandermonde_generators(n, m))
        try:
            obj = json.loads(s)
        except json.JSONDecodeError as e:
            raise BadParameters(f"generators: invalid JSON ({e})") from None
    else:
        obj = text
    if isinstance(obj, dict):
        if "generators" not in obj:
            raise BadParameters("generators: object lacks a 'generators' field")
        obj = obj["generators"]
    if not isinstance(obj, list) or not obj:
        raise BadParameters("generators: expected a non-empty list of integer vectors")
    gens = []
    for i, g in enumerate(obj):
        if not isinstance(g, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in g):
            raise BadParameters(f"generators[{i}]: expected a list of integers")
        gens.append(tuple(g))
    return tuple(gens)


def vector_json(v):
    return [frac(x) for x in v]


def covering_json(res):
    d = {"kind": res.kind, "witness": vector_json(res.witness)}
    if res.kind == "exact":
        d["value"] = frac(res.value)
    else:
        d.update(lower=frac(res.lower), upper=frac(res.upper), budget_exceeded=res.budget_exceeded)
    return d


def gap_json(res):
    d = {"epsilon_star": frac(res.epsilon_star), "active_indices": list(res.active_indices)}
    d["witness_t"] = None if res.witness_t is None else frac(res.witness_t)
    if res.degenerate:
        d["degenerate"] = True
    return d


def dumps(obj):
    return json.dumps(obj, sort_keys=True)


PLOT_KINDS = {
    "envelope": ("t", "min_distance"),
    "mu-vs-bound": ("n", "m", "mu", "bound"),
    "trajectory": None,  # header depends on m
}


def emit_plot_data(rows, kind, m=None):
    """CSV text for one of the plot kinds; rationals as p/q."""
    if kind not in PLOT_KINDS:
        raise UnknownKind(f"kind: unknown plot kind {kind!r} (choose from {sorted(PLOT_KINDS)})")
    header = PLOT_KINDS[kind]
    if header is None:
        if m is None:
            m = len(rows[0]) - 1 if rows else 0
        header = ("t",) + tuple(f"x{i + 1}" for i in range(m))
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([frac(x) if isinstance(x, Fraction) else x for x in row])
    return buf.getvalue()

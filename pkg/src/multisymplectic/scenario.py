"""JSON scenario files: serialization of exact objects and loading with validation.

Rationals are strings "p/q".  A form is ``{"chart": name, "degree": k,
"terms": [{"indices": [...], "poly": [{"coeff": "p/q", "exponents": [...]}]}]}``;
a vector field is a list of polys, one per coordinate.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .equivariant import LieAction, LieAlgebraFD
from .errors import MultisymplecticError
from .exterior import Chart, DifferentialForm, PolyVectorField
from .moment import MomentMap
from .observables import PrePlectic
from .polynomial import Polynomial


class ScenarioParseError(ValueError):
    """Malformed scenario data; ``location`` is a JSON-path-like pointer."""

    def __init__(self, location: str, message: str):
        super().__init__(f"{location}: {message}")
        self.location = location


class ScenarioInvariantError(ValueError):
    """Well-formed data describing an invalid object (e.g. a non-closed omega)."""

    def __init__(self, location: str, message: str):
        super().__init__(f"{location}: {message}")
        self.location = location


# serialization


def frac_to_str(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def frac_from_str(s, where: str = "$") -> Fraction:
    if isinstance(s, bool) or not isinstance(s, (str, int)):
        raise ScenarioParseError(where, f"expected a rational string, got {s!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as e:
        raise ScenarioParseError(where, f"bad rational {s!r}") from e


def poly_to_json(p: Polynomial) -> list[dict]:
    return [{"coeff": frac_to_str(c), "exponents": list(m)} for m, c in sorted(p.items())]


def poly_from_json(data, nvars: int, where: str) -> Polynomial:
    if not isinstance(data, list):
        raise ScenarioParseError(where, "a polynomial is a list of terms")
    terms: dict[tuple[int, ...], Fraction] = {}
    for r, t in enumerate(data):
        w = f"{where}[{r}]"
        if not isinstance(t, dict) or set(t) != {"coeff", "exponents"}:
            raise ScenarioParseError(w, "a term needs exactly 'coeff' and 'exponents'")
        e = t["exponents"]
        if not isinstance(e, list) or len(e) != nvars or not all(isinstance(x, int) and x >= 0 for x in e):
            raise ScenarioParseError(f"{w}.exponents", f"expected {nvars} non-negative integers")
        key = tuple(e)
        terms[key] = terms.get(key, Fraction(0)) + frac_from_str(t["coeff"], f"{w}.coeff")
    return Polynomial(nvars, terms)


def form_terms_to_json(f: DifferentialForm) -> list[dict]:
    return [{"indices": list(idx), "poly": poly_to_json(p)} for idx, p in sorted(f.items())]


def form_to_json(f: DifferentialForm, chart_name: str) -> dict:
    return {"chart": chart_name, "degree": f.degree, "terms": form_terms_to_json(f)}


def form_from_json(data, charts: dict[str, Chart], where: str) -> DifferentialForm:
    if not isinstance(data, dict) or not {"chart", "degree", "terms"} <= set(data):
        raise ScenarioParseError(where, "a form needs 'chart', 'degree' and 'terms'")
    chart = _lookup(charts, data["chart"], f"{where}.chart")
    k = data["degree"]
    if not isinstance(k, int):
        raise ScenarioParseError(f"{where}.degree", "degree must be an integer")
    if not isinstance(data["terms"], list):
        raise ScenarioParseError(f"{where}.terms", "terms must be a list")
    terms: dict[tuple[int, ...], Polynomial] = {}
    for r, t in enumerate(data["terms"]):
        w = f"{where}.terms[{r}]"
        if not isinstance(t, dict) or set(t) != {"indices", "poly"}:
            raise ScenarioParseError(w, "a form term needs exactly 'indices' and 'poly'")
        idx = t["indices"]
        if (not isinstance(idx, list) or len(idx) != k
                or not all(isinstance(i, int) and 0 <= i < chart.dim for i in idx)):
            raise ScenarioParseError(f"{w}.indices", f"expected {k} coordinate indices below {chart.dim}")
        if len(set(idx)) != len(idx):
            raise ScenarioParseError(f"{w}.indices", "repeated index")
        # sorting with sign happens in the form constructor; merge duplicates first
        p = poly_from_json(t["poly"], chart.dim, f"{w}.poly")
        terms_key = tuple(idx)
        acc = DifferentialForm(chart, k, {terms_key: p})
        for key, q in acc.items():
            terms[key] = terms[key] + q if key in terms else q
    try:
        for _, p in terms.items():
            chart.check_poly(p)
    except ValueError as e:
        raise ScenarioInvariantError(where, str(e)) from e
    return DifferentialForm(chart, k, terms)


def vf_to_json(v: PolyVectorField) -> list[list[dict]]:
    return [poly_to_json(c) for c in v.components]


def vf_from_json(data, chart: Chart, where: str) -> PolyVectorField:
    if not isinstance(data, list) or len(data) != chart.dim:
        raise ScenarioParseError(where, f"a vector field is a list of {chart.dim} polynomials")
    comps = [poly_from_json(c, chart.dim, f"{where}[{i}]") for i, c in enumerate(data)]
    try:
        for c in comps:
            chart.check_poly(c)
    except ValueError as e:
        raise ScenarioInvariantError(where, str(e)) from e
    return PolyVectorField(chart, comps)


def chart_to_json(c: Chart) -> dict:
    return {"coords": list(c.coords), "periodic": list(c.periodic)}


def algebra_to_json(g: LieAlgebraFD) -> dict:
    return {"dim": g.dim, "constants": [[[frac_to_str(x) for x in row] for row in plane] for plane in g.dense()]}


def _lookup(table: dict, name, where: str):
    if not isinstance(name, str) or name not in table:
        raise ScenarioParseError(where, f"unknown reference {name!r}")
    return table[name]


def _get(d: dict, key: str, where: str, kind=None):
    if key not in d:
        raise ScenarioParseError(where, f"missing '{key}'")
    v = d[key]
    if kind is not None and not isinstance(v, kind):
        raise ScenarioParseError(f"{where}.{key}", f"expected {getattr(kind, '__name__', kind)}")
    return v


# scenario objects


@dataclass
class Scenario:
    name: str
    seed: int
    charts: dict[str, Chart] = field(default_factory=dict)
    forms: dict[str, DifferentialForm] = field(default_factory=dict)
    algebras: dict[str, LieAlgebraFD] = field(default_factory=dict)
    actions: dict[str, LieAction] = field(default_factory=dict)
    moments: dict[str, MomentMap] = field(default_factory=dict)
    tasks: list[dict] = field(default_factory=list)
    extra: dict[str, Any] = field(default_factory=dict)

    def chart_name(self, chart: Chart) -> str:
        for k, c in self.charts.items():
            if c == chart:
                return k
        return "product"


def _invariant(where: str, fn, *args, **kw):
    try:
        return fn(*args, **kw)
    except MultisymplecticError as e:
        raise ScenarioInvariantError(where, f"{type(e).__name__}: {e}") from e
    except (ValueError, ZeroDivisionError) as e:
        raise ScenarioInvariantError(where, str(e)) from e


def load_scenario(data) -> Scenario:
    """Build and validate every object of a parsed scenario document."""
    if not isinstance(data, dict):
        raise ScenarioParseError("$", "scenario must be an object")
    name = data.get("name", "scenario")
    seed = data.get("seed", 0)
    if not isinstance(name, str):
        raise ScenarioParseError("$.name", "expected a string")
    if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
        raise ScenarioParseError("$.seed", "expected a non-negative integer")
    sc = Scenario(name, seed)
    for key in ("charts", "forms", "algebras", "actions", "moment_maps"):
        if key in data and not isinstance(data[key], dict):
            raise ScenarioParseError(f"$.{key}", "expected an object")
    for cname, c in data.get("charts", {}).items():
        w = f"$.charts.{cname}"
        if not isinstance(c, dict):
            raise ScenarioParseError(w, "expected an object")
        coords = _get(c, "coords", w, list)
        periodic = c.get("periodic", [False] * len(coords))
        if not all(isinstance(x, str) for x in coords):
            raise ScenarioParseError(f"{w}.coords", "coordinate names must be strings")
        if not isinstance(periodic, list) or len(periodic) != len(coords) or not all(isinstance(x, bool) for x in periodic):
            raise ScenarioParseError(f"{w}.periodic", "expected one boolean per coordinate")
        sc.charts[cname] = _invariant(w, Chart, tuple(coords), tuple(periodic))
    for fname, f in data.get("forms", {}).items():
        sc.forms[fname] = form_from_json(f, sc.charts, f"$.forms.{fname}")
    for aname, a in data.get("algebras", {}).items():
        w = f"$.algebras.{aname}"
        if not isinstance(a, dict):
            raise ScenarioParseError(w, "expected an object")
        dim = _get(a, "dim", w, int)
        consts = a.get("constants")
        if consts is None:
            sc.algebras[aname] = LieAlgebraFD(dim, name=aname)
            continue
        if (not isinstance(consts, list) or len(consts) != dim
                or not all(isinstance(p, list) and len(p) == dim and all(isinstance(r, list) and len(r) == dim for r in p)
                           for p in consts)):
            raise ScenarioParseError(f"{w}.constants", f"expected a {dim}x{dim}x{dim} array")
        dense = [[[frac_from_str(x, f"{w}.constants[{i}][{j}][{k}]") for k, x in enumerate(r)]
                  for j, r in enumerate(p)] for i, p in enumerate(consts)]
        sc.algebras[aname] = _invariant(w, LieAlgebraFD.from_dense, dense, name=aname)
    for aname, a in data.get("actions", {}).items():
        w = f"$.actions.{aname}"
        if not isinstance(a, dict):
            raise ScenarioParseError(w, "expected an object")
        g = _lookup(sc.algebras, _get(a, "algebra", w), f"{w}.algebra")
        omega = _lookup(sc.forms, _get(a, "omega", w), f"{w}.omega")
        gens = _get(a, "generators", w, list)
        if len(gens) != g.dim:
            raise ScenarioParseError(f"{w}.generators", f"expected {g.dim} vector fields")
        vfs = [vf_from_json(v, omega.chart, f"{w}.generators[{i}]") for i, v in enumerate(gens)]
        plectic = _invariant(f"{w}.omega", PrePlectic, omega, a.get("n"), name=aname)
        sc.actions[aname] = _invariant(w, LieAction, g, plectic, vfs)
    for mname, m in data.get("moment_maps", {}).items():
        w = f"$.moment_maps.{mname}"
        if not isinstance(m, dict):
            raise ScenarioParseError(w, "expected an object")
        act = _lookup(sc.actions, _get(m, "action", w), f"{w}.action")
        comps = {}
        for r, c in enumerate(_get(m, "components", w, list)):
            cw = f"{w}.components[{r}]"
            if not isinstance(c, dict):
                raise ScenarioParseError(cw, "expected an object")
            idx = _get(c, "indices", cw, list)
            if not all(isinstance(i, int) and 0 <= i < act.algebra.dim for i in idx):
                raise ScenarioParseError(f"{cw}.indices", "basis index out of range")
            comps[tuple(idx)] = form_from_json(_get(c, "form", cw), sc.charts, f"{cw}.form")
        sc.moments[mname] = _invariant(w, MomentMap, act, comps)
    tasks = data.get("tasks", [])
    if not isinstance(tasks, list):
        raise ScenarioParseError("$.tasks", "expected a list")
    for r, t in enumerate(tasks):
        if not isinstance(t, dict) or not isinstance(t.get("type"), str):
            raise ScenarioParseError(f"$.tasks[{r}]", "a task is an object with a 'type'")
    sc.tasks = tasks
    sc.extra = {k: v for k, v in data.items() if k not in
                ("name", "seed", "charts", "forms", "algebras", "actions", "moment_maps", "tasks")}
    return sc


def parse_scenario_text(text: str) -> Scenario:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioParseError(f"line {e.lineno} column {e.colno}", e.msg) from e
    return load_scenario(data)


class ScenarioBuilder:
    """Accumulates named objects into a scenario document."""

    def __init__(self, name: str, seed: int = 0):
        self.doc: dict[str, Any] = {"name": name, "seed": seed, "charts": {}, "forms": {}, "algebras": {},
                                    "actions": {}, "moment_maps": {}, "tasks": []}
        self._charts: dict[Chart, str] = {}

    def chart(self, name: str, c: Chart) -> str:
        self.doc["charts"][name] = chart_to_json(c)
        self._charts[c] = name
        return name

    def _chart_name(self, c: Chart) -> str:
        if c not in self._charts:
            self.chart(f"chart{len(self._charts)}", c)
        return self._charts[c]

    def form(self, name: str, f: DifferentialForm) -> str:
        self.doc["forms"][name] = form_to_json(f, self._chart_name(f.chart))
        return name

    def algebra(self, name: str, g: LieAlgebraFD) -> str:
        self.doc["algebras"][name] = algebra_to_json(g)
        return name

    def action(self, name: str, act: LieAction, omega_name: str | None = None, algebra_name: str | None = None) -> str:
        omega_name = omega_name or self.form(f"{name}_omega", act.plectic.omega)
        algebra_name = algebra_name or self.algebra(f"{name}_algebra", act.algebra)
        self.doc["actions"][name] = {"algebra": algebra_name, "omega": omega_name, "n": act.plectic.n,
                                     "generators": [vf_to_json(v) for v in act.generators]}
        return name

    def moment(self, name: str, m: MomentMap, action_name: str | None = None) -> str:
        action_name = action_name or self.action(f"{name}_action", m.action)
        cname = self._chart_name(m.action.chart)
        comps = [{"indices": list(t), "form": form_to_json(f, cname)} for t, f in sorted(m.components.items())]
        self.doc["moment_maps"][name] = {"action": action_name, "components": comps}
        return name

    def task(self, type_: str, **params) -> None:
        self.doc["tasks"].append({"type": type_, **params})

    def build(self) -> dict:
        return json.loads(json.dumps(self.doc))

"""Scenario tasks: each runs one family of exact checks and returns a deterministic result."""

from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

from . import curved as C
from . import embed as E
from . import moment as M
from .equivariant import solve_primitive_from_potential
from .exterior import DifferentialForm, exterior_derivative, wedge
from .generators import random_curved, random_curved_tuple, random_observable, random_sum_element
from .errors import MultisymplecticError
from .observables import PrePlectic
from .scenario import Scenario, ScenarioParseError, form_terms_to_json, frac_from_str, frac_to_str, load_scenario

MAX_DEFECTS = 3


@dataclass
class TaskResult:
    name: str
    type: str
    passed: bool
    details: dict[str, Any] = field(default_factory=dict)
    defects: list[dict] = field(default_factory=list)
    seconds: float = 0.0

    def to_json(self, timing: bool = False) -> dict:
        out = {"name": self.name, "type": self.type, "passed": self.passed, "details": self.details,
               "defects": self.defects}
        if timing:
            out["seconds"] = round(self.seconds, 3)
        return out


class TaskContext:
    def __init__(self, sc: Scenario, index: int, params: dict, seed: int, overrides: dict):
        self.sc = sc
        self.index = index
        self.params = params
        self.seed = seed
        self.overrides = overrides
        self.where = f"$.tasks[{index}]"
        self.defects: list[dict] = []

    def rng(self) -> random.Random:
        return random.Random(self.seed * 1_000_003 + self.index)

    def param(self, key: str, default=None, kind=None):
        if key in self.overrides and self.overrides[key] is not None:
            return self.overrides[key]
        v = self.params.get(key, default)
        if kind is not None and v is not None and not isinstance(v, kind):
            raise ScenarioParseError(f"{self.where}.{key}", f"expected {kind.__name__}")
        return v

    def ref(self, table: str, key: str):
        name = self.params.get(key)
        tab = getattr(self.sc, table)
        if not isinstance(name, str) or name not in tab:
            raise ScenarioParseError(f"{self.where}.{key}", f"unknown {table[:-1]} {name!r}")
        return tab[name]

    def refs(self, table: str, key: str) -> list:
        names = self.params.get(key)
        tab = getattr(self.sc, table)
        if not isinstance(names, list) or not all(isinstance(n, str) and n in tab for n in names):
            raise ScenarioParseError(f"{self.where}.{key}", f"expected a list of {table} names")
        return [tab[n] for n in names]

    def defect(self, label: str, form: DifferentialForm, **info) -> None:
        if len(self.defects) < MAX_DEFECTS and form:
            self.defects.append({"check": label, "degree": form.degree, "terms": form_terms_to_json(form), **info})


def _report_details(rep: M.MomentReport) -> dict:
    return {"equations": rep.checked, "nonzero": len(rep.defects)}


def _record_report(ctx: TaskContext, rep: M.MomentReport, prefix: str = "") -> None:
    for d in rep.defects[:MAX_DEFECTS]:
        ctx.defect(f"{prefix}{d.equation}", d.form, tuple=list(d.tuple))


def _coeffs(ctx: TaskContext, base):
    pert = ctx.params.get("perturb")
    if pert is None:
        return base
    if not (isinstance(pert, list) and len(pert) == 4 and pert[0] in ("a", "b")
            and isinstance(pert[1], int) and isinstance(pert[2], int)):
        raise ScenarioParseError(f"{ctx.where}.perturb", "expected [\"a\"|\"b\", int, int, rational]")
    return base.perturbed(pert[0], pert[1], pert[2], frac_from_str(pert[3], f"{ctx.where}.perturb[3]"))


def task_verify_moment(ctx: TaskContext) -> tuple[bool, dict]:
    m = ctx.ref("moments", "moment")
    rep = M.verify(m)
    _record_report(ctx, rep)
    return rep.passed, _report_details(rep)


def task_product(ctx: TaskContext) -> tuple[bool, dict]:
    fa, fb = ctx.ref("moments", "a"), ctx.ref("moments", "b")
    coeffs = _coeffs(ctx, M.STANDARD)
    P = M.product(fa, fb, coeffs, check=False)
    rep = M.verify(P)
    _record_report(ctx, rep)
    details = _report_details(rep)
    ok = rep.passed
    if ctx.param("routes", True):
        hat = M.product_hat_form(fa, fb, check=False)
        prim = M.product_via_primitives(fa, fb, check=False)
        details["hat_route_equal"] = hat == P
        details["primitive_route_equal"] = prim == P
        ok = ok and hat == P and prim == P
    if ctx.param("printed_formulas", False):
        printed = M.presymplectic_product_formulas(fa, fb)
        details["printed_formulas_match"] = printed == P
        for t, f in sorted(P.difference(printed).items())[:MAX_DEFECTS]:
            ctx.defect("printed formula", f, tuple=list(t))
        ok = ok and printed == P
    details["components"] = {str(k): len(P.arity(k)) for k in range(1, P.n + 1)}
    return ok, details


def task_diagonal_power(ctx: TaskContext) -> tuple[bool, dict]:
    m = ctx.ref("moments", "moment")
    dp, counts = M.diagonal_power(m, check=False)
    rep = M.verify(dp)
    _record_report(ctx, rep)
    rr = M.diagonal_power_via_restriction(m, check=False)
    counts_ok = all(counts[k] == 2 ** k - 1 for k in counts)
    details = _report_details(rep)
    details.update({"restriction_route_equal": rr == dp, "term_counts": {str(k): v for k, v in sorted(counts.items())},
                    "term_counts_ok": counts_ok})
    return rep.passed and rr == dp and counts_ok, details


def task_moment_sum(ctx: TaskContext) -> tuple[bool, dict]:
    """Sum of moment maps (optionally of their diagonal powers) verified against the summed form."""
    ms = ctx.refs("moments", "moments")
    if ctx.param("power", False):
        ms = [M.diagonal_power(m, check=False)[0] for m in ms]
    total = ms[0]
    for m in ms[1:]:
        total = M.moment_sum(total, m, check=False)
    rep = M.verify(total)
    _record_report(ctx, rep)
    details = _report_details(rep)
    ok = rep.passed
    if "omega" in ctx.params:
        want = ctx.ref("forms", "omega")
        details["omega_matches"] = total.plectic.omega == want
        ok = ok and details["omega_matches"]
    return ok, details


def task_associativity(ctx: TaskContext) -> tuple[bool, dict]:
    fa, fb, fc = ctx.ref("moments", "a"), ctx.ref("moments", "b"), ctx.ref("moments", "c")
    r = M.associativity_defect(fa, fb, fc)
    _record_report(ctx, r.left_report, "left ")
    _record_report(ctx, r.right_report, "right ")
    details = {"maps_differ": r.maps_differ, "difference_is_exact_term": r.difference_is_exact_term,
               "left_passes": r.left_report.passed, "right_passes": r.right_report.passed,
               "sign": r.sign}
    ok = r.maps_differ and r.difference_is_exact_term and r.left_report.passed and r.right_report.passed
    return ok, details


def task_primitive_solve(ctx: TaskContext) -> tuple[bool, dict]:
    act = ctx.ref("actions", "action")
    beta = ctx.ref("forms", "potential")
    details: dict[str, Any] = {}
    ok = True
    if "potential_derivative" in ctx.params:
        want = ctx.ref("forms", "potential_derivative")
        details["potential_derivative_matches"] = exterior_derivative(beta) == want
        ok = ok and details["potential_derivative_matches"]
    phi, s = solve_primitive_from_potential(act, beta)
    m = M.moment_from_primitive(act, phi, check=False)
    rep = M.verify(m)
    _record_report(ctx, rep)
    details.update(_report_details(rep))
    details["coefficients"] = [frac_to_str(x) for x in s]
    return ok and rep.passed, details


def task_cartan_h3(ctx: TaskContext) -> tuple[bool, dict]:
    fa, fb = ctx.ref("moments", "a"), ctx.ref("moments", "b")
    H, rep = M.cartan_h3_check(fa, fb)
    _record_report(ctx, rep)
    details = _report_details(rep)
    details["equals_product"] = H == M.product(fa, fb, check=False)
    return rep.passed, details


def task_form_identity(ctx: TaskContext) -> tuple[bool, dict]:
    """``kind``: "d" checks d(lhs) = rhs; "wedge_square" checks lhs ^ lhs = rhs."""
    kind = ctx.params.get("kind")
    lhs, rhs = ctx.ref("forms", "lhs"), ctx.ref("forms", "rhs")
    if kind == "d":
        got = exterior_derivative(lhs)
    elif kind == "wedge_square":
        got = wedge(lhs, lhs)
    else:
        raise ScenarioParseError(f"{ctx.where}.kind", "expected 'd' or 'wedge_square'")
    ctx.defect(kind, got - rhs)
    return got == rhs, {"kind": kind}


def _matrix(ctx: TaskContext, data, where: str, n: int) -> list[list[Fraction]]:
    if not isinstance(data, list) or len(data) != n or not all(isinstance(r, list) and len(r) == n for r in data):
        raise ScenarioParseError(where, f"expected a {n}x{n} matrix")
    return [[frac_from_str(x, f"{where}[{i}][{j}]") for j, x in enumerate(r)] for i, r in enumerate(data)]


def _matmul(A, B):
    n = len(A)
    return [[sum((A[i][k] * B[k][j] for k in range(n)), Fraction(0)) for j in range(n)] for i in range(n)]


def task_hyperkahler(ctx: TaskContext) -> tuple[bool, dict]:
    """Quaternion relations of J_1, J_2, J_3, omega_i(u, v) = g(J_i u, v), and Omega = sum omega_i ^ omega_i."""
    from .standard import constant_matrix

    forms = ctx.refs("forms", "forms")
    n = forms[0].chart.dim
    g = _matrix(ctx, ctx.params.get("metric"), f"{ctx.where}.metric", n)
    Js = ctx.params.get("complex_structures")
    if not isinstance(Js, list) or len(Js) != 3:
        raise ScenarioParseError(f"{ctx.where}.complex_structures", "expected three matrices")
    J = [_matrix(ctx, m, f"{ctx.where}.complex_structures[{r}]", n) for r, m in enumerate(Js)]
    minus_id = [[Fraction(-int(i == j)) for j in range(n)] for i in range(n)]
    squares = all(_matmul(j, j) == minus_id for j in J)
    triple = _matmul(_matmul(J[0], J[1]), J[2]) == minus_id
    # J as a matrix acts on column vectors: (J u)_a = sum_b J[a][b] u_b
    kahler = True
    for w, j in zip(forms, J):
        W = constant_matrix(w)
        gj = [[sum((j[c][a] * g[c][b] for c in range(n)), Fraction(0)) for b in range(n)] for a in range(n)]
        kahler = kahler and W == gj
    Omega = None
    for w in forms:
        sq = wedge(w, w)
        Omega = sq if Omega is None else Omega + sq
    details = {"squares_minus_one": squares, "triple_product_minus_one": triple, "forms_from_metric": kahler}
    ok = squares and triple and kahler
    if "omega" in ctx.params:
        want = ctx.ref("forms", "omega")
        details["omega_matches"] = Omega == want
        ctx.defect("Omega", Omega - want)
        ok = ok and Omega == want
    return ok, details


def task_embed_check(ctx: TaskContext) -> tuple[bool, dict]:
    wa, wb = ctx.ref("forms", "a"), ctx.ref("forms", "b")
    pa, pb = PrePlectic(wa), PrePlectic(wb)
    space = E.SumSpace(pa, pb)
    H = E.EmbeddingH(space, _coeffs(ctx, E.STANDARD_T))
    rng = ctx.rng()
    max_arity = ctx.param("max_arity", 4, int)
    ntup = ctx.param("tuples", 6, int)
    checked = failed = 0
    for N in range(1, max_arity + 1):
        for _ in range(ntup):
            xs = [random_sum_element(space, rng) for _ in range(N)]
            D = E.verify_linfty_morphism(H, xs)
            checked += 1
            if D:
                failed += 1
                ctx.defect("morphism", D, arity=N, degrees=[x.degree for x in xs])
    lemma_checked = lemma_failed = 0
    for _ in range(ntup):
        k = rng.randint(0, 3)
        m = rng.randint(0 if k else 1, 3)
        D = E.lemma_square_check(space, [random_observable(pa, 0, rng) for _ in range(k)],
                                 [random_observable(pb, 0, rng) for _ in range(m)])
        lemma_checked += 1
        if D:
            lemma_failed += 1
            ctx.defect("square lemma", D, k=k, m=m)
    details: dict[str, Any] = {"morphism_tuples": checked, "morphism_failures": failed,
                               "lemma_tuples": lemma_checked, "lemma_failures": lemma_failed}
    ok = failed == 0 and lemma_failed == 0
    if pa.n == 1 and pb.n == 1:
        h2 = h3 = h3neg = 0
        for _ in range(ntup):
            f, g, h = (random_sum_element(space, rng, degree=0) for _ in range(3))
            h2 += H([f, g]).form == E.presymplectic_h2(space, f, g)
            v, printed = H([f, g, h]).form, E.presymplectic_h3(space, f, g, h)
            h3 += v == printed
            h3neg += v == -printed
        details.update({"h2_formula_matches": h2 == ntup, "h3_formula_matches": h3 == ntup,
                        "h3_formula_matches_negated": h3neg == ntup})
        ok = ok and h2 == ntup
    if "moments" in ctx.params:
        fa, fb = ctx.refs("moments", "moments")
        try:
            res = E.compose_H_with_moments(H, fa, fb)
            details["composition_signs"] = {str(k): v for k, v in sorted(res.signs.items())}
        except E.NoSignAssignment as e:
            details["composition_signs"] = str(e)
            ok = False
    return ok, details


def task_curved_check(ctx: TaskContext) -> tuple[bool, dict]:
    w = ctx.ref("forms", "omega")
    p = PrePlectic(w)
    rng = ctx.rng()
    max_arity = ctx.param("max_arity", p.n + 3, int)
    ntup = ctx.param("tuples", 6, int)
    checked = failed = 0
    for m in range(0, max_arity + 1):
        for slots in (0, 1, 2) if m else (0,):
            for _ in range(ntup):
                xs = random_curved_tuple(p, m, rng, curvature_slots=slots)
                D = C.curved_jacobi_defect(p, xs)
                checked += 1
                if D:
                    failed += 1
                    ctx.defect("curved jacobi", D.form, arity=m, degrees=[x.degree for x in xs])
    closed = C.D(p, C.curvature(p)).is_zero()
    d2_ok = True
    for _ in range(ntup):
        x = random_curved(p, rng.randint(1 - p.n, 2), rng)
        val = C.D(p, C.D(p, x)) + C.curved_bracket(p, [C.curvature(p), x])
        d2_ok = d2_ok and val.is_zero()
    details: dict[str, Any] = {"tuples": checked, "failures": failed, "curvature_closed": closed,
                               "d_squared_plus_curvature": d2_ok}
    ok = failed == 0 and closed and d2_ok
    if p.n == 1:
        tuples = [random_curved_tuple(p, k, rng, curvature_slots=rng.randint(0, 1)) for k in (1, 2, 3) for _ in range(ntup)]
        rep = C.symplectic_strict_morphism_check(p, tuples)
        details["strict_morphism"] = rep.passed
        ok = ok and rep.passed
    return ok, details


TASKS: dict[str, Callable[[TaskContext], tuple[bool, dict]]] = {
    "verify_moment": task_verify_moment,
    "product": task_product,
    "diagonal_power": task_diagonal_power,
    "moment_sum": task_moment_sum,
    "embed_check": task_embed_check,
    "curved_check": task_curved_check,
    "associativity": task_associativity,
    "primitive_solve": task_primitive_solve,
    "cartan_h3": task_cartan_h3,
    "form_identity": task_form_identity,
    "hyperkahler": task_hyperkahler,
}


def run_task(sc: Scenario, index: int, seed: int, overrides: dict) -> TaskResult:
    t = sc.tasks[index]
    kind = t["type"]
    if kind not in TASKS:
        raise ScenarioParseError(f"$.tasks[{index}].type", f"unknown task type {kind!r}")
    ctx = TaskContext(sc, index, t, seed, overrides)
    start = time.perf_counter()
    try:
        ok, details = TASKS[kind](ctx)
    except MultisymplecticError as e:
        # a domain error inside a task (say an ansatz with no solution) is a failed check
        ok, details = False, {"error": f"{type(e).__name__}: {e}"}
    name = t.get("name", f"{index}:{kind}")
    return TaskResult(name, kind, bool(ok), details, ctx.defects, time.perf_counter() - start)


@dataclass
class Report:
    scenario: str
    seed: int
    tasks: list[TaskResult]

    @property
    def passed(self) -> bool:
        return all(t.passed for t in self.tasks)

    def to_json(self, timing: bool = False) -> dict:
        return {"scenario": self.scenario, "seed": self.seed, "passed": self.passed,
                "tasks": [t.to_json(timing) for t in self.tasks]}

    def to_text(self, timing: bool = False) -> str:
        lines = [f"scenario {self.scenario} (seed {self.seed}): {'PASS' if self.passed else 'FAIL'}"]
        for t in self.tasks:
            extra = f" [{t.seconds:.3f}s]" if timing else ""
            lines.append(f"  {'PASS' if t.passed else 'FAIL'} {t.name}{extra}")
            for k in sorted(t.details):
                lines.append(f"      {k}: {_text_value(t.details[k])}")
            for d in t.defects:
                lines.append(f"      defect {d['check']}: degree {d['degree']}, {len(d['terms'])} terms")
        return "\n".join(lines) + "\n"


def _text_value(v) -> str:
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, dict):
        return ", ".join(f"{k}={_text_value(v[k])}" for k in sorted(v))
    if isinstance(v, list):
        return "[" + ", ".join(_text_value(x) for x in v) + "]"
    return str(v)


def _run_from_document(doc: dict, index: int, seed: int, overrides: dict) -> TaskResult:
    return run_task(load_scenario(doc), index, seed, overrides)


def run_scenario(sc: Scenario, seed: int | None = None, overrides: dict | None = None,
                 jobs: int = 1, document: dict | None = None) -> Report:
    """Run every task; with ``jobs`` > 1 and the source ``document``, tasks run in worker processes.

    Each task draws from its own generator seeded by (seed, index), so the
    merged report does not depend on scheduling.
    """
    seed = sc.seed if seed is None else seed
    overrides = overrides or {}
    n = len(sc.tasks)
    if jobs > 1 and document is not None and n > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, n)) as pool:
            futures = [pool.submit(_run_from_document, document, i, seed, overrides) for i in range(n)]
            results = [f.result() for f in futures]
    else:
        results = [run_task(sc, i, seed, overrides) for i in range(n)]
    return Report(sc.name, seed, results)

"""The built-in scenario suite, assembled with ScenarioBuilder and loaded like any scenario file."""

from __future__ import annotations

from typing import Callable

from .equivariant import LieAction, LieAlgebraFD
from .exterior import Chart, DifferentialForm, PolyVectorField, euclidean
from .observables import PrePlectic
from .scenario import Scenario, ScenarioBuilder, load_scenario
from .standard import constant_matrix, heisenberg_plane, heisenberg_translations, sl2_plane, so2_plane, so3_volume


def _torus() -> Chart:
    return Chart(("t1", "t2", "t3", "x4"), (True, True, True, False))


def _quaternion_forms(c: Chart) -> list[DifferentialForm]:
    B = lambda *idx: DifferentialForm.basis(c, *idx)
    return [B(0, 1) + B(2, 3), B(0, 2) - B(1, 3), B(0, 3) + B(1, 2)]


def _sum_of_squares(forms) -> DifferentialForm:
    total = forms[0] ^ forms[0]
    for w in forms[1:]:
        total = total + (w ^ w)
    return total


def _circle_action(omega: DifferentialForm) -> LieAction:
    c = omega.chart
    gen = PolyVectorField(c, [int(t == 0) for t in range(c.dim)])
    return LieAction(LieAlgebraFD(1, name="u1"), PrePlectic(omega), [gen])


def _complex_structures(forms) -> list[list[list[str]]]:
    # with g the identity, omega(u, v) = g(J u, v) gives J = W^T
    out = []
    for w in forms:
        W = constant_matrix(w)
        n = len(W)
        out.append([[str(W[b][a]) for b in range(n)] for a in range(n)])
    return out


def presym_product() -> dict:
    b = ScenarioBuilder("presym_product", seed=1)
    b.moment("fa", heisenberg_plane(("x1", "y1")))
    b.moment("fb", heisenberg_plane(("x2", "y2")))
    b.task("verify_moment", moment="fa")
    b.task("verify_moment", moment="fb")
    b.task("product", a="fa", b="fb", routes=True, printed_formulas=True)
    return b.build()


def torus_noowo() -> dict:
    b = ScenarioBuilder("torus_noowo", seed=2)
    T = _torus()
    b.chart("torus", T)
    B = lambda *idx, **kw: DifferentialForm.basis(T, *idx, **kw)
    omega = B(0, 1) + B(2, 3)
    b.form("omega", omega)
    b.form("omega_squared", B(0, 1, 2, 3, coeff=2))
    b.form("potential", B(0, 1, 2, coeff=T.coordinate(3) * -2))
    b.task("form_identity", kind="wedge_square", lhs="omega", rhs="omega_squared")
    b.task("form_identity", kind="d", lhs="potential", rhs="omega_squared")
    b.action("circle", _circle_action(omega ^ omega), omega_name="omega_squared")
    b.task("primitive_solve", action="circle", potential="potential", potential_derivative="omega_squared")
    return b.build()


def hyperkahler_torus() -> dict:
    b = ScenarioBuilder("hyperkahler_torus", seed=3)
    T = _torus()
    b.chart("torus", T)
    forms = _quaternion_forms(T)
    for i, w in enumerate(forms, 1):
        b.form(f"omega{i}", w)
    b.form("Omega", DifferentialForm.basis(T, 0, 1, 2, 3, coeff=6))
    b.form("potential", DifferentialForm.basis(T, 0, 1, 2, coeff=T.coordinate(3) * -6))
    ident = [[str(int(i == j)) for j in range(4)] for i in range(4)]
    b.task("hyperkahler", forms=["omega1", "omega2", "omega3"], metric=ident,
           complex_structures=_complex_structures(forms), omega="Omega")
    b.action("circle", _circle_action(_sum_of_squares(forms)), omega_name="Omega")
    b.task("primitive_solve", action="circle", potential="potential", potential_derivative="Omega")
    return b.build()


def hk_translations() -> dict:
    b = ScenarioBuilder("hk_translations", seed=4)
    c = euclidean("x1", "y1", "x2", "y2")
    b.chart("r4", c)
    forms = _quaternion_forms(c)
    for i, w in enumerate(forms, 1):
        b.form(f"omega{i}", w)
    b.form("Omega", DifferentialForm.basis(c, 0, 1, 2, 3, coeff=6))
    ident = [[str(int(i == j)) for j in range(4)] for i in range(4)]
    b.task("hyperkahler", forms=["omega1", "omega2", "omega3"], metric=ident,
           complex_structures=_complex_structures(forms), omega="Omega")
    g, maps = heisenberg_translations(c, forms)
    b.algebra("heisenberg", g)
    for i, m in enumerate(maps, 1):
        b.action(f"translations{i}", m.action, omega_name=f"omega{i}", algebra_name="heisenberg")
        b.moment(f"f{i}", m, action_name=f"translations{i}")
        b.task("verify_moment", moment=f"f{i}")
    b.task("moment_sum", moments=["f1", "f2", "f3"], power=True, omega="Omega")
    return b.build()


def assoc_defect() -> dict:
    b = ScenarioBuilder("assoc_defect", seed=5)
    for i, name in enumerate(("fa", "fb", "fc"), 1):
        b.moment(name, heisenberg_plane((f"x{i}", f"y{i}")))
    b.task("associativity", a="fa", b="fb", c="fc")
    return b.build()


def embed_suite() -> dict:
    b = ScenarioBuilder("embed_suite", seed=6)
    pairs = [("heis_a", heisenberg_plane(("x", "y")), "heis_b", heisenberg_plane(("u", "v"))),
             ("sl2", sl2_plane(("x", "y")), "so3", so3_volume(("u", "v", "w")))]
    for na, ma, nb, mb in pairs:
        for name, m in ((na, ma), (nb, mb)):
            b.form(f"{name}_omega", m.action.plectic.omega)
            b.moment(name, m, action_name=b.action(f"{name}_action", m.action, omega_name=f"{name}_omega"))
        b.task("embed_check", a=f"{na}_omega", b=f"{nb}_omega", max_arity=4, tuples=8, moments=[na, nb])
    # the 2-plectic factor first
    b.task("embed_check", a="so3_omega", b="sl2_omega", max_arity=4, tuples=4, moments=["so3", "sl2"])
    return b.build()


def curved_suite() -> dict:
    b = ScenarioBuilder("curved_suite", seed=7)
    r2, r3, r4 = euclidean("x", "y"), euclidean("x", "y", "z"), euclidean("x1", "y1", "x2", "y2")
    b.form("plane", DifferentialForm.basis(r2, 0, 1))
    b.form("volume", DifferentialForm.basis(r3, 0, 1, 2))
    b.form("r4_symplectic", DifferentialForm.basis(r4, 0, 1) + DifferentialForm.basis(r4, 2, 3))
    for name in ("plane", "volume", "r4_symplectic"):
        b.task("curved_check", omega=name, max_arity=5, tuples=3)
    return b.build()


def cartan_h3() -> dict:
    b = ScenarioBuilder("cartan_h3", seed=8)
    b.moment("sl2_a", sl2_plane(("x1", "y1")))
    b.moment("sl2_b", sl2_plane(("x2", "y2")))
    b.moment("so2_a", so2_plane(("x1", "y1")))
    b.moment("so2_b", so2_plane(("x2", "y2")))
    b.task("cartan_h3", a="sl2_a", b="sl2_b")
    b.task("cartan_h3", a="so2_a", b="so2_b")
    return b.build()


def diagonal_power_r4() -> dict:
    b = ScenarioBuilder("diagonal_power_r4", seed=9)
    c = euclidean("x1", "y1", "x2", "y2")
    _, (m,) = heisenberg_translations(c, [DifferentialForm.basis(c, 0, 1) + DifferentialForm.basis(c, 2, 3)])
    b.moment("f", m)
    b.task("verify_moment", moment="f")
    b.task("diagonal_power", moment="f")
    return b.build()


BUILTINS: dict[str, tuple[str, Callable[[], dict]]] = {
    "presym_product": ("product of two translation moment maps on planes", presym_product),
    "torus_noowo": ("T^3 x R with omega not a wedge of omegas; circle action from a potential", torus_noowo),
    "hyperkahler_torus": ("quaternionic forms on T^3 x R and Omega = sum of squares", hyperkahler_torus),
    "hk_translations": ("R^4 translations for the three Kahler forms, summed squares", hk_translations),
    "assoc_defect": ("the two triple products differ by an exact term", assoc_defect),
    "embed_suite": ("L-infinity embedding into the product observables", embed_suite),
    "curved_suite": ("curved Jacobi identities with curvature -omega", curved_suite),
    "cartan_h3": ("Cartan-model H_3 against the product moment map", cartan_h3),
    "diagonal_power_r4": ("diagonal power of an R^4 translation moment map", diagonal_power_r4),
}


def list_builtins() -> list[str]:
    return list(BUILTINS)


def builtin_document(name: str) -> dict:
    if name not in BUILTINS:
        raise KeyError(name)
    return BUILTINS[name][1]()


def load_builtin(name: str) -> Scenario:
    return load_scenario(builtin_document(name))

"""Anchored-bundle structure data and the odd hamiltonians they generate.

An AlgebroidSpec carries polynomial anchor entries A^i_a(x) and structure
functions C^c_ab(x).  It generates the cubic hamiltonian

    mu = xi^a A^i_a(x) xs_i - 1/2 C^c_ab(x) xi^a xi^b xis_c

on the cotangent bundle of the parity-reversed total space, and the whole
calculus (structure equations, doubles, Schouten brackets, BRST and Weil
differentials) happens through the canonical bracket with such hamiltonians.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .brackets import canonical_bracket, derived_bracket, legendre
from .cartan import VectorField
from .chart import (ChartError, CotangentOfParityReversed, cotangent_chart,
                    plain_chart, EVEN, ODD)
from .poly import SuperPolynomial, poly_sum
from .rationals import GaussianRational


class SpecError(ValueError):
    pass


def _as_poly(value, chart):
    if isinstance(value, SuperPolynomial):
        if value.chart is not chart:
            return value.substitute(chart, {})   # rebind by variable name
        return value
    return SuperPolynomial.constant(chart, value)


@dataclass
class AlgebroidSpec:
    """Base coordinates, fiber basis and the polynomial structure data.

    anchor[a][i] is the coefficient of d/dx^i in the image of the fiber
    basis vector e_a; structure[a][b][c] is the e_c-coefficient of the
    bracket of e_a and e_b, antisymmetric in (a, b).
    """
    base_names: tuple
    fiber_names: tuple
    anchor: tuple          # anchor[a][i] : SuperPolynomial on the big chart
    structure: tuple       # structure[a][b][c]
    bundle: CotangentOfParityReversed = field(init=False, repr=False)

    @staticmethod
    def build(base_names, fiber_names, anchor_entries=None, structure_entries=None,
              bundle=None):
        """anchor_entries: {(a, i): poly-or-scalar}; structure_entries: {(a, b, c): ...}.

        Indices are 1-based.  Structure entries are antisymmetrized: an (a, b, c)
        entry fixes the (b, a, c) entry to its negative; contradictions raise.
        """
        base_names = tuple(base_names)
        fiber_names = tuple(fiber_names)
        if bundle is None:
            bundle = cotangent_chart(base_names, fiber_names)
        chart = bundle.chart
        n, r = len(base_names), len(fiber_names)
        zero = SuperPolynomial.zero(chart)
        A = [[zero for _ in range(n)] for _ in range(r)]
        for (a, i), val in (anchor_entries or {}).items():
            A[a - 1][i - 1] = _as_poly(val, chart)
        C = [[[zero for _ in range(r)] for _ in range(r)] for _ in range(r)]
        given = {}
        for (a, b, c), val in (structure_entries or {}).items():
            given[(a - 1, b - 1, c - 1)] = _as_poly(val, chart)
        for (a, b, c), val in given.items():
            if a == b and not val.is_zero():
                raise SpecError(
                    f"structure entry ({a+1},{b+1},{c+1}) must vanish on the diagonal")
            mirror = given.get((b, a, c))
            if mirror is not None and not (mirror + val).is_zero():
                raise SpecError(
                    f"structure entries ({a+1},{b+1},{c+1}) and ({b+1},{a+1},{c+1}) "
                    f"are not antisymmetric")
            C[a][b][c] = val
            C[b][a][c] = -val if mirror is None else mirror
        spec = AlgebroidSpec(base_names, fiber_names,
                             tuple(tuple(row) for row in A),
                             tuple(tuple(tuple(col) for col in plane) for plane in C))
        spec.bundle = bundle
        spec.validate()
        return spec

    def __post_init__(self):
        self.bundle = cotangent_chart(self.base_names, self.fiber_names)

    @property
    def chart(self):
        return self.bundle.chart

    @property
    def rank(self):
        return len(self.fiber_names)

    def validate(self):
        chart = self.chart
        base_vars = set(self.bundle.base)
        for a in range(self.rank):
            for i in range(len(self.base_names)):
                if not self.anchor[a][i].uses_only(base_vars):
                    raise SpecError("anchor entries must depend on base variables only")
        for a in range(self.rank):
            for b in range(self.rank):
                for c in range(self.rank):
                    entry = self.structure[a][b][c]
                    if not entry.uses_only(base_vars):
                        raise SpecError("structure functions must depend on base variables only")
                    if not (entry + self.structure[b][a][c]).is_zero():
                        raise SpecError("structure table is not antisymmetric")

    def antisymmetry_residuals(self):
        out = []
        for a in range(self.rank):
            for b in range(a, self.rank):
                for c in range(self.rank):
                    r = self.structure[a][b][c] + self.structure[b][a][c]
                    if not r.is_zero():
                        out.append(((a + 1, b + 1, c + 1), r))
        return out


def build_mu(spec: AlgebroidSpec) -> SuperPolynomial:
    """mu = xi^a A^i_a xs_i - 1/2 C^c_ab xi^a xi^b xis_c, of bidegree (1, 2)."""
    chart = spec.chart
    xi = [SuperPolynomial.variable(chart, f.name) for f in spec.bundle.fiber]
    xis = [SuperPolynomial.variable(chart, m.name) for m in spec.bundle.fiber_momenta]
    xs = [SuperPolynomial.variable(chart, m.name) for m in spec.bundle.base_momenta]
    half = GaussianRational(Fraction(1, 2))
    terms = []
    for a in range(spec.rank):
        for i in range(len(spec.base_names)):
            entry = spec.anchor[a][i]
            if not entry.is_zero():
                terms.append(xi[a] * entry * xs[i])
    for a in range(spec.rank):
        for b in range(spec.rank):
            for c in range(spec.rank):
                entry = spec.structure[a][b][c]
                if not entry.is_zero():
                    terms.append(-(entry * xi[a] * xi[b] * xis[c]).scale(half))
    return poly_sum(chart, terms)


def dual_chart_for(spec: AlgebroidSpec) -> CotangentOfParityReversed:
    """Cotangent chart of the dual bundle: same base names, th/ths fibers."""
    dual_fibers = tuple(f"th{k+1}" for k in range(spec.rank))
    return cotangent_chart(spec.base_names, dual_fibers)


def build_gamma_star(dual_spec: AlgebroidSpec, target_bundle: CotangentOfParityReversed) -> SuperPolynomial:
    """Transport the dual-side hamiltonian to the primal chart.

    Equals the direct formula Abar^{ai} xs_i xis_a - 1/2 xi^c Cbar^{ab}_c xis_a xis_b
    and is computed as the Legendre image of build_mu on the dual chart, which
    keeps a single code path for both sides.
    """
    gamma = build_mu(dual_spec)
    return legendre(gamma, dual_spec.chart, target_bundle.chart)


def cartan_differential(spec: AlgebroidSpec):
    """The degree-1 vector field on Pi A determined by the same data.

    d = xi^a A^i_a d/dx^i - 1/2 C^c_ab xi^a xi^b d/dxi^c.  Squaring it is an
    independent route to the structure equations.
    """
    names = []
    for x in spec.base_names:
        names.append((x, EVEN, 0, 0))
    for f in spec.fiber_names:
        names.append((f, ODD, 0, 1))
    chart = plain_chart(names)
    xi = [SuperPolynomial.variable(chart, f) for f in spec.fiber_names]
    base_map = {name: SuperPolynomial.variable(chart, name) for name in spec.base_names}
    comps = {}
    half = GaussianRational(Fraction(1, 2))
    for i, x in enumerate(spec.base_names):
        acc = SuperPolynomial.zero(chart)
        for a in range(spec.rank):
            entry = spec.anchor[a][i]
            if not entry.is_zero():
                acc = acc + xi[a] * entry.substitute(chart, base_map)
        comps[x] = acc
    for c, f in enumerate(spec.fiber_names):
        acc = SuperPolynomial.zero(chart)
        for a in range(spec.rank):
            for b in range(spec.rank):
                entry = spec.structure[a][b][c]
                if not entry.is_zero():
                    acc = acc - (entry.substitute(chart, base_map) * xi[a] * xi[b]).scale(half)
        comps[f] = acc
    return VectorField(chart, comps, ODD)


# ---------------------------------------------------------------------------
# structure-equation checks
# ---------------------------------------------------------------------------


@dataclass
class Check:
    name: str
    residual: SuperPolynomial | None
    passed: bool
    note: str = ""

    @staticmethod
    def from_residual(name, residual, note=""):
        return Check(name, residual, residual.is_zero(), note)


@dataclass
class CheckReport:
    checks: list

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name):
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def check_lie_algebroid(spec: AlgebroidSpec) -> CheckReport:
    """Structure equations via the self-bracket of mu; failures are data."""
    checks = []
    for key, res in spec.antisymmetry_residuals():
        checks.append(Check.from_residual(f"antisymmetry{key}", res))
    mu = build_mu(spec)
    checks.append(Check.from_residual("{mu,mu}", canonical_bracket(mu, mu)))
    return CheckReport(checks)


@dataclass
class ThetaHamiltonian:
    """theta = mu + gamma* + phi-part + psi-part on the primal big chart."""
    bundle: CotangentOfParityReversed
    mu: SuperPolynomial
    gamma_star: SuperPolynomial
    phi: SuperPolynomial
    psi_star: SuperPolynomial

    @property
    def chart(self):
        return self.bundle.chart

    @property
    def total(self) -> SuperPolynomial:
        return self.mu + self.gamma_star + self.phi + self.psi_star

    def validate_bidegrees(self):
        want = {"mu": (1, 2), "gamma*": (2, 1), "psi*": (3, 0)}
        parts = {"mu": self.mu, "gamma*": self.gamma_star, "psi*": self.psi_star}
        for key, part in parts.items():
            if part.is_zero():
                continue
            e, d, k = part.grading()
            if (e, d) != want[key] or k != 3:
                raise SpecError(f"{key} has bidegree {(e, d)}, expected {want[key]}")
        # phi of degree 2 is tolerated as an anomaly probe (it spoils the
        # total grading but keeps every structure residual well defined)
        for e, d, _k in self.phi.gradings():
            if e != 0 or d not in (2, 3):
                raise SpecError(f"phi has bidegree {(e, d)}, expected (0,3) or the (0,2) probe")


@dataclass
class ProtoBialgebroidSpec:
    a_side: AlgebroidSpec
    astar_side: AlgebroidSpec          # same base names, th-fibers
    phi: SuperPolynomial | None = None       # on the primal chart, cubic in xi
    psi: SuperPolynomial | None = None       # on the dual chart, cubic in th

    @staticmethod
    def build(a_side: AlgebroidSpec, astar_entries_anchor=None, astar_entries_structure=None,
              phi=None, psi=None):
        dual_bundle = dual_chart_for(a_side)
        astar = AlgebroidSpec.build(a_side.base_names,
                                    tuple(f.name for f in dual_bundle.fiber),
                                    astar_entries_anchor, astar_entries_structure,
                                    bundle=dual_bundle)
        return ProtoBialgebroidSpec(a_side, astar, phi, psi)

    def theta(self) -> ThetaHamiltonian:
        bundle = self.a_side.bundle
        chart = bundle.chart
        mu = build_mu(self.a_side)
        gamma_star = build_gamma_star(self.astar_side, bundle)
        zero = SuperPolynomial.zero(chart)
        phi = self.phi if self.phi is not None else zero
        if phi.chart is not chart:
            raise SpecError("phi must live on the primal chart")
        allowed = set(bundle.base) | set(bundle.fiber)
        if not phi.uses_only(allowed):
            raise SpecError("phi may use base and fiber coordinates only")
        if self.psi is not None and not self.psi.is_zero():
            dual_allowed = set(self.astar_side.bundle.base) | set(self.astar_side.bundle.fiber)
            if not self.psi.uses_only(dual_allowed):
                raise SpecError("psi may use base and dual fiber coordinates only")
            psi_star = legendre(self.psi, self.astar_side.chart, chart)
        else:
            psi_star = zero
        theta = ThetaHamiltonian(bundle, mu, gamma_star, phi, psi_star)
        theta.validate_bidegrees()
        return theta

def check_bialgebroid(proto: ProtoBialgebroidSpec) -> CheckReport:
    """{mu,mu}, {gamma,gamma} and {mu, gamma*} residuals; all empty iff compatible."""
    if (proto.phi is not None and not proto.phi.is_zero()) or (
            proto.psi is not None and not proto.psi.is_zero()):
        raise SpecError("cubic terms present; use check_proto")
    theta = proto.theta()
    mu, gs = theta.mu, theta.gamma_star
    checks = [
        Check.from_residual("{mu,mu}", canonical_bracket(mu, mu)),
        Check.from_residual("{gamma,gamma}", canonical_bracket(gs, gs)),
        Check.from_residual("{mu,gamma*}", canonical_bracket(mu, gs)),
    ]
    return CheckReport(checks)


def check_proto(proto: ProtoBialgebroidSpec) -> CheckReport:
    """The five bigraded structure equations of a cubic hamiltonian.

    For a genuine degree-3 theta they are exactly the bigraded components of
    half its self-bracket, so all five vanish iff {theta,theta} = 0; they are
    also evaluated verbatim for off-degree probes, where the self-bracket
    alone would hide the anomaly."""
    theta = proto.theta()
    half = GaussianRational(Fraction(1, 2))
    br = lambda a, b: canonical_bracket(a, b, theta.chart)
    mu, gs, phi, psi = theta.mu, theta.gamma_star, theta.phi, theta.psi_star
    checks = [
        Check.from_residual("1/2{mu,mu}+{gamma*,phi}", br(mu, mu).scale(half) + br(gs, phi)),
        Check.from_residual("{mu,gamma*}+{phi,psi*}", br(mu, gs) + br(phi, psi)),
        Check.from_residual("1/2{gamma*,gamma*}+{mu,psi*}", br(gs, gs).scale(half) + br(mu, psi)),
        Check.from_residual("{mu,phi}", br(mu, phi)),
        Check.from_residual("{gamma*,psi*}", br(gs, psi)),
    ]
    return CheckReport(checks)


def swap_proto(proto: ProtoBialgebroidSpec) -> ProtoBialgebroidSpec:
    """Exchange the two sides (A*, A); fibers are renamed to the fixed decorations."""
    a, astar = proto.a_side, proto.astar_side
    n = len(a.base_names)

    def entries_from(spec, new_chart):
        base_map = {x: SuperPolynomial.variable(new_chart, x) for x in spec.base_names}
        anchor = {}
        for ai in range(spec.rank):
            for i in range(n):
                if not spec.anchor[ai][i].is_zero():
                    anchor[(ai + 1, i + 1)] = spec.anchor[ai][i].substitute(new_chart, base_map)
        structure = {}
        for x in range(spec.rank):
            for y in range(spec.rank):
                for z in range(spec.rank):
                    entry = spec.structure[x][y][z]
                    if x < y and not entry.is_zero():
                        structure[(x + 1, y + 1, z + 1)] = entry.substitute(new_chart, base_map)
        return anchor, structure

    primal_fibers = tuple(f"xi{k+1}" for k in range(astar.rank))
    primal_bundle = cotangent_chart(a.base_names, primal_fibers)
    anchor_p, structure_p = entries_from(astar, primal_bundle.chart)
    new_primal = AlgebroidSpec.build(a.base_names, primal_fibers, anchor_p, structure_p,
                                     bundle=primal_bundle)
    dual_bundle = dual_chart_for(new_primal)
    anchor_d, structure_d = entries_from(a, dual_bundle.chart)
    new_dual = AlgebroidSpec.build(a.base_names, tuple(f.name for f in dual_bundle.fiber),
                                   anchor_d, structure_d, bundle=dual_bundle)
    # cubic terms swap roles: the old psi becomes the new phi and vice versa
    new_phi = None
    if proto.psi is not None and not proto.psi.is_zero():
        ren = {f"th{k+1}": SuperPolynomial.variable(primal_bundle.chart, f"xi{k+1}")
               for k in range(astar.rank)}
        new_phi = proto.psi.substitute(primal_bundle.chart, ren)
    new_psi = None
    if proto.phi is not None and not proto.phi.is_zero():
        ren = {f"xi{k+1}": SuperPolynomial.variable(dual_bundle.chart, f"th{k+1}")
               for k in range(a.rank)}
        new_psi = proto.phi.substitute(dual_bundle.chart, ren)
    return ProtoBialgebroidSpec(new_primal, new_dual, new_phi, new_psi)


# ---------------------------------------------------------------------------
# doubles, Schouten bracket, presets
# ---------------------------------------------------------------------------


def double_differential(theta: ThetaHamiltonian):
    """D = {theta, .} as a component map; (field, anomaly) with anomaly = {theta,theta}."""
    chart = theta.chart
    total = theta.total
    comps = {}
    for v in chart.variables:
        comps[v] = canonical_bracket(total, SuperPolynomial.variable(chart, v.name))
    field = VectorField(chart, comps, ODD)
    anomaly = canonical_bracket(total, total)
    return field, anomaly


def schouten_bracket(xi: SuperPolynomial, eta: SuperPolynomial,
                     gamma_star: SuperPolynomial) -> SuperPolynomial:
    """Generalized Schouten bracket on fiberwise polynomials of Pi A.

    [xi, eta] = (-1)^{xi~+1} {{gamma*, xi}, eta}, restricted to arguments in
    the coordinate subalgebra (no momenta).
    """
    chart = gamma_star.chart
    positions = set(chart.positions)
    for arg in (xi, eta):
        if not arg.uses_only(positions):
            raise ChartError("Schouten bracket arguments may not involve momenta")
    return derived_bracket(gamma_star, xi, eta, chart)


@dataclass
class LieAlgebraAction:
    """A finite-dimensional Lie algebra acting on a coordinate space by fields.

    constants[(a, b, c)] hold the e_c-coefficient of [e_a, e_b] (1-based,
    antisymmetrized like structure tables); fields[a][i] are the polynomial
    components of the acting vector field of e_a.
    """
    base_names: tuple
    dim: int
    constants: dict
    fields: dict                      # (a, i) -> poly text or SuperPolynomial

    def action_algebroid(self) -> AlgebroidSpec:
        cached = getattr(self, "_algebroid", None)
        if cached is not None:
            return cached
        fibers = tuple(f"xi{k+1}" for k in range(self.dim))
        bundle = cotangent_chart(self.base_names, fibers)
        anchor = {(a, i): v for (a, i), v in self.fields.items()}
        structure = dict(self.constants)
        spec = AlgebroidSpec.build(self.base_names, fibers, anchor, structure,
                                   bundle=bundle)
        object.__setattr__(self, "_algebroid", spec)
        return spec

    def homomorphism_residuals(self):
        """rho([e_a, e_b]) - [rho e_a, rho e_b] on every generator pair."""
        spec = self.action_algebroid()
        chart = spec.chart
        base = spec.base_names
        rho = []
        for a in range(self.dim):
            rho.append({base[i]: spec.anchor[a][i] for i in range(len(base))})
        out = []
        for a in range(self.dim):
            for b in range(self.dim):
                Xa = VectorField(chart, rho[a])
                Xb = VectorField(chart, rho[b])
                comm = Xa.commutator(Xb)
                expect = {}
                for i, x in enumerate(base):
                    acc = SuperPolynomial.zero(chart)
                    for c in range(self.dim):
                        entry = spec.structure[a][b][c]
                        if not entry.is_zero():
                            acc = acc + entry * spec.anchor[c][i]
                    expect[x] = acc
                residual = poly_sum(chart, [
                    (expect[x] - comm.component(x)) * SuperPolynomial.variable(chart, x)
                    for x in base
                ])
                # tag residual by pair through a tuple
                out.append(((a + 1, b + 1), residual))
        return out


def brst_theta(action: LieAlgebraAction) -> ThetaHamiltonian:
    """theta = mu of the action algebroid with zero dual structure.

    The associated differential is the classical ghost-variable complex for
    the hamiltonian lift of the action.  Requires the action data to satisfy
    the bracket antisymmetry and homomorphism identities.
    """
    spec = action.action_algebroid()
    bad = [key for key, res in action.homomorphism_residuals() if not res.is_zero()]
    if bad:
        raise SpecError(f"action map is not a homomorphism on pairs {bad}")
    report = check_lie_algebroid(spec)
    if not report.passed:
        raise SpecError("action algebroid fails the structure equations")
    proto = ProtoBialgebroidSpec.build(spec)
    return proto.theta()

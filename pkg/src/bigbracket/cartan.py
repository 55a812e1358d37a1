"""Vector fields as explicit component maps, plus the Cartan operators on Pi TM.

A vector field stores the coefficient polynomial of each coordinate
derivation; applying it to a function is an operation, and the
supercommutator of two fields is again a component map.  On a Pi T chart
(base coordinates paired with odd velocities) we get the de Rham vector
field, interior derivatives and Lie derivatives.
"""
from __future__ import annotations

from .chart import Chart, ChartError, TangentPiChart, EVEN, ODD
from .poly import SuperPolynomial


class VectorField:
    """Derivation X = sum c^A(x) d/dx^A with left coefficients."""

    __slots__ = ("chart", "components", "parity")

    def __init__(self, chart: Chart, components, parity=None):
        self.chart = chart
        comps = {}
        for key, poly in components.items():
            var = chart.var(key) if isinstance(key, str) else key
            if not isinstance(poly, SuperPolynomial):
                poly = SuperPolynomial.constant(chart, poly)
            if poly.chart is not chart:
                raise ChartError("component polynomial on a different chart")
            if not poly.is_zero():
                comps[var] = poly
        self.components = comps
        parities = set()
        for var, poly in comps.items():
            pp = poly.parity()
            if pp is None:
                raise ChartError(
                    f"component of d/d{var.name} is not parity-homogeneous")
            parities.add((pp + var.parity) % 2)
        if len(parities) > 1:
            raise ChartError("vector field mixes parities")
        if parity is None:
            parity = parities.pop() if parities else EVEN
        elif parities and parities != {parity}:
            raise ChartError("declared parity contradicts the components")
        self.parity = parity

    def is_zero(self) -> bool:
        return not self.components

    def component(self, var) -> SuperPolynomial:
        if isinstance(var, str):
            var = self.chart.var(var)
        return self.components.get(var, SuperPolynomial.zero(self.chart))

    def apply(self, p: SuperPolynomial) -> SuperPolynomial:
        if p.chart is not self.chart:
            raise ChartError("argument lives on a different chart")
        out = SuperPolynomial.zero(self.chart)
        for var, coeff in self.components.items():
            out = out + coeff * p.partial(var)
        return out

    __call__ = apply

    def __add__(self, other):
        if self.chart is not other.chart:
            raise ChartError("vector fields on different charts")
        comps = {v: p for v, p in self.components.items()}
        for v, p in other.components.items():
            comps[v] = comps.get(v, SuperPolynomial.zero(self.chart)) + p
        return VectorField(self.chart, comps)

    def __neg__(self):
        return VectorField(self.chart, {v: -p for v, p in self.components.items()},
                           self.parity)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s):
        return VectorField(self.chart, {v: p.scale(s) for v, p in self.components.items()},
                           self.parity)

    def commutator(self, other: "VectorField") -> "VectorField":
        """[X, Y] = X Y - (-1)^{X~ Y~} Y X, computed on chart generators."""
        if self.chart is not other.chart:
            raise ChartError("vector fields on different charts")
        sign = -1 if (self.parity * other.parity) % 2 else 1
        comps = {}
        for var in set(self.components) | set(other.components):
            lead = self.apply(other.component(var))
            trail = other.apply(self.component(var))
            comps[var] = lead - trail if sign > 0 else lead + trail
        par = (self.parity + other.parity) % 2
        return VectorField(self.chart, comps, par if any(not c.is_zero() for c in comps.values()) else par)

    def __eq__(self, other):
        if not isinstance(other, VectorField):
            return NotImplemented
        if self.chart is not other.chart:
            raise ChartError("vector fields on different charts")
        keys = set(self.components) | set(other.components)
        return all(self.component(v) == other.component(v) for v in keys)

    def __repr__(self):
        body = " + ".join(f"({p})*d/d{v.name}" for v, p in sorted(
            self.components.items(), key=lambda kv: kv[0].index))
        return f"<field {body or '0'}>"


# ---------------------------------------------------------------------------
# Cartan calculus on a Pi T chart
# ---------------------------------------------------------------------------


def _require_pit(chart) -> TangentPiChart:
    if not isinstance(chart, TangentPiChart):
        raise ChartError("Cartan operators need a Pi T chart with a pairing table")
    return chart


def de_rham(chart: TangentPiChart) -> VectorField:
    """d = xi^A d/dx^A; homological of degree 1."""
    _require_pit(chart)
    comps = {x: SuperPolynomial.variable(chart, v.name) for x, v in chart.pairing}
    return VectorField(chart, comps, ODD)


def interior(components, chart: TangentPiChart) -> VectorField:
    """i_X = (-1)^{X~} X^A d/dxi^A for X given by base components."""
    _require_pit(chart)
    base_vars = set(chart.base)
    vel_of = {x: v for x, v in chart.pairing}
    comps = {}
    parities = set()
    for key, poly in components.items():
        var = chart.var(key) if isinstance(key, str) else key
        if var not in base_vars:
            raise ChartError(f"{var.name!r} is not a base coordinate")
        if not isinstance(poly, SuperPolynomial):
            poly = SuperPolynomial.constant(chart, poly)
        if not poly.uses_only(base_vars):
            raise ChartError("interior derivative needs base-only components")
        if not poly.is_zero():
            pp = poly.parity()
            if pp is None:
                raise ChartError("components must be parity-homogeneous")
            parities.add((pp + var.parity) % 2)
            comps[vel_of[var]] = poly
    if len(parities) > 1:
        raise ChartError("vector field mixes parities")
    xpar = parities.pop() if parities else EVEN
    if xpar == ODD:
        comps = {v: -p for v, p in comps.items()}
    return VectorField(chart, comps, (xpar + 1) % 2)


def lie_derivative(components, chart: TangentPiChart) -> VectorField:
    """L_X = [d, i_X]."""
    return de_rham(chart).commutator(interior(components, chart))


def base_field(components, chart: TangentPiChart) -> VectorField:
    """The field X^A d/dx^A itself, acting on functions of the base."""
    _require_pit(chart)
    comps = {}
    for key, poly in components.items():
        var = chart.var(key) if isinstance(key, str) else key
        comps[var] = poly
    return VectorField(chart, comps)

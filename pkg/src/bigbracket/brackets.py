"""Canonical Poisson brackets on Darboux supercharts and the derived bracket.

Even charts carry the bracket {x*_a, x^b} = delta_a^b extended as a
biderivation; odd charts carry the Gerstenhaber bracket whose sign
convention is pinned by d_pi = {pi, .} acting on multivector fields as
[pi, .].  Both split the first argument into parity-homogeneous components
and apply explicit partial-derivative formulas.
"""
from __future__ import annotations

from .chart import DarbouxChart, ChartError, EVEN, ODD
from .poly import SuperPolynomial


def _require_darboux(p: SuperPolynomial) -> DarbouxChart:
    chart = p.chart
    if not isinstance(chart, DarbouxChart):
        raise ChartError("canonical bracket needs a Darboux chart")
    return chart


def canonical_bracket(p: SuperPolynomial, q: SuperPolynomial, chart=None) -> SuperPolynomial:
    """Canonical bracket of the chart's parity (even Poisson or Gerstenhaber)."""
    if chart is None:
        chart = _require_darboux(p)
    if p.chart is not chart or q.chart is not chart:
        raise ChartError("bracket arguments live on different charts")
    if chart.bracket_parity == EVEN:
        return _even_bracket(p, q, chart)
    return _odd_bracket(p, q, chart)


def _even_bracket(p, q, chart):
    out = SuperPolynomial.zero(chart)
    for fp, f in zip((0, 1), p.parity_components()):
        if f.is_zero():
            continue
        for pos, mom in chart.pairs:
            a = pos.parity
            df_dm = f.partial(mom)
            df_dx = f.partial(pos)
            if not df_dm.is_zero():
                s1 = -1 if (a * (fp + 1)) % 2 else 1
                term = df_dm * q.partial(pos)
                out = out + (term if s1 > 0 else -term)
            if not df_dx.is_zero():
                s2 = 1 if (a * fp) % 2 else -1     # -(-1)^{a*fp}
                term = df_dx * q.partial(mom)
                out = out + (term if s2 > 0 else -term)
    return out


def _odd_bracket(p, q, chart):
    out = SuperPolynomial.zero(chart)
    for fp, f in zip((0, 1), p.parity_components()):
        if f.is_zero():
            continue
        for pos, mom in chart.pairs:
            a = pos.parity
            df_dm = f.partial(mom)
            df_dx = f.partial(pos)
            if not df_dm.is_zero():
                s1 = 1 if (fp * (a + 1)) % 2 else -1   # -(-1)^{fp*(a+1)}
                term = df_dm * q.partial(pos)
                out = out + (term if s1 > 0 else -term)
            if not df_dx.is_zero():
                s2 = 1 if (fp * a) % 2 else -1         # -(-1)^{fp*a}
                term = df_dx * q.partial(mom)
                out = out + (term if s2 > 0 else -term)
    return out


def hamiltonian_lift(components, chart: DarbouxChart) -> SuperPolynomial:
    """Fibrewise-linear hamiltonian h_v = v^a(x) x*_a of a vector field on the base.

    `components` maps position variables (or names) to coefficient
    polynomials in the positions only.  Only even charts admit the lift.
    """
    if chart.bracket_parity != EVEN:
        raise ChartError("hamiltonian lift requires an even chart")
    positions = set(chart.positions)
    mom_of = {pos: mom for pos, mom in chart.pairs}
    h = SuperPolynomial.zero(chart)
    for key, comp in components.items():
        pos = chart.var(key) if isinstance(key, str) else key
        if pos not in positions:
            raise ChartError(f"{pos.name!r} is not a position variable")
        if not isinstance(comp, SuperPolynomial):
            comp = SuperPolynomial.constant(chart, comp)
        if not comp.uses_only(positions):
            raise ChartError("vector field components must depend on positions only")
        h = h + comp * SuperPolynomial.variable(chart, mom_of[pos].name)
    return h


def legendre(p: SuperPolynomial, source: DarbouxChart, target: DarbouxChart) -> SuperPolynomial:
    """Chart isomorphism swapping odd fiber coordinates with dual momenta.

    Pairs are matched positionally: base (even) pairs map identically by
    name, odd pairs send position to the paired momentum and vice versa.
    """
    if p.chart is not source:
        raise ChartError("polynomial does not live on the source chart")
    if len(source.pairs) != len(target.pairs):
        raise ChartError("charts have different numbers of pairs")
    mapping = {}
    for (spos, smom), (tpos, tmom) in zip(source.pairs, target.pairs):
        if spos.parity == EVEN:
            if tpos.parity != EVEN:
                raise ChartError("pair parities do not match")
            if spos.name != tpos.name:
                raise ChartError(
                    f"base mismatch: {spos.name!r} vs {tpos.name!r}")
            mapping[spos.name] = SuperPolynomial.variable(target, tpos.name)
            mapping[smom.name] = SuperPolynomial.variable(target, tmom.name)
        else:
            if tpos.parity != ODD:
                raise ChartError("pair parities do not match")
            mapping[spos.name] = SuperPolynomial.variable(target, tmom.name)
            mapping[smom.name] = SuperPolynomial.variable(target, tpos.name)
    return p.substitute(target, mapping)


def derived_bracket(theta: SuperPolynomial, a: SuperPolynomial, b: SuperPolynomial,
                    chart=None) -> SuperPolynomial:
    """Derived product a o b = (-1)^{a~+1} {{theta, a}, b}.

    For odd arguments (in particular every total-degree-1 function) this is
    {{theta,a},b}, the form entering the Courant bracket.  The self-commuting
    of theta is not required here; callers probe anomalies on purpose.
    """
    if chart is None:
        chart = _require_darboux(theta)
    out = SuperPolynomial.zero(chart)
    for ap, a_part in zip((0, 1), a.parity_components()):
        if a_part.is_zero():
            continue
        term = canonical_bracket(canonical_bracket(theta, a_part, chart), b, chart)
        out = out + (term if ap == 1 else -term)
    return out

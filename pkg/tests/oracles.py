"""Slow, independent re-implementations used as oracles.

Multiplication sorts explicit symbol sequences with a bubble sort counting
odd transpositions; the brackets are defined by the generator table plus the
graded Leibniz recursion, never touching the partial-derivative formulas of
the package.
"""
from __future__ import annotations

from bigbracket.chart import DarbouxChart, EVEN, ODD
from bigbracket.poly import SuperPolynomial
from bigbracket.rationals import GaussianRational


def mono_symbols(chart, mono):
    evens, odds = mono
    seq = []
    for idx, k in evens:
        seq.extend([idx] * k)
    seq.extend(odds)
    return seq


def slow_multiply(p: SuperPolynomial, q: SuperPolynomial) -> SuperPolynomial:
    """Concatenate symbol sequences, bubble-sort, count odd-odd swaps."""
    chart = p.chart
    out = SuperPolynomial.zero(chart)
    for m1, c1 in p.terms.items():
        for m2, c2 in q.terms.items():
            seq = mono_symbols(chart, m1) + mono_symbols(chart, m2)
            sign = 1
            n = len(seq)
            changed = True
            while changed:
                changed = False
                for i in range(n - 1):
                    if seq[i] > seq[i + 1]:
                        if (chart.variables[seq[i]].parity == ODD
                                and chart.variables[seq[i + 1]].parity == ODD):
                            sign = -sign
                        seq[i], seq[i + 1] = seq[i + 1], seq[i]
                        changed = True
            dead = any(
                seq[i] == seq[i + 1] and chart.variables[seq[i]].parity == ODD
                for i in range(n - 1))
            if dead:
                continue
            term = SuperPolynomial.constant(chart, c1 * c2 * sign)
            for idx in seq:
                term = term * SuperPolynomial.variable(chart, chart.variables[idx].name)
            out = out + term
    return out


def _generator_table(chart: DarbouxChart):
    """Bracket values on generator pairs, keyed by variable index pairs."""
    table = {}
    for pos, mom in chart.pairs:
        if chart.bracket_parity == EVEN:
            table[(mom.index, pos.index)] = GaussianRational(1)
            # skew: {x, x*} = -(-1)^{parities}
            sign = -1 if pos.parity == EVEN else 1
            table[(pos.index, mom.index)] = GaussianRational(sign)
        else:
            sign = 1 if pos.parity == EVEN else -1
            table[(mom.index, pos.index)] = GaussianRational(sign)
            # odd skew: {x, th} = -(-1)^{(x~+1)(th~+1)} {th, x}
            flip = -1 if ((pos.parity + 1) * (mom.parity + 1)) % 2 == 0 else 1
            table[(pos.index, mom.index)] = GaussianRational(sign * flip)
    return table


def _var_poly(chart, idx):
    return SuperPolynomial.variable(chart, chart.variables[idx].name)


def slow_bracket(p: SuperPolynomial, q: SuperPolynomial) -> SuperPolynomial:
    """Bracket via bilinearity and the Leibniz recursion on symbol sequences.

    Even case: {fg, h} = f{g,h} + (-1)^{g~h~} {f,h} g and
    {v, gh} = {v,g} h + (-1)^{v~g~} g {v,h} on generators v.
    Odd case: the same with every parity shifted by one on the bracket slot.
    """
    chart = p.chart
    eps = chart.bracket_parity
    table = _generator_table(chart)
    out = SuperPolynomial.zero(chart)

    def parity_of_seq(seq):
        return sum(chart.variables[i].parity for i in seq) % 2

    def gen_with_seq(v_idx, seq, q_par_tail):
        """{v, product(seq)} as a polynomial."""
        res = SuperPolynomial.zero(chart)
        v_par = chart.variables[v_idx].parity
        for pos in range(len(seq)):
            val = table.get((v_idx, seq[pos]))
            if val is None:
                continue
            # sign from moving the derivation past the leading factors
            lead_par = parity_of_seq(seq[:pos])
            sign = -1 if ((v_par + eps) * lead_par) % 2 else 1
            term = SuperPolynomial.constant(chart, val * sign)
            for idx in seq[:pos] + seq[pos + 1:]:
                term = term * _var_poly(chart, idx)
            res = res + term
        return res

    for m1, c1 in p.terms.items():
        seq1 = mono_symbols(chart, m1)
        for m2, c2 in q.terms.items():
            seq2 = mono_symbols(chart, m2)
            acc = SuperPolynomial.zero(chart)
            for pos in range(len(seq1)):
                v = seq1[pos]
                inner = gen_with_seq(v, seq2, 0)
                if inner.is_zero():
                    continue
                tail = seq1[pos + 1:]
                tail_par = parity_of_seq(tail)
                q_par = parity_of_seq(seq2)
                # {f v g, h}: pull v to act on h, pass the tail over h
                sign = -1 if (tail_par * (q_par + eps)) % 2 else 1
                term = SuperPolynomial.constant(chart, GaussianRational(sign))
                for idx in seq1[:pos]:
                    term = term * _var_poly(chart, idx)
                term = term * inner
                for idx in tail:
                    term = term * _var_poly(chart, idx)
                acc = acc + term
            out = out + acc.scale(c1 * c2)
    return out

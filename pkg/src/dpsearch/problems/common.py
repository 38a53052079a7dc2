"""Shared helpers for the benchmark model builders."""

from __future__ import annotations

from fractions import Fraction

from .. import expressions as ex


def floyd_warshall(travel: list[list[int]]) -> list[list[int]]:
    """All-pairs shortest travel times over a complete cost matrix."""
    n = len(travel)
    best = [row[:] for row in travel]
    for k in range(n):
        for i in range(n):
            row_i, row_k = best[i], best[k]
            via = row_i[k]
            for j in range(n):
                if via + row_k[j] < row_i[j]:
                    row_i[j] = via + row_k[j]
    return best


def min_incoming(travel: list[list[int]]) -> list[int]:
    """Per column j: the cheapest edge into j from any k != j."""
    n = len(travel)
    return [min(travel[k][j] for k in range(n) if k != j) for j in range(n)]


def min_outgoing(travel: list[list[int]]) -> list[int]:
    """Per row j: the cheapest edge out of j to any k != j."""
    n = len(travel)
    return [min(travel[j][k] for k in range(n) if k != j) for j in range(n)]


def matrix_table(name: str, matrix, kind: str = "integer") -> ex.Table:
    n = len(matrix)
    values = {(i, j): matrix[i][j] for i in range(n) for j in range(n)}
    return ex.Table(name, kind, (n, n), values)


def vector_table(name: str, vector, kind: str = "integer") -> ex.Table:
    values = {(i,): v for i, v in enumerate(vector)}
    return ex.Table(name, kind, (len(vector),), values)


def scalar_table(name: str, value, kind: str = "integer") -> ex.Table:
    return ex.Table(name, kind, (), {(): value})


# Terse constructors; the builders assemble large trees from these.

econst = ex.ElementConst
nconst = ex.NumericConst


def etab(name, *args):
    return ex.ElementTable(name, tuple(args))


def ntab(name, *args):
    return ex.NumericTable(name, tuple(args))


def stab(name, universe, *args):
    return ex.SetTable(name, tuple(args), universe)


def num(value) -> ex.NumericExpression:
    if isinstance(value, ex.NumericExpression):
        return value
    if isinstance(value, ex.ElementExpression):
        return ex.FromElement(value)
    return ex.NumericConst(value)


def add(*terms):
    terms = [num(t) for t in terms]
    expr = terms[0]
    for term in terms[1:]:
        expr = ex.NumericBinary("+", expr, term)
    return expr


def sub(a, b):
    return ex.NumericBinary("-", num(a), num(b))


def mul(a, b):
    return ex.NumericBinary("*", num(a), num(b))


def div(a, b):
    return ex.NumericBinary("/", num(a), num(b))


def nmax(a, b, *rest):
    expr = ex.NumericMax(num(a), num(b))
    for term in rest:
        expr = ex.NumericMax(expr, num(term))
    return expr


def nmin(a, b, *rest):
    expr = ex.NumericMin(num(a), num(b))
    for term in rest:
        expr = ex.NumericMin(expr, num(term))
    return expr


def ceil(a):
    return ex.NumericCeil(num(a))


def floor(a):
    return ex.NumericFloor(num(a))


def card(s):
    return ex.Cardinality(s)


def ite(cond, a, b):
    return ex.NumericIf(cond, num(a), num(b))


def sum_over(table, over, *prefix):
    return ex.SetReduce("sum", table, over, tuple(prefix))


def max_over(table, over, *prefix):
    return ex.SetReduce("max", table, over, tuple(prefix))


def eq(a, b):
    return ex.Comparison("=", num(a), num(b))


def ne(a, b):
    return ex.Comparison("!=", num(a), num(b))


def le(a, b):
    return ex.Comparison("<=", num(a), num(b))


def lt(a, b):
    return ex.Comparison("<", num(a), num(b))


def ge(a, b):
    return ex.Comparison(">=", num(a), num(b))


def gt(a, b):
    return ex.Comparison(">", num(a), num(b))


def member(element, set_expr):
    if isinstance(element, int):
        element = ex.ElementConst(element)
    return ex.SetMember(element, set_expr)


def subset(a, b):
    return ex.SetSubset(a, b)


def empty(s):
    return ex.SetIsEmpty(s)


def not_(c):
    return ex.Not(c)


def and_(*cs):
    if not cs:
        raise ValueError("and_ needs at least one condition")
    return cs[0] if len(cs) == 1 else ex.And(tuple(cs))


def or_(*cs):
    if not cs:
        raise ValueError("or_ needs at least one condition")
    return cs[0] if len(cs) == 1 else ex.Or(tuple(cs))


def sconst(items, universe):
    from .. import bitset

    return ex.SetConst(bitset.from_items(items, universe), universe)


def frac(a, b) -> Fraction:
    return Fraction(a, b)

"""Immutable expression trees over state variables and constant tables.

Four expression families exist, mirroring the value families of states:

* element expressions produce nonnegative integers,
* set expressions produce bitmask subsets of a fixed universe,
* numeric expressions produce integers or floats (rationals appear as
  exact :class:`fractions.Fraction` intermediates under division),
* conditions produce booleans.

Evaluation is strict, pure, and reentrant: a node evaluated twice on
the same state yields the same value and never mutates its inputs, and
expressions and tables are immutable after construction, so they can be
shared and read from any number of threads.  Integer arithmetic is
exact with an explicit 64-bit overflow check; silently wrapping values
would corrupt optimality proofs downstream.
"""

from __future__ import annotations

import math
from collections.abc import Iterable
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Union

from . import bitset
from .errors import EvaluationError, UnknownSymbolError

State = tuple
Number = Union[int, float, Fraction]

INT64_MAX = 2**63 - 1

TABLE_KINDS = ("integer", "continuous", "boolean", "element", "set")


def _check_int(value: int) -> int:
    if abs(value) > INT64_MAX:
        raise OverflowError(f"integer value {value} exceeds 64-bit range")
    return value


def _check_number(value: Number) -> Number:
    if isinstance(value, float) and math.isnan(value):
        raise EvaluationError("expression produced NaN")
    if isinstance(value, int):
        _check_int(value)
    return value


def collapse(value: Number) -> Number:
    """Turn integral fractions into ints; leave everything else alone."""
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return _check_int(int(value))
        return value
    return value


# ---------------------------------------------------------------------------
# Tables


@dataclass(frozen=True)
class Table:
    """A named constant table indexed by tuples of object indices.

    ``shape`` gives the object count for each argument position; an empty
    shape declares a scalar constant.  Absent keys fall back to ``default``
    when one is declared and are an error otherwise.  Set-valued tables
    store bitmasks and carry the universe size of their values.
    """

    name: str
    kind: str
    shape: tuple[int, ...]
    values: Mapping[tuple, object]
    default: object = None
    value_universe: int | None = None

    def __post_init__(self):
        if self.kind not in TABLE_KINDS:
            raise ValueError(f"unknown table kind {self.kind!r}")
        if self.kind == "set" and self.value_universe is None:
            raise ValueError(f"set table {self.name!r} needs a value universe")

    @property
    def arity(self) -> int:
        return len(self.shape)

    def lookup(self, key: tuple):
        if len(key) != len(self.shape):
            raise EvaluationError(
                f"table {self.name!r} takes {len(self.shape)} indices, got {len(key)}"
            )
        for pos, (index, bound) in enumerate(zip(key, self.shape)):
            if not 0 <= index < bound:
                raise EvaluationError(
                    f"index {index} out of range for argument {pos} of table {self.name!r}"
                )
        if key in self.values:
            return self.values[key]
        if self.default is not None:
            return self.default
        raise EvaluationError(f"table {self.name!r} has no value for key {key}")


class TableRegistry:
    """Immutable-after-construction collection of uniquely named tables."""

    def __init__(self, tables: Iterable = ()):
        self._tables: dict[str, Table] = {}
        for table in tables:
            self.add(table)

    def add(self, table: Table) -> Table:
        if table.name in self._tables:
            raise ValueError(f"duplicate table name {table.name!r}")
        self._tables[table.name] = table
        return table

    def lookup(self, name: str) -> Table:
        try:
            return self._tables[name]
        except KeyError:
            raise UnknownSymbolError(f"unknown table {name!r}") from None

    def __contains__(self, name: str) -> bool:
        return name in self._tables

    def __iter__(self):
        return iter(self._tables.values())

    def __len__(self) -> int:
        return len(self._tables)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TableRegistry):
            return NotImplemented
        return self._tables == other._tables


# ---------------------------------------------------------------------------
# Element expressions


class ElementExpression:
    """Base class; evaluates to a nonnegative integer."""

    def eval(self, state: State, tables: TableRegistry) -> int:
        raise NotImplementedError


@dataclass(frozen=True)
class ElementConst(ElementExpression):
    value: int

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("element constants must be nonnegative")

    def eval(self, state, tables):
        return self.value


@dataclass(frozen=True)
class ElementVar(ElementExpression):
    index: int
    name: str

    def eval(self, state, tables):
        try:
            return state[self.index]
        except IndexError:
            raise UnknownSymbolError(f"no variable slot {self.index} ({self.name})") from None


@dataclass(frozen=True)
class ElementTable(ElementExpression):
    table: str
    args: tuple[ElementExpression, ...]

    def eval(self, state, tables):
        entry = tables.lookup(self.table)
        value = entry.lookup(tuple(arg.eval(state, tables) for arg in self.args))
        if not isinstance(value, int) or isinstance(value, bool) or value < 0:
            raise EvaluationError(
                f"table {self.table!r} produced {value!r} in element context"
            )
        return value


@dataclass(frozen=True)
class ElementBinary(ElementExpression):
    op: str
    lhs: ElementExpression
    rhs: ElementExpression

    def __post_init__(self):
        if self.op not in ("+", "-", "*", "/", "%"):
            raise ValueError(f"unknown element operator {self.op!r}")

    def eval(self, state, tables):
        left = self.lhs.eval(state, tables)
        right = self.rhs.eval(state, tables)
        op = self.op
        if op == "+":
            value = left + right
        elif op == "-":
            value = left - right
        elif op == "*":
            value = left * right
        elif op == "/":
            if right == 0:
                raise ZeroDivisionError("element division by zero")
            value = left // right
        else:
            if right == 0:
                raise ZeroDivisionError("element modulo by zero")
            value = left % right
        if value < 0:
            raise EvaluationError(f"negative element value {value} from {op}")
        return _check_int(value)


@dataclass(frozen=True)
class ElementIf(ElementExpression):
    condition: "Condition"
    then: ElementExpression
    otherwise: ElementExpression

    def eval(self, state, tables):
        branch = self.then if self.condition.eval(state, tables) else self.otherwise
        return branch.eval(state, tables)


# ---------------------------------------------------------------------------
# Set expressions


class SetExpression:
    """Base class; evaluates to a bitmask within a fixed universe."""

    universe: int

    def eval(self, state: State, tables: TableRegistry) -> int:
        raise NotImplementedError


@dataclass(frozen=True)
class SetConst(SetExpression):
    mask: int
    universe: int

    def __post_init__(self):
        if self.mask & ~bitset.full(self.universe):
            raise ValueError("set constant exceeds its universe")

    def eval(self, state, tables):
        return self.mask


@dataclass(frozen=True)
class SetVar(SetExpression):
    index: int
    name: str
    universe: int

    def eval(self, state, tables):
        try:
            return state[self.index]
        except IndexError:
            raise UnknownSymbolError(f"no variable slot {self.index} ({self.name})") from None


@dataclass(frozen=True)
class SetTable(SetExpression):
    table: str
    args: tuple[ElementExpression, ...]
    universe: int

    def eval(self, state, tables):
        entry = tables.lookup(self.table)
        value = entry.lookup(tuple(arg.eval(state, tables) for arg in self.args))
        if not isinstance(value, int):
            raise EvaluationError(f"table {self.table!r} produced {value!r} in set context")
        return value


@dataclass(frozen=True)
class SetAdd(SetExpression):
    element: ElementExpression
    operand: SetExpression

    @property
    def universe(self):
        return self.operand.universe

    def eval(self, state, tables):
        item = self.element.eval(state, tables)
        if item >= self.operand.universe:
            raise EvaluationError(
                f"cannot add element {item} to a set over {self.operand.universe} objects"
            )
        return self.operand.eval(state, tables) | (1 << item)


@dataclass(frozen=True)
class SetRemove(SetExpression):
    element: ElementExpression
    operand: SetExpression

    @property
    def universe(self):
        return self.operand.universe

    def eval(self, state, tables):
        item = self.element.eval(state, tables)
        return self.operand.eval(state, tables) & ~(1 << item)


@dataclass(frozen=True)
class SetUnion(SetExpression):
    lhs: SetExpression
    rhs: SetExpression

    @property
    def universe(self):
        return self.lhs.universe

    def eval(self, state, tables):
        return self.lhs.eval(state, tables) | self.rhs.eval(state, tables)


@dataclass(frozen=True)
class SetIntersection(SetExpression):
    lhs: SetExpression
    rhs: SetExpression

    @property
    def universe(self):
        return self.lhs.universe

    def eval(self, state, tables):
        return self.lhs.eval(state, tables) & self.rhs.eval(state, tables)


@dataclass(frozen=True)
class SetDifference(SetExpression):
    lhs: SetExpression
    rhs: SetExpression

    @property
    def universe(self):
        return self.lhs.universe

    def eval(self, state, tables):
        return self.lhs.eval(state, tables) & ~self.rhs.eval(state, tables)


@dataclass(frozen=True)
class SetComplement(SetExpression):
    operand: SetExpression

    @property
    def universe(self):
        return self.operand.universe

    def eval(self, state, tables):
        return bitset.full(self.operand.universe) & ~self.operand.eval(state, tables)


# ---------------------------------------------------------------------------
# Numeric expressions


class NumericExpression:
    """Base class; evaluates to an int, float, or exact Fraction."""

    def eval(self, state: State, tables: TableRegistry) -> Number:
        raise NotImplementedError


@dataclass(frozen=True)
class NumericConst(NumericExpression):
    value: Number

    def __post_init__(self):
        if isinstance(self.value, float) and math.isnan(self.value):
            raise ValueError("NaN constants are rejected")

    def eval(self, state, tables):
        return self.value


@dataclass(frozen=True)
class NumericVar(NumericExpression):
    index: int
    name: str

    def eval(self, state, tables):
        try:
            return state[self.index]
        except IndexError:
            raise UnknownSymbolError(f"no variable slot {self.index} ({self.name})") from None


@dataclass(frozen=True)
class FromElement(NumericExpression):
    """Promotion of an element expression into numeric context."""

    operand: ElementExpression

    def eval(self, state, tables):
        return self.operand.eval(state, tables)


@dataclass(frozen=True)
class NumericTable(NumericExpression):
    table: str
    args: tuple[ElementExpression, ...]

    def eval(self, state, tables):
        entry = tables.lookup(self.table)
        value = entry.lookup(tuple(arg.eval(state, tables) for arg in self.args))
        if isinstance(value, bool) or not isinstance(value, (int, float, Fraction)):
            raise EvaluationError(
                f"table {self.table!r} produced {value!r} in numeric context"
            )
        return value


@dataclass(frozen=True)
class NumericBinary(NumericExpression):
    op: str
    lhs: NumericExpression
    rhs: NumericExpression

    def __post_init__(self):
        if self.op not in ("+", "-", "*", "/"):
            raise ValueError(f"unknown numeric operator {self.op!r}")

    def eval(self, state, tables):
        left = self.lhs.eval(state, tables)
        right = self.rhs.eval(state, tables)
        op = self.op
        if op == "/":
            if right == 0:
                raise ZeroDivisionError("numeric division by zero")
            if isinstance(left, float) or isinstance(right, float):
                return _check_number(left / right)
            return Fraction(left) / Fraction(right)
        if op == "+":
            value = left + right
        elif op == "-":
            value = left - right
        else:
            value = left * right
        return _check_number(value)


@dataclass(frozen=True)
class NumericMin(NumericExpression):
    lhs: NumericExpression
    rhs: NumericExpression

    def eval(self, state, tables):
        return min(self.lhs.eval(state, tables), self.rhs.eval(state, tables))


@dataclass(frozen=True)
class NumericMax(NumericExpression):
    lhs: NumericExpression
    rhs: NumericExpression

    def eval(self, state, tables):
        return max(self.lhs.eval(state, tables), self.rhs.eval(state, tables))


@dataclass(frozen=True)
class NumericAbs(NumericExpression):
    operand: NumericExpression

    def eval(self, state, tables):
        return _check_number(abs(self.operand.eval(state, tables)))


@dataclass(frozen=True)
class NumericFloor(NumericExpression):
    operand: NumericExpression

    def eval(self, state, tables):
        return _check_int(math.floor(self.operand.eval(state, tables)))


@dataclass(frozen=True)
class NumericCeil(NumericExpression):
    operand: NumericExpression

    def eval(self, state, tables):
        return _check_int(math.ceil(self.operand.eval(state, tables)))


@dataclass(frozen=True)
class SetReduce(NumericExpression):
    """Fold a one-dimensional table slice over the members of a set.

    ``prefix`` fixes the leading indices of the table; the reduction runs
    over the final index.  Sum and product reduce the empty set to their
    identities; max and min over an empty set are an evaluation error, so
    models must guard emptiness themselves.
    """

    op: str
    table: str
    over: SetExpression
    prefix: tuple[ElementExpression, ...] = ()

    def __post_init__(self):
        if self.op not in ("sum", "product", "max", "min"):
            raise ValueError(f"unknown reduction {self.op!r}")

    def eval(self, state, tables):
        entry = tables.lookup(self.table)
        head = tuple(arg.eval(state, tables) for arg in self.prefix)
        mask = self.over.eval(state, tables)
        items = [entry.lookup(head + (j,)) for j in bitset.members(mask)]
        for value in items:
            if isinstance(value, bool) or not isinstance(value, (int, float, Fraction)):
                raise EvaluationError(
                    f"table {self.table!r} produced {value!r} in numeric reduction"
                )
        if self.op == "sum":
            return _check_number(sum(items))
        if self.op == "product":
            return _check_number(math.prod(items))
        if not items:
            raise EvaluationError(f"{self.op} reduction over an empty set")
        return max(items) if self.op == "max" else min(items)


@dataclass(frozen=True)
class Cardinality(NumericExpression):
    operand: SetExpression

    def eval(self, state, tables):
        return bitset.size(self.operand.eval(state, tables))


@dataclass(frozen=True)
class NumericIf(NumericExpression):
    condition: "Condition"
    then: NumericExpression
    otherwise: NumericExpression

    def eval(self, state, tables):
        branch = self.then if self.condition.eval(state, tables) else self.otherwise
        return branch.eval(state, tables)


@dataclass(frozen=True)
class SuccessorCost(NumericExpression):
    """Placeholder for the successor cost inside raw cost texts.

    Transition weights must never contain it; it only exists transiently
    while a cost expression of the shape ``w (+|max) cost`` is split into
    the weight ``w`` and the combining operator.
    """

    def eval(self, state, tables):
        raise EvaluationError("successor-cost placeholder cannot be evaluated")


# ---------------------------------------------------------------------------
# Conditions


class Condition:
    """Base class; evaluates to exactly one boolean on any well-typed state."""

    def eval(self, state: State, tables: TableRegistry) -> bool:
        raise NotImplementedError


@dataclass(frozen=True)
class BoolConst(Condition):
    value: bool

    def eval(self, state, tables):
        return self.value


_COMPARATORS = {
    "=": lambda a, b: a == b,
    "!=": lambda a, b: a != b,
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b,
}


@dataclass(frozen=True)
class Comparison(Condition):
    op: str
    lhs: NumericExpression
    rhs: NumericExpression

    def __post_init__(self):
        if self.op not in _COMPARATORS:
            raise ValueError(f"unknown comparison {self.op!r}")

    def eval(self, state, tables):
        return _COMPARATORS[self.op](self.lhs.eval(state, tables), self.rhs.eval(state, tables))


@dataclass(frozen=True)
class SetMember(Condition):
    element: ElementExpression
    operand: SetExpression

    def eval(self, state, tables):
        return bitset.contains(self.operand.eval(state, tables), self.element.eval(state, tables))


@dataclass(frozen=True)
class SetSubset(Condition):
    lhs: SetExpression
    rhs: SetExpression

    def eval(self, state, tables):
        left = self.lhs.eval(state, tables)
        return left & self.rhs.eval(state, tables) == left


@dataclass(frozen=True)
class SetIsEmpty(Condition):
    operand: SetExpression

    def eval(self, state, tables):
        return self.operand.eval(state, tables) == 0


@dataclass(frozen=True)
class BooleanTable(Condition):
    table: str
    args: tuple[ElementExpression, ...]

    def eval(self, state, tables):
        entry = tables.lookup(self.table)
        value = entry.lookup(tuple(arg.eval(state, tables) for arg in self.args))
        if not isinstance(value, bool):
            raise EvaluationError(
                f"table {self.table!r} produced {value!r} in boolean context"
            )
        return value


@dataclass(frozen=True)
class Not(Condition):
    operand: Condition

    def eval(self, state, tables):
        return not self.operand.eval(state, tables)


@dataclass(frozen=True)
class And(Condition):
    operands: tuple[Condition, ...]

    def eval(self, state, tables):
        return all(c.eval(state, tables) for c in self.operands)


@dataclass(frozen=True)
class Or(Condition):
    operands: tuple[Condition, ...]

    def eval(self, state, tables):
        return any(c.eval(state, tables) for c in self.operands)


# ---------------------------------------------------------------------------
# Public evaluation entry points


def eval_element(expr: ElementExpression, state: State, tables: TableRegistry) -> int:
    value = expr.eval(state, tables)
    if not isinstance(value, int) or value < 0:
        raise EvaluationError(f"element expression produced {value!r}")
    return value


def eval_set(expr: SetExpression, state: State, tables: TableRegistry) -> int:
    """Evaluate to a bitmask; guaranteed to stay within the universe."""
    return expr.eval(state, tables) & bitset.full(expr.universe)


def eval_numeric(expr: NumericExpression, state: State, tables: TableRegistry) -> Number:
    """Evaluate; integral rationals collapse to exact ints."""
    return collapse(expr.eval(state, tables))


def eval_condition(expr: Condition, state: State, tables: TableRegistry) -> bool:
    return bool(expr.eval(state, tables))


def walk(expr):
    """Yield every node of an expression tree, root first."""
    yield expr
    for name in getattr(expr, "__dataclass_fields__", ()):
        child = getattr(expr, name)
        if isinstance(child, (ElementExpression, SetExpression, NumericExpression, Condition)):
            yield from walk(child)
        elif isinstance(child, tuple):
            for item in child:
                if isinstance(
                    item, (ElementExpression, SetExpression, NumericExpression, Condition)
                ):
                    yield from walk(item)

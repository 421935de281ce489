"""Penalty-based overload resolution over dynamic argument lists.

A call site supplies an ordered list of Values; every overload in a set is
scored against it and the unique overload with the lowest finite penalty is
invoked. Ties are an error, never first-registered-wins, and an arity
mismatch in either direction is infinitely penalized.

Concrete penalty table (the tested contract):

====================================  ========================================
argument vs. parameter                penalty
====================================  ========================================
exact kind match                      0
Number with fraction -> int           1
Bool -> int or double                 2
Number 0 or 1 -> bool                 2
Array -> sequence<T>                  sum of element penalties
Object -> named type                  0 when every declared attribute is
                                      present and converts finitely, else inf
anything else                         inf (no conversion)
====================================  ========================================

All scoring functions are pure and thread-safe; only ``resolve_and_call``
touches model state, through the invoker it selects.
"""

from __future__ import annotations

import inspect
import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Callable, Iterable, Mapping, Optional, Sequence, Tuple, Union

from .errors import AmbiguousError, InternalError, NoMatchError
from .value import Value, ValueKind, from_plain, to_plain

__all__ = [
    "ParamKind",
    "ParamType",
    "INT_LIKE",
    "FLOAT_LIKE",
    "BOOL_LIKE",
    "STRING_LIKE",
    "sequence_of",
    "object_like",
    "type_tag",
    "Signature",
    "Overload",
    "OverloadSet",
    "overload",
    "INFINITE",
    "Penalty",
    "TypeTable",
    "arg_penalty",
    "overload_penalty",
    "resolve",
    "convert",
    "resolve_and_call",
]

INFINITE: float = math.inf
Penalty = float


class ParamKind(Enum):
    INT = "int"
    FLOAT = "float"
    BOOL = "bool"
    STRING = "string"
    SEQUENCE = "sequence"
    OBJECT = "object"


@dataclass(frozen=True)
class ParamType:
    """Declared parameter type: a scalar kind, a sequence, or a named type."""

    kind: ParamKind
    element: Optional["ParamType"] = None
    type_name: Optional[str] = None

    def __post_init__(self):
        if self.kind is ParamKind.SEQUENCE and self.element is None:
            raise ValueError("sequence parameter needs an element type")
        if self.kind is ParamKind.OBJECT and not self.type_name:
            raise ValueError("object parameter needs a type name")


INT_LIKE = ParamType(ParamKind.INT)
FLOAT_LIKE = ParamType(ParamKind.FLOAT)
BOOL_LIKE = ParamType(ParamKind.BOOL)
STRING_LIKE = ParamType(ParamKind.STRING)


def sequence_of(element: ParamType) -> ParamType:
    return ParamType(ParamKind.SEQUENCE, element=element)


def object_like(type_name: str) -> ParamType:
    return ParamType(ParamKind.OBJECT, type_name=type_name)


_SCALAR_TAGS = {
    ParamKind.INT: "int",
    ParamKind.FLOAT: "double",
    ParamKind.BOOL: "bool",
    ParamKind.STRING: "string",
}


def type_tag(param: ParamType) -> str:
    """Display name used in @type and @signature output."""
    if param.kind is ParamKind.SEQUENCE:
        return f"sequence<{type_tag(param.element)}>"
    if param.kind is ParamKind.OBJECT:
        return param.type_name
    return _SCALAR_TAGS[param.kind]


# Maps a registered type name to its required attributes, used when scoring
# and converting Object arguments against named types.
TypeTable = Mapping[str, Mapping[str, ParamType]]


@dataclass(frozen=True)
class Signature:
    """Return-type tag plus the ordered parameter types of one overload."""

    ret: str
    params: Tuple[ParamType, ...] = ()

    def render(self, name: str) -> str:
        args = ", ".join(type_tag(p) for p in self.params)
        return f"{name}({args}) -> {self.ret}"


def _positional_span(fn: Callable) -> Optional[Tuple[int, Optional[int]]]:
    """(min, max) positional arity of ``fn``; max None means unbounded."""
    try:
        sig = inspect.signature(fn)
    except (TypeError, ValueError):
        return None
    lo = 0
    hi: Optional[int] = 0
    for p in sig.parameters.values():
        if p.kind in (p.POSITIONAL_ONLY, p.POSITIONAL_OR_KEYWORD):
            hi += 1
            if p.default is p.empty:
                lo += 1
        elif p.kind is p.VAR_POSITIONAL:
            hi = None
    return lo, hi


@dataclass(frozen=True)
class Overload:
    """One callable variant: its signature and the operation it invokes."""

    signature: Signature
    invoker: Callable[..., Any]

    def __post_init__(self):
        span = _positional_span(self.invoker)
        if span is not None:
            lo, hi = span
            arity = len(self.signature.params)
            if arity < lo or (hi is not None and arity > hi):
                raise TypeError(
                    f"invoker accepts {lo}..{hi if hi is not None else 'n'} "
                    f"positional arguments, signature declares {arity}"
                )


class OverloadSet:
    """Named, non-empty set of overloads with pairwise distinct parameters."""

    __slots__ = ("name", "overloads")

    def __init__(self, name: str, overloads: Iterable[Overload]):
        ovs = tuple(overloads)
        if not ovs:
            raise ValueError(f"overload set {name!r} must not be empty")
        seen = set()
        for o in ovs:
            if o.signature.params in seen:
                raise ValueError(
                    f"duplicate parameter list in overload set {name!r}: "
                    f"{o.signature.render(name)}"
                )
            seen.add(o.signature.params)
        self.name = name
        self.overloads = ovs


def overload(ret: str, params: Iterable[ParamType], invoker: Callable[..., Any]) -> Overload:
    return Overload(Signature(ret, tuple(params)), invoker)


def arg_penalty(param: ParamType, arg: Value, types: Optional[TypeTable] = None) -> Penalty:
    """Score one argument against one declared parameter (inf = no conversion)."""
    kind = arg.kind
    pk = param.kind
    if pk is ParamKind.INT:
        if kind is ValueKind.NUMBER:
            return 0 if arg.as_number().is_integer() else 1
        if kind is ValueKind.BOOL:
            return 2
        return INFINITE
    if pk is ParamKind.FLOAT:
        if kind is ValueKind.NUMBER:
            return 0
        if kind is ValueKind.BOOL:
            return 2
        return INFINITE
    if pk is ParamKind.BOOL:
        if kind is ValueKind.BOOL:
            return 0
        if kind is ValueKind.NUMBER:
            return 2 if arg.as_number() in (0.0, 1.0) else INFINITE
        return INFINITE
    if pk is ParamKind.STRING:
        return 0 if kind is ValueKind.STRING else INFINITE
    if pk is ParamKind.SEQUENCE:
        if kind is not ValueKind.ARRAY:
            return INFINITE
        return sum(arg_penalty(param.element, e, types) for e in arg.as_array())
    # named object type
    if kind is not ValueKind.OBJECT:
        return INFINITE
    required = (types or {}).get(param.type_name)
    if required is None:
        return 0  # unknown schema: nothing to check
    entries = arg.as_object()
    for attr_name, attr_type in required.items():
        if attr_name not in entries:
            return INFINITE
        if math.isinf(arg_penalty(attr_type, entries[attr_name], types)):
            return INFINITE
    return 0


def overload_penalty(
    ov: Overload, args: Sequence[Value], types: Optional[TypeTable] = None
) -> Penalty:
    """Sum of per-argument penalties; any arity mismatch is infinite."""
    params = ov.signature.params
    if len(args) != len(params):
        return INFINITE
    return sum(arg_penalty(p, a, types) for p, a in zip(params, args))


def resolve(
    overload_set: OverloadSet, args: Sequence[Value], types: Optional[TypeTable] = None
) -> Overload:
    """The unique overload with minimal finite penalty for ``args``.

    Raises NoMatchError when every overload scores infinite and
    AmbiguousError when two or more tie at the finite minimum; the outcome
    depends only on penalties, never on registration order.
    """
    scored = [(overload_penalty(o, args, types), o) for o in overload_set.overloads]
    best = min(p for p, _ in scored)
    if math.isinf(best):
        kinds = ", ".join(a.kind.value for a in args)
        raise NoMatchError(
            f"no overload of {overload_set.name} accepts ({kinds}); candidates: "
            + "; ".join(o.signature.render(overload_set.name) for _, o in scored)
        )
    winners = [o for p, o in scored if p == best]
    if len(winners) > 1:
        raise AmbiguousError(
            f"call to {overload_set.name} is ambiguous at penalty {best:g}: "
            + "; ".join(o.signature.render(overload_set.name) for o in winners)
        )
    return winners[0]


def convert(param: ParamType, arg: Value, types: Optional[TypeTable] = None) -> Any:
    """Convert a finitely-matching argument to its natural call-site form.

    Must only be called when ``arg_penalty`` is finite; an infinite pair is
    a contract violation and raises InternalError.
    """
    if math.isinf(arg_penalty(param, arg, types)):
        raise InternalError(f"cannot convert {arg.kind.value} to {type_tag(param)}")
    pk = param.kind
    if pk is ParamKind.INT:
        if arg.kind is ValueKind.BOOL:
            return int(arg.as_bool())
        return int(arg.as_number())  # truncates toward zero
    if pk is ParamKind.FLOAT:
        if arg.kind is ValueKind.BOOL:
            return float(arg.as_bool())
        return arg.as_number()
    if pk is ParamKind.BOOL:
        if arg.kind is ValueKind.BOOL:
            return arg.as_bool()
        return arg.as_number() == 1.0
    if pk is ParamKind.STRING:
        return arg.as_string()
    if pk is ParamKind.SEQUENCE:
        return [convert(param.element, e, types) for e in arg.as_array()]
    declared = (types or {}).get(param.type_name, {})
    return {
        key: convert(declared[key], val, types) if key in declared else to_plain(val)
        for key, val in arg.as_object().items()
    }


def resolve_and_call(
    overload_set: OverloadSet,
    args: Sequence[Value],
    types: Optional[TypeTable] = None,
    array_body: bool = False,
) -> Value:
    """Resolve, convert arguments left to right, invoke, and wrap the result.

    When ``args`` came from a JSON array body and no overload matches the
    tuple reading, the whole array is retried as a single sequence argument;
    the tuple reading always takes precedence. Exceptions raised by the
    invoker surface as InternalError carrying the invoker's message.
    """
    args = list(args)
    try:
        chosen = resolve(overload_set, args, types)
    except NoMatchError as tuple_miss:
        if not array_body:
            raise
        wrapped = [Value.array(args)]
        try:
            chosen = resolve(overload_set, wrapped, types)
        except NoMatchError:
            raise tuple_miss from None  # the tuple reading is the primary contract
        args = wrapped
    converted = [convert(p, a, types) for p, a in zip(chosen.signature.params, args)]
    try:
        result = chosen.invoker(*converted)
    except Exception as exc:
        raise InternalError(str(exc) or type(exc).__name__) from exc
    return from_plain(result)

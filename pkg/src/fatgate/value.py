"""Dynamic value model with a JSON text encoding.

Every datum that crosses a boundary in this package travels as a
:class:`Value`: HTTP bodies, dispatch arguments, attribute state and
introspection results. A Value is an immutable tagged variant over the six
JSON shapes. Numbers are uniformly double precision and always finite;
whether a number is integral is decided where it matters (overload
scoring), not in the data model. Object key order is preserved on parse
and on emit so golden output is stable.

Only strict RFC 8259 JSON is accepted: no NaN/Infinity literals, no
duplicate object keys, no syntax extensions.
"""

from __future__ import annotations

import json
import math
from enum import Enum
from types import MappingProxyType
from typing import Any, Iterable, Mapping, Tuple, Union

from .errors import MalformedInputError, NonFiniteNumberError

__all__ = [
    "Value",
    "ValueKind",
    "parse",
    "serialize",
    "from_plain",
    "to_plain",
    "format_number",
]


class ValueKind(Enum):
    """Variant tag; every Value maps to exactly one kind."""

    NULL = "null"
    BOOL = "bool"
    NUMBER = "number"
    STRING = "string"
    ARRAY = "array"
    OBJECT = "object"


class Value:
    """One immutable datum: null, bool, finite double, string, array or object.

    Construct through the factory classmethods; they validate. Instances are
    safe to share between threads because no accessor exposes mutable state.
    """

    __slots__ = ("_kind", "_data")

    def __init__(self, kind: ValueKind, data: Any):
        self._kind = kind
        self._data = data

    # -- construction --------------------------------------------------

    @classmethod
    def null(cls) -> "Value":
        return _NULL

    @classmethod
    def boolean(cls, flag: bool) -> "Value":
        return _TRUE if flag else _FALSE

    @classmethod
    def number(cls, x: Union[int, float]) -> "Value":
        if isinstance(x, bool):
            raise TypeError("bool is not a number; use Value.boolean")
        f = float(x)
        if not math.isfinite(f):
            raise NonFiniteNumberError(f"numbers must be finite, got {x!r}")
        return cls(ValueKind.NUMBER, f)

    @classmethod
    def string(cls, text: str) -> "Value":
        if not isinstance(text, str):
            raise TypeError(f"expected str, got {type(text).__name__}")
        return cls(ValueKind.STRING, text)

    @classmethod
    def array(cls, items: Iterable["Value"] = ()) -> "Value":
        elems = tuple(items)
        for e in elems:
            if not isinstance(e, Value):
                raise TypeError("array elements must be Values")
        return cls(ValueKind.ARRAY, elems)

    @classmethod
    def object_(
        cls,
        entries: Union[Mapping[str, "Value"], Iterable[Tuple[str, "Value"]]] = (),
    ) -> "Value":
        pairs = entries.items() if isinstance(entries, Mapping) else entries
        data: dict = {}
        for key, val in pairs:
            if not isinstance(key, str):
                raise TypeError("object keys must be strings")
            if not isinstance(val, Value):
                raise TypeError("object values must be Values")
            if key in data:
                raise MalformedInputError(f"duplicate object key {key!r}")
            data[key] = val
        return cls(ValueKind.OBJECT, data)

    # -- inspection ------------------------------------------------------

    @property
    def kind(self) -> ValueKind:
        return self._kind

    def as_array(self) -> Tuple["Value", ...]:
        """Elements when this is an Array, otherwise an empty sequence."""
        return self._data if self._kind is ValueKind.ARRAY else ()

    def as_object(self) -> Mapping[str, "Value"]:
        """Entries when this is an Object, otherwise an empty mapping."""
        return MappingProxyType(self._data if self._kind is ValueKind.OBJECT else {})

    def as_bool(self) -> bool:
        if self._kind is not ValueKind.BOOL:
            raise TypeError(f"not a bool: {self!r}")
        return self._data

    def as_number(self) -> float:
        if self._kind is not ValueKind.NUMBER:
            raise TypeError(f"not a number: {self!r}")
        return self._data

    def as_string(self) -> str:
        if self._kind is not ValueKind.STRING:
            raise TypeError(f"not a string: {self!r}")
        return self._data

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Value):
            return NotImplemented
        return self._kind is other._kind and self._data == other._data

    __hash__ = None  # mutable-looking compound equality; not hashable

    def __repr__(self) -> str:
        return f"Value({serialize(self)})"


_NULL = Value(ValueKind.NULL, None)
_TRUE = Value(ValueKind.BOOL, True)
_FALSE = Value(ValueKind.BOOL, False)


def from_plain(obj: Any) -> Value:
    """Wrap natural Python data (None/bool/number/str/list/dict) as a Value."""
    if isinstance(obj, Value):
        return obj
    if obj is None:
        return Value.null()
    if isinstance(obj, bool):
        return Value.boolean(obj)
    if isinstance(obj, (int, float)):
        return Value.number(obj)
    if isinstance(obj, str):
        return Value.string(obj)
    if isinstance(obj, (list, tuple)):
        return Value.array(from_plain(e) for e in obj)
    if isinstance(obj, Mapping):
        return Value.object_((k, from_plain(v)) for k, v in obj.items())
    raise TypeError(f"cannot represent {type(obj).__name__} as a Value")


def to_plain(v: Value) -> Any:
    """Unwrap to natural Python data; inverse of :func:`from_plain`."""
    k = v.kind
    if k is ValueKind.NULL:
        return None
    if k in (ValueKind.BOOL, ValueKind.NUMBER, ValueKind.STRING):
        return v._data
    if k is ValueKind.ARRAY:
        return [to_plain(e) for e in v.as_array()]
    return {key: to_plain(val) for key, val in v.as_object().items()}


def _finite_number(literal: str) -> float:
    f = float(literal)
    if not math.isfinite(f):
        raise NonFiniteNumberError(f"non-finite number literal {literal!r}")
    return f


def _reject_constant(name: str) -> float:
    raise NonFiniteNumberError(f"non-finite number literal {name!r}")


def _object_pairs(pairs: list) -> dict:
    data: dict = {}
    for key, val in pairs:
        if key in data:
            raise MalformedInputError(f"duplicate object key {key!r}")
        data[key] = val
    return data


def parse(text: str) -> Value:
    """Parse one strict JSON document into a Value tree.

    Raises MalformedInputError (position-annotated) on syntax errors and
    NonFiniteNumberError on NaN/Infinity literals or overflowing numbers.
    """
    try:
        plain = json.loads(
            text,
            parse_float=_finite_number,
            parse_int=_finite_number,
            parse_constant=_reject_constant,
            object_pairs_hook=_object_pairs,
        )
    except json.JSONDecodeError as exc:
        raise MalformedInputError(f"malformed JSON: {exc}") from exc
    return from_plain(plain)


def format_number(x: float) -> str:
    """Shortest-round-trip decimal text; integral doubles drop the suffix."""
    f = float(x)
    if f.is_integer():
        return str(int(f))
    return repr(f)


def serialize(v: Value) -> str:
    """Emit compact JSON text; ``parse(serialize(v))`` reproduces ``v``."""
    k = v.kind
    if k is ValueKind.NULL:
        return "null"
    if k is ValueKind.BOOL:
        return "true" if v._data else "false"
    if k is ValueKind.NUMBER:
        return format_number(v._data)
    if k is ValueKind.STRING:
        return json.dumps(v._data, ensure_ascii=False)
    if k is ValueKind.ARRAY:
        return "[" + ",".join(serialize(e) for e in v.as_array()) + "]"
    parts = (
        f"{json.dumps(key, ensure_ascii=False)}:{serialize(val)}"
        for key, val in v.as_object().items()
    )
    return "{" + ",".join(parts) + "}"

"""Shared test machinery: an independent overload-scoring oracle and seeded
random generators for values, parameter types and overload sets.

The oracle restates the documented penalty table from scratch (table-driven,
no calls into the production scorer) so resolution can be cross-checked
exhaustively.
"""

from __future__ import annotations

import random
import string
from typing import Dict, List, Optional, Tuple

from fatgate.dispatch import (
    BOOL_LIKE,
    FLOAT_LIKE,
    INT_LIKE,
    Overload,
    OverloadSet,
    ParamKind,
    ParamType,
    STRING_LIKE,
    Signature,
    object_like,
    sequence_of,
)
from fatgate.value import Value, ValueKind

INF = float("inf")

# fixed schema table used by dispatch property tests
ORACLE_TABLE: Dict[str, Dict[str, ParamType]] = {
    "Pt": {"x": FLOAT_LIKE, "y": FLOAT_LIKE},
    "Tag": {"name": STRING_LIKE, "id": INT_LIKE},
}


def oracle_arg_penalty(param: ParamType, value: Value, table) -> float:
    pk, vk = param.kind, value.kind
    if pk is ParamKind.SEQUENCE:
        if vk is not ValueKind.ARRAY:
            return INF
        total = 0.0
        for element in value.as_array():
            p = oracle_arg_penalty(param.element, element, table)
            if p == INF:
                return INF
            total += p
        return total
    if pk is ParamKind.OBJECT:
        if vk is not ValueKind.OBJECT:
            return INF
        entries = value.as_object()
        for key, attr_type in (table or {}).get(param.type_name, {}).items():
            if key not in entries:
                return INF
            if oracle_arg_penalty(attr_type, entries[key], table) == INF:
                return INF
        return 0.0
    if pk is ParamKind.INT:
        if vk is ValueKind.NUMBER:
            n = value.as_number()
            return 0.0 if n == int(n) else 1.0
        return 2.0 if vk is ValueKind.BOOL else INF
    if pk is ParamKind.FLOAT:
        if vk is ValueKind.NUMBER:
            return 0.0
        return 2.0 if vk is ValueKind.BOOL else INF
    if pk is ParamKind.BOOL:
        if vk is ValueKind.BOOL:
            return 0.0
        if vk is ValueKind.NUMBER and value.as_number() in (0.0, 1.0):
            return 2.0
        return INF
    # string
    return 0.0 if vk is ValueKind.STRING else INF


def oracle_outcome(
    overload_set: OverloadSet, args: List[Value], table
) -> Tuple[str, Optional[Tuple[ParamType, ...]]]:
    """("chosen", params) | ("nomatch", None) | ("ambiguous", None)."""
    penalties = []
    for ov in overload_set.overloads:
        params = ov.signature.params
        if len(params) != len(args):
            penalties.append(INF)
            continue
        total = 0.0
        for p, a in zip(params, args):
            total += oracle_arg_penalty(p, a, table)
        penalties.append(total)
    best = min(penalties)
    if best == INF:
        return ("nomatch", None)
    winners = [i for i, p in enumerate(penalties) if p == best]
    if len(winners) > 1:
        return ("ambiguous", None)
    return ("chosen", overload_set.overloads[winners[0]].signature.params)


# -- seeded random generators ------------------------------------------------


def random_param(rng: random.Random, depth: int = 2) -> ParamType:
    choices = ["int", "float", "bool", "string"]
    if depth > 0:
        choices += ["seq", "obj"]
    pick = rng.choice(choices)
    if pick == "seq":
        return sequence_of(random_param(rng, depth - 1))
    if pick == "obj":
        return object_like(rng.choice(list(ORACLE_TABLE)))
    return {"int": INT_LIKE, "float": FLOAT_LIKE, "bool": BOOL_LIKE, "string": STRING_LIKE}[pick]


def random_overload_set(rng: random.Random, max_arity: int = 4) -> OverloadSet:
    overloads = []
    seen = set()
    for _ in range(rng.randint(1, 4)):
        params = tuple(random_param(rng) for _ in range(rng.randint(0, max_arity)))
        if params in seen:
            continue
        seen.add(params)
        overloads.append(Overload(Signature("double", params), lambda *a: None))
    if not overloads:
        overloads.append(Overload(Signature("double", ()), lambda: None))
    return OverloadSet("f", overloads)


def random_scalar_value(rng: random.Random) -> Value:
    roll = rng.random()
    if roll < 0.1:
        return Value.null()
    if roll < 0.25:
        return Value.boolean(rng.random() < 0.5)
    if roll < 0.6:
        pick = rng.random()
        if pick < 0.4:
            return Value.number(rng.randint(-100, 100))
        if pick < 0.6:
            return Value.number(rng.choice([0, 1, 0.0, 1.0]))
        return Value.number(rng.uniform(-100, 100))
    length = rng.randint(0, 8)
    return Value.string("".join(rng.choice(string.ascii_letters) for _ in range(length)))


def random_arg_value(rng: random.Random, depth: int = 2) -> Value:
    roll = rng.random()
    if depth > 0 and roll < 0.2:
        return Value.array(
            random_arg_value(rng, depth - 1) for _ in range(rng.randint(0, 3))
        )
    if depth > 0 and roll < 0.4:
        # often shaped like a known schema, sometimes off by one key
        schema_name = rng.choice(list(ORACLE_TABLE))
        entries = {}
        for key in ORACLE_TABLE[schema_name]:
            if rng.random() < 0.85:
                entries[key] = random_scalar_value(rng)
        if rng.random() < 0.3:
            entries["extra"] = random_scalar_value(rng)
        return Value.object_(entries)
    return random_scalar_value(rng)


def random_args(rng: random.Random) -> List[Value]:
    return [random_arg_value(rng) for _ in range(rng.randint(0, 5))]


def random_value(rng: random.Random, depth: int = 6) -> Value:
    """Arbitrary Value tree for round-trip checks, depth-bounded."""
    roll = rng.random()
    if depth <= 0 or roll < 0.55:
        pick = rng.random()
        if pick < 0.12:
            return Value.null()
        if pick < 0.28:
            return Value.boolean(rng.random() < 0.5)
        if pick < 0.62:
            return _random_number(rng)
        return _random_text(rng)
    if roll < 0.8:
        return Value.array(random_value(rng, depth - 1) for _ in range(rng.randint(0, 4)))
    entries = {}
    for _ in range(rng.randint(0, 4)):
        entries.setdefault(_random_key(rng), random_value(rng, depth - 1))
    return Value.object_(entries.items())


def _random_number(rng: random.Random) -> Value:
    pick = rng.random()
    if pick < 0.3:
        return Value.number(rng.randint(-(10**9), 10**9))
    if pick < 0.5:
        return Value.number(rng.uniform(-1e6, 1e6))
    if pick < 0.7:
        return Value.number(rng.uniform(-1, 1) * 10.0 ** rng.randint(-300, 300))
    if pick < 0.85:
        return Value.number(rng.choice([0.0, -0.0, 1.0, -1.0, 0.1, 2.5, 1e-323]))
    return Value.number(float(rng.getrandbits(62)))


_TEXT_POOL = string.ascii_letters + string.digits + ' _"\\/\n\té世界\U0001f600'


def _random_text(rng: random.Random) -> Value:
    length = rng.randint(0, 12)
    return Value.string("".join(rng.choice(_TEXT_POOL) for _ in range(length)))


def _random_key(rng: random.Random) -> str:
    length = rng.randint(1, 6)
    return "".join(rng.choice(string.ascii_lowercase) for _ in range(length))

"""Sample object tree wired into the registry: the universal test surface.

A small simulation-flavored model covering every endpoint shape the gateway
supports: scalar attributes (time and step size), a nested group node, a
polymorphic item container, overloaded methods, and a file-writing command.
Member names are camelCase because they *are* the exposed API surface.

Defaults are fixed (t=0, dt=0.1, empty group named "root") so every example
against a fresh model is deterministic.
"""

from __future__ import annotations

from typing import List, Optional

from .dispatch import (
    BOOL_LIKE,
    FLOAT_LIKE,
    INT_LIKE,
    STRING_LIKE,
    Signature,
    object_like,
    overload,
    sequence_of,
)
from .registry import (
    Registry,
    TypeDescriptor,
    attribute_of,
    container_of,
    method_of,
)
from .value import format_number

__all__ = [
    "Item",
    "Variable",
    "Operation",
    "Group",
    "Model",
    "build_demo_registry",
]

_OP_CLASSES = {
    "add": "binary",
    "subtract": "binary",
    "sin": "function",
    "cos": "function",
}


class Item:
    """Polymorphic container element base."""


class Variable(Item):
    def __init__(self, name: str = "", value: float = 0.0):
        self.name = name
        self.value = value


class Operation(Item):
    def __init__(self, op: str = "add"):
        self.op = op


class Group:
    """Named collection of polymorphic items."""

    def __init__(self, name: str = "root"):
        self.name = name
        self.items: List[Item] = []

    def numItems(self) -> int:
        return len(self.items)

    def addVariable(self, name: str, value: float) -> None:
        self.items.append(Variable(name=name, value=value))

    def addOperation(self, op: str) -> None:
        self.items.append(Operation(op=op))


class Model:
    """Top-level model: simulation time, step size, and one nested group."""

    def __init__(self):
        self.t = 0.0
        self._dt = 0.1
        self.group = Group()

    @property
    def dt(self) -> float:
        return self._dt

    @dt.setter
    def dt(self, value: float) -> None:
        if value <= 0:
            raise ValueError(f"dt must be > 0, got {value}")
        self._dt = value

    def reset(self) -> None:
        self.t = 0.0

    def step(self, n: Optional[int] = None) -> float:
        """Advance time by n steps (default one) and return the new time."""
        count = 1 if n is None else n
        if count < 1:
            raise ValueError(f"step count must be >= 1, got {count}")
        for _ in range(count):
            self.t += self._dt
        return self.t

    def exportEquations(self, path: str, wrap: bool) -> None:
        """Write a plain-text item listing; wrap hard-breaks lines at 80 columns.

        Format: one header line ``# equations``, then ``Variable <name> = <value>``
        or ``Operation <op>`` per item.
        """
        lines = ["# equations"]
        for item in self.group.items:
            if isinstance(item, Variable):
                lines.append(f"Variable {item.name} = {format_number(item.value)}")
            elif isinstance(item, Operation):
                lines.append(f"Operation {item.op}")
        if wrap:
            lines = [
                chunk
                for line in lines
                for chunk in (line[i : i + 80] for i in range(0, max(len(line), 1), 80))
            ]
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")

    def classifyOp(self, name: str) -> str:
        return _OP_CLASSES.get(name, "unknown")


def _register_demo_types(reg: Registry) -> None:
    reg.register_type(TypeDescriptor("Item"), python_class=Item)
    reg.register_type(
        TypeDescriptor(
            "Variable",
            attributes={"name": STRING_LIKE, "value": FLOAT_LIKE},
            supertype="Item",
        ),
        python_class=Variable,
        children=lambda v: {
            "name": attribute_of(v, "name", STRING_LIKE),
            "value": attribute_of(v, "value", FLOAT_LIKE),
        },
    )
    reg.register_type(
        TypeDescriptor("Operation", attributes={"op": STRING_LIKE}, supertype="Item"),
        python_class=Operation,
        children=lambda o: {"op": attribute_of(o, "op", STRING_LIKE)},
    )
    reg.register_type(
        TypeDescriptor(
            "Group",
            attributes={
                "name": STRING_LIKE,
                "items": sequence_of(object_like("Item")),
            },
            methods={
                "numItems": (Signature("int"),),
                "addVariable": (Signature("void", (STRING_LIKE, FLOAT_LIKE)),),
                "addOperation": (Signature("void", (STRING_LIKE,)),),
            },
        ),
        python_class=Group,
        children=lambda g: {
            "name": attribute_of(g, "name", STRING_LIKE),
            "items": container_of(reg, lambda: g.items, object_like("Item")),
            "numItems": method_of("numItems", overload("int", (), g.numItems)),
            "addVariable": method_of(
                "addVariable", overload("void", (STRING_LIKE, FLOAT_LIKE), g.addVariable)
            ),
            "addOperation": method_of(
                "addOperation", overload("void", (STRING_LIKE,), g.addOperation)
            ),
        },
    )
    reg.register_type(
        TypeDescriptor(
            "Model",
            attributes={
                "t": FLOAT_LIKE,
                "dt": FLOAT_LIKE,
                "group": object_like("Group"),
            },
            methods={
                "reset": (Signature("void"),),
                "step": (Signature("double"), Signature("double", (INT_LIKE,))),
                "exportEquations": (Signature("void", (STRING_LIKE, BOOL_LIKE)),),
                "classifyOp": (Signature("string", (STRING_LIKE,)),),
            },
        ),
        python_class=Model,
        children=lambda m: {
            "t": attribute_of(m, "t", FLOAT_LIKE),
            "dt": attribute_of(m, "dt", FLOAT_LIKE),
            "group": reg.node_for(m.group),
            "reset": method_of("reset", overload("void", (), m.reset)),
            "step": method_of(
                "step",
                overload("double", (), m.step),
                overload("double", (INT_LIKE,), m.step),
            ),
            "exportEquations": method_of(
                "exportEquations",
                overload("void", (STRING_LIKE, BOOL_LIKE), m.exportEquations),
            ),
            "classifyOp": method_of(
                "classifyOp", overload("string", (STRING_LIKE,), m.classifyOp)
            ),
        },
    )


def build_demo_registry() -> tuple[Registry, Model]:
    """Fresh registry with one demo model mounted at ``/model``."""
    reg = Registry()
    model = Model()
    _register_demo_types(reg)
    reg.register_instance("model", model)
    return reg, model

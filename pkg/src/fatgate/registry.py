"""Hierarchical endpoint map over a live object tree.

Every node, attribute, method and container element of a registered object
is reachable under a slash-separated path; the map's keys are the endpoints
of the fat API. One command model covers everything: a request is a path
plus an optional body, and the presence or absence of the body selects read
versus update/call semantics regardless of transport verb.

Path grammar:

* ``Name`` segments match ``[A-Za-z_][A-Za-z0-9_]*`` and descend into a
  node's children.
* ``@list`` / ``@type`` / ``@signature`` are terminal meta segments giving
  introspection instead of model data (their body, if any, is ignored).
* ``@elem/<index>`` descends into a container element.

Behavioral corners worth knowing: ``@type`` of a method endpoint is the
string ``"method"`` and of a container ``"sequence<element>"``; ``@list``
of a method endpoint is an empty array (a callable has no sub-commands);
updating a container through its value assigns element-wise and must
preserve its size, since object creation and deletion endpoints are out of
scope.

Concurrency: the public entry points (process, list, type_of,
signature_of) serialize on one lock, so at most one command touches model
state at a time. Registration is meant to happen before serving begins and
is not safe against concurrent processing.
"""

from __future__ import annotations

import re
import threading
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Mapping, Optional, Sequence, Tuple, Union

from .dispatch import (
    OverloadSet,
    Overload,
    ParamKind,
    ParamType,
    Signature,
    arg_penalty,
    convert,
    resolve_and_call,
    type_tag,
)
from .errors import (
    ApiError,
    BadIndexError,
    DuplicateNameError,
    ERROR_CODES,
    InternalError,
    MalformedInputError,
    NotFoundError,
    NoMatchError,
)
from .value import Value, ValueKind, from_plain, parse

__all__ = [
    "Path",
    "NameSegment",
    "MetaSegment",
    "IndexSegment",
    "TypeDescriptor",
    "Request",
    "Response",
    "Handler",
    "AttributeHandler",
    "MethodHandler",
    "ContainerHandler",
    "NodeHandler",
    "Registry",
    "normalize_args",
    "attribute_of",
    "method_of",
    "container_of",
]

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_INDEX_RE = re.compile(r"[0-9]+\Z")
_METAS = ("@list", "@type", "@signature", "@elem")


@dataclass(frozen=True)
class NameSegment:
    text: str

    def __str__(self):
        return self.text


@dataclass(frozen=True)
class MetaSegment:
    op: str

    def __str__(self):
        return self.op


@dataclass(frozen=True)
class IndexSegment:
    index: int

    def __str__(self):
        return str(self.index)


Segment = Union[NameSegment, MetaSegment, IndexSegment]


@dataclass(frozen=True)
class Path:
    """Parsed endpoint path; the empty path addresses the registry root."""

    segments: Tuple[Segment, ...] = ()

    @classmethod
    def parse(cls, text: str) -> "Path":
        segs: list = []
        expect_index = False
        for part in text.split("/"):
            if not part:
                continue
            if expect_index:
                if not _INDEX_RE.fullmatch(part):
                    raise BadIndexError(
                        f"container index must be a non-negative integer, got {part!r}"
                    )
                segs.append(IndexSegment(int(part)))
                expect_index = False
            elif part.startswith("@"):
                if part not in _METAS:
                    raise NotFoundError(f"unknown meta endpoint {part!r}")
                segs.append(MetaSegment(part))
                expect_index = part == "@elem"
            elif _NAME_RE.fullmatch(part):
                segs.append(NameSegment(part))
            else:
                raise NotFoundError(f"invalid path segment {part!r}")
        if expect_index:
            raise BadIndexError("@elem requires an index segment")
        return cls(tuple(segs))

    def __str__(self):
        return "/" + "/".join(str(s) for s in self.segments)


@dataclass
class TypeDescriptor:
    """Reflected description of a registered type, consumed by introspection
    and the binding emitter. Attribute and method order is emission order."""

    name: str
    attributes: Dict[str, ParamType] = field(default_factory=dict)
    methods: Dict[str, Tuple[Signature, ...]] = field(default_factory=dict)
    supertype: Optional[str] = None

    def __post_init__(self):
        for member in list(self.attributes) + list(self.methods):
            if not _NAME_RE.fullmatch(member):
                raise ValueError(f"invalid member name {member!r} in type {self.name}")
        self.methods = {k: tuple(v) for k, v in self.methods.items()}


@dataclass(frozen=True)
class Request:
    """One command: where (path) and, for updates/calls, with what (body)."""

    path: Path
    body: Optional[Value] = None


@dataclass(frozen=True)
class Response:
    """Outcome of one command: a Value, or one of the six error codes."""

    value: Optional[Value] = None
    code: Optional[str] = None
    message: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.code is None

    @classmethod
    def success(cls, value: Value) -> "Response":
        return cls(value=value)

    @classmethod
    def failure(cls, code: str, message: str) -> "Response":
        if code not in ERROR_CODES:
            code = "Internal"
        return cls(code=code, message=message)

    def to_value(self) -> Value:
        """Outward form: the payload itself, or ``{error, message}``."""
        if self.ok:
            return self.value if self.value is not None else Value.null()
        return Value.object_(
            {"error": Value.string(self.code), "message": Value.string(self.message or "")}
        )


def normalize_args(body: Optional[Value]) -> Tuple[Value, ...]:
    """Argument tuple from a request body.

    No body means no arguments, an array body carries the argument tuple,
    and any other value is a single argument.
    """
    if body is None:
        return ()
    if body.kind is ValueKind.ARRAY:
        return body.as_array()
    return (body,)


class Handler:
    """Polymorphic endpoint wrapper; one subclass per endpoint flavor."""

    __slots__ = ()


class AttributeHandler(Handler):
    """Scalar attribute exposed as an implied getter/setter pair."""

    __slots__ = ("param_type", "getter", "setter")

    def __init__(self, param_type: ParamType, getter: Callable[[], Any],
                 setter: Callable[[Any], None]):
        self.param_type = param_type
        self.getter = getter
        self.setter = setter

    @property
    def type_name(self) -> str:
        return type_tag(self.param_type)


class MethodHandler(Handler):
    __slots__ = ("overloads",)

    def __init__(self, overloads: OverloadSet):
        self.overloads = overloads


class ContainerHandler(Handler):
    """Ordered element collection; ``element(i)`` yields the element handler."""

    __slots__ = ("element_type", "size", "element")

    def __init__(self, element_type: ParamType, size: Callable[[], int],
                 element: Callable[[int], Handler]):
        self.element_type = element_type
        self.size = size
        self.element = element


class NodeHandler(Handler):
    """Object node: a descriptor plus named child handlers."""

    __slots__ = ("descriptor", "children")

    def __init__(self, descriptor: TypeDescriptor, children: Mapping[str, Handler]):
        for name in children:
            if not _NAME_RE.fullmatch(name):
                raise ValueError(f"invalid child endpoint name {name!r}")
        self.descriptor = descriptor
        self.children: Dict[str, Handler] = dict(children)


def attribute_of(obj: Any, attr: str, param_type: ParamType) -> AttributeHandler:
    """Attribute handler bound to ``obj.<attr>``."""
    return AttributeHandler(
        param_type,
        getter=lambda: getattr(obj, attr),
        setter=lambda v: setattr(obj, attr, v),
    )


def method_of(name: str, *overloads: Overload) -> MethodHandler:
    return MethodHandler(OverloadSet(name, overloads))


def container_of(
    registry: "Registry",
    elements: Callable[[], Sequence],
    element_type: ParamType,
) -> ContainerHandler:
    """Container handler over a live sequence.

    Object-typed elements resolve through the registry's class bindings so
    each element node reflects its dynamic type; scalar elements get
    attribute semantics with write-through.
    """

    def element(i: int) -> Handler:
        if element_type.kind is ParamKind.OBJECT:
            return registry.node_for(elements()[i])
        return AttributeHandler(
            element_type,
            getter=lambda: elements()[i],
            setter=lambda v: elements().__setitem__(i, v),
        )

    return ContainerHandler(element_type, size=lambda: len(elements()), element=element)


_ChildFactory = Callable[[Any], Mapping[str, Handler]]


class Registry:
    """The endpoint map and its command executor."""

    def __init__(self):
        self._root = NodeHandler(TypeDescriptor("Root"), {})
        self._types: Dict[str, TypeDescriptor] = {}
        self._factories: Dict[str, _ChildFactory] = {}
        self._class_index: Dict[type, str] = {}
        self._roots: Dict[str, str] = {}
        self._type_table: Optional[Dict[str, Dict[str, ParamType]]] = None
        self._lock = threading.RLock()

    # -- registration --------------------------------------------------

    def register_type(
        self,
        descriptor: TypeDescriptor,
        python_class: Optional[type] = None,
        children: Optional[_ChildFactory] = None,
    ) -> None:
        """Record a type and, optionally, how to build handlers for an instance."""
        if descriptor.supertype is not None and descriptor.supertype not in self._types:
            raise InternalError(
                f"supertype {descriptor.supertype!r} of {descriptor.name!r} is not registered"
            )
        existing = self._types.get(descriptor.name)
        if existing is not None and existing is not descriptor:
            raise DuplicateNameError(f"type {descriptor.name!r} already registered")
        self._types[descriptor.name] = descriptor
        if children is not None:
            self._factories[descriptor.name] = children
        if python_class is not None:
            self._class_index[python_class] = descriptor.name
        self._type_table = None

    def node_for(self, obj: Any) -> NodeHandler:
        """Node handler for a live instance, reflecting its dynamic type.

        Children are the union of the supertype chain's members with the
        most-derived type's members taking precedence on name collisions.
        """
        type_name = None
        for klass in type(obj).__mro__:
            type_name = self._class_index.get(klass)
            if type_name is not None:
                break
        if type_name is None:
            raise InternalError(f"no registered type for {type(obj).__name__}")
        chain = []
        cursor: Optional[str] = type_name
        while cursor is not None:
            descriptor = self._types[cursor]
            chain.append(descriptor)
            cursor = descriptor.supertype
        children: Dict[str, Handler] = {}
        for descriptor in reversed(chain):  # base first, dynamic type wins
            factory = self._factories.get(descriptor.name)
            if factory is not None:
                children.update(factory(obj))
        return NodeHandler(chain[0], children)

    def register_node(
        self,
        parent: Union[str, Path],
        name: str,
        descriptor: TypeDescriptor,
        handlers: Mapping[str, Handler],
    ) -> None:
        """Mount a subtree under an existing node and record its descriptor."""
        if not _NAME_RE.fullmatch(name):
            raise InternalError(f"invalid endpoint name {name!r}")
        with self._lock:
            parent_path = self._as_path(parent)
            target, meta = self._resolve(parent_path)
            if meta is not None or not isinstance(target, NodeHandler):
                raise NotFoundError(f"parent {parent_path} is not an object node")
            if name in target.children:
                raise DuplicateNameError(
                    f"endpoint {name!r} already registered under {parent_path}"
                )
            self.register_type(descriptor)
            target.children[name] = NodeHandler(descriptor, handlers)
            if not parent_path.segments:
                self._roots[name] = descriptor.name

    def register_instance(
        self, name: str, obj: Any, parent: Union[str, Path] = "/"
    ) -> None:
        """Mount a bound instance; descriptor and children come from its type."""
        node = self.node_for(obj)
        self.register_node(parent, name, node.descriptor, node.children)

    # -- reflection consumed by the binding emitter ---------------------

    def type_descriptors(self) -> Tuple[TypeDescriptor, ...]:
        return tuple(self._types.values())

    def root_instances(self) -> Dict[str, str]:
        return dict(self._roots)

    def type_table(self) -> Mapping[str, Mapping[str, ParamType]]:
        if self._type_table is None:
            self._type_table = {
                name: dict(d.attributes) for name, d in self._types.items()
            }
        return self._type_table

    # -- command execution ----------------------------------------------

    def process(self, request: Request) -> Response:
        """Execute one command against the tree; never raises."""
        with self._lock:
            try:
                return Response.success(self._execute(request))
            except ApiError as exc:
                return Response.failure(exc.code, exc.message)
            except Exception as exc:  # defensive: keep the error channel closed
                return Response.failure("Internal", f"{type(exc).__name__}: {exc}")

    def process_text(self, path_text: str, body_text: Optional[str] = None) -> Response:
        """Parse path and body texts, then process; parse failures become
        coded error responses rather than exceptions."""
        try:
            path = Path.parse(path_text)
            body = parse(body_text) if body_text else None
        except ApiError as exc:
            return Response.failure(exc.code, exc.message)
        return self.process(Request(path, body))

    def list(self, path: Union[str, Path]) -> Response:
        """Sorted child endpoint names one level below ``path``.

        Containers contribute ``@elem``; attribute and method leaves yield
        an empty array.
        """
        return self._meta_response(path, self._list_value)

    def type_of(self, path: Union[str, Path]) -> Response:
        """Type name at ``path``; polymorphic nodes report their dynamic type."""
        return self._meta_response(path, lambda h: Value.string(self._type_name(h)))

    def signature_of(self, path: Union[str, Path]) -> Response:
        """Signatures of the callable at ``path``, one object per overload;
        attributes report their implied getter/setter pair."""
        return self._meta_response(path, self._signature_value)

    # -- internals --------------------------------------------------------

    @staticmethod
    def _as_path(path: Union[str, Path]) -> Path:
        return path if isinstance(path, Path) else Path.parse(path)

    def _meta_response(self, path, build: Callable[[Handler], Value]) -> Response:
        with self._lock:
            try:
                handler, meta = self._resolve(self._as_path(path))
                if meta is not None:
                    raise NotFoundError("meta endpoints are terminal")
                return Response.success(build(handler))
            except ApiError as exc:
                return Response.failure(exc.code, exc.message)
            except Exception as exc:
                return Response.failure("Internal", f"{type(exc).__name__}: {exc}")

    def _resolve(self, path: Path) -> Tuple[Handler, Optional[str]]:
        node: Handler = self._root
        segments = path.segments
        i = 0
        while i < len(segments):
            seg = segments[i]
            if isinstance(seg, NameSegment):
                if not isinstance(node, NodeHandler):
                    raise NotFoundError(f"no endpoint {seg.text!r} below a leaf")
                child = node.children.get(seg.text)
                if child is None:
                    raise NotFoundError(f"no such endpoint: {seg.text!r}")
                node = child
            elif isinstance(seg, MetaSegment):
                if seg.op == "@elem":
                    if not isinstance(node, ContainerHandler):
                        raise NotFoundError("@elem applies only to containers")
                    if i + 1 >= len(segments) or not isinstance(
                        segments[i + 1], IndexSegment
                    ):
                        raise BadIndexError("@elem requires an index segment")
                    index_seg = segments[i + 1]
                    size = node.size()
                    if index_seg.index < 0 or index_seg.index >= size:
                        raise BadIndexError(
                            f"index {index_seg.index} out of range for size {size}"
                        )
                    node = node.element(index_seg.index)
                    i += 1
                else:
                    if i != len(segments) - 1:
                        raise NotFoundError(f"{seg.op} must be the final segment")
                    return node, seg.op
            else:
                raise NotFoundError("index segment without @elem")
            i += 1
        return node, None

    def _execute(self, request: Request) -> Value:
        handler, meta = self._resolve(request.path)
        if meta == "@list":
            return self._list_value(handler)
        if meta == "@type":
            return Value.string(self._type_name(handler))
        if meta == "@signature":
            return self._signature_value(handler)
        body = request.body
        if isinstance(handler, MethodHandler):
            return resolve_and_call(
                handler.overloads,
                normalize_args(body),
                types=self.type_table(),
                array_body=body is not None and body.kind is ValueKind.ARRAY,
            )
        if body is not None:
            self._assign(handler, body)
        return self._read(handler)

    def _read(self, handler: Handler) -> Value:
        if isinstance(handler, AttributeHandler):
            return from_plain(handler.getter())
        if isinstance(handler, ContainerHandler):
            return Value.array(
                self._read(handler.element(i)) for i in range(handler.size())
            )
        if isinstance(handler, NodeHandler):
            return Value.object_(
                (name, self._read(child))
                for name, child in handler.children.items()
                if not isinstance(child, MethodHandler)
            )
        raise NoMatchError("method endpoints have no value; call them instead")

    def _assign(self, handler: Handler, value: Value) -> None:
        if isinstance(handler, AttributeHandler):
            penalty = arg_penalty(handler.param_type, value, self.type_table())
            if penalty == float("inf"):
                raise MalformedInputError(
                    f"cannot assign {value.kind.value} to attribute of type "
                    f"{handler.type_name}"
                )
            converted = convert(handler.param_type, value, self.type_table())
            try:
                handler.setter(converted)
            except Exception as exc:
                raise InternalError(str(exc) or type(exc).__name__) from exc
            return
        if isinstance(handler, NodeHandler):
            if value.kind is not ValueKind.OBJECT:
                raise MalformedInputError(
                    f"updating {handler.descriptor.name} requires an object body"
                )
            for key, entry in value.as_object().items():
                child = handler.children.get(key)
                if child is None or isinstance(child, MethodHandler):
                    raise MalformedInputError(
                        f"unknown attribute {key!r} for type {handler.descriptor.name}"
                    )
                self._assign(child, entry)
            return
        if isinstance(handler, ContainerHandler):
            if value.kind is not ValueKind.ARRAY:
                raise MalformedInputError("updating a container requires an array body")
            elements = value.as_array()
            size = handler.size()
            if len(elements) != size:
                raise MalformedInputError(
                    f"container update must preserve size {size}, got {len(elements)}"
                )
            for i, entry in enumerate(elements):
                self._assign(handler.element(i), entry)
            return
        raise MalformedInputError("method endpoints cannot be assigned")

    def _list_value(self, handler: Handler) -> Value:
        if isinstance(handler, NodeHandler):
            names = sorted(handler.children)
        elif isinstance(handler, ContainerHandler):
            names = ["@elem"]
        else:
            names = []
        return Value.array(Value.string(n) for n in names)

    def _type_name(self, handler: Handler) -> str:
        if isinstance(handler, NodeHandler):
            return handler.descriptor.name
        if isinstance(handler, AttributeHandler):
            return handler.type_name
        if isinstance(handler, ContainerHandler):
            return f"sequence<{type_tag(handler.element_type)}>"
        return "method"

    def _signature_value(self, handler: Handler) -> Value:
        if isinstance(handler, MethodHandler):
            signatures = [o.signature for o in handler.overloads.overloads]
        elif isinstance(handler, AttributeHandler):
            tag = handler.type_name
            signatures = [
                Signature(tag, ()),
                Signature(tag, (handler.param_type,)),
            ]
        else:
            raise NoMatchError("endpoint has no callable semantics")
        return Value.array(
            Value.object_(
                {
                    "ret": Value.string(sig.ret),
                    "args": Value.array(Value.string(type_tag(p)) for p in sig.params),
                }
            )
            for sig in signatures
        )

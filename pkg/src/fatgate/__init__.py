"""fatgate: a fat-API gateway.

Exposes an entire object tree (attributes, methods, containers, nested and
polymorphic objects) as hierarchical REST-style endpoints with penalty-based
overload resolution, introspection meta-endpoints, and generated typed
asynchronous TypeScript client bindings.
"""

from .errors import (
    AmbiguousError,
    ApiError,
    BadIndexError,
    DuplicateNameError,
    ERROR_CODES,
    InternalError,
    MalformedInputError,
    NoMatchError,
    NonFiniteNumberError,
    NotFoundError,
)
from .value import Value, ValueKind, format_number, from_plain, parse, serialize, to_plain
from .dispatch import (
    BOOL_LIKE,
    FLOAT_LIKE,
    INFINITE,
    INT_LIKE,
    Overload,
    OverloadSet,
    ParamKind,
    ParamType,
    STRING_LIKE,
    Signature,
    arg_penalty,
    convert,
    object_like,
    overload,
    overload_penalty,
    resolve,
    resolve_and_call,
    sequence_of,
    type_tag,
)
from .registry import (
    AttributeHandler,
    ContainerHandler,
    MethodHandler,
    NodeHandler,
    Path,
    Registry,
    Request,
    Response,
    TypeDescriptor,
    attribute_of,
    container_of,
    method_of,
    normalize_args,
)
from .demo_model import Group, Item, Model, Operation, Variable, build_demo_registry
from .http_service import ServiceConfig, ServiceHandle, serve, shutdown
from .tsgen import (
    CycleDetectedError,
    EmitPlan,
    UnknownTypeError,
    emit,
    emit_runtime,
    plan_from_registry,
)

__version__ = "0.1.0"

"""Typed asynchronous TypeScript client bindings from registered types.

Walks the registry's type descriptors and emits one proxy class per type:
scalar attributes become merged getter/setter accessors returning promises,
complex attributes become child proxies constructed from the parent's path
prefix, containers become ``CppSequence`` children, and each method becomes
an async wrapper delegating to ``$callMethod``. Subtypes extend their
supertype's proxy so a polymorphic element can be downcast by constructing
the subtype proxy over an existing proxy.

The target language has no function overloading, so an overload set
collapses to a single wrapper typed as the per-position union across
overloads, with optional trailing parameters where arities differ; actual
overload selection stays on the server. Output is deterministic: identical
plans yield byte-identical text.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Set, Tuple

from .dispatch import ParamKind, ParamType, Signature, type_tag
from .registry import Registry, TypeDescriptor

__all__ = [
    "EmitPlan",
    "UnknownTypeError",
    "CycleDetectedError",
    "plan_from_registry",
    "emit",
    "emit_runtime",
]


class UnknownTypeError(ValueError):
    """A signature references a type that is not in the plan."""


class CycleDetectedError(ValueError):
    """The type reference graph cannot be ordered."""


_PRIMITIVE_TS = {
    "int": "number",
    "double": "number",
    "bool": "boolean",
    "string": "string",
    "void": "void",
}


@dataclass
class EmitPlan:
    """Emission order (supertypes and referenced types first) plus the
    pre-constructed globals to declare, one per root instance."""

    types: Tuple[TypeDescriptor, ...] = ()
    roots: Dict[str, str] = field(default_factory=dict)


def _names_in_param(param: ParamType) -> Iterable[str]:
    if param.kind is ParamKind.SEQUENCE:
        yield from _names_in_param(param.element)
    elif param.kind is ParamKind.OBJECT:
        yield param.type_name


def _names_in_tag(tag: str) -> Iterable[str]:
    while tag.startswith("sequence<") and tag.endswith(">"):
        tag = tag[9:-1]
    if tag not in _PRIMITIVE_TS:
        yield tag


def _dependencies(descriptor: TypeDescriptor) -> Iterable[str]:
    if descriptor.supertype is not None:
        yield descriptor.supertype
    for param in descriptor.attributes.values():
        yield from _names_in_param(param)
    for signatures in descriptor.methods.values():
        for sig in signatures:
            yield from _names_in_tag(sig.ret)
            for param in sig.params:
                yield from _names_in_param(param)


def plan_from_registry(registry: Registry) -> EmitPlan:
    """Topologically ordered plan over every registered type."""
    descriptors = {d.name: d for d in registry.type_descriptors()}
    order: List[TypeDescriptor] = []
    state: Dict[str, str] = {}

    def visit(name: str, referrer: str):
        if name not in descriptors:
            raise UnknownTypeError(f"type {name!r} referenced by {referrer} is not registered")
        current = state.get(name)
        if current == "done":
            return
        if current == "visiting":
            raise CycleDetectedError(f"type reference cycle through {name!r}")
        state[name] = "visiting"
        for dep in _dependencies(descriptors[name]):
            visit(dep, name)
        state[name] = "done"
        order.append(descriptors[name])

    for name in descriptors:
        visit(name, "registry")
    return EmitPlan(tuple(order), registry.root_instances())


def _ts_of_param(param: ParamType) -> str:
    if param.kind is ParamKind.SEQUENCE:
        return _ts_of_param(param.element) + "[]"
    if param.kind is ParamKind.OBJECT:
        return param.type_name
    return _PRIMITIVE_TS[type_tag(param)]


def _ts_of_tag(tag: str) -> str:
    if tag in _PRIMITIVE_TS:
        return _PRIMITIVE_TS[tag]
    if tag.startswith("sequence<") and tag.endswith(">"):
        return _ts_of_tag(tag[9:-1]) + "[]"
    return tag


def _is_child_proxy(param: ParamType) -> bool:
    return param.kind in (ParamKind.OBJECT, ParamKind.SEQUENCE)


def _child_class(param: ParamType) -> str:
    return param.type_name if param.kind is ParamKind.OBJECT else "CppSequence"


def _method_wrapper(name: str, signatures: Tuple[Signature, ...]) -> str:
    arities = [len(sig.params) for sig in signatures]
    lo, hi = min(arities), max(arities)
    params: List[str] = []
    for i in range(hi):
        variants: List[str] = []
        for sig in signatures:
            if len(sig.params) > i:
                ts = _ts_of_param(sig.params[i])
                if ts not in variants:
                    variants.append(ts)
        optional = "?" if i >= lo else ""
        params.append(f"a{i + 1}{optional}: {'|'.join(variants)}")
    returns: List[str] = []
    for sig in signatures:
        ts = _ts_of_tag(sig.ret)
        if ts not in returns:
            returns.append(ts)
    arg_list = "".join(f",a{i + 1}" for i in range(hi))
    return (
        f"  async {name}({', '.join(params)}): Promise<{'|'.join(returns)}> "
        f"{{return this.$callMethod('{name}'{arg_list});}}"
    )


def _emit_type(descriptor: TypeDescriptor) -> str:
    base = descriptor.supertype or "CppClass"
    children = [
        (name, param)
        for name, param in descriptor.attributes.items()
        if _is_child_proxy(param)
    ]
    lines = [f"export class {descriptor.name} extends {base} {{"]
    for name, param in children:
        lines.append(f"  {name}: {_child_class(param)};")
    lines.append("  constructor(prefix: string | CppClass) {")
    lines.append("    super(prefix);")
    for name, param in children:
        lines.append(
            f"    this.{name}=new {_child_class(param)}(this.$prefix()+'.{name}');"
        )
    lines.append("  }")
    for name, param in descriptor.attributes.items():
        if _is_child_proxy(param):
            continue
        ts = _ts_of_param(param)
        lines.append(
            f"  async {name}(...args: {ts}[]): Promise<{ts}> "
            f"{{return this.$callMethod('{name}',...args);}}"
        )
    for name, signatures in descriptor.methods.items():
        lines.append(_method_wrapper(name, signatures))
    lines.append("}")
    return "\n".join(lines)


def _check_references(plan: EmitPlan) -> None:
    known: Set[str] = {d.name for d in plan.types}
    for descriptor in plan.types:
        for dep in _dependencies(descriptor):
            if dep not in known:
                raise UnknownTypeError(
                    f"type {dep!r} referenced by {descriptor.name} is not in the plan"
                )
    for global_name, type_name in plan.roots.items():
        if type_name not in known:
            raise UnknownTypeError(
                f"root instance {global_name!r} has unknown type {type_name!r}"
            )


def emit(plan: EmitPlan) -> str:
    """Complete bindings source: fixed runtime preamble, one proxy class per
    planned type, then one pre-constructed global per root instance."""
    _check_references(plan)
    parts = [emit_runtime()]
    for descriptor in plan.types:
        parts.append(_emit_type(descriptor))
    globals_block = [
        f'export let {name}=new {type_name}("{name}");'
        for name, type_name in plan.roots.items()
    ]
    if globals_block:
        parts.append("\n".join(globals_block))
    return "\n\n".join(parts) + "\n"


_RUNTIME = """\
// Generated client bindings: runtime base plus one proxy class per exposed
// type. Do not edit by hand.
//
// Every runtime member is $-prefixed; generated member names never are, so
// the two can never clash.

export class ApiCallError extends Error {
  readonly code: string;
  constructor(code: string, message: string) {
    super(message);
    this.code = code;
    this.name = 'ApiCallError';
  }
}

let backendUrl = 'http://127.0.0.1:8080';

/** Point every proxy at a service instance. */
export function setBackendUrl(url: string): void {
  backendUrl = url.replace(/\\/+$/, '');
}

async function send(endpoint: string, body?: string): Promise<any> {
  const reply = await fetch(
    backendUrl + endpoint,
    body === undefined ? { method: 'GET' } : { method: 'PUT', body },
  );
  const text = await reply.text();
  const data: any = text.length > 0 ? JSON.parse(text) : null;
  if (!reply.ok) {
    if (data !== null && typeof data === 'object' && typeof data.error === 'string') {
      throw new ApiCallError(data.error, String(data.message ?? ''));
    }
    throw new ApiCallError('Internal', 'HTTP status ' + reply.status);
  }
  return data;
}

export class CppClass {
  private readonly $prefixText: string;

  constructor(prefix: string | CppClass) {
    this.$prefixText = typeof prefix === 'string' ? prefix : prefix.$prefix();
  }

  $prefix(): string {
    return this.$prefixText;
  }

  private $endpoint(member?: string): string {
    const dotted = member === undefined ? this.$prefixText : this.$prefixText + '.' + member;
    return '/' + dotted.split('.').join('/');
  }

  /**
   * Call the named member asynchronously; the promise resolves or rejects
   * with the return value or error of the remote call. One argument travels
   * as a bare JSON value, several as a JSON array; trailing undefined
   * arguments (from collapsed optional parameters) are dropped.
   */
  async $callMethod(name: string, ...args: any[]): Promise<any> {
    while (args.length > 0 && args[args.length - 1] === undefined) {
      args.pop();
    }
    if (args.length === 0) {
      return send(this.$endpoint(name));
    }
    const body = args.length === 1 ? JSON.stringify(args[0]) : JSON.stringify(args);
    return send(this.$endpoint(name), body);
  }

  /** Blocking variant; the HTTP transport cannot block, so this raises. */
  $callMethodSync(name: string, ...args: any[]): never {
    throw new ApiCallError(
      'Unsupported',
      'synchronous calls need an in-process backend; ' + name + ' was called over HTTP',
    );
  }

  /** Read (no argument) or bulk-assign (one argument) this node's public
   * attributes; assignment resolves to the updated whole-object value. */
  async $properties(value?: any): Promise<any> {
    return send(this.$endpoint(), value === undefined ? undefined : JSON.stringify(value));
  }
}

export class CppSequence extends CppClass {
  /** Proxy for one container element; downcast it via a subtype constructor. */
  $elem(index: number): CppClass {
    return new CppClass(this.$prefix() + '.@elem.' + index);
  }

  async $size(): Promise<number> {
    const value = await this.$properties();
    return Array.isArray(value) ? value.length : 0;
  }
}"""


def emit_runtime() -> str:
    """The fixed runtime preamble shared by all generated bindings."""
    return _RUNTIME

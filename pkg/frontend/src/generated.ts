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
  backendUrl = url.replace(/\/+$/, '');
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
}

export class Item extends CppClass {
  constructor(prefix: string | CppClass) {
    super(prefix);
  }
}

export class Variable extends Item {
  constructor(prefix: string | CppClass) {
    super(prefix);
  }
  async name(...args: string[]): Promise<string> {return this.$callMethod('name',...args);}
  async value(...args: number[]): Promise<number> {return this.$callMethod('value',...args);}
}

export class Operation extends Item {
  constructor(prefix: string | CppClass) {
    super(prefix);
  }
  async op(...args: string[]): Promise<string> {return this.$callMethod('op',...args);}
}

export class Group extends CppClass {
  items: CppSequence;
  constructor(prefix: string | CppClass) {
    super(prefix);
    this.items=new CppSequence(this.$prefix()+'.items');
  }
  async name(...args: string[]): Promise<string> {return this.$callMethod('name',...args);}
  async numItems(): Promise<number> {return this.$callMethod('numItems');}
  async addVariable(a1: string, a2: number): Promise<void> {return this.$callMethod('addVariable',a1,a2);}
  async addOperation(a1: string): Promise<void> {return this.$callMethod('addOperation',a1);}
}

export class Model extends CppClass {
  group: Group;
  constructor(prefix: string | CppClass) {
    super(prefix);
    this.group=new Group(this.$prefix()+'.group');
  }
  async t(...args: number[]): Promise<number> {return this.$callMethod('t',...args);}
  async dt(...args: number[]): Promise<number> {return this.$callMethod('dt',...args);}
  async reset(): Promise<void> {return this.$callMethod('reset');}
  async step(a1?: number): Promise<number> {return this.$callMethod('step',a1);}
  async exportEquations(a1: string, a2: boolean): Promise<void> {return this.$callMethod('exportEquations',a1,a2);}
  async classifyOp(a1: string): Promise<string> {return this.$callMethod('classifyOp',a1);}
}

export let model=new Model("model");

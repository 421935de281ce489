/**
 * Conformance scenarios driving a live service exclusively through the
 * generated proxies; raw-HTTP cross-checks derive their paths from the
 * proxies' own prefixes, so any generator or path-grammar drift fails loudly.
 *
 * Scenarios run sequentially; each awaits its promise before the next begins.
 */

import { ApiCallError, Variable, model, setBackendUrl } from './generated';

export interface HarnessConfig {
  /** Base URL of a running service instance. */
  baseUrl: string;
  /** Where the bindings under test were generated (informational). */
  bindingsPath: string;
}

class ScenarioFailure extends Error {}

function describe(value: unknown): string {
  return value === undefined ? 'undefined' : JSON.stringify(value);
}

function expectEqual(label: string, actual: unknown, expected: unknown): void {
  if (JSON.stringify(actual) !== JSON.stringify(expected)) {
    throw new ScenarioFailure(
      `${label}:\n    expected ${describe(expected)}\n    observed ${describe(actual)}`,
    );
  }
}

function expectClose(label: string, actual: number, expected: number, tol = 1e-9): void {
  if (Math.abs(actual - expected) > tol) {
    throw new ScenarioFailure(`${label}: expected ~${expected}, observed ${actual}`);
  }
}

/** Endpoint path derived from a proxy prefix, never hand-written. */
function endpointOf(prefix: string, member?: string): string {
  const dotted = member === undefined ? prefix : prefix + '.' + member;
  return '/' + dotted.split('.').join('/');
}

function makeRawCall(baseUrl: string) {
  return async (path: string, body?: string): Promise<any> => {
    const reply = await fetch(
      baseUrl + path,
      body === undefined ? { method: 'GET' } : { method: 'PUT', body },
    );
    const text = await reply.text();
    return text.length > 0 ? JSON.parse(text) : null;
  };
}

interface Scenario {
  name: string;
  run: () => Promise<void>;
}

function buildScenarios(baseUrl: string): Scenario[] {
  const raw = makeRawCall(baseUrl);
  return [
    {
      name: 'fresh model reads t = 0',
      run: async () => {
        const viaProxy = await model.t();
        expectEqual('model.t()', viaProxy, 0);
        expectEqual('raw GET of t', await raw(endpointOf(model.$prefix(), 't')), viaProxy);
      },
    },
    {
      name: 'attribute accessor assigns t = 10.2 and reads it back',
      run: async () => {
        expectEqual('model.t(10.2)', await model.t(10.2), 10.2);
        expectEqual('model.t()', await model.t(), 10.2);
        expectEqual('raw GET of t', await raw(endpointOf(model.$prefix(), 't')), 10.2);
      },
    },
    {
      name: 'overloaded step is callable at both arities',
      run: async () => {
        await model.reset();
        const one = await model.step();
        expectClose('step()', one, 0.1);
        const four = await model.step(3);
        expectClose('step(3)', four, 0.4);
        expectEqual('raw GET of t', await raw(endpointOf(model.$prefix(), 't')), four);
      },
    },
    {
      name: '$properties reads the nested group as a whole object',
      run: async () => {
        const props = await model.group.$properties();
        expectEqual('group name', props.name, 'root');
        expectEqual('group items', props.items, []);
        expectEqual('raw GET of group', await raw(endpointOf(model.group.$prefix())), props);
      },
    },
    {
      name: '$properties bulk-assign resolves to the updated whole object',
      run: async () => {
        const updated = await model.group.$properties({ name: 'renamed' });
        expectEqual('updated name', updated.name, 'renamed');
        expectEqual('group.name()', await model.group.name(), 'renamed');
        await model.group.$properties({ name: 'root' });
      },
    },
    {
      name: 'added Variable downcasts from the element proxy',
      run: async () => {
        await model.group.addVariable('x', 5);
        expectEqual('numItems', await model.group.numItems(), 1);
        const element = model.group.items.$elem(0);
        expectEqual(
          'dynamic element type',
          await raw(endpointOf(element.$prefix(), '@type')),
          'Variable',
        );
        const variable = new Variable(element);
        expectEqual('variable.value()', await variable.value(), 5);
        expectEqual('variable.name()', await variable.name(), 'x');
        expectEqual(
          'raw GET of element value',
          await raw(endpointOf(variable.$prefix(), 'value')),
          5,
        );
      },
    },
    {
      name: 'a type-mismatched call rejects with the NoMatch error',
      run: async () => {
        try {
          // deliberately defeat the generated typing to probe the server
          await (model.step as unknown as (a: string) => Promise<number>)('x');
        } catch (err) {
          if (err instanceof ApiCallError && err.code === 'NoMatch' && err.message.length > 0) {
            return;
          }
          throw new ScenarioFailure(`unexpected rejection: ${String(err)}`);
        }
        throw new ScenarioFailure('call succeeded where NoMatch was expected');
      },
    },
    {
      name: '$callMethodSync is Unsupported over the HTTP transport',
      run: async () => {
        try {
          model.$callMethodSync('classifyOp', 'add');
        } catch (err) {
          if (err instanceof ApiCallError && err.code === 'Unsupported') {
            return;
          }
          throw new ScenarioFailure(`unexpected error: ${String(err)}`);
        }
        throw new ScenarioFailure('sync call did not raise');
      },
    },
  ];
}

export async function runScenarios(config: HarnessConfig): Promise<number> {
  setBackendUrl(config.baseUrl);
  console.log(`driving ${config.baseUrl} via bindings from ${config.bindingsPath}`);
  let failures = 0;
  for (const scenario of buildScenarios(config.baseUrl)) {
    try {
      await scenario.run();
      console.log(`ok   ${scenario.name}`);
    } catch (err) {
      failures += 1;
      const detail = err instanceof Error ? err.message : String(err);
      console.log(`FAIL ${scenario.name}\n  ${detail}`);
    }
  }
  return failures;
}

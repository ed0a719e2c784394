import type { ApiClient, ClosedLoopRequest, SolveRequest } from "../src/api.js";
import type {
  ClosedLoopReport,
  FixtureInfo,
  SimulateReport,
  SimulateRequest,
  SolveReport,
  VerdictLabel,
} from "../src/types.js";

export function deferred<T>() {
  let resolve!: (value: T) => void;
  let reject!: (reason: unknown) => void;
  const promise = new Promise<T>((res, rej) => {
    resolve = res;
    reject = rej;
  });
  return { promise, resolve, reject };
}

export function cannedAnalysis(label: VerdictLabel = "stable"): ClosedLoopReport {
  return {
    p: [315.32, 1118.27, 1026.57, 561.53, 75.82, 22.4, 1],
    verdict: { stable: label === "stable", degenerate: false, first_column: [1, 22.4], label },
    roots: [
      { re: -19.88, im: 0 },
      { re: -0.21, im: 4.73 },
      { re: -0.21, im: -4.73 },
    ],
    dc_gains: { tracking: { u: 0.947 }, disturbance: { u: 0 } },
    diagram: {
      "closed-loop": [
        { i: 0, log10_magnitude: 2.5, sign: "+" },
        { i: 1, log10_magnitude: 3.0, sign: "+" },
      ],
    },
    profile: {
      coeffs: [315.32, 1118.27],
      gammas: [3.7],
      gamma_stars: [0.5],
      tau: 3.55,
      taus: [0.92],
      sign_uniform: true,
    },
    gains: {},
  };
}

export function cannedSimulation(): SimulateReport {
  return {
    t: [0, 0.5, 1.0],
    channels: { u: [0, 0.4, 0.8], reference: [1, 1, 1] },
    step: 0.5,
    stride: 1,
    diverged: false,
    tracked_channel: "u",
    metrics: {
      available: true,
      settling_time_s: 2.0,
      overshoot_fraction: 0.0,
      steady_state_error: 0.001,
    },
  };
}

export function cannedSolve(): SolveReport {
  return {
    gains: { k0: 0.1, k1: -0.2, k2: -10, k3: -2, k4: 2 },
    residuals: [0.5, -0.2, 0.1, 0, 0, 0, 0],
    achieved: [1, 2, 3],
    target: [1.1, 2.1, 3.1],
  };
}

export interface FakeCall {
  endpoint: "closedLoop" | "simulate" | "solve" | "fixtures";
  request: unknown;
}

/** Scriptable client: every call returns a deferred the test settles by hand. */
export class FakeApiClient implements ApiClient {
  calls: FakeCall[] = [];
  pendingClosedLoop: Array<ReturnType<typeof deferred<ClosedLoopReport>>> = [];
  pendingSimulate: Array<ReturnType<typeof deferred<SimulateReport>>> = [];
  pendingSolve: Array<ReturnType<typeof deferred<SolveReport>>> = [];

  fixtures(): Promise<FixtureInfo[]> {
    this.calls.push({ endpoint: "fixtures", request: null });
    return Promise.resolve([
      {
        name: "r50-hover-lonvert",
        form: "transfer-matrix",
        input_names: ["delta_lon", "delta_col"],
        output_names: ["u", "q", "theta", "w"],
        delta: [-24.11, -36.71, 55.56, 97.08, 22.4, 1],
      },
    ]);
  }

  closedLoop(req: ClosedLoopRequest): Promise<ClosedLoopReport> {
    this.calls.push({ endpoint: "closedLoop", request: req });
    const d = deferred<ClosedLoopReport>();
    this.pendingClosedLoop.push(d);
    return d.promise;
  }

  simulate(req: SimulateRequest): Promise<SimulateReport> {
    this.calls.push({ endpoint: "simulate", request: req });
    const d = deferred<SimulateReport>();
    this.pendingSimulate.push(d);
    return d.promise;
  }

  solve(req: SolveRequest): Promise<SolveReport> {
    this.calls.push({ endpoint: "solve", request: req });
    const d = deferred<SolveReport>();
    this.pendingSolve.push(d);
    return d.promise;
  }

  countOf(endpoint: FakeCall["endpoint"]): number {
    return this.calls.filter((c) => c.endpoint === endpoint).length;
  }
}

/** Let queued microtasks run. */
export function settle(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}

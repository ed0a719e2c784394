import type {
  ClosedLoopReport,
  ControllerDoc,
  FixtureInfo,
  SimulateReport,
  SimulateRequest,
  SolveReport,
} from "./types.js";

export interface SolveRequest {
  model_ref: string;
  controller: ControllerDoc;
  tau: number;
  gammas?: number[];
  a0?: number;
}

export interface ClosedLoopRequest {
  model_ref: string;
  controller: ControllerDoc;
  gains: Record<string, number>;
}

// Thin seam over the service endpoints so tests can substitute a fake.
export interface ApiClient {
  fixtures(): Promise<FixtureInfo[]>;
  closedLoop(req: ClosedLoopRequest): Promise<ClosedLoopReport>;
  simulate(req: SimulateRequest): Promise<SimulateReport>;
  solve(req: SolveRequest): Promise<SolveReport>;
}

async function postJson<T>(url: string, body: unknown): Promise<T> {
  const response = await fetch(url, {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify(body),
  });
  if (!response.ok) {
    let detail = `${response.status}`;
    try {
      const payload = await response.json();
      detail = typeof payload.detail === "string" ? payload.detail : JSON.stringify(payload.detail);
    } catch {
      // keep the status line
    }
    throw new Error(detail);
  }
  return (await response.json()) as T;
}

export class HttpApiClient implements ApiClient {
  constructor(private readonly base: string = "") {}

  async fixtures(): Promise<FixtureInfo[]> {
    const response = await fetch(`${this.base}/api/fixtures`);
    if (!response.ok) {
      throw new Error(`fixtures: ${response.status}`);
    }
    const body = (await response.json()) as { fixtures: FixtureInfo[] };
    return body.fixtures;
  }

  closedLoop(req: ClosedLoopRequest): Promise<ClosedLoopReport> {
    return postJson(`${this.base}/api/closed-loop`, req);
  }

  simulate(req: SimulateRequest): Promise<SimulateReport> {
    return postJson(`${this.base}/api/simulate`, req);
  }

  solve(req: SolveRequest): Promise<SolveReport> {
    return postJson(`${this.base}/api/solve`, req);
  }
}

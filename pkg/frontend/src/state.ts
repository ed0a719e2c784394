import type { ApiClient } from "./api.js";
import type {
  ClosedLoopReport,
  ControllerDoc,
  SignalDoc,
  SimulateReport,
  SolveReport,
} from "./types.js";
import { validateTarget } from "./validate.js";

// Certified hover design shipped as the starting point.
export const HOVER_CONTROLLER: ControllerDoc = {
  denominator: [0, 1],
  reference_numerator: ["k0"],
  feedback: { u: ["k0", "k1"], theta: ["k2", "k3"], w: ["k4"] },
  actuated_input: "delta_lon",
};

export const HOVER_GAINS: Record<string, number> = {
  k0: 0.08412,
  k1: -0.30369,
  k2: -13.90378,
  k3: -2.56712,
  k4: 2.4619,
};

export interface ScenarioSettings {
  reference: SignalDoc;
  disturbance: SignalDoc;
  horizon: number;
  step: number;
}

export const DEFAULT_SCENARIO: ScenarioSettings = {
  reference: { kind: "doublet", amplitude: 1.0, t0: 1.0, half_width: 5.0 },
  disturbance: { kind: "zero" },
  horizon: 30.0,
  step: 0.002,
};

// One completed analyze+simulate pair; committed as a unit so the badge,
// diagram, poles, and responses can never interleave across requests.
export interface CommittedPayload {
  requestId: number;
  analysis: ClosedLoopReport;
  simulation: SimulateReport;
}

export interface SolvePayload {
  requestId: number;
  report: SolveReport;
}

export type TunerMode = "gains" | "target";

export interface TunerState {
  fixture: string | null;
  controller: ControllerDoc;
  gains: Record<string, number>;
  mode: TunerMode;
  tau: number;
  gammas: number[];
  scenario: ScenarioSettings;
  inFlight: boolean; // stale flag: a request is running, view lags the inputs
  validationError: string | null;
  requestError: string | null;
  committed: CommittedPayload | null;
  solve: SolvePayload | null;
}

export type Listener = (state: TunerState) => void;

function initialState(): TunerState {
  return {
    fixture: null,
    controller: HOVER_CONTROLLER,
    gains: { ...HOVER_GAINS },
    mode: "gains",
    tau: 1.0,
    gammas: [2.5, 2, 2, 2, 2],
    scenario: DEFAULT_SCENARIO,
    inFlight: false,
    validationError: null,
    requestError: null,
    committed: null,
    solve: null,
  };
}

export class TunerStore {
  private state: TunerState = initialState();
  private listeners = new Set<Listener>();
  private issued = 0;

  constructor(private readonly api: ApiClient) {}

  getState(): TunerState {
    return this.state;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.add(listener);
    return () => this.listeners.delete(listener);
  }

  private commit(patch: Partial<TunerState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) {
      listener(this.state);
    }
  }

  async selectFixture(name: string): Promise<void> {
    this.commit({ fixture: name });
    await this.refresh();
  }

  setScenario(scenario: ScenarioSettings): void {
    this.commit({ scenario });
  }

  /** Gain-slider path: analyze and simulate, newest request wins. */
  async setGains(gains: Record<string, number>): Promise<void> {
    this.commit({ gains: { ...gains }, mode: "gains", validationError: null });
    await this.refresh();
  }

  /** Target path: server-side solve first, then the gain pipeline. */
  async setTarget(tau: number, gammas: number[]): Promise<void> {
    const problem = validateTarget(tau, gammas);
    if (problem !== null) {
      // inline validation: no request leaves the browser
      this.commit({ mode: "target", tau, gammas, validationError: problem });
      return;
    }
    const fixture = this.state.fixture;
    if (fixture === null) {
      return;
    }
    const id = ++this.issued;
    this.commit({ mode: "target", tau, gammas, validationError: null, inFlight: true });
    try {
      const report = await this.api.solve({
        model_ref: fixture,
        controller: this.state.controller,
        tau,
        gammas,
      });
      if (id !== this.issued) {
        return; // superseded
      }
      this.commit({ solve: { requestId: id, report }, gains: { ...report.gains } });
      await this.runPipeline(id);
    } catch (err) {
      if (id !== this.issued) {
        return;
      }
      this.commit({ inFlight: false, requestError: messageOf(err) });
    }
  }

  /** Re-run the analyze+simulate pipeline for the current inputs. */
  async refresh(): Promise<void> {
    if (this.state.fixture === null) {
      return;
    }
    const id = ++this.issued;
    this.commit({ inFlight: true });
    await this.runPipeline(id);
  }

  private async runPipeline(id: number): Promise<void> {
    const { fixture, controller, gains, scenario } = this.state;
    if (fixture === null) {
      return;
    }
    try {
      const analysis = await this.api.closedLoop({ model_ref: fixture, controller, gains });
      const simulation = await this.api.simulate({
        model_ref: fixture,
        controller,
        gains,
        reference: scenario.reference,
        disturbance: scenario.disturbance,
        horizon: scenario.horizon,
        step: scenario.step,
      });
      if (id !== this.issued) {
        return; // a newer request took over; drop this result unrendered
      }
      // atomic: badge, diagram, poles, and responses land in one commit
      this.commit({
        committed: { requestId: id, analysis, simulation },
        inFlight: false,
        requestError: null,
      });
    } catch (err) {
      if (id !== this.issued) {
        return;
      }
      // keep the previous committed payload on screen; surface a banner
      this.commit({ inFlight: false, requestError: messageOf(err) });
    }
  }
}

function messageOf(err: unknown): string {
  return err instanceof Error ? err.message : String(err);
}

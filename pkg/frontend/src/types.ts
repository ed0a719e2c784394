// Payload shapes of the tuner service API.  The UI renders these verbatim;
// every displayed number comes from a service response.

export type Sign = "+" | "-" | "0";

export interface DiagramPoint {
  i: number;
  log10_magnitude: number | null;
  sign: Sign;
}

export type DiagramDataset = Record<string, DiagramPoint[]>;

export interface RootPoint {
  re: number;
  im: number;
}

export type VerdictLabel = "stable" | "unstable" | "inconclusive";

export interface Verdict {
  stable: boolean;
  degenerate: boolean;
  first_column: number[];
  label: VerdictLabel;
}

export interface Profile {
  coeffs: number[];
  gammas: (number | null)[];
  gamma_stars: (number | null)[];
  tau: number | null;
  taus: (number | null)[];
  sign_uniform: boolean;
}

export interface ClosedLoopReport {
  p: number[];
  verdict: Verdict;
  roots: RootPoint[];
  dc_gains: {
    tracking: Record<string, number | null>;
    disturbance: Record<string, number | null>;
  };
  diagram: DiagramDataset;
  profile: Profile | null;
  gains: Record<string, number>;
}

export interface ResponseMetrics {
  available: boolean;
  settling_time_s: number | null;
  overshoot_fraction: number | null;
  steady_state_error: number | null;
}

export interface SimulateReport {
  t: number[];
  channels: Record<string, number[]>;
  step: number;
  stride: number;
  diverged: boolean;
  tracked_channel: string;
  metrics: ResponseMetrics;
}

export interface SolveReport {
  gains: Record<string, number>;
  residuals: number[];
  achieved: number[];
  target: number[];
}

export interface FixtureInfo {
  name: string;
  form: string;
  input_names: string[];
  output_names: string[];
  delta: number[];
}

export interface ControllerDoc {
  denominator: number[];
  reference_numerator: (number | string)[];
  feedback: Record<string, (number | string)[]>;
  actuated_input: string;
}

export interface SignalDoc {
  kind: "doublet" | "step" | "impulse" | "zero";
  amplitude?: number;
  t0?: number;
  half_width?: number;
  area?: number;
}

export interface SimulateRequest {
  model_ref: string;
  controller: ControllerDoc;
  gains: Record<string, number>;
  reference: SignalDoc;
  disturbance: SignalDoc;
  horizon: number;
  step: number;
  max_points?: number;
}

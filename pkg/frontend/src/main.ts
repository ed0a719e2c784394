import { HttpApiClient } from "./api.js";
import { debounce } from "./debounce.js";
import { diagramModel, renderDiagram } from "./diagram.js";
import { poleModel, renderPoles } from "./poles.js";
import { renderResponse, responseModel } from "./response.js";
import { renderResiduals, residualModel } from "./residuals.js";
import { HOVER_GAINS, TunerStore } from "./state.js";
import type { TunerState } from "./state.js";
import { parseNumberList } from "./validate.js";

const GAIN_NAMES = ["k0", "k1", "k2", "k3", "k4"];
const DEBOUNCE_MS = 150;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

interface GainRow {
  slider: HTMLInputElement;
  box: HTMLInputElement;
  min: HTMLInputElement;
  max: HTMLInputElement;
}

function buildGainRows(store: TunerStore): Record<string, GainRow> {
  const container = el<HTMLDivElement>("gain-rows");
  const rows: Record<string, GainRow> = {};
  const pushGains = debounce(() => {
    const gains: Record<string, number> = {};
    for (const name of GAIN_NAMES) {
      gains[name] = Number(rows[name].box.value);
    }
    void store.setGains(gains);
  }, DEBOUNCE_MS);

  for (const name of GAIN_NAMES) {
    const value = HOVER_GAINS[name];
    const span = Math.max(1, Math.abs(value) * 2);
    const row = document.createElement("div");
    row.className = "gain-row";
    row.innerHTML = `
      <label>${name}</label>
      <input type="number" class="range-edge" id="${name}-min" value="${(value - span).toFixed(3)}" step="any">
      <input type="range" id="${name}-slider" min="${(value - span).toFixed(3)}"
             max="${(value + span).toFixed(3)}" step="any" value="${value}">
      <input type="number" class="range-edge" id="${name}-max" value="${(value + span).toFixed(3)}" step="any">
      <input type="number" class="gain-box" id="${name}-box" value="${value}" step="any">
    `;
    container.appendChild(row);
    const slider = el<HTMLInputElement>(`${name}-slider`);
    const box = el<HTMLInputElement>(`${name}-box`);
    const min = el<HTMLInputElement>(`${name}-min`);
    const max = el<HTMLInputElement>(`${name}-max`);
    slider.addEventListener("input", () => {
      box.value = slider.value;
      pushGains();
    });
    box.addEventListener("change", () => {
      slider.value = box.value;
      pushGains();
    });
    min.addEventListener("change", () => (slider.min = min.value));
    max.addEventListener("change", () => (slider.max = max.value));
    rows[name] = { slider, box, min, max };
  }
  return rows;
}

function fmt(x: number | null | undefined, digits = 4): string {
  if (x === null || x === undefined || Number.isNaN(x)) {
    return "–";
  }
  return Math.abs(x) >= 1e4 || (x !== 0 && Math.abs(x) < 1e-3)
    ? x.toExponential(digits - 1)
    : x.toFixed(digits);
}

function render(state: TunerState, rows: Record<string, GainRow>): void {
  const badge = el<HTMLSpanElement>("badge");
  const label = state.committed?.analysis.verdict.label ?? "–";
  badge.textContent = state.inFlight ? `${label} (updating…)` : label;
  badge.className = `badge ${state.committed?.analysis.verdict.label ?? "none"}`;

  el<HTMLDivElement>("validation").textContent = state.validationError ?? "";
  const banner = el<HTMLDivElement>("error-banner");
  banner.style.display = state.requestError === null ? "none" : "block";
  el<HTMLSpanElement>("error-text").textContent = state.requestError ?? "";

  if (state.committed !== null) {
    const { analysis, simulation, requestId } = state.committed;
    el<HTMLDivElement>("diagram").innerHTML = renderDiagram(diagramModel(analysis.diagram));
    el<HTMLDivElement>("poles").innerHTML = renderPoles(poleModel(analysis.roots));
    const channels = [simulation.tracked_channel, "reference"];
    el<HTMLDivElement>("response").innerHTML = renderResponse(responseModel(simulation, channels));
    el<HTMLSpanElement>("request-id").textContent = String(requestId);
    const prof = analysis.profile;
    el<HTMLDivElement>("profile").innerHTML = prof
      ? `tau = ${fmt(prof.tau)} s · gammas = [${prof.gammas.map((g) => fmt(g, 3)).join(", ")}]` +
        ` · dc(u←r) = ${fmt(analysis.dc_gains.tracking["u"])}`
      : "";
    const m = simulation.metrics;
    el<HTMLDivElement>("metrics").textContent = m.available
      ? `settling ${fmt(m.settling_time_s, 2)} s · sse ${fmt(m.steady_state_error, 4)}` +
        (simulation.diverged ? " · DIVERGED" : "")
      : simulation.diverged
        ? "diverged"
        : "";
  }
  if (state.solve !== null) {
    el<HTMLDivElement>("residuals").innerHTML = renderResiduals(residualModel(state.solve.report));
    for (const name of GAIN_NAMES) {
      const value = state.solve.report.gains[name];
      if (value !== undefined && rows[name]) {
        rows[name].box.value = String(value);
        rows[name].slider.value = String(value);
      }
    }
  }
}

async function boot(): Promise<void> {
  const api = new HttpApiClient("");
  const store = new TunerStore(api);
  const rows = buildGainRows(store);
  store.subscribe((state) => render(state, rows));

  el<HTMLButtonElement>("retry").addEventListener("click", () => void store.refresh());

  const pushTarget = debounce(() => {
    const tau = Number(el<HTMLInputElement>("tau").value);
    const gammas = parseNumberList(el<HTMLInputElement>("gammas").value);
    if (gammas === null) {
      el<HTMLDivElement>("validation").textContent = "stability indices must be numbers";
      return;
    }
    void store.setTarget(tau, gammas);
  }, DEBOUNCE_MS);
  el<HTMLInputElement>("tau").addEventListener("input", pushTarget);
  el<HTMLInputElement>("gammas").addEventListener("input", pushTarget);

  const modeGains = el<HTMLInputElement>("mode-gains");
  const modeTarget = el<HTMLInputElement>("mode-target");
  const applyMode = (): void => {
    el<HTMLDivElement>("gains-panel").style.display = modeGains.checked ? "block" : "none";
    el<HTMLDivElement>("target-panel").style.display = modeGains.checked ? "none" : "block";
  };
  modeGains.addEventListener("change", applyMode);
  modeTarget.addEventListener("change", applyMode);
  applyMode();

  const select = el<HTMLSelectElement>("fixture");
  const fixtures = await api.fixtures();
  for (const fixture of fixtures) {
    const option = document.createElement("option");
    option.value = fixture.name;
    option.textContent = fixture.name;
    select.appendChild(option);
  }
  select.addEventListener("change", () => void store.selectFixture(select.value));
  if (fixtures.length > 0) {
    select.value = fixtures[0].name;
    await store.selectFixture(fixtures[0].name);
  }
}

void boot();

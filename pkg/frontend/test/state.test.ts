import { describe, expect, it } from "vitest";

import { HOVER_GAINS, TunerStore } from "../src/state.js";
import type { TunerState } from "../src/state.js";
import {
  FakeApiClient,
  cannedAnalysis,
  cannedSimulation,
  cannedSolve,
  settle,
} from "./helpers.js";

async function bootedStore() {
  const api = new FakeApiClient();
  const store = new TunerStore(api);
  const states: TunerState[] = [];
  store.subscribe((s) => states.push(s));
  const selecting = store.selectFixture("r50-hover-lonvert");
  await settle();
  return { api, store, states, selecting };
}

describe("gain pipeline", () => {
  it("commits badge, diagram, poles, and response atomically under one request id", async () => {
    const { api, store, states, selecting } = await bootedStore();
    expect(store.getState().inFlight).toBe(true);

    api.pendingClosedLoop[0].resolve(cannedAnalysis("stable"));
    await settle();
    // analysis alone must NOT appear: nothing committed until the pair is in
    expect(store.getState().committed).toBeNull();

    api.pendingSimulate[0].resolve(cannedSimulation());
    await selecting;

    const state = store.getState();
    expect(state.inFlight).toBe(false);
    expect(state.committed?.analysis.verdict.label).toBe("stable");
    expect(state.committed?.simulation.tracked_channel).toBe("u");
    expect(state.committed?.requestId).toBe(1);

    // every emission either has the full pair or none of it
    for (const s of states) {
      if (s.committed !== null) {
        expect(s.committed.analysis).toBeDefined();
        expect(s.committed.simulation).toBeDefined();
      }
    }
  });

  it("applies the certified hover gains and reads a stable badge (round trip)", async () => {
    const { api, store, selecting } = await bootedStore();
    api.pendingClosedLoop[0].resolve(cannedAnalysis("stable"));
    await settle();
    api.pendingSimulate[0].resolve(cannedSimulation());
    await selecting;

    const setting = store.setGains({ ...HOVER_GAINS });
    await settle();
    const sent = api.calls.filter((c) => c.endpoint === "closedLoop").at(-1)!;
    expect((sent.request as { gains: Record<string, number> }).gains).toEqual(HOVER_GAINS);

    api.pendingClosedLoop[1].resolve(cannedAnalysis("stable"));
    await settle();
    api.pendingSimulate[1].resolve(cannedSimulation());
    await setting;

    const state = store.getState();
    expect(state.committed?.analysis.verdict.label).toBe("stable");
    expect(state.committed?.requestId).toBe(2);
    expect(state.requestError).toBeNull();
  });

  it("renders only the newest response when sliders are spammed", async () => {
    const { api, store, selecting } = await bootedStore();
    api.pendingClosedLoop[0].resolve(cannedAnalysis("stable"));
    await settle();
    api.pendingSimulate[0].resolve(cannedSimulation());
    await selecting;

    const first = store.setGains({ ...HOVER_GAINS, k0: 0.2 }); // request 2
    await settle();
    const second = store.setGains({ ...HOVER_GAINS, k0: 0.3 }); // request 3

    // the stale request resolves AFTER the newer one was issued
    const staleAnalysis = cannedAnalysis("unstable");
    api.pendingClosedLoop[1].resolve(staleAnalysis);
    await settle();
    api.pendingSimulate[1]?.resolve(cannedSimulation());
    await first;

    api.pendingClosedLoop[2].resolve(cannedAnalysis("stable"));
    await settle();
    api.pendingSimulate[2].resolve(cannedSimulation());
    await second;

    const state = store.getState();
    expect(state.committed?.requestId).toBe(3);
    expect(state.committed?.analysis.verdict.label).toBe("stable");
  });

  it("keeps the previous view and raises a banner when a request fails", async () => {
    const { api, store, selecting } = await bootedStore();
    api.pendingClosedLoop[0].resolve(cannedAnalysis("stable"));
    await settle();
    api.pendingSimulate[0].resolve(cannedSimulation());
    await selecting;
    const before = store.getState().committed;

    const failing = store.setGains({ ...HOVER_GAINS, k0: 9 });
    await settle();
    api.pendingClosedLoop[1].reject(new Error("computation failed"));
    await failing;

    const state = store.getState();
    expect(state.requestError).toContain("computation failed");
    expect(state.committed).toBe(before); // prior state retained
    expect(state.inFlight).toBe(false);
  });

  it("marks the view stale while a request is in flight", async () => {
    const { api, store, selecting } = await bootedStore();
    expect(store.getState().inFlight).toBe(true);
    api.pendingClosedLoop[0].resolve(cannedAnalysis("stable"));
    await settle();
    expect(store.getState().inFlight).toBe(true); // simulate still pending
    api.pendingSimulate[0].resolve(cannedSimulation());
    await selecting;
    expect(store.getState().inFlight).toBe(false);
  });
});

describe("target pipeline", () => {
  it("rejects non-positive indices inline without issuing any request", async () => {
    const { api, store, selecting } = await bootedStore();
    api.pendingClosedLoop[0].resolve(cannedAnalysis("stable"));
    await settle();
    api.pendingSimulate[0].resolve(cannedSimulation());
    await selecting;
    const callsBefore = api.calls.length;

    await store.setTarget(1.0, [2.5, -2.0]);

    expect(api.calls.length).toBe(callsBefore); // nothing sent
    expect(store.getState().validationError).toContain("positive");
    expect(store.getState().mode).toBe("target");
  });

  it("solves server-side, adopts the gains, then runs the pipeline", async () => {
    const { api, store, selecting } = await bootedStore();
    api.pendingClosedLoop[0].resolve(cannedAnalysis("stable"));
    await settle();
    api.pendingSimulate[0].resolve(cannedSimulation());
    await selecting;

    const targeting = store.setTarget(1.0, [2.5, 2, 2, 2, 2]);
    await settle();
    expect(api.countOf("solve")).toBe(1);

    api.pendingSolve[0].resolve(cannedSolve());
    await settle();
    expect(store.getState().solve?.report.residuals.length).toBe(7);
    expect(store.getState().gains.k0).toBe(0.1); // solved gains adopted

    api.pendingClosedLoop[1].resolve(cannedAnalysis("stable"));
    await settle();
    api.pendingSimulate[1].resolve(cannedSimulation());
    await targeting;

    // solve and pipeline share one request id: the residual bars and the
    // verdict on screen belong to the same interaction
    const state = store.getState();
    expect(state.solve?.requestId).toBe(state.committed?.requestId);
  });

  it("a newer target supersedes an in-flight solve", async () => {
    const { api, store, selecting } = await bootedStore();
    api.pendingClosedLoop[0].resolve(cannedAnalysis("stable"));
    await settle();
    api.pendingSimulate[0].resolve(cannedSimulation());
    await selecting;

    const first = store.setTarget(1.0, [2.5, 2, 2, 2, 2]); // request 2
    await settle();
    const second = store.setTarget(0.8, [2.5, 2, 2, 2, 2]); // request 3
    await settle();

    api.pendingSolve[0].resolve(cannedSolve()); // stale solve arrives late
    await first;
    expect(store.getState().solve).toBeNull(); // discarded, not rendered

    api.pendingSolve[1].resolve(cannedSolve());
    await settle();
    api.pendingClosedLoop[1].resolve(cannedAnalysis("stable"));
    await settle();
    api.pendingSimulate[1].resolve(cannedSimulation());
    await second;
    expect(store.getState().solve?.requestId).toBe(3);
  });
});

import type { RootPoint } from "./types.js";

// Pole map: closed-loop roots in the complex plane, left half shaded.

export interface PoleModel {
  width: number;
  height: number;
  points: { x: number; y: number; re: number; im: number; unstable: boolean }[];
  axisX: number; // pixel x of Re = 0
  axisY: number; // pixel y of Im = 0
  reRange: [number, number];
  imRange: [number, number];
}

const PAD = 18;

export function poleModel(roots: RootPoint[], width = 300, height = 260): PoleModel {
  let reMax = 0.5;
  let reMin = -1;
  let imMax = 1;
  for (const r of roots) {
    reMin = Math.min(reMin, r.re);
    reMax = Math.max(reMax, r.re);
    imMax = Math.max(imMax, Math.abs(r.im));
  }
  reMin *= 1.15;
  reMax = Math.max(reMax * 1.15, 0.25);
  imMax *= 1.15;
  const xOf = (re: number): number => PAD + ((re - reMin) / (reMax - reMin)) * (width - 2 * PAD);
  const yOf = (im: number): number => height / 2 - (im / imMax) * (height / 2 - PAD);
  return {
    width,
    height,
    points: roots.map((r) => ({ x: xOf(r.re), y: yOf(r.im), re: r.re, im: r.im, unstable: r.re >= 0 })),
    axisX: xOf(0),
    axisY: height / 2,
    reRange: [reMin, reMax],
    imRange: [-imMax, imMax],
  };
}

export function renderPoles(model: PoleModel): string {
  const parts: string[] = [];
  parts.push(`<svg viewBox="0 0 ${model.width} ${model.height}" xmlns="http://www.w3.org/2000/svg">`);
  parts.push(
    `<rect x="0" y="0" width="${model.axisX.toFixed(1)}" height="${model.height}" class="lhp"/>`,
    `<line x1="${model.axisX.toFixed(1)}" y1="0" x2="${model.axisX.toFixed(1)}" y2="${model.height}" class="axis"/>`,
    `<line x1="0" y1="${model.axisY}" x2="${model.width}" y2="${model.axisY}" class="axis"/>`,
  );
  for (const p of model.points) {
    const cls = p.unstable ? "pole unstable" : "pole";
    const size = 5;
    parts.push(
      `<line x1="${(p.x - size).toFixed(1)}" y1="${(p.y - size).toFixed(1)}" ` +
        `x2="${(p.x + size).toFixed(1)}" y2="${(p.y + size).toFixed(1)}" class="${cls}"/>`,
      `<line x1="${(p.x - size).toFixed(1)}" y1="${(p.y + size).toFixed(1)}" ` +
        `x2="${(p.x + size).toFixed(1)}" y2="${(p.y - size).toFixed(1)}" class="${cls}"/>`,
    );
  }
  parts.push("</svg>");
  return parts.join("");
}
